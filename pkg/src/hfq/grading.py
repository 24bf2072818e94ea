"""Relative Z- and Q-gradings on generators.

For generators x, y in torsion Spin^c classes whose difference has order
n, pick any hatted domain A with dd_alpha(A) = n(y - x); then

    Gr(x, y) = (e(A) + n_x(A) + n_y(A)) / n

and gr is the n = 1 case.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .diagram import (
    Diagram,
    Domain,
    Generator,
    dd_alpha,
    euler_measure,
    generator_chain,
    point_measure,
    point_measure_quarters,
)
from .errors import DifferentSpincClass, InfiniteOrder, NonTorsionClass
from .lattice import matvec
from .spinc import (
    INFINITE,
    SpincPartition,
    boundary_matrix,
    difference_chain,
    is_torsion,
    solve_domain,
    spinc_partition,
    torsion_order,
)


def grading_from_domain(diagram: Diagram, x: Generator, y: Generator, A: Domain, n: int = 1) -> Fraction:
    """(e(A) + n_x(A) + n_y(A)) / n after checking A connects n x to n y."""
    if not diagram.is_hatted(A):
        raise ValueError("domain has nonzero basepoint coefficients")
    want = [n * c for c in difference_chain(diagram, x, y)]
    if dd_alpha(diagram, A) != want:
        raise ValueError(f"domain does not connect {n}x to {n}y")
    total = euler_measure(diagram, A) + point_measure(diagram, x, A) + point_measure(diagram, y, A)
    return total / n


def _require_torsion(diagram: Diagram, *gens: Generator) -> None:
    for g in gens:
        if not is_torsion(diagram, g):
            raise NonTorsionClass(f"Spin^c class of {g} is not torsion")


def relative_z_grading(diagram: Diagram, x: Generator, y: Generator) -> int:
    A = solve_domain(diagram, x, y, 1)
    if A is None:
        raise DifferentSpincClass(f"{x} and {y} are not Spin^c-equivalent")
    _require_torsion(diagram, x)
    value = grading_from_domain(diagram, x, y, A, 1)
    if value.denominator != 1:
        raise RuntimeError(f"relative Z-grading came out non-integral: {value}")
    return int(value)


def relative_q_grading(diagram: Diagram, x: Generator, y: Generator) -> Fraction:
    _require_torsion(diagram, x, y)
    n = torsion_order(diagram, x, y)
    if n == INFINITE:
        raise InfiniteOrder(f"s({x}) - s({y}) has infinite order")
    A = solve_domain(diagram, x, y, n)
    return grading_from_domain(diagram, x, y, A, n)


@dataclass
class GradingTable:
    """All pairwise gradings of a diagram.

    ``Gr[(x, y)]`` is defined for every ordered pair of generators in
    torsion classes with finite-order difference; other pairs appear in
    ``flags``.  ``gr[x]`` is the relative grading of x against the least
    generator of its class; it is only set for torsion classes.
    """

    partition: SpincPartition
    Gr: dict[tuple[Generator, Generator], Fraction] = field(default_factory=dict)
    gr: dict[Generator, int] = field(default_factory=dict)
    flags: dict[tuple[Generator, Generator], str] = field(default_factory=dict)

    @property
    def generators(self) -> tuple[Generator, ...]:
        return self.partition.generators


def _exact_product(W: list[list[int]], N: list[list[int]], r: int) -> list[list[int]]:
    """The integer matrix W @ N.T, via int64 only when overflow is impossible."""
    if not W or r == 0:
        return [[0] * len(N) for _ in W]
    bound = r * max(abs(x) for row in W for x in row) * max(abs(x) for row in N for x in row)
    dtype = np.int64 if bound < 2**62 else object
    prod = np.array(W, dtype=dtype) @ np.array(N, dtype=dtype).T
    return [[int(v) for v in row] for row in prod.tolist()]


def grading_table(diagram: Diagram) -> GradingTable:
    """Build the full table from one factorization of the boundary matrix.

    Write U M V = D and let L be the largest invariant factor.  For a
    generator g put w_g = (L / d_k) (U g)_k.  Then V(w_y - w_x) / L is a
    rational domain with boundary y - x, and scaling it by the torsion
    order gives an integral one, so

        4 L Gr(x, y) = E(y) - E(x) + <w_y - w_x, N_x + N_y>

    with E(g) = <w_g, 4e(V_k)> and N_g = (4 n_g(V_k))_k.  Each pair then
    costs two dot products looked up from a precomputed matrix.
    """
    part = spinc_partition(diagram)
    hb = boundary_matrix(diagram)
    smith = hb.smith
    r = smith.rank
    L = smith.diagonal[-1] if r else 1
    Vcols = [hb.embed([smith.V[i][k] for i in range(smith.cols)], diagram.num_regions) for k in range(r)]
    e4 = [int(4 * euler_measure(diagram, D)) for D in Vcols]
    gens = part.generators
    cls = {g: k for k, members in enumerate(part.classes) for g in members}
    W, N = [], []
    for g in gens:
        ug = matvec(smith.U, generator_chain(diagram, g))
        W.append([ug[k] * (L // smith.diagonal[k]) for k in range(r)])
        N.append([point_measure_quarters(diagram, g, D) for D in Vcols])
    E = [sum(a * b for a, b in zip(w, e4)) for w in W]
    dot = _exact_product(W, N, r)
    index = {g: i for i, g in enumerate(gens)}

    table = GradingTable(part)
    for x in gens:
        for y in gens:
            cx, cy = cls[x], cls[y]
            if not (part.torsion[cx] and part.torsion[cy]):
                table.flags[(x, y)] = "non-torsion"
            elif part.orders[cx][cy] == INFINITE:
                table.flags[(x, y)] = "infinite-order"
            else:
                i, j = index[x], index[y]
                num = E[j] - E[i] + dot[j][i] - dot[i][i] + dot[j][j] - dot[i][j]
                table.Gr[(x, y)] = Fraction(num, 4 * L)
    for k, members in enumerate(part.classes):
        if part.torsion[k]:
            rep = members[0]
            for g in members:
                value = table.Gr[(g, rep)]
                if value.denominator != 1:
                    raise RuntimeError(f"non-integral grading inside a Spin^c class: {value}")
                table.gr[g] = int(value)
    return table
