"""Spin^c classes of generators via lattice membership.

Two generators x, y are Spin^c-equivalent exactly when y - x (as a
0-chain) is ``dd_alpha`` of a hatted domain, and the order of
s(x) - s(y) is the least n for which n(y - x) is.  Everything is read
off one Smith normal form of the hatted boundary matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .diagram import (
    Diagram,
    Domain,
    Generator,
    dd_alpha,
    euler_measure,
    generator_chain,
    generators,
    point_measure,
)
from .lattice import Matrix, SmithForm, matvec, smith_normal_form

INFINITE = math.inf


@dataclass(frozen=True)
class HattedBoundaryMatrix:
    """Columns are ``dd_alpha`` of the non-basepoint regions; rows are vertices."""

    columns: tuple[int, ...]
    matrix: Matrix
    smith: SmithForm

    def embed(self, coeffs: list[int], num_regions: int) -> list[int]:
        dom = [0] * num_regions
        for j, r in enumerate(self.columns):
            dom[r] = coeffs[j]
        return dom


def boundary_matrix(diagram: Diagram) -> HattedBoundaryMatrix:
    hit = diagram.cache.get("hatted")
    if hit is None:
        base = set(diagram.basepoints)
        cols = tuple(r for r in range(diagram.num_regions) if r not in base)
        M = [[0] * len(cols) for _ in range(diagram.num_vertices)]
        for j, r in enumerate(cols):
            for v, c in diagram.dd_column(r).items():
                M[v][j] = c
        hit = HattedBoundaryMatrix(cols, M, smith_normal_form(M, diagram.num_vertices, len(cols)))
        diagram.cache["hatted"] = hit
    return hit


def difference_chain(diagram: Diagram, x: Generator, y: Generator) -> list[int]:
    cx, cy = generator_chain(diagram, x), generator_chain(diagram, y)
    return [b - a for a, b in zip(cx, cy)]


def solve_domain(diagram: Diagram, x: Generator, y: Generator, n: int = 1) -> list[int] | None:
    """A hatted domain A with dd_alpha(A) = n (y - x), or None if none exists."""
    hb = boundary_matrix(diagram)
    rhs = difference_chain(diagram, x, y)
    coeffs = hb.smith.solve(rhs, n)
    if coeffs is None:
        return None
    A = hb.embed(coeffs, diagram.num_regions)
    if dd_alpha(diagram, A) != [n * c for c in rhs]:
        raise RuntimeError("lattice solver returned a domain with the wrong boundary")
    return A


def torsion_order(diagram: Diagram, x: Generator, y: Generator) -> int | float:
    """Order of s(x) - s(y); ``INFINITE`` when no multiple is a boundary."""
    n = boundary_matrix(diagram).smith.order(difference_chain(diagram, x, y))
    return INFINITE if n is None else n


def periodic_domain_basis(diagram: Diagram) -> list[list[int]]:
    hb = boundary_matrix(diagram)
    return [hb.embed(k, diagram.num_regions) for k in hb.smith.kernel_basis()]


def chern_pairing(diagram: Diagram, x: Generator, P: Domain):
    """<c_1(s(x)), P> = e(P) + 2 n_x(P) for a periodic domain P."""
    return euler_measure(diagram, P) + 2 * point_measure(diagram, x, P)


def is_torsion(diagram: Diagram, x: Generator) -> bool:
    return all(chern_pairing(diagram, x, P) == 0 for P in periodic_domain_basis(diagram))


@dataclass(frozen=True)
class SpincPartition:
    generators: tuple[Generator, ...]
    classes: tuple[tuple[Generator, ...], ...]
    torsion: tuple[bool, ...]
    orders: tuple[tuple[int | float, ...], ...]

    def class_of(self, gen: Generator) -> int:
        for k, members in enumerate(self.classes):
            if gen in members:
                return k
        raise KeyError(gen)


def spinc_partition(diagram: Diagram) -> SpincPartition:
    hit = diagram.cache.get("partition")
    if hit is not None:
        return hit
    smith = boundary_matrix(diagram).smith
    gens = generators(diagram)
    groups: dict[tuple, list[Generator]] = {}
    for g in gens:
        groups.setdefault(smith.coset_key(generator_chain(diagram, g)), []).append(g)
    classes = tuple(tuple(members) for members in groups.values())
    # only torsion coordinates and the cokernel's free part affect orders
    keep = smith.torsion_indices + tuple(range(smith.rank, smith.rows))
    rep_u = []
    for members in classes:
        u = matvec(smith.U, generator_chain(diagram, members[0]))
        rep_u.append([u[k] for k in keep])
    nt = len(smith.torsion_indices)
    tors = [smith.diagonal[k] for k in smith.torsion_indices]
    basis = periodic_domain_basis(diagram)
    torsion = []
    for members in classes:
        flag = all(chern_pairing(diagram, members[0], P) == 0 for P in basis)
        if len(members) > 1:
            other = all(chern_pairing(diagram, members[1], P) == 0 for P in basis)
            if other != flag:
                raise RuntimeError(f"torsion flag disagrees within class of {members[0]}")
        torsion.append(flag)
    orders = []
    for ua in rep_u:
        row = []
        for ub in rep_u:
            diff = [b - a for a, b in zip(ua, ub)]
            if any(diff[nt:]):
                row.append(INFINITE)
                continue
            n = 1
            for d, c in zip(tors, diff):
                need = d // math.gcd(d, c)
                n = n * need // math.gcd(n, need)
            row.append(n)
        orders.append(tuple(row))
    orders = tuple(orders)
    hit = SpincPartition(tuple(gens), classes, tuple(torsion), orders)
    diagram.cache["partition"] = hit
    return hit
