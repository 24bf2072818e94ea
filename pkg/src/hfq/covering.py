"""Cyclic covers of Heegaard diagrams and the scaling check for Gr.

A Z/n cover is described by an integer on every directed arc (the sheet
change when the arc is crossed forwards) together with, for each region
with several boundary circles, the sheet offsets of circles 1, 2, ...
relative to circle 0.  Each region is assumed to lift to n disjoint
copies of itself.  The offsets are needed because a region joining two
boundary circles, such as the annulus of the S^1 x S^2 diagram, can carry
the only nontrivial monodromy of the cover.

Lifted objects are numbered sheet-major: vertex (v, s) is ``s * V + v``,
arc (a, s) is ``s * E + a`` and region (r, s) is ``s * N + r``.  Arc
(a, s) runs from (tail, s) to (head, s + c(a)), and region (r, s) is the
copy whose circle 0 starts on sheet s.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .diagram import (
    ALPHA,
    BETA,
    Arc,
    Diagram,
    Domain,
    Generator,
    Region,
    ValidationReport,
    Vertex,
    _UnionFind,
    validate,
)
from .errors import (
    DiagramParseError,
    DifferentSpincClass,
    DisconnectedCover,
    InfiniteOrder,
    InvalidCocycle,
    SearchFailed,
)
from .lattice import matvec, smith_normal_form
from .spinc import INFINITE, solve_domain, torsion_order


@dataclass(frozen=True)
class CoveringSpec:
    n: int
    cocycle: dict[int, int] = field(default_factory=dict)
    region_shifts: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def value(self, arc: int) -> int:
        return self.cocycle.get(arc, 0) % self.n

    def shift(self, region: int, word: int) -> int:
        if word == 0:
            return 0
        shifts = self.region_shifts.get(region, ())
        return shifts[word - 1] % self.n if word - 1 < len(shifts) else 0

    @staticmethod
    def trivial(n: int = 1) -> "CoveringSpec":
        return CoveringSpec(n)


def spec_to_json(spec: CoveringSpec) -> dict:
    out: dict = {"n": spec.n, "cocycle": {str(a): v for a, v in sorted(spec.cocycle.items()) if v % spec.n}}
    shifts = {str(r): list(s) for r, s in sorted(spec.region_shifts.items()) if any(x % spec.n for x in s)}
    if shifts:
        out["region_shifts"] = shifts
    return out


def spec_from_json(data: dict) -> CoveringSpec:
    try:
        n = data["n"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise DiagramParseError(f"n must be a positive integer, got {n!r}")
        cocycle = {}
        for key, val in data.get("cocycle", {}).items():
            if isinstance(val, bool) or not isinstance(val, int):
                raise DiagramParseError(f"cocycle value for arc {key} must be an integer")
            cocycle[int(key)] = val
        shifts = {}
        for key, vals in data.get("region_shifts", {}).items():
            if not isinstance(vals, list) or any(isinstance(v, bool) or not isinstance(v, int) for v in vals):
                raise DiagramParseError(f"region_shifts for region {key} must be a list of integers")
            shifts[int(key)] = tuple(vals)
    except DiagramParseError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise DiagramParseError(f"malformed covering spec: {exc!r}") from exc
    return CoveringSpec(n, cocycle, shifts)


def load_spec(path) -> CoveringSpec:
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DiagramParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise DiagramParseError("top-level JSON value must be an object")
    return spec_from_json(data)


def dump_spec(spec: CoveringSpec, path) -> None:
    with open(path, "w") as fh:
        json.dump(spec_to_json(spec), fh, indent=1)
        fh.write("\n")


# ------------------------------------------------------------ validation


def validate_cocycle(diagram: Diagram, spec: CoveringSpec) -> ValidationReport:
    """Face and curve conditions, plus well-formedness of the covering data."""
    rep = ValidationReport()
    n = spec.n
    if not isinstance(n, int) or n < 1:
        rep.add("cover-n", "spec", f"n must be a positive integer, got {n!r}")
        return rep
    E = len(diagram.arcs)
    for a in spec.cocycle:
        if not 0 <= a < E:
            rep.add("cocycle-arc", f"arc {a}", "no such arc")
    for r, shifts in spec.region_shifts.items():
        if not 0 <= r < diagram.num_regions:
            rep.add("region-shift", f"region {r}", "no such region")
        elif len(shifts) != len(diagram.regions[r].boundary) - 1:
            rep.add("region-shift", f"region {r}",
                    f"{len(shifts)} offsets for {len(diagram.regions[r].boundary)} boundary circles")
    for r, region in enumerate(diagram.regions):
        for w, word in enumerate(region.boundary):
            total = sum(s * spec.value(a) for a, s in word) % n
            if total:
                rep.add("face", f"region {r} word {w}", f"cocycle sums to {total} mod {n}")
    for fam in (ALPHA, BETA):
        for c, curve in enumerate(diagram.curves(fam)):
            total = sum(spec.value(a) for a in curve) % n
            if total:
                rep.add("curve", f"{fam}[{c}]", f"cocycle sums to {total} mod {n}")
    return rep


# ----------------------------------------------------------------- covers


@dataclass(frozen=True)
class CoverResult:
    base: Diagram
    spec: CoveringSpec
    cover_diagram: Diagram

    @property
    def n(self) -> int:
        return self.spec.n

    def vertex_lift(self, v: int, sheet: int) -> int:
        return (sheet % self.n) * self.base.num_vertices + v

    def region_lift(self, r: int, sheet: int) -> int:
        return (sheet % self.n) * self.base.num_regions + r

    def generator_lift(self, gen: Generator) -> Generator:
        """Total preimage of a generator, as a sorted tuple."""
        return tuple(sorted(self.vertex_lift(v, s) for s in range(self.n) for v in gen))

    def domain_lift(self, domain: Domain) -> list[int]:
        return list(domain) * self.n

    def chain_lift(self, chain) -> list[int]:
        """Lift of a 0-chain: (v, s) gets the coefficient of v."""
        return list(chain) * self.n


def _cover_components(diagram: Diagram, spec: CoveringSpec) -> int:
    n, V = spec.n, diagram.num_vertices
    uf = _UnionFind(n * V)
    for a, arc in enumerate(diagram.arcs):
        c = spec.value(a)
        for s in range(n):
            uf.union(s * V + arc.tail, ((s + c) % n) * V + arc.head)
    for r, region in enumerate(diagram.regions):
        start0 = diagram.traversal(*region.boundary[0][0])[0]
        for w in range(1, len(region.boundary)):
            start = diagram.traversal(*region.boundary[w][0])[0]
            for s in range(n):
                uf.union(s * V + start0, ((s + spec.shift(r, w)) % n) * V + start)
    return uf.components()


def build_cover(diagram: Diagram, spec: CoveringSpec, check: bool = True) -> CoverResult:
    """The n-fold cover described by ``spec``.

    Raises InvalidCocycle if ``spec`` fails :func:`validate_cocycle` and
    DisconnectedCover if the lifted surface falls apart.  With ``check``
    the lifted diagram is run through :func:`validate`.
    """
    rep = validate_cocycle(diagram, spec)
    if not rep.ok:
        raise InvalidCocycle("; ".join(str(v) for v in rep.violations))
    n = spec.n
    V, E, N = diagram.num_vertices, len(diagram.arcs), diagram.num_regions
    comps = _cover_components(diagram, spec) if V else 1
    if comps != 1:
        raise DisconnectedCover(f"the {n}-fold cover has {comps} components")

    arcs: list[Arc | None] = [None] * (n * E)
    lifted_curves = {}
    on_curve: dict[tuple[str, int], int] = {}
    for fam in (ALPHA, BETA):
        base_curves = diagram.curves(fam)
        C = len(base_curves)
        out: list[tuple[int, ...]] = [()] * (n * C)
        for c, curve in enumerate(base_curves):
            for s in range(n):
                cid = s * C + c
                t = s
                ids = []
                for a in curve:
                    arc = diagram.arcs[a]
                    nxt = (t + spec.value(a)) % n
                    arcs[t * E + a] = Arc(fam, cid, t * V + arc.tail, nxt * V + arc.head)
                    on_curve[(fam, t * V + arc.tail)] = cid
                    ids.append(t * E + a)
                    t = nxt
                out[cid] = tuple(ids)
        lifted_curves[fam] = tuple(out)

    vertices = tuple(
        Vertex(on_curve[(ALPHA, s * V + v)], on_curve[(BETA, s * V + v)])
        for s in range(n) for v in range(V)
    )

    regions = []
    for s in range(n):
        for r, region in enumerate(diagram.regions):
            words = []
            for w, word in enumerate(region.boundary):
                t = (s + spec.shift(r, w)) % n
                entries = []
                for a, sign in word:
                    if sign > 0:
                        entries.append((t * E + a, 1))
                        t = (t + spec.value(a)) % n
                    else:
                        t = (t - spec.value(a)) % n
                        entries.append((t * E + a, -1))
                words.append(tuple(entries))
            regions.append(Region(region.euler_char, tuple(words)))

    cover = Diagram(
        genus=n * diagram.genus - n + 1,
        arcs=tuple(arcs),
        alpha_curves=lifted_curves[ALPHA],
        beta_curves=lifted_curves[BETA],
        vertices=vertices,
        regions=tuple(regions),
        basepoints=tuple(s * N + b for s in range(n) for b in diagram.basepoints),
    )
    if check:
        crep = validate(cover)
        if not crep.ok:
            raise RuntimeError(f"lifted diagram is invalid: {crep.violations[0]}")
    return CoverResult(diagram, spec, cover)


# ------------------------------------------------------------------ search


def _gauge_fixed_unknowns(diagram: Diagram) -> list[tuple[str, int, int]]:
    """Arc values and region offsets left free after fixing a gauge.

    Relabelling sheets vertex by vertex changes a cover's description
    without changing the cover, so a spanning forest of the graph whose
    edges are arcs and circle-to-circle links inside regions gets value 0.
    Returns ("arc", a, 0) and ("shift", r, w) entries for the rest.
    """
    uf = _UnionFind(diagram.num_vertices)
    free = []
    for a, arc in enumerate(diagram.arcs):
        if uf.find(arc.tail) == uf.find(arc.head):
            free.append(("arc", a, 0))
        else:
            uf.union(arc.tail, arc.head)
    for r, region in enumerate(diagram.regions):
        start0 = diagram.traversal(*region.boundary[0][0])[0]
        for w in range(1, len(region.boundary)):
            start = diagram.traversal(*region.boundary[w][0])[0]
            if uf.find(start0) == uf.find(start):
                free.append(("shift", r, w))
            else:
                uf.union(start0, start)
    return free


def _spec_from_values(diagram: Diagram, n: int, free, values) -> CoveringSpec:
    cocycle = {}
    shifts: dict[int, list[int]] = {}
    for (kind, i, w), val in zip(free, values):
        val %= n
        if kind == "arc":
            if val:
                cocycle[i] = val
        else:
            shifts.setdefault(i, [0] * (len(diagram.regions[i].boundary) - 1))[w - 1] = val
    return CoveringSpec(n, cocycle, {r: tuple(s) for r, s in shifts.items()})


def cocycle_candidates(diagram: Diagram, n: int):
    """Every gauge-fixed valid spec of degree n, zero first, in a fixed order.

    Each cover up to sheet relabelling appears once when the arcs form a
    connected graph; otherwise a cover can appear more than once.
    """
    free = _gauge_fixed_unknowns(diagram)
    col = {(kind, i): j for j, (kind, i, w) in enumerate(free) if kind == "arc"}
    rows = []
    for region in diagram.regions:
        for word in region.boundary:
            row = [0] * len(free)
            for a, s in word:
                if ("arc", a) in col:
                    row[col[("arc", a)]] += s
            rows.append(row)
    for fam in (ALPHA, BETA):
        for curve in diagram.curves(fam):
            row = [0] * len(free)
            for a in curve:
                if ("arc", a) in col:
                    row[col[("arc", a)]] += 1
            rows.append(row)
    smith = smith_normal_form(rows, len(rows), len(free))
    # D y = 0 mod n: y_k a multiple of n / gcd(n, d_k), or free past the rank
    steps, sizes = [], []
    for k in range(len(free)):
        if k < smith.rank:
            g = gcd(n, smith.diagonal[k])
            steps.append(n // g)
            sizes.append(g)
        else:
            steps.append(1)
            sizes.append(n)
    for ms in itertools.product(*(range(s) for s in sizes)):
        y = [m * st for m, st in zip(ms, steps)]
        values = [v % n for v in matvec(smith.V, y)]
        yield _spec_from_values(diagram, n, free, values)


def iter_trivializing_cocycles(diagram: Diagram, x: Generator, y: Generator, n: int | None = None):
    """Yield (spec, cover) for every connected degree-n cover lifting x, y to one class."""
    if n is None:
        n = torsion_order(diagram, x, y)
        if n == INFINITE:
            raise InfiniteOrder(f"s({x}) - s({y}) has infinite order")
    for spec in cocycle_candidates(diagram, n):
        try:
            cov = build_cover(diagram, spec, check=False)
        except DisconnectedCover:
            continue
        if solve_domain(cov.cover_diagram, cov.generator_lift(x), cov.generator_lift(y), 1) is not None:
            yield spec, cov


def find_trivializing_cocycle(diagram: Diagram, x: Generator, y: Generator,
                              max_candidates: int = 100_000) -> CoveringSpec:
    """First spec, in candidate order, whose cover puts the lifts of x and y in one class."""
    n = torsion_order(diagram, x, y)
    if n == INFINITE:
        raise InfiniteOrder(f"s({x}) - s({y}) has infinite order")
    if n == 1:
        return CoveringSpec(1)
    for k, spec in enumerate(cocycle_candidates(diagram, n)):
        if k >= max_candidates:
            break
        try:
            cov = build_cover(diagram, spec, check=False)
        except DisconnectedCover:
            continue
        if solve_domain(cov.cover_diagram, cov.generator_lift(x), cov.generator_lift(y), 1) is not None:
            return spec
    raise SearchFailed(f"no connected Z/{n} cover identifies the classes of {x} and {y}")


# ---------------------------------------------------------------- scaling


@dataclass(frozen=True)
class CheckResult:
    downstairs: Fraction
    upstairs: Fraction
    n: int
    passed: bool
    upstairs_kind: str = "gr"

    def to_json(self) -> dict:
        return {
            "downstairs": str(self.downstairs),
            "upstairs": str(self.upstairs),
            "upstairs_kind": self.upstairs_kind,
            "n": self.n,
            "passed": self.passed,
        }


def verify_scaling(diagram: Diagram, spec: CoveringSpec, x: Generator, y: Generator) -> CheckResult:
    """Compare n * Gr(x, y) with the grading of the lifts in the cover."""
    from .grading import relative_q_grading, relative_z_grading

    down = relative_q_grading(diagram, x, y)
    cov = build_cover(diagram, spec)
    lx, ly = cov.generator_lift(x), cov.generator_lift(y)
    try:
        up = Fraction(relative_z_grading(cov.cover_diagram, lx, ly))
        kind = "gr"
    except DifferentSpincClass:
        up = relative_q_grading(cov.cover_diagram, lx, ly)
        kind = "Gr"
    return CheckResult(down, up, spec.n, spec.n * down == up, kind)
