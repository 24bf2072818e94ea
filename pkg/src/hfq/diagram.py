"""Combinatorial multi-pointed Heegaard diagrams.

A diagram is stored as a cell structure on the Heegaard surface: the
vertices are the intersection points of the alpha and beta curves, the
arcs are the pieces the curves are cut into, and each region is given by
the oriented boundary words that run around it with the region on the
left.  Corners and quadrant incidences are always derived from the
boundary words.

Orientation conventions: a directed arc runs from ``tail`` to ``head``;
the boundary of an arc is ``head - tail``; a boundary word entry
``(arc, +1)`` traverses the arc forwards, ``(arc, -1)`` backwards.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

from .errors import DiagramParseError, LimitExceeded

ALPHA = "alpha"
BETA = "beta"

Generator = tuple[int, ...]
Domain = Sequence[int]
Word = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Arc:
    family: str
    curve: int
    tail: int
    head: int


@dataclass(frozen=True)
class Vertex:
    alpha: int
    beta: int


@dataclass(frozen=True)
class Region:
    euler_char: int
    boundary: tuple[Word, ...]


@dataclass(frozen=True)
class Violation:
    code: str
    location: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.location}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, location: str, message: str) -> None:
        self.violations.append(Violation(code, location, message))

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def to_json(self) -> dict:
        return {
            "valid": self.ok,
            "violations": [
                {"code": v.code, "location": v.location, "message": v.message}
                for v in self.violations
            ],
        }


@dataclass(frozen=True)
class Diagram:
    """An l-pointed Heegaard diagram.

    ``arcs`` is indexed by arc id.  ``alpha_curves[c]`` lists the arc ids of
    the c-th alpha curve in cyclic order (the head of each arc is the tail
    of the next).  ``basepoints[k]`` is the region holding the k-th
    basepoint.
    """

    genus: int
    arcs: tuple[Arc, ...]
    alpha_curves: tuple[tuple[int, ...], ...]
    beta_curves: tuple[tuple[int, ...], ...]
    vertices: tuple[Vertex, ...]
    regions: tuple[Region, ...]
    basepoints: tuple[int, ...]
    # memo for derived lattice data; never part of equality
    cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def num_basepoints(self) -> int:
        return len(self.basepoints)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_regions(self) -> int:
        return len(self.regions)

    @property
    def num_curves(self) -> int:
        """Number of alpha curves (equal to the number of beta curves)."""
        return len(self.alpha_curves)

    def curves(self, family: str) -> tuple[tuple[int, ...], ...]:
        return self.alpha_curves if family == ALPHA else self.beta_curves

    def traversal(self, arc_id: int, sign: int) -> tuple[int, int]:
        """Start and end vertex of an arc traversed with the given sign."""
        arc = self.arcs[arc_id]
        return (arc.tail, arc.head) if sign > 0 else (arc.head, arc.tail)

    @cached_property
    def _corners(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        # (region, vertex) pairs, one per family change in a boundary word
        out = []
        for r, region in enumerate(self.regions):
            cs = []
            for word in region.boundary:
                for k, (a, s) in enumerate(word):
                    b, _ = word[(k + 1) % len(word)]
                    if self.arcs[a].family != self.arcs[b].family:
                        cs.append((r, self.traversal(a, s)[1]))
            out.append(tuple(cs))
        return tuple(out)

    def corner_count(self, region: int) -> int:
        return len(self._corners[region])

    @cached_property
    def vertex_regions(self) -> tuple[tuple[int, ...], ...]:
        """For each vertex, the regions filling its quadrants (with repetition)."""
        touch: list[list[int]] = [[] for _ in self.vertices]
        for cs in self._corners:
            for r, v in cs:
                touch[v].append(r)
        return tuple(tuple(sorted(t)) for t in touch)

    @cached_property
    def _dd_columns(self) -> dict[str, tuple[dict[int, int], ...]]:
        cols: dict[str, list[dict[int, int]]] = {ALPHA: [], BETA: []}
        for region in self.regions:
            acc = {ALPHA: Counter(), BETA: Counter()}
            for word in region.boundary:
                for a, s in word:
                    arc = self.arcs[a]
                    acc[arc.family][arc.head] += s
                    acc[arc.family][arc.tail] -= s
            for fam in (ALPHA, BETA):
                cols[fam].append({v: c for v, c in acc[fam].items() if c})
        return {fam: tuple(c) for fam, c in cols.items()}

    def dd_column(self, region: int, family: str = ALPHA) -> dict[int, int]:
        """Sparse ``dd_alpha`` (or ``dd_beta``) of a single region."""
        return self._dd_columns[family][region]

    def is_hatted(self, domain: Domain) -> bool:
        return all(domain[r] == 0 for r in self.basepoints)

    def unit_domain(self, region: int) -> list[int]:
        dom = [0] * self.num_regions
        dom[region] = 1
        return dom

    def full_surface(self) -> list[int]:
        return [1] * self.num_regions

    @cached_property
    def _euler4(self) -> tuple[int, ...]:
        # 4 * e(D_i) = 4 chi(D_i) - p_i, kept integral
        return tuple(4 * reg.euler_char - self.corner_count(r) for r, reg in enumerate(self.regions))

    def region_euler_measure(self, region: int) -> Fraction:
        return Fraction(self._euler4[region], 4)


# ---------------------------------------------------------------- measures


def euler_measure(diagram: Diagram, domain: Domain) -> Fraction:
    e4 = diagram._euler4
    return Fraction(sum(a * e4[r] for r, a in enumerate(domain) if a), 4)


def point_measure(diagram: Diagram, gen: Generator, domain: Domain) -> Fraction:
    """Sum over the points of ``gen`` of the average quadrant coefficient."""
    return Fraction(point_measure_quarters(diagram, gen, domain), 4)


def point_measure_quarters(diagram: Diagram, gen: Generator, domain: Domain) -> int:
    """Four times :func:`point_measure`, as an integer."""
    total = 0
    for v in gen:
        total += sum(domain[r] for r in diagram.vertex_regions[v])
    return total


def dd_alpha(diagram: Diagram, domain: Domain) -> list[int]:
    """Boundary of the alpha part of the boundary of ``domain``, as a 0-chain."""
    return _dd(diagram, domain, ALPHA)


def dd_beta(diagram: Diagram, domain: Domain) -> list[int]:
    return _dd(diagram, domain, BETA)


def _dd(diagram: Diagram, domain: Domain, family: str) -> list[int]:
    out = [0] * diagram.num_vertices
    for r, a in enumerate(domain):
        if a:
            for v, c in diagram.dd_column(r, family).items():
                out[v] += a * c
    return out


def generator_chain(diagram: Diagram, gen: Generator) -> list[int]:
    """The 0-chain x_1 + ... + x_k of a generator."""
    out = [0] * diagram.num_vertices
    for v in gen:
        out[v] += 1
    return out


# ------------------------------------------------------------- generators


def enumerate_generators(diagram: Diagram, limit: int | None = None) -> Iterator[Generator]:
    """Yield all generators in lexicographic order of their sorted vertex ids.

    With ``limit`` set, at most ``limit`` generators are produced and
    :class:`LimitExceeded` is raised if more exist.
    """
    k = diagram.num_curves
    verts = diagram.vertices
    used_a: set[int] = set()
    used_b: set[int] = set()
    chosen: list[int] = []

    # cand[c] = vertices on alpha curve c, ascending
    cand: list[list[int]] = [[] for _ in range(k)]
    for v, vx in enumerate(verts):
        cand[vx.alpha].append(v)

    def feasible(start: int) -> bool:
        # every unused alpha curve still needs a vertex with id >= start
        for c in range(k):
            if c in used_a:
                continue
            if not any(v >= start and verts[v].beta not in used_b for v in cand[c]):
                return False
        return True

    def rec(start: int) -> Iterator[Generator]:
        if len(chosen) == k:
            yield tuple(chosen)
            return
        for v in range(start, len(verts)):
            vx = verts[v]
            if vx.alpha in used_a or vx.beta in used_b:
                continue
            used_a.add(vx.alpha)
            used_b.add(vx.beta)
            chosen.append(v)
            if feasible(v + 1):
                yield from rec(v + 1)
            chosen.pop()
            used_a.discard(vx.alpha)
            used_b.discard(vx.beta)

    count = 0
    for gen in rec(0):
        if limit is not None and count >= limit:
            raise LimitExceeded(f"more than {limit} generators")
        count += 1
        yield gen


def generators(diagram: Diagram) -> list[Generator]:
    return list(enumerate_generators(diagram))


def is_generator(diagram: Diagram, gen: Sequence[int]) -> bool:
    if len(gen) != diagram.num_curves or len(set(gen)) != len(gen):
        return False
    if any(not 0 <= v < diagram.num_vertices for v in gen):
        return False
    alphas = {diagram.vertices[v].alpha for v in gen}
    betas = {diagram.vertices[v].beta for v in gen}
    return len(alphas) == len(betas) == diagram.num_curves


# -------------------------------------------------------------- validation


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def components(self) -> int:
        return len({self.find(x) for x in range(len(self.parent))})


def validate(diagram: Diagram) -> ValidationReport:
    """Check every structural invariant; the report is empty iff valid."""
    rep = ValidationReport()
    d = diagram
    V, E, N = d.num_vertices, len(d.arcs), d.num_regions
    ell = d.num_basepoints

    if d.genus < 1:
        rep.add("genus", "diagram", f"genus must be >= 1, got {d.genus}")
    if ell < 1:
        rep.add("basepoints", "diagram", "at least one basepoint is required")
    expected = d.genus + ell - 1
    for fam in (ALPHA, BETA):
        if len(d.curves(fam)) != expected:
            rep.add("curve-count", fam,
                    f"{len(d.curves(fam))} curves, expected g+l-1 = {expected}")

    # curves and arcs
    seen_arc: dict[int, tuple[str, int]] = {}
    arcs_ok = True
    for fam in (ALPHA, BETA):
        for c, curve in enumerate(d.curves(fam)):
            loc = f"{fam}[{c}]"
            if not curve:
                rep.add("empty-curve", loc, "curve has no vertices")
                continue
            for k, a in enumerate(curve):
                if not 0 <= a < E:
                    rep.add("arc-id", loc, f"unknown arc {a}")
                    arcs_ok = False
                    continue
                if a in seen_arc:
                    rep.add("arc-reuse", loc, f"arc {a} already on {seen_arc[a]}")
                seen_arc[a] = (fam, c)
                arc = d.arcs[a]
                if arc.family != fam or arc.curve != c:
                    rep.add("arc-curve", f"arc {a}", f"recorded on {arc.family}[{arc.curve}], listed on {loc}")
                nxt = curve[(k + 1) % len(curve)]
                if 0 <= nxt < E and d.arcs[nxt].tail != arc.head:
                    rep.add("curve-chain", loc, f"arc {a} ends at {arc.head} but arc {nxt} starts at {d.arcs[nxt].tail}")
    for a in range(E):
        if a not in seen_arc:
            rep.add("orphan-arc", f"arc {a}", "arc lies on no curve")
        arc = d.arcs[a]
        if not (0 <= arc.tail < V and 0 <= arc.head < V):
            rep.add("arc-endpoint", f"arc {a}", "endpoint out of range")
            arcs_ok = False

    if not arcs_ok:
        return rep

    # vertices: exactly one alpha and one beta curve passing once each
    tails: dict[int, list[tuple[str, int]]] = {v: [] for v in range(V)}
    for a, arc in enumerate(d.arcs):
        tails[arc.tail].append((arc.family, arc.curve))
    for v, vx in enumerate(d.vertices):
        fams = Counter(f for f, _ in tails[v])
        if fams[ALPHA] != 1 or fams[BETA] != 1:
            rep.add("vertex-valence", f"vertex {v}",
                    f"lies {fams[ALPHA]} times on alpha and {fams[BETA]} times on beta")
            continue
        on = dict(tails[v])
        if on[ALPHA] != vx.alpha or on[BETA] != vx.beta:
            rep.add("vertex-curves", f"vertex {v}",
                    f"recorded on alpha {vx.alpha}/beta {vx.beta}, curves place it on {on[ALPHA]}/{on[BETA]}")

    # boundary words
    uses: Counter = Counter()
    words_ok = True
    for r, region in enumerate(d.regions):
        loc = f"region {r}"
        if not region.boundary:
            rep.add("empty-region", loc, "no boundary words")
        for w, word in enumerate(region.boundary):
            if not word:
                rep.add("empty-word", f"{loc} word {w}", "empty boundary word")
                words_ok = False
                continue
            for k, (a, s) in enumerate(word):
                if not 0 <= a < E or s not in (1, -1):
                    rep.add("word-entry", f"{loc} word {w}", f"bad entry ({a}, {s})")
                    words_ok = False
                    break
                uses[(a, s)] += 1
            else:
                for k, (a, s) in enumerate(word):
                    b, t = word[(k + 1) % len(word)]
                    if d.traversal(a, s)[1] != d.traversal(b, t)[0]:
                        rep.add("word-chain", f"{loc} word {w}", f"entry {k} does not meet entry {k + 1}")
                        words_ok = False
                    if d.arcs[a].family == d.arcs[b].family:
                        rep.add("word-alternation", f"{loc} word {w}",
                                f"entries {k} and {(k + 1) % len(word)} are both {d.arcs[a].family}")
                        words_ok = False
        b = len(region.boundary)
        chi = region.euler_char
        if chi > 1:
            rep.add("region-euler", loc, f"euler characteristic {chi} > 1")
        elif chi > 2 - b or (chi + b) % 2:
            rep.add("region-euler", loc, f"euler characteristic {chi} impossible with {b} boundary circles")
    for a in range(E):
        for s in (1, -1):
            if uses[(a, s)] != 1:
                rep.add("arc-sides", f"arc {a}",
                        f"traversed {uses[(a, s)]} times in direction {'+' if s > 0 else '-'}; expected once")

    # quadrants: each of the four (alpha end, beta end) pairs exactly once
    if words_ok:
        quads: dict[int, Counter] = {v: Counter() for v in range(V)}
        for region in d.regions:
            for word in region.boundary:
                for k, (a, s) in enumerate(word):
                    b, t = word[(k + 1) % len(word)]
                    v = d.traversal(a, s)[1]
                    end_in = (a, "head" if s > 0 else "tail")
                    end_out = (b, "tail" if t > 0 else "head")
                    quads[v][frozenset((end_in, end_out))] += 1
        for v in range(V):
            if sum(quads[v].values()) != 4 or any(c != 1 for c in quads[v].values()):
                rep.add("quadrants", f"vertex {v}",
                        f"corner multiset {sorted(quads[v].values())} does not cover four distinct quadrants")

    # Euler characteristic of the surface
    total = V - E + sum(r.euler_char for r in d.regions)
    if total != 2 - 2 * d.genus:
        rep.add("euler-characteristic", "diagram",
                f"V - E + sum chi = {total}, but 2 - 2g = {2 - 2 * d.genus}")

    # basepoints
    if len(set(d.basepoints)) != ell:
        rep.add("basepoints", "diagram", f"basepoint regions {list(d.basepoints)} not distinct")
    if any(not 0 <= r < N for r in d.basepoints):
        rep.add("basepoints", "diagram", "basepoint region out of range")
        return rep

    if not words_ok:
        return rep

    # connectivity and the one-basepoint-per-component conditions
    arc_regions: dict[int, list[int]] = {}
    for r, region in enumerate(d.regions):
        for word in region.boundary:
            for a, _ in word:
                arc_regions.setdefault(a, []).append(r)
    whole = _UnionFind(N)
    for a, rs in arc_regions.items():
        for r in rs[1:]:
            whole.union(rs[0], r)
    if N and whole.components() != 1:
        rep.add("surface-connected", "diagram", f"surface has {whole.components()} components")
    for cut, glue in ((ALPHA, BETA), (BETA, ALPHA)):
        uf = _UnionFind(N)
        for a, rs in arc_regions.items():
            if d.arcs[a].family == glue:
                for r in rs[1:]:
                    uf.union(rs[0], r)
        comps = Counter(uf.find(r) for r in d.basepoints)
        roots = {uf.find(r) for r in range(N)}
        for root in sorted(roots):
            if comps[root] != 1:
                rep.add("component-basepoints", f"complement of {cut}",
                        f"component containing region {root} holds {comps[root]} basepoints")
    return rep


# ------------------------------------------------------------------- JSON


def to_json(diagram: Diagram) -> dict:
    def curve_json(curve):
        return [{"id": a, "from": diagram.arcs[a].tail, "to": diagram.arcs[a].head} for a in curve]

    return {
        "genus": diagram.genus,
        "basepoints": list(diagram.basepoints),
        "curves": {
            ALPHA: [curve_json(c) for c in diagram.alpha_curves],
            BETA: [curve_json(c) for c in diagram.beta_curves],
        },
        "vertices": [{"alpha": v.alpha, "beta": v.beta} for v in diagram.vertices],
        "regions": [
            {
                "euler_char": r.euler_char,
                "boundary": [[[a, "+" if s > 0 else "-"] for a, s in w] for w in r.boundary],
            }
            for r in diagram.regions
        ],
    }


def from_json(data: dict) -> Diagram:
    """Build a diagram from its JSON object; raises DiagramParseError."""
    try:
        curves = data["curves"]
        arcs: dict[int, Arc] = {}
        fam_curves = {}
        for fam in (ALPHA, BETA):
            out = []
            for c, curve in enumerate(curves[fam]):
                ids = []
                for desc in curve:
                    a = _int(desc["id"])
                    if a in arcs:
                        raise DiagramParseError(f"duplicate arc id {a}")
                    arcs[a] = Arc(fam, c, _int(desc["from"]), _int(desc["to"]))
                    ids.append(a)
                out.append(tuple(ids))
            fam_curves[fam] = tuple(out)
        if sorted(arcs) != list(range(len(arcs))):
            raise DiagramParseError("arc ids must be 0..E-1")
        vertices = tuple(Vertex(_int(v["alpha"]), _int(v["beta"])) for v in data["vertices"])
        regions = []
        for reg in data["regions"]:
            words = []
            for w in reg["boundary"]:
                entries = []
                for a, s in w:
                    if s not in ("+", "-"):
                        raise DiagramParseError(f"direction must be '+' or '-', got {s!r}")
                    entries.append((_int(a), 1 if s == "+" else -1))
                words.append(tuple(entries))
            regions.append(Region(_int(reg["euler_char"]), tuple(words)))
        return Diagram(
            genus=_int(data["genus"]),
            arcs=tuple(arcs[a] for a in range(len(arcs))),
            alpha_curves=fam_curves[ALPHA],
            beta_curves=fam_curves[BETA],
            vertices=vertices,
            regions=tuple(regions),
            basepoints=tuple(_int(b) for b in data["basepoints"]),
        )
    except DiagramParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DiagramParseError(f"malformed diagram: {exc!r}") from exc


def _int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise DiagramParseError(f"expected integer, got {x!r}")
    return x


def loads(text: str) -> Diagram:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DiagramParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise DiagramParseError("top-level JSON value must be an object")
    return from_json(data)


def dumps(diagram: Diagram) -> str:
    return json.dumps(to_json(diagram), indent=1)


def load(path) -> Diagram:
    with open(path) as fh:
        return loads(fh.read())


def dump(diagram: Diagram, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(diagram) + "\n")
