"""Diagram constructors: lens spaces, S^1 x S^2, connected sums, tubes."""

from __future__ import annotations

from math import gcd

from .diagram import ALPHA, BETA, Arc, Diagram, Region, Vertex
from .errors import BadIndex, InvalidParameters, NotOnePointed


def lens_diagram(p: int, q: int) -> Diagram:
    """Genus-one pointed diagram for -L(p, q).

    Vertex ``k`` is x_k and region ``i`` is D_i, labelled left to right
    along the horizontal alpha curve with the basepoint in D_0.  Arc ``k``
    is the alpha arc x_k -> x_{k+1}; arc ``p + k`` is the beta arc leaving
    x_k upwards and arriving at x_{k-q}.
    """
    if p <= 0 or q <= 0 or gcd(p, q) != 1 or (q >= p and (p, q) != (1, 1)):
        raise InvalidParameters(f"lens_diagram needs coprime p > q >= 1, got ({p}, {q})")
    arcs = [Arc(ALPHA, 0, k, (k + 1) % p) for k in range(p)]
    arcs += [Arc(BETA, 0, k, (k - q) % p) for k in range(p)]
    beta = tuple(p + (-j * q) % p for j in range(p))
    regions = []
    for i in range(p):
        word = (
            ((i + q - 1) % p, 1),
            (p + (i + q) % p, 1),
            ((i - 1) % p, -1),
            (p + (i + q - 1) % p, -1),
        )
        regions.append(Region(1, (word,)))
    return Diagram(
        genus=1,
        arcs=tuple(arcs),
        alpha_curves=(tuple(range(p)),),
        beta_curves=(beta,),
        vertices=tuple(Vertex(0, 0) for _ in range(p)),
        regions=tuple(regions),
        basepoints=(0,),
    )


def s3_diagram() -> Diagram:
    """Genus-one diagram of S^3: alpha and beta meeting once."""
    return lens_diagram(1, 1)


def s1s2_diagram() -> Diagram:
    """Genus-one diagram of S^1 x S^2 with two bigons.

    Alpha and beta are parallel curves on the torus crossing at x (vertex 0)
    and y (vertex 1).  Region 0 is the annulus carrying the basepoint,
    region 1 the bigon from x to y above alpha, region 2 the bigon from y
    back to x below alpha.
    """
    arcs = (
        Arc(ALPHA, 0, 0, 1),
        Arc(ALPHA, 0, 1, 0),
        Arc(BETA, 0, 0, 1),
        Arc(BETA, 0, 1, 0),
    )
    annulus = Region(0, (((2, 1), (1, 1)), ((3, -1), (0, -1))))
    upper = Region(1, (((0, 1), (2, -1)),))
    lower = Region(1, (((3, 1), (1, -1)),))
    return Diagram(
        genus=1,
        arcs=arcs,
        alpha_curves=((0, 1),),
        beta_curves=((2, 3),),
        vertices=(Vertex(0, 0), Vertex(0, 0)),
        regions=(annulus, upper, lower),
        basepoints=(0,),
    )


def disjoint_union(d1: Diagram, d2: Diagram) -> Diagram:
    """Side-by-side union; not a valid diagram (the surface is disconnected).

    The genus field is set so that the Euler identity still holds, which
    makes the result a correct input to :func:`merge_basepoints`.
    """
    V1, E1, N1 = d1.num_vertices, len(d1.arcs), d1.num_regions
    na1 = len(d1.alpha_curves)
    nb1 = len(d1.beta_curves)
    arcs = list(d1.arcs)
    for arc in d2.arcs:
        shift = na1 if arc.family == ALPHA else nb1
        arcs.append(Arc(arc.family, arc.curve + shift, arc.tail + V1, arc.head + V1))
    vertices = list(d1.vertices) + [Vertex(v.alpha + na1, v.beta + nb1) for v in d2.vertices]
    regions = list(d1.regions) + [
        Region(r.euler_char, tuple(tuple((a + E1, s) for a, s in w) for w in r.boundary))
        for r in d2.regions
    ]
    return Diagram(
        genus=d1.genus + d2.genus - 1,
        arcs=tuple(arcs),
        alpha_curves=d1.alpha_curves + tuple(tuple(a + E1 for a in c) for c in d2.alpha_curves),
        beta_curves=d1.beta_curves + tuple(tuple(a + E1 for a in c) for c in d2.beta_curves),
        vertices=tuple(vertices),
        regions=tuple(regions),
        basepoints=d1.basepoints + tuple(b + N1 for b in d2.basepoints),
    )


def merge_region_map(diagram: Diagram, i: int, j: int) -> list[int]:
    """Old region index -> new region index under ``merge_basepoints(i, j)``."""
    _check_merge(diagram, i, j)
    ri, rj = diagram.basepoints[i], diagram.basepoints[j]
    out = []
    for r in range(diagram.num_regions):
        src = ri if r == rj else r
        out.append(src - (1 if src > rj else 0))
    return out


def _check_merge(diagram: Diagram, i: int, j: int) -> None:
    ell = diagram.num_basepoints
    if ell < 2 or not (0 <= i < ell and 0 <= j < ell) or i == j:
        raise BadIndex(f"cannot merge basepoints {i} and {j} of a {ell}-pointed diagram")


def merge_basepoints(diagram: Diagram, i: int, j: int) -> Diagram:
    """Attach a tube joining the regions of basepoints ``i`` and ``j``.

    The genus goes up by one; the two regions become one region (with
    Euler characteristic lowered by two) that keeps basepoint ``i``.
    """
    _check_merge(diagram, i, j)
    ri, rj = diagram.basepoints[i], diagram.basepoints[j]
    a, b = diagram.regions[ri], diagram.regions[rj]
    merged = Region(a.euler_char + b.euler_char - 2, a.boundary + b.boundary)
    regions = [merged if r == ri else reg for r, reg in enumerate(diagram.regions) if r != rj]
    shift = merge_region_map(diagram, i, j)
    basepoints = tuple(shift[r] for k, r in enumerate(diagram.basepoints) if k != j)
    return Diagram(
        genus=diagram.genus + 1,
        arcs=diagram.arcs,
        alpha_curves=diagram.alpha_curves,
        beta_curves=diagram.beta_curves,
        vertices=diagram.vertices,
        regions=tuple(regions),
        basepoints=basepoints,
    )


def connected_sum(d1: Diagram, d2: Diagram) -> Diagram:
    """Connected sum of two pointed diagrams, joined at their basepoints.

    Vertices, arcs and curves of ``d2`` are shifted past those of ``d1``;
    the merged basepoint region sits at ``d1``'s basepoint index and the
    remaining regions of ``d2`` follow the regions of ``d1``.
    """
    if d1.num_basepoints != 1 or d2.num_basepoints != 1:
        raise NotOnePointed("connected_sum needs two 1-pointed diagrams")
    return merge_basepoints(disjoint_union(d1, d2), 0, 1)
