"""Independent knot-type oracle.

Computes the Kauffman bracket by brute-force state sum, a deterministic
orientation and writhe, and the writhe-normalized bracket (the Jones
polynomial in the variable A). Every pipeline stage is checked against
these values, so nothing here may depend on the pipeline modules.

Conventions (all verified against hand-computed state sums):

* Slot k of a crossing sits at angle 270 + 90k degrees (slot 0 points
  south, counterclockwise order).
* A-smoothing joins each over-strand slot o to slot (o+3) mod 4; the
  B-smoothing joins o to (o+1) mod 4.
* A crossing is positive iff the over-strand enters at slot
  (under entry + 3) mod 4, i.e. det(over direction, under direction) > 0.
* bracket = sum over states of A^(a-b) d^(loops-1), d = -A^2 - A^-2.
* normalized value = (-A^3)^(-writhe) * bracket; for multi-component
  links this depends on relative component orientations, so the stage
  oracle uses the multiset of values over all orientation choices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .laurent import LaurentPoly
from .model import (
    BinaryGridDiagram,
    Crossing,
    EndKind,
    PlanarDiagram,
    RibbonfoldError,
    RoutingError,
    Shape,
    check_bgd,
    validate_diagram,
)

D_POLY = LaurentPoly({2: -1, -2: -1})  # value of a disjoint unknotted loop

DEFAULT_CAP = 14


class TooLarge(RibbonfoldError):
    """State sum would exceed the configured crossing cap."""


class _UnionFind:
    def __init__(self):
        self.parent: Dict[object, object] = {}

    def find(self, a):
        p = self.parent
        while p.setdefault(a, a) != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


# ---------------------------------------------------------------------------
# Orientation and writhe
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiagramOrientation:
    """Deterministic orientation: per edge, the incidence it flows into."""

    heads: Dict[int, Tuple[int, int]]  # edge -> (crossing index, slot)
    comp_of: Dict[int, int]            # edge -> strand component index
    n_components: int


def orient(d: PlanarDiagram) -> DiagramOrientation:
    """Orient every strand component, starting each at its smallest edge id
    directed into that edge's lexicographically smallest incidence."""
    inc = d.incidences()
    heads: Dict[int, Tuple[int, int]] = {}
    comp_of: Dict[int, int] = {}
    comp = 0
    for e0 in d.edge_ids():
        if e0 in comp_of:
            continue
        e, head = e0, min(inc[e0])
        while e not in comp_of:
            comp_of[e] = comp
            heads[e] = head
            ci, s = head
            exit_dart = (ci, (s + 2) % 4)
            e2 = d.crossings[ci].slots[exit_dart[1]]
            a, b = inc[e2]
            e, head = e2, (b if a == exit_dart else a)
        comp += 1
    return DiagramOrientation(heads, comp_of, comp)


def crossing_signs(d: PlanarDiagram, o: Optional[DiagramOrientation] = None) -> Tuple[int, ...]:
    if o is None:
        o = orient(d)
    signs: List[int] = []
    for ci, x in enumerate(d.crossings):
        u = next(s for s in x.under_slots() if o.heads[x.slots[s]] == (ci, s))
        ov = next(s for s in x.over_slots() if o.heads[x.slots[s]] == (ci, s))
        signs.append(+1 if ov == (u + 3) % 4 else -1)
    return tuple(signs)


def writhe(d: PlanarDiagram) -> int:
    return sum(crossing_signs(d))


# ---------------------------------------------------------------------------
# Kauffman bracket
# ---------------------------------------------------------------------------


def _state_loops(d: PlanarDiagram, state: int) -> int:
    """Closed loops after smoothing every crossing (bit=0: A, bit=1: B)."""
    uf = _UnionFind()
    for ci, x in enumerate(d.crossings):
        step = 3 if not (state >> ci) & 1 else 1
        for o in x.over_slots():
            uf.union((ci, o), (ci, (o + step) % 4))
    for uses in d.incidences().values():
        uf.union(uses[0], uses[1])
    roots = {uf.find((ci, s)) for ci in range(len(d.crossings)) for s in range(4)}
    return len(roots)


def kauffman_bracket(d: PlanarDiagram, cap: int = DEFAULT_CAP) -> LaurentPoly:
    """Brute-force 2^c state sum. Raises TooLarge above the cap."""
    n = len(d.crossings)
    if n == 0 and d.free_loops == 0:
        raise ValueError("empty diagram has no bracket")
    if n > cap:
        raise TooLarge(f"{n} crossings exceeds state-sum cap {cap}")
    total = LaurentPoly.zero()
    for state in range(1 << n):
        b = bin(state).count("1")
        loops = (_state_loops(d, state) if n else 0) + d.free_loops
        term = LaurentPoly.monomial(1, n - 2 * b) * D_POLY ** (loops - 1)
        total = total + term
    return total


def _normalize(bracket: LaurentPoly, w: int) -> LaurentPoly:
    return LaurentPoly.monomial(-1 if w % 2 else 1, -3 * w) * bracket


def jones_normalized(d: PlanarDiagram, cap: int = DEFAULT_CAP) -> LaurentPoly:
    """(-A^3)^(-writhe) * bracket under the deterministic orientation."""
    return _normalize(kauffman_bracket(d, cap), writhe(d) if d.crossings else 0)


def jones_fingerprint(d: PlanarDiagram, cap: int = DEFAULT_CAP) -> Tuple[str, ...]:
    """Sorted multiset of normalized values over all component orientations.

    Reorienting a component flips the sign of every crossing between it and
    the rest, changing the writhe but not the bracket. The multiset over all
    2^m orientation choices is therefore orientation-free, which makes it a
    sound equality oracle for multi-component links.
    """
    bracket = kauffman_bracket(d, cap)
    if not d.crossings:
        return (str(bracket),)
    o = orient(d)
    signs = crossing_signs(d, o)
    strand_comps = [
        (o.comp_of[x.slots[0]], o.comp_of[x.slots[1]]) for x in d.crossings
    ]
    vals = []
    for r in range(1 << o.n_components):
        w = 0
        for s, (ca, cb) in zip(signs, strand_comps):
            flipped = ((r >> ca) ^ (r >> cb)) & 1
            w += -s if flipped else s
        vals.append(str(_normalize(bracket, w)))
    return tuple(sorted(vals))


# ---------------------------------------------------------------------------
# Grid diagram -> planar diagram
# ---------------------------------------------------------------------------


def _row_port(i: int, col, kind: EndKind):
    """Port of a row end at column col: below the row for DOWN, above for UP."""
    return ("p", i if kind is EndKind.DOWN else i + 1, col)


def bgd_to_pd(g: BinaryGridDiagram) -> PlanarDiagram:
    """Read the grid core back as a planar diagram.

    One crossing per crossed row, slots in counterclockwise order
    (below-vertical, right-horizontal, above-vertical, left-horizontal),
    which puts the horizontal over-strand on the 1-3 diagonal.
    """
    problems = check_bgd(g)
    if problems:
        raise RoutingError("invalid grid diagram: " + "; ".join(problems))

    uf = _UnionFind()
    crossings_rows: List[int] = []
    for i, row in enumerate(g.rows):
        a, b = row.extent
        left = _row_port(i, a, row.end_kinds[0])
        right = _row_port(i, b, row.end_kinds[1])
        if row.crossed_column is not None:
            k = len(crossings_rows)
            crossings_rows.append(i)
            uf.union(("x", k, 0), ("p", i, row.crossed_column))
            uf.union(("x", k, 2), ("p", i + 1, row.crossed_column))
            uf.union(("x", k, 3), left)
            uf.union(("x", k, 1), right)
        else:
            uf.union(left, right)
        passing = set(row.columns_below) & set(row.columns_above)
        passing.discard(row.crossed_column)
        for c in passing:
            uf.union(("p", i, c), ("p", i + 1, c))

    # group terminals by class
    classes: Dict[object, List[Tuple[int, int]]] = {}
    for k in range(len(crossings_rows)):
        for s in range(4):
            classes.setdefault(uf.find(("x", k, s)), []).append((k, s))
    free_loops = 0
    seen_roots = set(classes)
    for key in list(uf.parent):
        r = uf.find(key)
        if r not in seen_roots:
            seen_roots.add(r)
            free_loops += 1

    edge_of: Dict[object, int] = {}
    for eid, root in enumerate(
        sorted(classes, key=lambda r: min(classes[r])), start=1
    ):
        if len(classes[root]) != 2:
            raise RoutingError(
                f"arc with {len(classes[root])} crossing ends (need 2)"
            )
        edge_of[root] = eid

    crossings = []
    for k in range(len(crossings_rows)):
        slots = tuple(edge_of[uf.find(("x", k, s))] for s in range(4))
        crossings.append(Crossing(id=k, slots=slots, over_pair=1))
    out = PlanarDiagram(tuple(crossings), free_loops)
    issues = validate_diagram(out)
    if issues:
        raise RoutingError(
            "reconstructed diagram invalid: "
            + "; ".join(f"{i.code}: {i.message}" for i in issues)
        )
    return out
