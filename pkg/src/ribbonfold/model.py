"""Shared data types for the ribbon-bound pipeline.

Conventions used throughout:

* A crossing's four slots hold edge identifiers in counterclockwise order.
  Slots 0/2 and 1/3 are the two transversal strand pairs. ``over_pair``
  records which diagonal carries the over-strand: 0 means slots {0, 2},
  1 means slots {1, 3}.
* Grid rows each hold exactly one horizontal segment, and a horizontal
  segment always passes over any vertical strand it crosses. Over/under
  data of the original diagram is realized by choosing which strand
  becomes the horizontal one.
* Column coordinates are exact rationals during construction (so fresh
  columns can always be squeezed between existing ones) and are compressed
  to integers for serialization.

All types are immutable value objects; transformations return new values.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

Col = Union[int, Fraction]


class RibbonfoldError(Exception):
    """Base class for errors raised by this package."""


class RoutingError(RibbonfoldError):
    """Internal strand-routing inconsistency; indicates a bug, not bad input."""


# ---------------------------------------------------------------------------
# Planar diagrams
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Crossing:
    """One 4-valent vertex with over/under data.

    ``slots`` lists the four incident edge ids counterclockwise. The slot-0
    edge of a parsed PD token is the incoming under-strand, which makes the
    over-strand the 1-3 diagonal (over_pair = 1) for parsed input. ``sign``
    is filled in only when an orientation has been fixed; it is plumbing for
    the writhe and never drives the pipeline.
    """

    id: int
    slots: Tuple[int, int, int, int]
    over_pair: int = 1
    sign: Optional[int] = None

    def over_slots(self) -> Tuple[int, int]:
        return (0, 2) if self.over_pair == 0 else (1, 3)

    def under_slots(self) -> Tuple[int, int]:
        return (1, 3) if self.over_pair == 0 else (0, 2)


@dataclass(frozen=True)
class PlanarDiagram:
    """A connected link diagram in PD-code semantics.

    ``free_loops`` counts crossing-free closed components (a bare unknot
    circle has zero crossings but is still a component). A diagram mixing
    free loops with crossings is split and fails validation.
    """

    crossings: Tuple[Crossing, ...]
    free_loops: int = 0

    @property
    def crossing_number(self) -> int:
        return len(self.crossings)

    def edge_ids(self) -> List[int]:
        """Sorted list of distinct edge identifiers."""
        seen = set()
        for x in self.crossings:
            seen.update(x.slots)
        return sorted(seen)

    def incidences(self) -> Dict[int, List[Tuple[int, int]]]:
        """Edge id -> list of (crossing index, slot) incidences."""
        inc: Dict[int, List[Tuple[int, int]]] = {}
        for ci, x in enumerate(self.crossings):
            for s, e in enumerate(x.slots):
                inc.setdefault(e, []).append((ci, s))
        return inc

    @property
    def components(self) -> int:
        """Number of link components (strand classes plus free loops)."""
        if not self.crossings:
            return self.free_loops
        parent: Dict[int, int] = {}

        def find(a: int) -> int:
            while parent.setdefault(a, a) != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a: int, b: int) -> None:
            parent[find(a)] = find(b)

        for x in self.crossings:
            union(x.slots[0], x.slots[2])
            union(x.slots[1], x.slots[3])
        roots = {find(e) for e in parent}
        return len(roots) + self.free_loops

    def mirror(self) -> "PlanarDiagram":
        """Swap every crossing's over/under data (mirror image diagram)."""
        return PlanarDiagram(
            tuple(
                Crossing(x.id, x.slots, 1 - x.over_pair, None)
                for x in self.crossings
            ),
            self.free_loops,
        )


@dataclass(frozen=True)
class ValidationIssue:
    code: str  # DanglingEdge | BadArity | Disconnected | NonPlanarRotation
    message: str


def validate_diagram(d: PlanarDiagram) -> List[ValidationIssue]:
    """Structural validation: edge pairing, arity, connectivity, planarity.

    Returns an empty list iff the diagram is a closed connected diagram
    whose rotation system embeds in the plane. Planarity is checked via the
    Euler count of the face orbits of the rotation system, so a PD code that
    only embeds on a higher-genus surface is rejected here rather than
    producing nonsense downstream.
    """
    issues: List[ValidationIssue] = []

    if d.free_loops < 0:
        issues.append(ValidationIssue("BadArity", "free_loops must be >= 0"))
    ids = [x.id for x in d.crossings]
    if len(set(ids)) != len(ids):
        issues.append(ValidationIssue("BadArity", "duplicate crossing ids"))
    for x in d.crossings:
        if len(x.slots) != 4:
            issues.append(
                ValidationIssue("BadArity", f"crossing {x.id} has {len(x.slots)} slots")
            )
        if x.over_pair not in (0, 1):
            issues.append(
                ValidationIssue("BadArity", f"crossing {x.id} over_pair not in {{0,1}}")
            )
    if issues:
        return issues

    counts: Dict[int, int] = {}
    for x in d.crossings:
        for e in x.slots:
            counts[e] = counts.get(e, 0) + 1
    for e, k in sorted(counts.items()):
        if k != 2:
            issues.append(
                ValidationIssue("DanglingEdge", f"edge {e} appears {k} times (need 2)")
            )
    if issues:
        return issues

    n = len(d.crossings)
    if n == 0:
        return issues  # bare loops (or the empty diagram): nothing else to check

    if d.free_loops:
        issues.append(
            ValidationIssue(
                "Disconnected",
                f"{d.free_loops} free loop(s) split from {n} crossing(s)",
            )
        )

    # connectivity of the 4-valent graph
    inc = d.incidences()
    adj: Dict[int, set] = {i: set() for i in range(n)}
    for uses in inc.values():
        (c1, _), (c2, _) = uses
        if c1 != c2:
            adj[c1].add(c2)
            adj[c2].add(c1)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != n:
        issues.append(
            ValidationIssue(
                "Disconnected", f"crossing graph has {n - len(seen)} unreachable vertices"
            )
        )
    if issues:
        return issues

    # genus-0 check: faces of the rotation system must satisfy F = V + 2
    def alpha(dart: Tuple[int, int]) -> Tuple[int, int]:
        a, b = inc[d.crossings[dart[0]].slots[dart[1]]]
        return b if a == dart else a

    darts = [(ci, s) for ci in range(n) for s in range(4)]
    unvisited = set(darts)
    faces = 0
    while unvisited:
        start = unvisited.pop()
        cur = start
        while True:
            c2, s2 = alpha(cur)
            cur = (c2, (s2 + 1) % 4)
            if cur == start:
                break
            unvisited.discard(cur)
        faces += 1
    if faces != n + 2:
        genus = (n + 2 - faces) // 2
        issues.append(
            ValidationIssue(
                "NonPlanarRotation",
                f"rotation system has genus {genus} (faces={faces}, need {n + 2})",
            )
        )
    return issues


# ---------------------------------------------------------------------------
# Levelings and portions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PortionType:
    """Level slice around a vertex: ``index`` = downward edge-ends (0..4).

    The sign records whether the over-strand sits in the cheaply expandable
    configuration. Indices 0, 2 and 4 are expansion-cost neutral and carry
    the canonical sign +.
    """

    index: int
    sign: int = +1  # +1 or -1

    @property
    def name(self) -> str:
        return f"T{self.index}{'+' if self.sign > 0 else '-'}"

    def __str__(self) -> str:
        return self.name


PORTION_KINDS = ("T0+", "T1+", "T1-", "T2+", "T3+", "T3-", "T4+")


@dataclass(frozen=True)
class LeveledDiagram:
    """A vertex leveling of a diagram, one vertex per level gap.

    ``order`` lists crossing indices bottom-to-top. ``arc_starts[k]`` is the
    slot of ``order[k]``'s crossing where its contiguous run of downward
    edge-ends begins in counterclockwise order (for the bottom vertex, where
    the upward run ends). ``levels`` holds the open-strand edge ids crossing
    each level line left-to-right, levels[0] = () below everything through
    levels[n] = () above everything. ``portions`` classifies each vertex.
    """

    diagram: PlanarDiagram
    order: Tuple[int, ...]
    arc_starts: Tuple[int, ...]
    portions: Tuple[PortionType, ...]
    levels: Tuple[Tuple[int, ...], ...]

    def portion_counts(self) -> Dict[str, int]:
        out = {k: 0 for k in PORTION_KINDS}
        for p in self.portions:
            out[p.name] += 1
        return out


# ---------------------------------------------------------------------------
# Binary grid diagrams
# ---------------------------------------------------------------------------


class Shape(enum.Enum):
    MIN = "MIN"      # creates 2 upward strands (cup)
    TRANS = "TRANS"  # one strand in from below, one out upward
    MAX = "MAX"      # terminates 2 strands (cap)

    @property
    def delta(self) -> int:
        return {"MIN": 2, "TRANS": 0, "MAX": -2}[self.value]


class EndKind(enum.Enum):
    UP = "up"        # end starts a new upward vertical strand
    DOWN = "down"    # end terminates a strand arriving from below
    ELBOW = "elbow"  # input-only token; resolved to up/down at parse time


@dataclass(frozen=True)
class BlockType:
    """One of the six row types: shape crossed/uncrossed."""

    shape: Shape
    crossed: bool

    @property
    def name(self) -> str:
        base = {Shape.MIN: 1, Shape.TRANS: 2, Shape.MAX: 3}[self.shape]
        return f"B{base}" if self.crossed else f"B{base}r"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Row:
    """One horizontal slice of a binary grid diagram.

    ``extent`` is the horizontal segment's (left, right) column span.
    ``crossed_column`` is the single vertical strand the segment passes
    over, or None. Column lists are the open vertical strands crossing the
    level line just below / just above this row, in left-to-right order.
    """

    shape: Shape
    extent: Tuple[Col, Col]
    end_kinds: Tuple[EndKind, EndKind]
    crossed_column: Optional[Col]
    columns_below: Tuple[Col, ...]
    columns_above: Tuple[Col, ...]

    @property
    def block_type(self) -> BlockType:
        return BlockType(self.shape, self.crossed_column is not None)

    @property
    def delta(self) -> int:
        return self.shape.delta


def check_row(row: Row) -> List[str]:
    """Structural problems with a single row (empty list if none)."""
    problems: List[str] = []
    a, b = row.extent
    if not a < b:
        problems.append(f"extent {row.extent} not strictly increasing")
    lo, hi = row.columns_below, row.columns_above
    if list(lo) != sorted(lo) or len(set(lo)) != len(lo):
        problems.append("columns_below not strictly increasing")
    if list(hi) != sorted(hi) or len(set(hi)) != len(hi):
        problems.append("columns_above not strictly increasing")
    if len(hi) - len(lo) != row.shape.delta:
        problems.append(
            f"strand delta {len(hi) - len(lo)} does not match shape {row.shape.value}"
        )

    expected_kinds = {
        Shape.MIN: [(EndKind.UP, EndKind.UP)],
        Shape.MAX: [(EndKind.DOWN, EndKind.DOWN)],
        Shape.TRANS: [(EndKind.DOWN, EndKind.UP), (EndKind.UP, EndKind.DOWN)],
    }[row.shape]
    if row.end_kinds not in expected_kinds:
        problems.append(
            f"end kinds {tuple(k.value for k in row.end_kinds)} illegal for {row.shape.value}"
        )
        return problems

    s_lo, s_hi = set(lo), set(hi)
    if row.shape is Shape.MIN:
        consumed: Tuple[Col, ...] = ()
        created: Tuple[Col, ...] = (a, b)
    elif row.shape is Shape.MAX:
        consumed, created = (a, b), ()
    else:
        if row.end_kinds[0] is EndKind.DOWN:
            consumed, created = (a,), (b,)
        else:
            consumed, created = (b,), (a,)
    for c in consumed:
        if c not in s_lo:
            problems.append(f"consumed column {c} absent below")
    for c in created:
        if c in s_lo:
            problems.append(f"created column {c} already open below")
        if c not in s_hi:
            problems.append(f"created column {c} absent above")
    if s_hi != (s_lo - set(consumed)) | set(created):
        problems.append("columns_above is not columns_below minus consumed plus created")

    # the binary condition: strands passing the row strictly inside the
    # extent must be exactly the crossed column (one or none)
    passing = s_lo - set(consumed)
    inside = sorted(c for c in passing if a < c < b)
    if row.crossed_column is None:
        if inside:
            problems.append(f"uncrossed row has strands {inside} inside extent")
    else:
        if inside != [row.crossed_column]:
            problems.append(
                f"crossed row expects exactly [{row.crossed_column}] inside extent, got {inside}"
            )
        if row.crossed_column not in s_lo or row.crossed_column not in s_hi:
            problems.append("crossed column must pass through the row")
    return problems


@dataclass(frozen=True)
class BinaryGridDiagram:
    """Bottom-to-top sequence of rows, each crossing at most one vertical."""

    rows: Tuple[Row, ...]

    @property
    def crossing_number(self) -> int:
        return sum(1 for r in self.rows if r.crossed_column is not None)

    def block_multiset(self) -> Dict[str, int]:
        out = {"B1": 0, "B2": 0, "B3": 0, "B1r": 0, "B2r": 0, "B3r": 0}
        for r in self.rows:
            out[r.block_type.name] += 1
        return out


def check_bgd(g: BinaryGridDiagram) -> List[str]:
    """Structural problems with a grid diagram (empty list if none)."""
    problems: List[str] = []
    rows = g.rows
    if not rows:
        return problems
    if rows[0].columns_below:
        problems.append("diagram does not start with zero strands")
    if rows[-1].columns_above:
        problems.append("diagram does not end with zero strands")
    for i, r in enumerate(rows):
        for p in check_row(r):
            problems.append(f"row {i}: {p}")
        if i + 1 < len(rows) and r.columns_above != rows[i + 1].columns_below:
            problems.append(f"rows {i}/{i + 1}: column lists disagree")
    n_min = sum(1 for r in rows if r.shape is Shape.MIN)
    n_max = sum(1 for r in rows if r.shape is Shape.MAX)
    if n_min != n_max:
        problems.append(f"{n_min} min rows vs {n_max} max rows")
    return problems


# ---------------------------------------------------------------------------
# Bound report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    """Counts, certified bound and comparison bounds for one diagram."""

    name: Optional[str]
    crossings: int
    portion_counts: Dict[str, int]
    flip_x: bool
    flip_y: bool
    block_counts: Dict[str, int]  # keys b1,b2,b3,b1_ring,b2_ring,b3_ring
    certified_bound: int
    theoretical_floor: Optional[int]
    theoretical_linear: Optional[Fraction]
    tian_bound: int
    denne_bound: float
    note: str = ""
