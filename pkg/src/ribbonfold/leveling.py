"""Vertex leveling of connected link diagrams.

A leveling stacks the crossings at distinct heights so that every arc runs
monotonically between its endpoints. Sweeping bottom to top, the state is
the left-to-right sequence of open strands. The first crossing opens four
strands, the last closes four, and every crossing in between consumes a
contiguous run of open strands matching a contiguous counterclockwise arc
of its rotation, then inserts the complementary arc reversed.

A crossing with d strands below is a portion of type Td. T1 and T3 carry a
sign: positive when the strand that turns back at the crossing (the cup of
a T1, the cap of a T3) passes over the strand running through.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .ingest import detect_nugatory
from .model import (
    LeveledDiagram,
    PlanarDiagram,
    PortionType,
    RibbonfoldError,
    validate_diagram,
)


class PreconditionViolated(RibbonfoldError):
    """Diagram is empty, invalid, split, or has reducible crossings."""


class NoLevelingFound(RibbonfoldError):
    """The search space was exhausted without a valid leveling."""


@dataclass(frozen=True)
class FlipChoice:
    """Whether to turn the leveled diagram over (x) or around (y)."""

    flip_x: bool = False
    flip_y: bool = False


def classify_portion(down_count: int, arc_start: int, over_pair: int) -> PortionType:
    """Portion type of a crossing placed with the given attachment arc."""
    if down_count in (0, 2, 4):
        return PortionType(down_count, 1)
    if down_count == 1:
        sign = 1 if (arc_start + 1) % 2 == over_pair else -1
    elif down_count == 3:
        sign = 1 if arc_start % 2 == over_pair else -1
    else:
        raise ValueError(f"bad down count {down_count}")
    return PortionType(down_count, sign)


def _preconditions(d: PlanarDiagram) -> None:
    issues = validate_diagram(d)
    if issues:
        raise PreconditionViolated(
            "; ".join(f"{i.code}: {i.message}" for i in issues)
        )
    if not d.crossings:
        raise PreconditionViolated("diagram has no crossings to level")
    bad = detect_nugatory(d)
    if bad:
        raise PreconditionViolated(
            f"reducible crossings {bad}: untwist them first"
        )


def _down_edges(d: PlanarDiagram, inc, placed, ci: int) -> Dict[int, int]:
    """Slots of crossing ci whose edge descends to an already placed crossing."""
    downs = {}
    for s, e in enumerate(d.crossings[ci].slots):
        (ac, asl), (bc, bsl) = inc[e]
        oc = bc if (ac, asl) == (ci, s) else ac
        if placed[oc]:
            downs[s] = e
    return downs


def _attach(open_seq: Tuple[int, ...], slots, downs: Dict[int, int],
            a: int) -> Optional[Tuple[int, ...]]:
    """Consume the down run and insert the up run; None if a does not fit."""
    dcount = len(downs)
    if set(downs) != {(a + j) % 4 for j in range(dcount)}:
        return None
    if dcount:
        expected = [slots[(a + j) % 4] for j in range(dcount)]
        try:
            p = open_seq.index(expected[0])
        except ValueError:
            return None
        if list(open_seq[p : p + dcount]) != expected:
            return None
    else:
        if open_seq:
            return None
        p = 0
    ups = tuple(slots[(a + j) % 4] for j in range(3, dcount - 1, -1))
    return open_seq[:p] + ups + open_seq[p + dcount :]


def find_leveling(diagram: PlanarDiagram, exhaustive: bool = False) -> LeveledDiagram:
    """Search for a leveling with one bottom and one top crossing.

    Deterministic backtracking over placement orders and attachment arcs.
    With exhaustive=True, every leveling is enumerated and one minimizing
    the T1- count is returned; this can be exponential in the crossing
    number, so the default returns the first leveling found.
    """
    _preconditions(diagram)
    n = len(diagram.crossings)
    inc = diagram.incidences()
    placed = [False] * n
    order: List[int] = []
    arcs: List[int] = []
    levels: List[Tuple[int, ...]] = [()]
    portions: List[PortionType] = []
    best: List[Optional[Tuple]] = [None]

    def record() -> bool:
        snap = (tuple(order), tuple(arcs), tuple(levels), tuple(portions))
        if not exhaustive:
            best[0] = snap
            return True
        t1m = sum(1 for p in snap[3] if p.index == 1 and p.sign < 0)
        if best[0] is None or t1m < best[0][0]:
            best[0] = (t1m, snap)
        return False

    def dfs() -> bool:
        k = len(order)
        if k == n:
            return record()
        open_seq = levels[-1]
        cands = []
        saturated = 0
        for ci in range(n):
            if placed[ci]:
                continue
            downs = _down_edges(diagram, inc, placed, ci)
            if len(downs) == 4:
                saturated += 1
            cands.append((ci, downs))
        if saturated >= 2:
            return False
        for ci, downs in cands:
            d = len(downs)
            if k == 0:
                if d != 0:
                    continue
            elif d == 0 or (d == 4) != (k == n - 1):
                continue
            x = diagram.crossings[ci]
            for a in range(4):
                nxt = _attach(open_seq, x.slots, downs, a)
                if nxt is None:
                    continue
                placed[ci] = True
                order.append(ci)
                arcs.append(a)
                levels.append(nxt)
                portions.append(classify_portion(d, a, x.over_pair))
                if dfs():
                    return True
                placed[ci] = False
                order.pop()
                arcs.pop()
                levels.pop()
                portions.pop()
        return False

    dfs()
    if best[0] is None:
        raise NoLevelingFound(
            f"no leveling for this {n}-crossing diagram"
        )
    snap = best[0] if not exhaustive else best[0][1]
    return LeveledDiagram(diagram, snap[0], snap[1], snap[3], snap[2])


def _replay(diagram: PlanarDiagram, order: Sequence[int]) -> LeveledDiagram:
    """Re-derive arcs and levels for a fixed placement order."""
    n = len(diagram.crossings)
    inc = diagram.incidences()
    placed = [False] * n
    arcs: List[int] = []
    levels: List[Tuple[int, ...]] = [()]
    portions: List[PortionType] = []

    def dfs(k: int) -> bool:
        if k == n:
            return True
        ci = order[k]
        downs = _down_edges(diagram, inc, placed, ci)
        x = diagram.crossings[ci]
        for a in range(4):
            nxt = _attach(levels[-1], x.slots, downs, a)
            if nxt is None:
                continue
            placed[ci] = True
            arcs.append(a)
            levels.append(nxt)
            portions.append(classify_portion(len(downs), a, x.over_pair))
            if dfs(k + 1):
                return True
            placed[ci] = False
            arcs.pop()
            levels.pop()
            portions.pop()
        return False

    if not dfs(0):
        raise NoLevelingFound("replay failed for the given order")
    return LeveledDiagram(diagram, tuple(order), tuple(arcs),
                          tuple(portions), tuple(levels))


_X_PERM = (2, 1, 0, 3)
_Y_PERM = (0, 3, 2, 1)


def _flip_diagram(d: PlanarDiagram, flip_x: bool, flip_y: bool) -> PlanarDiagram:
    """Rotate the diagram half a turn about a horizontal or vertical axis.

    Each is a rigid motion in space, so the link type is unchanged; in the
    projection the slots reflect and the over strand toggles. Doing both
    is a half turn in the plane: slots shift by two, over strand kept.
    """
    perm = list(range(4))
    toggle = 0
    if flip_y:
        perm = [perm[j] for j in _Y_PERM]
        toggle ^= 1
    if flip_x:
        perm = [perm[j] for j in _X_PERM]
        toggle ^= 1
    out = []
    for x in d.crossings:
        slots = tuple(x.slots[perm[j]] for j in range(4))
        out.append(type(x)(x.id, slots, x.over_pair ^ toggle))
    return PlanarDiagram(tuple(out), d.free_loops)


def apply_flip(ld: LeveledDiagram, choice: FlipChoice) -> LeveledDiagram:
    """Flip a leveled diagram and re-realize it over the same order."""
    if not choice.flip_x and not choice.flip_y:
        return ld
    d2 = _flip_diagram(ld.diagram, choice.flip_x, choice.flip_y)
    order = tuple(reversed(ld.order)) if choice.flip_x else ld.order
    return _replay(d2, order)


def optimize_flips(ld: LeveledDiagram) -> Tuple[LeveledDiagram, FlipChoice]:
    """Pick the flip minimizing the T1- count.

    The four variants turn the multiset (T1+, T1-, T3+, T3-) into its
    permutations, so their T1- counts sum to at most c - 2 and the best
    one is at most floor((c - 2) / 4).
    """
    best = None
    for fx, fy in ((False, False), (False, True), (True, False), (True, True)):
        choice = FlipChoice(fx, fy)
        cand = apply_flip(ld, choice)
        t1m = sum(1 for p in cand.portions if p.index == 1 and p.sign < 0)
        if best is None or t1m < best[0]:
            best = (t1m, cand, choice)
    return best[1], best[2]


def check_leveling(ld: LeveledDiagram) -> List[str]:
    """Structural validity of a leveling; empty list when sound."""
    problems: List[str] = []
    d = ld.diagram
    n = len(d.crossings)
    if sorted(ld.order) != list(range(n)):
        return [f"order is not a permutation of 0..{n - 1}"]
    if not (len(ld.arc_starts) == len(ld.portions) == n
            and len(ld.levels) == n + 1):
        return ["field lengths disagree"]
    if ld.levels[0] != () or ld.levels[-1] != ():
        problems.append("levels must start and end empty")
    inc = d.incidences()
    placed = [False] * n
    for k, ci in enumerate(ld.order):
        downs = _down_edges(d, inc, placed, ci)
        dcount = len(downs)
        if (dcount == 0) != (k == 0):
            problems.append(f"step {k}: {dcount} strands below")
        if (dcount == 4) != (k == n - 1):
            problems.append(f"step {k}: {dcount} strands below")
        x = d.crossings[ci]
        nxt = _attach(ld.levels[k], x.slots, downs, ld.arc_starts[k])
        if nxt is None:
            problems.append(f"step {k}: arc {ld.arc_starts[k]} does not attach")
            break
        if nxt != ld.levels[k + 1]:
            problems.append(f"step {k}: recorded level differs")
            break
        want = classify_portion(dcount, ld.arc_starts[k], x.over_pair)
        if want != ld.portions[k]:
            problems.append(f"step {k}: portion should be {want.name}")
        placed[ci] = True
    return problems
