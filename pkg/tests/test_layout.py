"""Pile construction, fold pricing, and the SVG schematic."""

import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from ribbonfold.bound import block_counts, rib_upper_bound, run_pipeline
from ribbonfold.ingest import bundled_table, parse_pd
from ribbonfold.invariants import jones_fingerprint
from ribbonfold.layout import (
    CapArc,
    FoldSchedule,
    LayoutConfig,
    LayoutOverlap,
    NotNormalForm,
    PaperPlane,
    build_pile,
    check_fold_lines,
    core_diagram,
    emit_svg,
    pile_steps,
    ribbon_length,
    schedule_json,
)

from grids import build

TREFOIL = "X(4,2,5,1) X(2,6,3,5) X(6,4,1,3)"
HOPF = "X(4,1,3,2) X(2,3,1,4)"
FIG8 = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"

EMPTY = FoldSchedule((), (), ())


def _schedule(txt):
    return build_pile(run_pipeline(parse_pd(txt)).normal)


def test_pile_counts_trefoil():
    s = _schedule(TREFOIL)
    assert len(s.planes) == 4
    assert len(s.connection_order) == 8
    assert len(s.caps) == 4


def test_pile_counts_hopf():
    s = _schedule(HOPF)
    assert len(s.planes) == 3
    assert len(s.connection_order) == 6
    assert len(s.caps) == 3


def test_pile_trivial_loop():
    s = build_pile(build([("MIN", 0, 1), ("MAX", 0, 1)]))
    assert len(s.planes) == 1
    assert len(s.caps) == 1
    assert s.planes[0].crossed_wing is None


def test_build_pile_rejects_non_normal():
    g = run_pipeline(parse_pd(TREFOIL)).grid
    with pytest.raises(NotNormalForm):
        build_pile(g)


def test_pile_steps_invariant():
    for entry in list(bundled_table())[:8]:
        s = build_pile(run_pipeline(entry.diagram).normal)
        for k, wings in enumerate(pile_steps(s.planes), start=1):
            assert len(wings) == 2 * k
            assert list(wings) == sorted(wings)
        assert wings == s.connection_order


def test_pile_steps_rejects_bad_bracketing():
    planes = (
        PaperPlane(0, (0, 10)),
        PaperPlane(1, (2, 12)),  # straddles wing 10 but claims no crossing
    )
    with pytest.raises(ValueError):
        list(pile_steps(planes))
    crossing = (
        PaperPlane(0, (0, 10)),
        PaperPlane(1, (2, 12), crossed_wing=10),
    )
    assert len(list(pile_steps(crossing))) == 2


def test_ribbon_length_values():
    tref = _schedule(TREFOIL)
    assert ribbon_length(tref, Fraction(1, 10**6)) == 8 + Fraction(20, 10**6)
    hopf = _schedule(HOPF)
    assert ribbon_length(hopf, Fraction(1, 100)) == Fraction(123, 20)
    assert ribbon_length(EMPTY, Fraction(1, 100)) == 0
    with pytest.raises(ValueError):
        ribbon_length(tref, 0)


def test_ribbon_length_converges_to_certified():
    for txt in (TREFOIL, HOPF, FIG8):
        res = run_pipeline(parse_pd(txt))
        certified = rib_upper_bound(block_counts(res.normal))
        s = build_pile(res.normal)
        got = ribbon_length(s, Fraction(1, 10**6))
        assert abs(got - certified) < Fraction(1, 1000)


def test_fold_lines_disjoint_at_default():
    for entry in list(bundled_table())[:8]:
        s = build_pile(run_pipeline(entry.diagram).normal)
        segs = check_fold_lines(s)
        assert len(segs) == 3 * len(s.planes) + 2 * len(s.caps)


def test_overlap_at_ten_widths():
    s = _schedule(TREFOIL)
    with pytest.raises(LayoutOverlap):
        emit_svg(s, LayoutConfig(width=1, epsilon=10))
    tiny = build_pile(build([("MIN", 0, 1), ("MAX", 0, 1)]))
    with pytest.raises(LayoutOverlap):
        check_fold_lines(tiny, LayoutConfig(width=Fraction(1, 2), epsilon=5))


def test_emit_svg_deterministic():
    s = _schedule(TREFOIL)
    a = emit_svg(s)
    b = emit_svg(s)
    assert a == b
    assert a.startswith("<svg")
    assert a.count('id="plane-') == 4
    assert a.count('id="cap-') == 4
    ET.fromstring(a)


def test_emit_svg_empty():
    doc = emit_svg(EMPTY)
    assert doc.startswith("<svg")
    assert "plane-" not in doc
    ET.fromstring(doc)


def test_core_diagram_preserves_jones():
    for txt in (TREFOIL, HOPF, FIG8):
        d = parse_pd(txt)
        s = build_pile(run_pipeline(d).normal)
        assert jones_fingerprint(core_diagram(s)) == jones_fingerprint(d)


def test_schedule_json_shape():
    s = _schedule(HOPF)
    data = schedule_json(s, epsilon=0.01, width=1.0)
    assert sorted(data) == ["caps", "epsilon", "planes", "width"]
    assert len(data["planes"]) == 3
    assert len(data["caps"]) == 3
    for p in data["planes"]:
        Fraction(p["insertion"][0])
        Fraction(p["insertion"][1])
    crossed = [p for p in data["planes"] if p["crossed_wing"] is not None]
    assert len(crossed) == 2  # hopf normal form keeps two crossings
