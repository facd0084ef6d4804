from fractions import Fraction

from ribbonfold.model import (
    BinaryGridDiagram,
    BlockType,
    Crossing,
    EndKind,
    PlanarDiagram,
    PortionType,
    Row,
    Shape,
    check_bgd,
    check_row,
    validate_diagram,
)
from grids import build

TREFOIL = PlanarDiagram(
    (
        Crossing(0, (4, 2, 5, 1)),
        Crossing(1, (2, 6, 3, 5)),
        Crossing(2, (6, 4, 1, 3)),
    )
)

HOPF = PlanarDiagram((Crossing(0, (4, 1, 3, 2)), Crossing(1, (2, 3, 1, 4))))


def codes(d):
    return sorted({i.code for i in validate_diagram(d)})


def test_valid_diagrams():
    assert validate_diagram(TREFOIL) == []
    assert validate_diagram(HOPF) == []
    assert validate_diagram(PlanarDiagram((Crossing(0, (1, 1, 2, 2)),))) == []
    assert validate_diagram(PlanarDiagram((Crossing(0, (1, 2, 2, 1)),))) == []


def test_empty_and_loops():
    assert validate_diagram(PlanarDiagram((), 1)) == []
    assert validate_diagram(PlanarDiagram((), 0)) == []
    assert PlanarDiagram((), 2).components == 2


def test_dangling_edge():
    d = PlanarDiagram((Crossing(0, (1, 2, 3, 4)),))
    assert codes(d) == ["DanglingEdge"]


def test_bad_arity():
    d = PlanarDiagram((Crossing(0, (1, 2, 2, 1), over_pair=7),))
    assert codes(d) == ["BadArity"]
    d = PlanarDiagram((Crossing(0, (1, 2, 2, 1)), Crossing(0, (3, 4, 4, 3))))
    assert "BadArity" in codes(d)


def test_disconnected():
    kink = Crossing(0, (1, 2, 2, 1))
    far = Crossing(1, (3, 4, 4, 3))
    assert codes(PlanarDiagram((kink, far))) == ["Disconnected"]
    assert codes(PlanarDiagram((kink,), free_loops=1)) == ["Disconnected"]


def test_nonplanar_rotation_rejected():
    # three circles pairwise sharing a single crossing cannot lie in the plane
    d = PlanarDiagram(
        (
            Crossing(0, (1, 4, 2, 3)),
            Crossing(1, (3, 6, 4, 5)),
            Crossing(2, (5, 2, 6, 1)),
        )
    )
    assert codes(d) == ["NonPlanarRotation"]


def test_components_and_mirror():
    assert TREFOIL.components == 1
    assert HOPF.components == 2
    m = TREFOIL.mirror()
    assert all(x.over_pair == 0 for x in m.crossings)
    assert m.mirror() == PlanarDiagram(
        tuple(Crossing(x.id, x.slots, 1) for x in TREFOIL.crossings)
    )
    assert validate_diagram(m) == []


def test_portion_names():
    assert PortionType(1, -1).name == "T1-"
    assert str(PortionType(4, +1)) == "T4+"


def test_block_type_bijection():
    names = {
        BlockType(s, c).name for s in Shape for c in (False, True)
    }
    assert names == {"B1", "B2", "B3", "B1r", "B2r", "B3r"}
    assert BlockType(Shape.MIN, True).name == "B1"
    assert BlockType(Shape.TRANS, False).name == "B2r"
    assert Shape.MIN.delta == 2 and Shape.TRANS.delta == 0 and Shape.MAX.delta == -2


def test_grid_builder_and_checks():
    g = build([("MIN", 1, 2), ("MAX", 1, 2)])
    assert check_bgd(g) == []
    assert g.crossing_number == 0
    g = build(
        [
            ("MIN", 2, 4),
            ("MIN", 1, 3, 2),
            ("MAX", 3, 4),
            ("MAX", 1, 2),
        ]
    )
    assert check_bgd(g) == []
    assert g.crossing_number == 1
    assert g.block_multiset() == {
        "B1": 1, "B2": 0, "B3": 0, "B1r": 1, "B2r": 0, "B3r": 2,
    }


def test_fractional_columns_allowed():
    h = Fraction(3, 2)
    g = build([("MIN", 1, 2), ("TRANS", 1, h), ("MAX", h, 2)])
    assert check_bgd(g) == []


def test_check_row_catches_problems():
    # uncrossed row with a strand inside its extent
    r = Row(Shape.MAX, (1, 3), (EndKind.DOWN, EndKind.DOWN), None, (1, 2, 3), (2,))
    assert any("inside extent" in p for p in check_row(r))
    # crossed row whose crossed column is not the strand inside
    r = Row(Shape.MAX, (1, 3), (EndKind.DOWN, EndKind.DOWN), 5, (1, 2, 3, 5), (2, 5))
    assert check_row(r)
    # wrong end kinds for the shape
    r = Row(Shape.MIN, (1, 2), (EndKind.DOWN, EndKind.UP), None, (), (1, 2))
    assert any("illegal" in p for p in check_row(r))
    # elbow must have been resolved before model construction
    r = Row(Shape.MIN, (1, 2), (EndKind.ELBOW, EndKind.ELBOW), None, (), (1, 2))
    assert any("illegal" in p for p in check_row(r))
    # strand delta mismatch
    r = Row(Shape.TRANS, (1, 2), (EndKind.DOWN, EndKind.UP), None, (1,), (1, 2))
    assert any("delta" in p for p in check_row(r))


def test_check_bgd_catches_problems():
    g = build([("MIN", 1, 2), ("MAX", 1, 2)])
    bad = BinaryGridDiagram((g.rows[0],))
    assert any("zero strands" in p for p in check_bgd(bad))
    # stitch together rows with disagreeing column lists
    r0 = build([("MIN", 1, 2)]).rows[0]
    r1 = build([("MIN", 3, 4), ("MAX", 3, 4)]).rows[1]
    assert any("disagree" in p for p in check_bgd(BinaryGridDiagram((r0, r1))))
