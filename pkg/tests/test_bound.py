"""Bound formulas and the assembled pipeline report."""

import json
from fractions import Fraction

import pytest

from ribbonfold.bound import (
    BLOCK_KEYS,
    DomainError,
    block_counts,
    comparison_bounds,
    compute_bound,
    report_json,
    rib_upper_bound,
    run_pipeline,
    theoretical_bound,
)
from ribbonfold.expand import build_bgd
from ribbonfold.ingest import bundled_table, parse_pd
from ribbonfold.leveling import find_leveling, optimize_flips
from ribbonfold.model import BinaryGridDiagram

TREFOIL = "X(4,2,5,1) X(2,6,3,5) X(6,4,1,3)"
HOPF = "X(4,1,3,2) X(2,3,1,4)"
FIG8 = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"


def _grid(txt):
    ld, _ = optimize_flips(find_leveling(parse_pd(txt)))
    return build_bgd(ld)


def test_block_counts_trefoil():
    assert block_counts(_grid(TREFOIL)) == {
        "b1": 1, "b2": 1, "b3": 1, "b1_ring": 1, "b2_ring": 0, "b3_ring": 1,
    }


def test_block_counts_hopf():
    assert block_counts(_grid(HOPF)) == {
        "b1": 1, "b2": 0, "b3": 1, "b1_ring": 1, "b2_ring": 0, "b3_ring": 1,
    }


def test_block_counts_empty():
    counts = block_counts(BinaryGridDiagram(()))
    assert set(counts) == set(BLOCK_KEYS)
    assert all(v == 0 for v in counts.values())


def test_rib_upper_bound_formula():
    # free caps and sideways rings never count
    assert rib_upper_bound(
        {"b1": 1, "b2": 1, "b3": 1, "b1_ring": 1, "b2_ring": 7, "b3_ring": 9}) == 8
    assert rib_upper_bound({k: 0 for k in BLOCK_KEYS}) == 0
    assert rib_upper_bound(
        {"b1": 1, "b2": 0, "b3": 1, "b1_ring": 1, "b2_ring": 0, "b3_ring": 1}) == 6


def test_theoretical_bound_values():
    assert theoretical_bound(3) == (8, Fraction(17, 2))
    assert theoretical_bound(2) == (6, Fraction(6))
    assert theoretical_bound(6) == (16, Fraction(16))


@pytest.mark.parametrize("c", [-1, 0, 1])
def test_theoretical_bound_domain(c):
    with pytest.raises(DomainError):
        theoretical_bound(c)


def test_theoretical_floor_monotone():
    pairs = [theoretical_bound(c) for c in range(2, 200)]
    floors = [f for f, _ in pairs]
    assert floors == sorted(floors)
    assert all(f <= linear for f, linear in pairs)


def test_comparison_bound_values():
    assert comparison_bounds(3)["tian"] == 40
    one = comparison_bounds(1)
    assert one["tian"] == 12
    assert one["denne"] == pytest.approx(120.0)
    zero = comparison_bounds(0)
    assert zero["tian"] == 4
    assert zero["denne"] == pytest.approx(4.0)


def test_compute_bound_trefoil():
    r = compute_bound(parse_pd(TREFOIL), name="3_1")
    assert r.name == "3_1"
    assert r.crossings == 3
    assert r.certified_bound == 8
    assert r.theoretical_floor == 8
    assert r.theoretical_linear == Fraction(17, 2)
    assert r.tian_bound == 40


def test_compute_bound_hopf_is_tight():
    r = compute_bound(parse_pd(HOPF))
    assert r.certified_bound == 6
    assert r.theoretical_floor == 6
    assert r.theoretical_linear == Fraction(6)


def test_compute_bound_figure_eight():
    r = compute_bound(parse_pd(FIG8))
    assert r.certified_bound == 10
    assert r.theoretical_linear == Fraction(11)


def test_compute_bound_unknot():
    r = compute_bound(parse_pd("", allow_unknot=True), name="unknot")
    assert r.certified_bound == 0
    assert r.theoretical_floor is None
    assert r.theoretical_linear is None
    assert "0" in r.note


def test_corpus_counting_chain():
    for entry in bundled_table():
        r = compute_bound(entry.diagram, name=entry.name)
        c = r.crossings
        t1m = r.portion_counts["T1-"]
        assert r.certified_bound == 2 * (c + 1 + t1m), entry.name
        assert r.certified_bound <= r.theoretical_floor, entry.name
        assert r.theoretical_floor <= r.theoretical_linear, entry.name


def test_normalization_preserves_bound():
    for entry in bundled_table():
        res = run_pipeline(entry.diagram)
        pre = rib_upper_bound(block_counts(res.grid))
        post = rib_upper_bound(block_counts(res.normal))
        assert pre == post, entry.name


def test_report_json_schema():
    r = compute_bound(parse_pd(TREFOIL), name="3_1")
    data = json.loads(json.dumps(report_json(r)))
    assert list(data) == [
        "name", "crossings", "portion_counts", "flip_x", "flip_y",
        "block_counts", "certified_bound", "theoretical_floor",
        "theoretical_bound", "tian_bound", "denne_bound", "note",
    ]
    assert data["certified_bound"] == 8
    assert data["theoretical_bound"] == 8.5
    assert data["block_counts"]["b1_ring"] >= 1
    assert set(data["portion_counts"]) == {
        "T0+", "T1+", "T1-", "T2+", "T3+", "T3-", "T4+",
    }
