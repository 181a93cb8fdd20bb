import json

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import g_regions, near_g_boundary, near_s_boundary, s_regions
from phase_sentinel.atlas import (
    classify_batch,
    expected_inventory,
    figure_tag,
    origin_type,
    parse_record,
    portrait_descriptor,
    region61,
    region71,
    region_of_params,
)
from phase_sentinel.compactify import infinity_equilibria
from phase_sentinel.core import CubicParams
from phase_sentinel.criteria import NO_CLOSED
from phase_sentinel.errors import OutOfRegion


def test_region61_examples():
    assert region61(1, 0, 0, -1, 0).label == "S1"
    assert region61(1, 1, 1, 1, 1).label == "S9"
    assert region61(1, 1, 3.5, 3.5, 1).label == "S17"


def test_region71_examples():
    assert region71(0, 0, 1, 0).label == "G1"
    assert region71(1, 1, 1, 1).label == "G9"
    lab = region71(2, 1, 2, 1)
    assert lab.label == "G14"
    assert lab.discriminants["b^2-4ac"] == 0 and lab.discriminants["a-mu*sqrt(ac)+c"] == 0


def test_region_b_zero():
    with pytest.raises(OutOfRegion):
        region61(1, 1, 1, 0, 1)
    with pytest.raises(OutOfRegion):
        region71(1, 1, 0, 1)


def test_region_negative_parameter():
    with pytest.raises(OutOfRegion):
        region61(1, -1, 1, 1, 1)


# one parameter vector per region; exact-boundary sets use factored Phi
EXEMPLARS61 = {
    "S1": (1, 0, 0, -1, 0),
    "S2": (1, 0, 0, 1, 0),
    "S3": (1, 1, 1, 1, 0),
    "S4": (1, 1, 3, 1, 0),
    "S5": (1, 1, 1, -1, 0),
    "S6": (1, 3, 2, 1, 0),  # b = a^2/4, u0 = -1, gamma = -1
    "S7": (1, 2, 2, 1, 0),
    "S8": (1, 1, 2, 1, 0),
    "S9": (1, 1, 1, 1, 1),
    "S10": (1, 3, 4, 5, 2),  # 2 (u + 1)^2 (u + 1/2), rho1 = -1
    "S11": (1, 2, 4, 5, 2),
    "S12": (1, 1, 4, 5, 2),
    "S13": (1, 1, 0, -3, 2),  # 2 (u - 1)^2 (u + 1/2), rho2 = 1
    "S14": (1, 3, 2.5, 2, 0.5),  # (u + 1)^2 (u + 2) / 2, rho2 = -1
    "S15": (1, 2, 2.5, 2, 0.5),
    "S16": (1, 1, 2.5, 2, 0.5),
    "S17": (1, 1, 3.5, 3.5, 1),
    "S18": (1, 1, 0, -3, 1),
}
EXEMPLARS71 = {
    "G1": (0, 0, 1, 0),
    "G2": (0, 0, -1, 0),
    "G3": (1, 0, -1, 0),
    "G4": (1, 0, 1, 0),
    "G5": (1, 1, 1, 0),
    "G6": (1, 1, -1, 0),
    "G7": (1, 0, 1, 1),
    "G8": (1, 0, -1, 1),
    "G9": (1, 1, 1, 1),
    "G10": (1, 1, 3, 1),
    "G11": (1, 1, -3, 1),
    "G12": (3, 1, 2, 1),
    "G13": (1, 1, -2, 1),
    "G14": (2, 1, 2, 1),
    "G15": (1, 1, 2, 1),
}


@pytest.mark.parametrize("label", list(EXEMPLARS61))
def test_every_s_region_reachable(label):
    vals = EXEMPLARS61[label]
    lab = region61(*vals)
    assert lab.label == label
    p = CubicParams("sys61", *vals)
    assert sorted(e.label for e in infinity_equilibria(p)) == expected_inventory(lab)


@pytest.mark.parametrize("label", list(EXEMPLARS71))
def test_every_g_region_reachable(label):
    mu, a, b, c = EXEMPLARS71[label]
    lab = region71(mu, a, b, c)
    assert lab.label == label
    p = CubicParams("sys71", mu=mu, a=a, b=b, c=c)
    assert sorted(e.label for e in infinity_equilibria(p)) == expected_inventory(lab)


def test_s18_is_reached_by_exemplar_oracle():
    assert s_regions(*EXEMPLARS61["S18"]) == ["S18"]


def test_figure_tags():
    assert figure_tag(region61(1, 0, 0, -1, 0)) == "qjxt(a)"
    assert figure_tag(region61(1, 1, 0, -3, 1)) == "qjxt(r)"
    assert figure_tag(region71(1, 1, 2, 1)) == "qjxt1(o)"


# ---------------------------------------------------------------------------
# partition against the literal predicates
# ---------------------------------------------------------------------------

nonneg = st.one_of(st.just(0.0), st.floats(0.0, 5.0))
bval = st.floats(0.01, 6.0).flatmap(lambda m: st.sampled_from([m, -m]))


@settings(max_examples=2000, deadline=None)
@given(nonneg, nonneg, nonneg, bval, nonneg)
def test_partition_s(lam, mu, a, b, c):
    assume(not near_s_boundary(lam, mu, a, b, c))
    fired = s_regions(lam, mu, a, b, c)
    assert len(fired) == 1
    assert region61(lam, mu, a, b, c).label == fired[0]


@settings(max_examples=2000, deadline=None)
@given(nonneg, nonneg, bval, nonneg)
def test_partition_g(mu, a, b, c):
    assume(not near_g_boundary(mu, a, b, c))
    fired = g_regions(mu, a, b, c)
    assert len(fired) == 1
    assert region71(mu, a, b, c).label == fired[0]


@settings(max_examples=300, deadline=None)
@given(nonneg, nonneg, nonneg, bval, nonneg)
def test_inventory_consistency(lam, mu, a, b, c):
    assume(not near_s_boundary(lam, mu, a, b, c))
    lab = region61(lam, mu, a, b, c)
    p = CubicParams("sys61", lam, mu, a, b, c)
    assert sorted(e.label for e in infinity_equilibria(p)) == expected_inventory(lab)


@settings(max_examples=300, deadline=None)
@given(nonneg, nonneg, bval, nonneg)
def test_inventory_consistency_71(mu, a, b, c):
    assume(not near_g_boundary(mu, a, b, c))
    lab = region71(mu, a, b, c)
    p = CubicParams("sys71", mu=mu, a=a, b=b, c=c)
    assert sorted(e.label for e in infinity_equilibria(p)) == expected_inventory(lab)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["sys61", "sys71"]), nonneg, nonneg, bval, nonneg)
def test_nonexistence_attribute(fam, mu, a, b, c):
    assume(mu * mu + a * a + c * c > 1e-6)
    p = CubicParams("sys61", 1.0, mu, a, b, c) if fam == "sys61" else CubicParams("sys71", mu=mu, a=a, b=b, c=c)
    assume(not (near_g_boundary(mu, a, b, c) if fam == "sys71" else near_s_boundary(1.0, mu, a, b, c)))
    d = portrait_descriptor(region_of_params(p), p)
    assert d.verdict == NO_CLOSED


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------


def test_s1_descriptor():
    p = CubicParams("sys61", 1, 0, 0, -1, 0)
    d = portrait_descriptor(region61(1, 0, 0, -1, 0), p)
    assert d.origin.kind == "center" and d.figure == "qjxt(a)"
    assert sorted(d.separatrices) == ["A", "B", "D"]
    json.dumps(d.to_dict())


def test_origin_node():
    assert origin_type(1, 3, 0, 0).kind == "stable-node"
    assert origin_type(1, 1, 0, 0).kind == "stable-focus"
    assert origin_type(1, 2, 0, 0).kind == "stable-improper-node"
    assert origin_type(1, 0, 1, 0).kind == "stable-focus"


def test_g9_descriptor():
    p = CubicParams("sys71", mu=1, a=1, b=1, c=1)
    d = portrait_descriptor(region71(1, 1, 1, 1), p)
    assert [e.label for e in d.infinity] == ["G", "D"]
    assert d.separatrices["G"] == {"in": 2, "out": 2}
    assert d.verdict == NO_CLOSED


def test_separatrix_counts_from_tables():
    p = CubicParams("sys61", 1, 1, 2, 1, 0)  # S8, C carries table C1
    d = portrait_descriptor(region61(1, 1, 2, 1, 0), p)
    assert d.separatrices["C"] == {"in": 1, "out": 1}


# ---------------------------------------------------------------------------
# batch
# ---------------------------------------------------------------------------


def test_batch_examples():
    recs, hist = classify_batch(["1 0 0 -1 0", "1,1,1,1,1", '{"family": "sys61", "lambda": 1, "mu": 1, "a": 3.5, "b": 3.5, "c": 1}'])
    assert [r["label"] for r in recs] == ["S1", "S9", "S17"]
    assert hist == {"S1": 1, "S9": 1, "S17": 1}


def test_batch_empty():
    assert classify_batch([]) == ([], {})
    assert classify_batch(["", "# comment"]) == ([], {})


def test_batch_out_of_region_inline():
    recs, hist = classify_batch(["1 1 1 0 1", "0 0 0 0"])
    assert all(r["error"].startswith("OutOfRegion") for r in recs)
    assert hist == {"error": 2}


def test_batch_parallel_matches_serial():
    lines = [f"1 {i % 3} {i % 5} {1 + i % 7} {i % 2}" for i in range(200)]
    assert classify_batch(lines, workers=2) == classify_batch(lines, workers=1)


def test_parse_record_forms():
    assert parse_record("0 0 1 0").family == "sys71"
    with pytest.raises(Exception):
        parse_record("1 2 3")
