import json

import pytest

from vinetail import Logistic, PairCopula, SpecError, VineSpec
from vinetail.vines import EdgeLabel, expected_edges


def ilog(a):
    return PairCopula("iev", Logistic(a))


def test_edge_label_parse_and_format():
    e = EdgeLabel.parse("13|2")
    assert e.pair == (1, 3) and e.cond == (2,)
    assert str(e) == "13|2"
    assert EdgeLabel.parse("31|2") == e
    e2 = EdgeLabel.parse("1,4|2,3")
    assert e2.pair == (1, 4) and e2.cond == (2, 3)
    assert str(e2) == "14|23"
    wide = EdgeLabel((1, 12), (2, 3))
    assert str(wide) == "1,12|2,3"
    assert EdgeLabel.parse(str(wide)) == wide
    with pytest.raises(SpecError):
        EdgeLabel.parse("11")
    with pytest.raises(SpecError):
        EdgeLabel((1, 2), (2,))


def test_expected_edges_counts():
    for d in range(2, 8):
        assert len(expected_edges("dvine", d)) == d * (d - 1) // 2
        assert len(expected_edges("cvine", d)) == d * (d - 1) // 2
    assert [str(e) for e in expected_edges("trivariate", 3)] == ["12", "23", "13|2"]
    assert [str(e) for e in expected_edges("dvine", 4)] == ["12", "23", "34", "13|2", "24|3", "14|23"]
    assert [str(e) for e in expected_edges("cvine", 4)] == ["12", "13", "14", "23|1", "24|1", "34|12"]
    with pytest.raises(SpecError):
        expected_edges("trivariate", 4)
    with pytest.raises(SpecError):
        expected_edges("rvine", 4)


def test_spec_validation():
    good = VineSpec.trivariate(ilog(0.5), ilog(0.4), ilog(0.3))
    assert good.d == 3 and good.copula(1, 3).measure.alpha == 0.3
    assert good.copula(3, 2).measure.alpha == 0.4  # order-insensitive lookup
    with pytest.raises(SpecError):
        VineSpec(3, "trivariate", {"12": ilog(0.5), "23": ilog(0.4)})  # missing edge
    with pytest.raises(SpecError):
        VineSpec(3, "trivariate", {"12": ilog(0.5), "23": ilog(0.4), "13": ilog(0.3)})  # bad label
    with pytest.raises(SpecError):
        VineSpec(3, "trivariate", {"12": ilog(0.5), "23": ilog(0.4), "13|2": "nope"})


def test_json_roundtrip_identity():
    spec = VineSpec(4, "dvine", {str(e): ilog(0.2 + 0.1 * i) for i, e in enumerate(expected_edges("dvine", 4))})
    doc = spec.to_json()
    again = VineSpec.from_json(doc)
    assert again.to_json() == doc
    assert again.spec_hash() == spec.spec_hash()


def test_json_unknown_keys_rejected():
    spec = VineSpec.trivariate(ilog(0.5), ilog(0.4), ilog(0.3))
    doc = spec.to_dict()
    doc["surprise"] = 1
    with pytest.raises(SpecError):
        VineSpec.from_dict(doc)
    doc2 = spec.to_dict()
    doc2["edges"][0]["rogue"] = True
    with pytest.raises(SpecError):
        VineSpec.from_dict(doc2)
    doc3 = spec.to_dict()
    doc3["edges"][0]["measure"] = {"type": "logistic", "alpha": 0.5, "beta": 1}
    with pytest.raises(SpecError):
        VineSpec.from_dict(doc3)
    with pytest.raises(SpecError):
        VineSpec.from_json("not json at all {")


def test_spec_hash_distinguishes_parameters():
    s1 = VineSpec.trivariate(ilog(0.5), ilog(0.4), ilog(0.3))
    s2 = VineSpec.trivariate(ilog(0.5), ilog(0.4), ilog(0.31))
    assert s1.spec_hash() != s2.spec_hash()


def test_families_and_all_iev():
    spec = VineSpec.trivariate(ilog(0.5), PairCopula("ev", Logistic(0.4)), ilog(0.3))
    assert spec.families() == ("iev", "ev", "iev")
    assert not spec.all_iev()
    assert VineSpec.uniform("cvine", 5, ilog(0.2)).all_iev()
