import numpy as np
import pytest
from numpy.testing import assert_allclose

from vinetail import (
    DomainError,
    Logistic,
    PairCopula,
    UnsupportedCombinationError,
    VineSpec,
    asymmetric_logistic_gauge,
    bev_gauge,
    eta13_trivariate_ilog,
    eta_cvine,
    eta_dvine,
    eta_dvine_ilog_closed,
    eta_mixed_trivariate,
    eta_numeric,
    eta_trivariate_ilog_closed,
    gauge_dvine,
    gauge_trivariate,
    gaussian_gauge,
    independence_gauge,
    inverted_ev_gauge,
)

RNG = np.random.default_rng(577215)


def ilog(a):
    return PairCopula("iev", Logistic(a))


def lgst(a):
    return PairCopula("ev", Logistic(a))


gallery = [
    (independence_gauge(), 0.5),
    (gaussian_gauge(0.5), 0.75),
    (inverted_ev_gauge(Logistic(0.5)), 2.0**-0.5),
    (bev_gauge(0.0, 0.0), 1.0),
    (asymmetric_logistic_gauge(0.5), 1.0),
]


@pytest.mark.parametrize("g,expected", gallery)
def test_numeric_gallery(g, expected):
    res = eta_numeric(g)
    assert res.eta == pytest.approx(expected, abs=1e-6)
    assert res.method == "numeric"
    # the known minimisers all sit at the all-ones point here
    assert_allclose(res.argmin, np.ones(2), atol=1e-6)


def test_numeric_lower_bound_and_detector():
    for g, _ in gallery:
        res = eta_numeric(g)
        assert res.eta >= 1.0 / g(np.ones(g.dim)) - 1e-12
        if g(np.ones(g.dim)) == pytest.approx(1.0, abs=1e-12):
            assert res.eta == pytest.approx(1.0, abs=1e-9)


def test_closed_form_trivariate():
    assert eta_trivariate_ilog_closed(0.5, 0.5, 0.5) == pytest.approx(0.6306019374818707, abs=1e-12)
    # limits: alpha = beta = gamma -> 1 gives complete independence 1/3
    assert eta_trivariate_ilog_closed(1.0, 1.0, 1.0) == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert eta_trivariate_ilog_closed(0.999999, 0.999999, 0.999999) == pytest.approx(1.0 / 3.0, abs=1e-5)
    # max parameter -> 0 drives eta to 1
    assert eta_trivariate_ilog_closed(1e-9, 1e-9, 1e-9) == pytest.approx(1.0, abs=1e-6)


def test_eta13_closed_value_and_root_agreement():
    res = eta13_trivariate_ilog(0.5, 0.5, 0.5)
    assert res.method == "closed"
    assert res.eta == pytest.approx(0.7395, abs=5e-5)
    for a in (0.2, 0.5, 0.8):
        for c in (0.2, 0.5, 0.8):
            closed = eta13_trivariate_ilog(a, a, c)
            rooted = eta13_trivariate_ilog(a, a, c, force_root=True)
            assert rooted.method == "root"
            assert abs(closed.eta - rooted.eta) < 1e-8
            assert 0.0 < rooted.diagnostics["v"] < 1.0


def test_eta13_range_and_vs_numeric():
    for a in np.arange(0.15, 0.95, 0.15):
        for b in np.arange(0.15, 0.95, 0.3):
            for c in (0.3, 0.7):
                res = eta13_trivariate_ilog(a, b, c)
                assert 0.5 < res.eta < 1.0
    spec = VineSpec.trivariate(ilog(0.5), ilog(0.25), ilog(0.5))
    num = eta_numeric(gauge_trivariate(spec), (1, 3))
    assert num.eta == pytest.approx(eta13_trivariate_ilog(0.5, 0.25, 0.5).eta, abs=1e-6)


def test_oracle_equivalence_sample():
    for a, b, c in RNG.uniform(0.1, 0.9, (10, 3)):
        spec = VineSpec.trivariate(ilog(a), ilog(b), ilog(c))
        res = eta_numeric(gauge_trivariate(spec))
        assert res.eta == pytest.approx(eta_trivariate_ilog_closed(a, b, c), abs=1e-6)
        assert_allclose(res.argmin, np.ones(3), atol=1e-6)


def test_dvine_closed_form():
    assert eta_dvine_ilog_closed(0.5, 2) == pytest.approx(2.0**-0.5, abs=1e-15)
    assert eta_dvine_ilog_closed(0.5, 4) == pytest.approx(0.6035533905932737, abs=1e-12)
    # alpha -> 1 approaches complete independence 1/d
    for d in (3, 5, 8):
        assert eta_dvine_ilog_closed(0.999, d) == pytest.approx(1.0 / d, abs=1e-3)
        assert eta_dvine_ilog_closed(1.0, d) == pytest.approx(1.0 / d, abs=1e-12)


def test_recursions_match_closed_form():
    for d in range(3, 9):
        for a in np.arange(0.1, 0.95, 0.1):
            closed = eta_dvine_ilog_closed(a, d)
            assert abs(eta_dvine(VineSpec.uniform("dvine", d, ilog(a))) - closed) < 1e-10
            assert abs(eta_cvine(VineSpec.uniform("cvine", d, ilog(a))) - closed) < 1e-10


def test_recursion_decreasing_in_dimension():
    for a in (0.2, 0.5, 0.8):
        vals = [eta_dvine_ilog_closed(a, d) for d in range(2, 11)]
        assert np.all(np.diff(vals) < 0)


def test_recursion_with_unequal_parameters_matches_gauge():
    edges = {"12": ilog(0.3), "23": ilog(0.5), "34": ilog(0.7),
             "13|2": ilog(0.4), "24|3": ilog(0.6), "14|23": ilog(0.55)}
    spec = VineSpec(4, "dvine", edges)
    recursive = eta_dvine(spec)
    at_ones = 1.0 / gauge_dvine(spec)(np.ones(4))
    assert recursive == pytest.approx(at_ones, rel=1e-13)
    numeric = eta_numeric(gauge_dvine(spec))
    assert numeric.eta == pytest.approx(recursive, abs=1e-6)


def test_recursion_rejects_bad_specs():
    edges = {"12": ilog(0.3), "23": lgst(0.5), "13|2": ilog(0.4)}
    with pytest.raises(UnsupportedCombinationError):
        eta_dvine(VineSpec(3, "dvine", edges))
    with pytest.raises(UnsupportedCombinationError):
        eta_cvine(VineSpec.uniform("dvine", 4, ilog(0.4)))


mixed_cases = [
    # (spec builder, expected eta123, expected eta13 property)
    (lambda a, b: VineSpec.trivariate(ilog(a), ilog(b), lgst(0.5)), lambda a, b: min(2.0**-a, 2.0**-b), "one"),
    (lambda a, b: VineSpec.trivariate(lgst(a), ilog(b), ilog(0.5)), lambda a, b: 2.0**-b, "root"),
    (lambda a, b: VineSpec.trivariate(lgst(a), ilog(b), lgst(0.5)), lambda a, b: 2.0**-b, "gt"),
    (lambda a, b: VineSpec.trivariate(lgst(a), lgst(b), ilog(0.5)), lambda a, b: 1.0, "one"),
    (lambda a, b: VineSpec.trivariate(lgst(a), lgst(b), lgst(0.5)), lambda a, b: 1.0, "one"),
]


@pytest.mark.parametrize("build,expected,eta13_kind", mixed_cases)
def test_mixed_closed_forms_and_numeric(build, expected, eta13_kind):
    for a, b in [(0.5, 0.25), (0.3, 0.6)]:
        spec = build(a, b)
        res = eta_mixed_trivariate(spec, (1, 2, 3))
        assert res.eta == pytest.approx(expected(a, b), abs=1e-12)
        num = eta_numeric(gauge_trivariate(spec))
        assert num.eta == pytest.approx(res.eta, abs=1e-6)
        r13 = eta_mixed_trivariate(spec, (1, 3))
        if eta13_kind == "one":
            assert r13.eta == pytest.approx(1.0, abs=1e-12)
        elif eta13_kind == "gt":
            assert r13.eta > res.eta
        else:
            n13 = eta_numeric(gauge_trivariate(spec), (1, 3))
            assert r13.eta == pytest.approx(n13.eta, abs=1e-6)


def test_mixed_mirror_patterns():
    direct = eta_mixed_trivariate(VineSpec.trivariate(lgst(0.5), ilog(0.25), lgst(0.4)), (1, 2, 3))
    mirrored = eta_mixed_trivariate(VineSpec.trivariate(ilog(0.25), lgst(0.5), lgst(0.4)), (1, 2, 3))
    assert mirrored.eta == pytest.approx(direct.eta, rel=1e-12)
    assert_allclose(mirrored.argmin, np.asarray(direct.argmin)[::-1])


def test_mixed_tree1_pairs():
    spec = VineSpec.trivariate(lgst(0.5), ilog(0.25), ilog(0.4))
    assert eta_mixed_trivariate(spec, (1, 2)).eta == pytest.approx(1.0)
    assert eta_mixed_trivariate(spec, (2, 3)).eta == pytest.approx(2.0**-0.25)


def test_mixed_iie_argmin_hits_boundary():
    spec = VineSpec.trivariate(ilog(0.5), ilog(0.25), lgst(0.5))
    res = eta_numeric(gauge_trivariate(spec), (1, 3))
    assert res.eta == pytest.approx(1.0, abs=1e-9)
    assert res.argmin[1] == pytest.approx(0.0, abs=1e-9)


def test_monotone_nesting():
    spec = VineSpec.trivariate(ilog(0.5), ilog(0.25), ilog(0.5))
    g = gauge_trivariate(spec)
    full = eta_numeric(g).eta
    for C in ((1, 2), (2, 3), (1, 3)):
        assert eta_numeric(g, C).eta >= full - 1e-9


def test_numeric_with_two_free_coordinates():
    """C = {1, 4} on a four-dimensional vine: the minimiser must optimise
    both free middle coordinates (interior optimum, found independently by
    projection + brute force: eta = 0.7321903...)."""
    edges = {"12": ilog(0.3), "23": ilog(0.5), "34": ilog(0.7),
             "13|2": ilog(0.4), "24|3": ilog(0.6), "14|23": ilog(0.55)}
    g = gauge_dvine(VineSpec(4, "dvine", edges))
    res = eta_numeric(g, (1, 4))
    assert res.eta == pytest.approx(0.7321903324, abs=1e-6)
    assert res.argmin[0] == pytest.approx(1.0, abs=1e-6)
    assert res.argmin[3] == pytest.approx(1.0, abs=1e-6)
    assert 0.0 < res.argmin[1] < 1.0 and 0.0 < res.argmin[2] < 1.0


def test_numeric_input_validation_and_diagnostics():
    g = independence_gauge()
    with pytest.raises(DomainError):
        eta_numeric(g, (1,))
    with pytest.raises(DomainError):
        eta_numeric(g, (1, 5))
    res = eta_numeric(g)
    assert res.diagnostics["n_starts"] >= 9
    assert res.diagnostics["spread"] < 1e-4
    assert not res.diagnostics["suspicious_landscape"]


def test_eta_result_validates_range():
    from vinetail import EtaResult

    with pytest.raises(DomainError):
        EtaResult(eta=1.5, argmin=np.ones(2), method="closed")
    with pytest.raises(DomainError):
        EtaResult(eta=0.0, argmin=np.ones(2), method="closed")
