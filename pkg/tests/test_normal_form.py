import random

import pytest

from wcl.errors import CapExceeded
from wcl.interactions import (
    Interaction,
    PilAtom,
    Port,
    configuration,
    enumerate_configurations,
    interaction,
    monomial,
    port_universe,
)
from wcl.normal_form import (
    FullMonomial,
    config_to_monomials,
    fnf_equiv,
    fnf_eval,
    fnf_of_pcl,
    fnf_of_wpcl,
    fnf_statements_hold,
    fnf_to_formula,
    full_monomial,
    monomials_to_config,
)
from wcl.pcl import (
    PCL_TRUE,
    PclBool,
    PclNot,
    WBool,
    WCoalesce,
    WConst,
    WPlus,
    WTimes,
    pcl_satisfies,
    wpcl_eval,
)
from wcl.randgen import random_wpcl
from wcl.semiring import ALL_SEMIRINGS, NATURAL

P2 = port_universe(["p", "q"])
P3 = port_universe(["p", "q", "r"])


def test_fnf_of_true_has_all_terms():
    fnf = fnf_of_pcl(PCL_TRUE, P2, NATURAL)
    assert len(fnf) == 7
    assert all(coeff == 1 for _, coeff in fnf)


def test_fnf_of_unsatisfiable_is_empty():
    fnf = fnf_of_pcl(PclNot(PCL_TRUE), P2, NATURAL)
    assert len(fnf) == 0


def test_fnf_of_atom():
    fnf = fnf_of_pcl(PclBool(PilAtom(Port("p"))), P2, NATURAL)
    keys = set(fnf.terms)
    assert keys == {
        configuration([["p"]]),
        configuration([["p", "q"]]),
        configuration([["p"], ["p", "q"]]),
    }


def test_full_monomial_bijection():
    m = full_monomial(interaction(["p"]), P2)
    assert m.positives == (Port("p"),)
    assert m.negatives == (Port("q"),)
    assert m.interaction() == interaction(["p"])

    gamma = configuration([["p"]])
    assert monomials_to_config(config_to_monomials(gamma, P2)) == gamma


def test_config_monomial_round_trip_exhaustive():
    for gamma in enumerate_configurations(P3):
        assert monomials_to_config(config_to_monomials(gamma, P3)) == gamma


def test_master_slave_monomial_pair():
    ports = port_universe(["s1", "s2", "m1", "m2"])
    gamma = configuration([["s1", "m1"], ["s2", "m1"]])
    monomials = config_to_monomials(gamma, ports)
    assert len(monomials) == 2
    for m in monomials:
        assert set(m.positives) | set(m.negatives) == set(ports)
        assert not set(m.positives) & set(m.negatives)
    assert monomials_to_config(monomials) == gamma


def test_fnf_of_zero_is_empty():
    for K in ALL_SEMIRINGS:
        fnf = fnf_of_wpcl(WConst(K.zero), P2, K)
        assert len(fnf) == 0


def test_fnf_semantic_oracle():
    rng = random.Random(99)
    configs = enumerate_configurations(P2)
    for trial in range(150):
        K = ALL_SEMIRINGS[trial % 6]
        z = random_wpcl(P2, K, rng, 2)
        fnf = fnf_of_wpcl(z, P2, K)
        assert fnf_statements_hold(fnf, P2)
        for gamma in configs:
            assert K.eq(fnf_eval(fnf, gamma, K), wpcl_eval(z, gamma, K), 1e-9)


def test_fnf_eval_hit_and_miss():
    z = WTimes(WConst(4), WBool(PclBool(monomial([Port("p")], [Port("q")]))))
    fnf = fnf_of_wpcl(z, P2, NATURAL)
    assert fnf_eval(fnf, configuration([["p"]]), NATURAL) == 4
    assert fnf_eval(fnf, configuration([["q"]]), NATURAL) == 0


def test_monomial_sum_products():
    # coalescings of full monomials multiply to zero unless identical
    g1 = configuration([["p"]])
    g2 = configuration([["p"], ["q"]])
    ind1 = WBool(_indicator(g1))
    ind2 = WBool(_indicator(g2))
    distinct = fnf_of_wpcl(WTimes(ind1, ind2), P2, NATURAL)
    assert len(distinct) == 0
    same = fnf_of_wpcl(WTimes(ind1, ind1), P2, NATURAL)
    assert same.terms == {g1: 1}


def _indicator(gamma):
    from wcl.pcl import PclCoalesce

    parts = [PclBool(m.formula()) for m in config_to_monomials(gamma, P2)]
    out = parts[0]
    for part in parts[1:]:
        out = PclCoalesce(out, part)
    return out


def test_fnf_to_formula_round_trip():
    rng = random.Random(123)
    for trial in range(60):
        K = ALL_SEMIRINGS[trial % 6]
        z = random_wpcl(P2, K, rng, 2)
        fnf = fnf_of_wpcl(z, P2, K)
        back = fnf_of_wpcl(fnf_to_formula(fnf, P2, K), P2, K)
        assert back.equals(fnf, K, 1e-9)


def test_fnf_to_formula_of_empty_is_zero():
    fnf = fnf_of_wpcl(WConst(NATURAL.zero), P2, NATURAL)
    assert fnf_to_formula(fnf, P2, NATURAL) == WConst(0)


def test_fnf_equiv_examples():
    gammaful = configuration([["p", "q"]])
    pq = PclBool(monomial([Port("p"), Port("q")]))
    zeta = WPlus(WConst(5), WBool(pq))
    z1 = WTimes(WBool(pq), WConst(6))
    z2 = WTimes(WBool(pq), WConst(3))
    factored = WTimes(zeta, WCoalesce(z1, z2))
    expanded = WCoalesce(WTimes(zeta, z1), WTimes(zeta, z2))
    assert not fnf_equiv(factored, expanded, P2, NATURAL)

    k = WConst(7)
    assert fnf_equiv(WPlus(k, WConst(NATURAL.zero)), k, P2, NATURAL)

    z = random_wpcl(P2, NATURAL, random.Random(5), 2)
    fnf = fnf_of_wpcl(z, P2, NATURAL)
    assert fnf_equiv(z, fnf_to_formula(fnf, P2, NATURAL), P2, NATURAL)


def test_fnf_equiv_agrees_with_pointwise_equiv():
    from wcl.pcl import wpcl_equiv

    rng = random.Random(606)
    for trial in range(60):
        K = ALL_SEMIRINGS[trial % 6]
        z1 = random_wpcl(P2, K, rng, 2)
        z2 = random_wpcl(P2, K, rng, 2)
        assert fnf_equiv(z1, z2, P2, K) == wpcl_equiv(z1, z2, P2, K)
        assert fnf_equiv(z1, z1, P2, K)


def test_fnf_cap():
    P5 = port_universe(["a", "b", "c", "d", "e"])
    with pytest.raises(CapExceeded):
        fnf_of_wpcl(WConst(3), P5, NATURAL)


def test_master_slave_fnf_eval_agreement():
    from wcl.pcl import wpcl_value
    from wcl.styles import PriorityTable, master_slave_wpcl

    weights = PriorityTable.of([[1.5, 4.0], [2.0, 3.5]])
    ports, zeta = master_slave_wpcl(2, 2, weights)
    from wcl.semiring import MIN_PLUS

    fnf = fnf_of_wpcl(zeta, ports, MIN_PLUS)
    rng = random.Random(404)
    configs = enumerate_configurations(ports)
    for _ in range(50):
        gamma = rng.choice(configs)
        want = wpcl_value(zeta, gamma, MIN_PLUS, "sparse")
        assert MIN_PLUS.eq(fnf_eval(fnf, gamma, MIN_PLUS), want, 1e-9)
        if len(gamma) <= 5:
            assert MIN_PLUS.eq(wpcl_eval(zeta, gamma, MIN_PLUS), want, 1e-9)


def test_fnf_canonical_under_rewrites():
    rng = random.Random(77)
    for trial in range(40):
        K = ALL_SEMIRINGS[trial % 6]
        z1 = random_wpcl(P2, K, rng, 1)
        z2 = random_wpcl(P2, K, rng, 1)
        lhs = fnf_of_wpcl(WCoalesce(z1, z2), P2, K)
        rhs = fnf_of_wpcl(WCoalesce(z2, z1), P2, K)
        assert lhs.equals(rhs, K, 1e-9)
