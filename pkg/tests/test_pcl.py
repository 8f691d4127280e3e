import random

import pytest

from wcl.errors import CapExceeded
from wcl.interactions import (
    Configuration,
    Interaction,
    PilAtom,
    Port,
    configuration,
    enumerate_configurations,
    interaction,
    monomial,
    port_universe,
)
from wcl.pcl import (
    EvalCaps,
    PCL_TRUE,
    PclBool,
    PclCoalesce,
    PclNot,
    PclUnion,
    WBool,
    WClosure,
    WCoalesce,
    WConst,
    WPlus,
    WTimes,
    config_subsets,
    decompositions2,
    pcl_closure,
    pcl_implies,
    pcl_meet,
    pcl_satisfies,
    wguard,
    wpcl_equiv,
    wpcl_equiv_witness,
    wpcl_eval,
    wpcl_eval_sparse,
    wpcl_polynomial,
    wpcl_value,
)
from wcl.randgen import random_pcl, random_wpcl
from wcl.semiring import ALL_SEMIRINGS, IDEMPOTENT_SEMIRINGS, MIN_PLUS, NATURAL

P2 = port_universe(["p", "q"])
P3 = port_universe(["p", "q", "r"])
ATOM_P = PclBool(PilAtom(Port("p")))
ATOM_Q = PclBool(PilAtom(Port("q")))


def _pq():
    return PclBool(monomial([Port("p"), Port("q")]))


def test_satisfaction_examples():
    gamma = configuration([["p"], ["p", "q"]])
    assert pcl_satisfies(gamma, ATOM_P)
    assert not pcl_satisfies(gamma, ATOM_Q)
    assert pcl_satisfies(configuration([["p"], ["q"]]), PclCoalesce(ATOM_P, ATOM_Q))
    assert not pcl_satisfies(configuration([["p"]]), PclCoalesce(ATOM_P, ATOM_Q))


def test_interaction_coalescing_idempotent_exhaustive():
    rng = random.Random(11)
    from wcl.randgen import random_pil

    for _ in range(50):
        phi = PclBool(random_pil(P2, rng, 2))
        for gamma in enumerate_configurations(P2):
            assert pcl_satisfies(gamma, PclCoalesce(phi, phi)) == pcl_satisfies(gamma, phi)


def test_interaction_formulas_are_union_and_downward_closed():
    rng = random.Random(13)
    from wcl.randgen import random_pil

    configs = enumerate_configurations(P2)
    for _ in range(40):
        phi = PclBool(random_pil(P2, rng, 2))
        sat = [g for g in configs if pcl_satisfies(g, phi)]
        for g1 in sat:
            for g2 in sat:
                assert pcl_satisfies(g1.union(g2), phi)
            for sub in config_subsets(g1):
                assert pcl_satisfies(sub, phi)


def test_meet_and_implies_clauses():
    rng = random.Random(12)
    for _ in range(50):
        f1 = random_pcl(P2, rng, 2)
        f2 = random_pcl(P2, rng, 2)
        for gamma in enumerate_configurations(P2):
            want_meet = pcl_satisfies(gamma, f1) and pcl_satisfies(gamma, f2)
            assert pcl_satisfies(gamma, pcl_meet(f1, f2)) == want_meet
            want_impl = (not pcl_satisfies(gamma, f1)) or pcl_satisfies(gamma, f2)
            assert pcl_satisfies(gamma, pcl_implies(f1, f2)) == want_impl


def test_decomposition_counts():
    g1 = configuration([["p", "q"]])
    assert list(decompositions2(g1)) == [(g1, g1)]
    g2 = configuration([["p"], ["q"]])
    assert len(list(decompositions2(g2))) == 7
    g3 = configuration([["p"], ["q"], ["p", "q"]])
    pairs = list(decompositions2(g3))
    assert len(pairs) == 25
    assert len(set(pairs)) == 25
    for left, right in pairs:
        assert left.union(right) == g3


def test_decomposition_cap():
    ports = port_universe([f"x{i}" for i in range(13)])
    gamma = Configuration([Interaction([p]) for p in ports])
    with pytest.raises(CapExceeded):
        list(decompositions2(gamma, cap=12))


def test_counterexample_values_and_inequivalence():
    gamma = configuration([["p", "q"]])
    pq = _pq()
    zeta = WPlus(WConst(5), WBool(pq))
    z1 = WTimes(WBool(pq), WConst(6))
    z2 = WTimes(WBool(pq), WConst(3))
    factored = WTimes(zeta, WCoalesce(z1, z2))
    expanded = WCoalesce(WTimes(zeta, z1), WTimes(zeta, z2))
    assert wpcl_eval(factored, gamma, NATURAL) == 108
    assert wpcl_eval(expanded, gamma, NATURAL) == 648
    assert not wpcl_equiv(factored, expanded, P2, NATURAL)
    witness = wpcl_equiv_witness(factored, expanded, P2, NATURAL)
    assert witness == gamma


def test_coalesce_example_value():
    gamma = configuration([["p"], ["q"]])
    z = WCoalesce(WTimes(WConst(2), WBool(ATOM_P)), WTimes(WConst(3), WBool(ATOM_Q)))
    assert wpcl_eval(z, gamma, NATURAL) == 6
    assert wpcl_eval_sparse(z, gamma, NATURAL) == 6


def test_closure_is_subset_sum():
    rng = random.Random(21)
    for trial in range(60):
        K = ALL_SEMIRINGS[trial % 6]
        z = random_wpcl(P2, K, rng, 2)
        closed = WClosure(z)
        for gamma in enumerate_configurations(P2):
            expected = K.sum(wpcl_eval(z, sub, K) for sub in config_subsets(gamma))
            assert K.eq(wpcl_eval(closed, gamma, K), expected, 1e-9)


def test_closure_macro_agreement_is_idempotent_only():
    # over idempotent semirings the closure equals coalescing with one
    rng = random.Random(22)
    for trial in range(40):
        K = IDEMPOTENT_SEMIRINGS[trial % len(IDEMPOTENT_SEMIRINGS)]
        z = random_wpcl(P2, K, rng, 2)
        macro = WCoalesce(z, WConst(K.one))
        for gamma in enumerate_configurations(P2):
            assert K.eq(wpcl_eval(WClosure(z), gamma, K), wpcl_eval(macro, gamma, K), 1e-9)
    # over the naturals the macro introduces split multiplicities
    gamma = configuration([["p"], ["q"]])
    one = WConst(1)
    assert wpcl_eval(WClosure(one), gamma, NATURAL) == 3
    assert wpcl_eval(WCoalesce(one, WConst(NATURAL.one)), gamma, NATURAL) == 7


def test_guard_semantics():
    rng = random.Random(23)
    for trial in range(40):
        K = ALL_SEMIRINGS[trial % 6]
        f = random_pcl(P2, rng, 2)
        z = random_wpcl(P2, K, rng, 2)
        guarded = wguard(f, z)
        for gamma in enumerate_configurations(P2):
            if pcl_satisfies(gamma, f):
                want = wpcl_eval(z, gamma, K)
            else:
                want = K.one
            assert K.eq(wpcl_eval(guarded, gamma, K), want, 1e-9)


def test_equiv_laws():
    rng = random.Random(24)
    for trial in range(20):
        K = ALL_SEMIRINGS[trial % 6]
        z1 = random_wpcl(P2, K, rng, 2)
        z2 = random_wpcl(P2, K, rng, 2)
        z3 = random_wpcl(P2, K, rng, 2)
        assert wpcl_equiv(WCoalesce(z1, WConst(K.zero)), WConst(K.zero), P2, K)
        assert wpcl_equiv(
            WCoalesce(z1, WPlus(z2, z3)),
            WPlus(WCoalesce(z1, z2), WCoalesce(z1, z3)),
            P2,
            K,
        )


def test_polynomial_support():
    z = WTimes(WConst(2), WBool(ATOM_P))
    poly = wpcl_polynomial(z, P2, NATURAL)
    assert poly == {
        configuration([["p"]]): 2,
        configuration([["p"], ["p", "q"]]): 2,
        configuration([["p", "q"]]): 2,
    }


def test_weighted_edge_monomial_has_singleton_support():
    # salesman-style leaves: a weight times a two-port linking monomial
    from wcl.styles import tsp_ports

    ports = tsp_ports(4)
    phi = monomial(
        [Port("c1"), Port("c2")],
        [p for p in ports if p.name not in ("c1", "c2")],
    )
    leaf = WTimes(WConst(7.0), WBool(PclBool(phi)))
    poly = wpcl_polynomial(leaf, ports, MIN_PLUS)
    assert poly == {configuration([["c1", "c2"]]): 7.0}


def test_strategy_agreement_sample():
    rng = random.Random(25)
    configs = enumerate_configurations(P3)
    for trial in range(120):
        K = ALL_SEMIRINGS[trial % 6]
        z = random_wpcl(P3, K, rng, 2)
        gamma = rng.choice(configs)
        assert K.eq(
            wpcl_eval(z, gamma, K), wpcl_eval_sparse(z, gamma, K), 1e-9
        ), (trial, K.name)


def test_wpcl_value_strategies():
    gamma = configuration([["p", "q"]])
    z = WTimes(WConst(5), WBool(_pq()))
    for strategy in ("auto", "direct", "sparse"):
        assert wpcl_value(z, gamma, NATURAL, strategy) == 5


def test_caps_from_dict():
    caps = EvalCaps.from_dict({"coalesce_width": 3})
    assert caps.coalesce_width == 3
    with pytest.raises(Exception):
        EvalCaps.from_dict({"bogus": 1})


def test_closure_cap_error_mentions_sparse():
    ports = port_universe([f"x{i}" for i in range(5)])
    gamma = Configuration([Interaction([p]) for p in ports])
    z = WCoalesce(WConst(1), WConst(1))
    with pytest.raises(CapExceeded) as err:
        wpcl_eval(z, gamma, NATURAL, EvalCaps(coalesce_width=4))
    assert "sparse" in str(err.value)


def test_sparse_dense_coalescing_cap():
    ports = port_universe([f"x{i}" for i in range(13)])
    gamma = Configuration([Interaction([p]) for p in ports])
    z = WCoalesce(WConst(1), WConst(1))
    with pytest.raises(CapExceeded):
        wpcl_eval_sparse(z, gamma, NATURAL)


def test_equiv_cap_suggests_normal_forms():
    ports = port_universe(["a", "b", "c", "d", "e"])
    with pytest.raises(CapExceeded) as err:
        wpcl_equiv(WConst(1), WConst(1), ports, NATURAL)
    assert "normal form" in str(err.value)


from hypothesis import given, settings, strategies as st  # noqa: E402


@settings(max_examples=60, deadline=None)
@given(st.sets(st.sampled_from(["a", "b", "c", "d"]), min_size=1, max_size=4))
def test_decomposition_properties(names):
    gamma = Configuration([Interaction([Port(n)]) for n in names])
    pairs = list(decompositions2(gamma))
    n = len(gamma)
    assert len(pairs) == 3**n - 2
    assert len(set(pairs)) == len(pairs)
    for left, right in pairs:
        assert left.union(right) == gamma


@settings(max_examples=60, deadline=None)
@given(
    st.sets(st.sampled_from(["a", "b", "c", "d"]), min_size=1, max_size=4),
    st.integers(min_value=0, max_value=5),
)
def test_closure_counts_each_subset_once(names, seed):
    gamma = Configuration([Interaction([Port(n)]) for n in names])
    # counting measure: closure of the constant one counts nonempty subsets
    value = wpcl_eval(WClosure(WConst(1)), gamma, NATURAL)
    assert value == 2 ** len(gamma) - 1
