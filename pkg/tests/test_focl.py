import itertools
import random

import pytest

from wcl.errors import UsageError
from wcl.focl import (
    Component,
    ComponentType,
    FBool,
    FCoalesce,
    FExists,
    FNot,
    FSum,
    FTrue,
    FUnion,
    Model,
    PRED_TRUE,
    PredAnd,
    PredCmp,
    ZBool,
    ZCoalesce,
    ZConst,
    ZOplus,
    ZOtimes,
    ZOuplus,
    ZPlus,
    ZPredGuard,
    ZTimes,
    check_no_shadowing,
    f_forall,
    f_meet,
    focl_satisfies,
    ground_wfocl,
    matching_components,
    substitute,
    wfocl_eval,
)
from wcl.interactions import (
    Configuration,
    Interaction,
    PilAtom,
    Port,
    enumerate_configurations,
    pil_and,
)
from wcl.pcl import config_subsets, wpcl_eval
from wcl.randgen import random_model, random_wfocl
from wcl.semiring import ALL_SEMIRINGS, NATURAL


def _ms_model():
    master = ComponentType("M", ("m",))
    slave = ComponentType("S", ("s",))
    return Model(
        [master, slave],
        [Component("b1", master), Component("b2", master), Component("d1", slave)],
    )


def atom(owner, name):
    return FBool(PilAtom(Port(name, owner)))


def test_substitute_examples():
    phi = FBool(pil_and(PilAtom(Port("s", "c")), PilAtom(Port("m", "c1"))))
    replaced = substitute(phi, "c", "d1")
    assert replaced == FBool(pil_and(PilAtom(Port("s", "d1")), PilAtom(Port("m", "c1"))))
    # substitution with no occurrences is the identity
    assert substitute(phi, "zz", "d1") == phi
    # nested quantifiers keep their own bound variables intact
    inner = FExists("c2", "M", PRED_TRUE, FBool(PilAtom(Port("m", "c2"))))
    outer = FUnion(FBool(PilAtom(Port("s", "c"))), inner)
    result = substitute(outer, "c", "d1")
    assert result == FUnion(FBool(PilAtom(Port("s", "d1"))), inner)
    with pytest.raises(UsageError):
        substitute(FExists("c", "M", PRED_TRUE, FBool(PilAtom(Port("m", "c")))), "c", "d1")


def test_substitute_rewrites_predicates():
    z = ZOtimes("c2", "M", PredCmp("c2", "c1", False), ZConst(1))
    assert substitute(z, "c1", "b1") == ZOtimes("c2", "M", PredCmp("c2", "b1", False), ZConst(1))


def test_matching_components():
    model = _ms_model()
    assert [c.name for c in matching_components(model, "M", PRED_TRUE)] == ["b1", "b2"]
    pred = PredCmp("c", "c1", False)
    matches = matching_components(model, "M", pred, env={"c1": "b1"}, var="c")
    assert [c.name for c in matches] == ["b2"]
    assert [c.name for c in matching_components(model, "U", PRED_TRUE)] == ["b1", "b2", "d1"]
    with pytest.raises(UsageError):
        matching_components(model, "X", PRED_TRUE)


def test_model_validation():
    master = ComponentType("M", ("m",))
    with pytest.raises(UsageError):
        Model([master], [Component("a", master), Component("a", master)])
    with pytest.raises(UsageError):
        Model([], [Component("a", master)])
    with pytest.raises(UsageError):
        Model([ComponentType("U", ("u",))], [])


def test_empty_sum_is_unsatisfied():
    model = _ms_model()
    gamma = Configuration([Interaction([Port("m", "b1")])])
    none_match = FSum("c", "M", PredCmp("c", "c", False), FTrue())
    assert not focl_satisfies(model, gamma, none_match)
    # exists over the empty match set is unsatisfied as well
    assert not focl_satisfies(model, gamma, FExists("c", "M", PredCmp("c", "c", False), FTrue()))
    # forall over the empty match set holds vacuously
    assert focl_satisfies(model, gamma, f_forall("c", "M", PredCmp("c", "c", False), FNot(FTrue())))


def test_gamma_outside_model_ports():
    model = _ms_model()
    foreign = Configuration([Interaction([Port("x", "nobody")])])
    assert not focl_satisfies(model, foreign, FTrue())
    assert wfocl_eval(ZConst(5), model, foreign, NATURAL) == 0


def test_boolean_value_matches_satisfaction():
    rng = random.Random(31)
    from wcl.randgen import random_focl

    for _ in range(25):
        model = random_model(rng)
        if len(model.port_universe()) > 3:
            continue
        F = random_focl(model, rng, 2)
        for gamma in enumerate_configurations(model.port_universe()):
            value = wfocl_eval(ZBool(F), model, gamma, NATURAL)
            assert value in (0, 1)
            assert (value == 1) == focl_satisfies(model, gamma, F)


def test_quantifier_fold_conventions():
    model = _ms_model()
    gamma = Configuration([Interaction([Port("m", "b1")])])
    nobody = PredCmp("c", "c", False)
    assert wfocl_eval(ZOplus("c", "M", nobody, ZConst(9)), model, gamma, NATURAL) == 0
    assert wfocl_eval(ZOtimes("c", "M", nobody, ZConst(9)), model, gamma, NATURAL) == 1
    assert wfocl_eval(ZOuplus("c", "M", nobody, ZConst(9)), model, gamma, NATURAL) == 0
    # singleton match collapses to the substituted body
    only_b1 = PredCmp("c", "b2", False)
    assert wfocl_eval(ZOplus("c", "M", only_b1, ZConst(9)), model, gamma, NATURAL) == 9


def test_uplus_quantifier_matches_family_enumeration():
    model = _ms_model()
    ports = model.port_universe()
    rng = random.Random(17)
    K = NATURAL
    body = ZTimes(ZConst(2), ZBool(FBool(PilAtom(Port("m", "c")))))
    z = ZOuplus("c", "M", PRED_TRUE, body)
    matches = [c.name for c in matching_components(model, "M", PRED_TRUE)]
    for gamma in enumerate_configurations(ports):
        got = wfocl_eval(z, model, gamma, K)
        want = K.zero
        subsets = list(config_subsets(gamma))
        for parts in itertools.product(subsets, repeat=len(matches)):
            union = parts[0]
            for part in parts[1:]:
                union = union.union(part)
            if union != gamma:
                continue
            product = K.one
            for name, part in zip(matches, parts):
                grounded = ground_wfocl(substitute(body, "c", name), model, K)
                product = K.times(product, wpcl_eval(grounded, part, K))
            want = K.plus(want, product)
        assert got == want, str(gamma)


def test_pred_guard():
    model = _ms_model()
    gamma = Configuration([Interaction([Port("m", "b1")])])
    hit = ZPredGuard(PredCmp("b1", "b1", True), ZConst(5))
    miss = ZPredGuard(PredCmp("b1", "b2", True), ZConst(5))
    assert wfocl_eval(hit, model, gamma, NATURAL) == 5
    assert wfocl_eval(miss, model, gamma, NATURAL) == 1
    with pytest.raises(UsageError):
        wfocl_eval(ZPredGuard(PredCmp("c9", "b1", True), ZConst(5)), model, gamma, NATURAL)


def test_shadowing_rejected():
    inner = FExists("c", "M", PRED_TRUE, FBool(PilAtom(Port("m", "c"))))
    outer = FExists("c", "M", PRED_TRUE, inner)
    with pytest.raises(UsageError):
        check_no_shadowing(outer)


def test_unbound_predicate_variable_rejected():
    model = _ms_model()
    gamma = Configuration([Interaction([Port("m", "b1")])])
    dangling = ZOplus("c", "M", PredCmp("c", "ghost", False), ZConst(1))
    with pytest.raises(UsageError):
        wfocl_eval(dangling, model, gamma, NATURAL)


def test_unknown_port_for_component():
    model = _ms_model()
    gamma = Configuration([Interaction([Port("m", "b1")])])
    with pytest.raises(UsageError):
        focl_satisfies(model, gamma, FBool(PilAtom(Port("s", "b1"))))
    with pytest.raises(UsageError):
        focl_satisfies(model, gamma, FBool(PilAtom(Port("m", "unbound_var"))))


def test_forall_counterexample_reproduces():
    T = ComponentType("T", ("p",))
    model = Model([T], [Component("c1", T), Component("c2", T)])
    F1 = FCoalesce(atom("c", "p"), atom("c1", "p"))
    F2 = atom("c1", "p")
    lhs = f_forall("c", "T", PRED_TRUE, FCoalesce(F1, F2))
    rhs = FCoalesce(FSum("c", "T", PRED_TRUE, F1), FSum("c", "T", PRED_TRUE, F2))
    gamma = Configuration([Interaction([Port("p", "c1")]), Interaction([Port("p", "c2")])])
    assert focl_satisfies(model, gamma, rhs)
    assert not focl_satisfies(model, gamma, lhs)
    for g in enumerate_configurations(model.port_universe()):
        if focl_satisfies(model, g, lhs):
            assert focl_satisfies(model, g, rhs)


def test_coal_inter_counterexample_reproduces():
    T1 = ComponentType("T1", ("p",))
    T2 = ComponentType("T2", ("q",))
    model = Model([T1, T2], [Component("b", T1), Component("c", T1), Component("d", T2)])
    F1 = FBool(pil_and(PilAtom(Port("p", "s")), PilAtom(Port("q", "d"))))
    F2 = FCoalesce(atom("c", "p"), FBool(pil_and(PilAtom(Port("p", "s")), PilAtom(Port("q", "d")))))
    lhs = FSum("s", "T1", PRED_TRUE, f_meet(F1, F2))
    rhs = f_meet(FSum("s", "T1", PRED_TRUE, F1), FSum("s", "T1", PRED_TRUE, F2))
    gamma = Configuration(
        [Interaction([Port("p", "b"), Port("q", "d")]), Interaction([Port("p", "c"), Port("q", "d")])]
    )
    assert focl_satisfies(model, gamma, rhs)
    assert not focl_satisfies(model, gamma, lhs)
    for g in enumerate_configurations(model.port_universe()):
        if focl_satisfies(model, g, lhs):
            assert focl_satisfies(model, g, rhs)


def test_weighted_quantifier_laws_sample():
    rng = random.Random(41)
    done = 0
    while done < 12:
        model = random_model(rng)
        if len(model.port_universe()) > 3:
            continue
        K = ALL_SEMIRINGS[done % 6]
        type_name = rng.choice(list(model.types))
        scope = [("v1", type_name)]
        Z1 = random_wfocl(model, K, rng, 1, scope=scope)
        Z2 = random_wfocl(model, K, rng, 1, scope=scope)
        lhs = ZOuplus("v1", type_name, PRED_TRUE, ZCoalesce(Z1, Z2))
        rhs = ZCoalesce(
            ZOuplus("v1", type_name, PRED_TRUE, Z1), ZOuplus("v1", type_name, PRED_TRUE, Z2)
        )
        for gamma in enumerate_configurations(model.port_universe()):
            assert K.eq(
                wfocl_eval(lhs, model, gamma, K), wfocl_eval(rhs, model, gamma, K), 1e-9
            )
        done += 1
