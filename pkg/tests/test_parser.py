import random

import pytest

from wcl.errors import ParseError, UsageError
from wcl.focl import FBool, ZClosure, ZOplus, ZOuplus
from wcl.interactions import PilAtom, Port, pil_and, pil_neg
from wcl.parser import (
    parse_configuration,
    parse_formula,
    parse_model,
    parse_ports,
)
from wcl.pcl import (
    PclBool,
    PclCoalesce,
    PclNot,
    PclUnion,
    PCL_TRUE,
    WBool,
    WClosure,
    WCoalesce,
    WConst,
    WPlus,
    WTimes,
    pcl_closure,
    pcl_meet,
)
from wcl.printer import (
    focl_to_text,
    pcl_to_text,
    pil_to_text,
    wfocl_to_text,
    wpcl_to_text,
)
from wcl.randgen import (
    random_focl,
    random_model,
    random_pcl,
    random_pil,
    random_wfocl,
    random_wpcl,
)
from wcl.semiring import ALL_SEMIRINGS, MIN_PLUS, NATURAL, VITERBI
from wcl.interactions import port_universe

P2 = port_universe(["p", "q"])
P3 = port_universe(["p", "q", "r"])


def test_parse_master_slave_shape():
    text = "close((k11 (*) {s1 & m1 & !s2 & !m2}) (#) (k21 (*) {s2 & m1 & !s1 & !m2}))"
    # weight names are not literals; swap in numbers to mirror the shape
    text = text.replace("k11", "2").replace("k21", "3")
    z = parse_formula(text, "wpcl", NATURAL)
    assert isinstance(z, WClosure)
    assert isinstance(z.inner, WCoalesce)
    left = z.inner.left
    assert isinstance(left, WTimes) and left.left == WConst(2)
    assert isinstance(left.right, WBool)


def test_parse_atom_boolean():
    z = parse_formula("{p}", "wpcl", NATURAL)
    assert z == WBool(PclBool(PilAtom(Port("p"))))


def test_parse_error_location():
    with pytest.raises(ParseError) as err:
        parse_formula("({p} \\/ {q}", "pcl")
    assert err.value.column == 12

    with pytest.raises(ParseError):
        parse_formula("{p & }", "pcl")


def test_dialect_gates():
    with pytest.raises(ParseError):
        parse_formula("{p} (#) {q}", "pcl")
    with pytest.raises(ParseError):
        parse_formula("5", "pcl")
    with pytest.raises(ParseError):
        parse_formula("exists v:T . {v.p}", "wpcl", NATURAL)
    with pytest.raises(ParseError):
        parse_formula("pguard(a = b, 5)", "wpcl", NATURAL)
    with pytest.raises(UsageError):
        parse_formula("5", "wpcl")  # weighted dialect needs a semiring
    with pytest.raises(UsageError):
        parse_formula("{p}", "bogus")


def test_precedence():
    # (*) binds tighter than (#) binds tighter than (+)
    z = parse_formula("1 (+) 2 (*) {p} (#) 3", "wpcl", NATURAL)
    assert z == WPlus(WConst(1), WCoalesce(WTimes(WConst(2), WBool(PclBool(PilAtom(Port("p"))))), WConst(3)))
    # & over | inside braces; ! tightest
    phi = parse_formula("{!p & q | p}", "pcl")
    from wcl.interactions import PilOr

    assert phi == PclBool(PilOr(pil_and(pil_neg(PilAtom(Port("p"))), PilAtom(Port("q"))), PilAtom(Port("p"))))
    # => is right-associative and loosest
    f = parse_formula("true => true => false", "pcl")
    from wcl.pcl import pcl_implies

    assert f == pcl_implies(PCL_TRUE, pcl_implies(PCL_TRUE, PclNot(PCL_TRUE)))


def test_macros_expand():
    f = parse_formula("{p} /\\ {q}", "pcl")
    assert f == pcl_meet(PclBool(PilAtom(Port("p"))), PclBool(PilAtom(Port("q"))))
    f = parse_formula("~{p}", "pcl")
    assert f == pcl_closure(PclBool(PilAtom(Port("p"))))
    z = parse_formula("guard({p}, 5)", "wpcl", NATURAL)
    from wcl.pcl import wguard

    assert z == wguard(PclBool(PilAtom(Port("p"))), WConst(5))
    f = parse_formula("{p} or {q}", "pcl")
    from wcl.pcl import pcl_disj

    assert f == pcl_disj(PclBool(PilAtom(Port("p"))), PclBool(PilAtom(Port("q"))))


def test_parse_focl():
    z = parse_formula(
        "close(Ouplus c:S . Oplus c1:M . ({c.s & c1.m} (*) pguard(c = d1 && c1 = b1, 0.5)))",
        "wfocl",
        VITERBI,
    )
    assert isinstance(z, ZClosure)
    assert isinstance(z.inner, ZOuplus)
    assert z.inner.var == "c" and z.inner.type_name == "S"
    assert isinstance(z.inner.body, ZOplus)

    f = parse_formula("forall v:T where v != b1 . {v.p}", "focl")
    from wcl.focl import f_forall, PredCmp

    assert f == f_forall("v", "T", PredCmp("v", "b1", False), FBool(PilAtom(Port("p", "v"))))


def test_quantifier_body_extends_right():
    f = parse_formula("exists v:T . {v.p} \\/ {q}", "focl")
    from wcl.focl import FExists, FUnion, PRED_TRUE

    assert f == FExists(
        "v", "T", PRED_TRUE, FUnion(FBool(PilAtom(Port("p", "v"))), FBool(PilAtom(Port("q"))))
    )


def test_shadowing_rejected_by_parser():
    with pytest.raises(ParseError):
        parse_formula("exists v:T . exists v:T . {v.p}", "focl")


def test_weight_literals_in_formulas():
    assert parse_formula("0", "wpcl", MIN_PLUS) == WConst(MIN_PLUS.zero)
    assert parse_formula("1", "wpcl", MIN_PLUS) == WConst(0.0)
    assert parse_formula("2.5", "wpcl", MIN_PLUS) == WConst(2.5)
    assert parse_formula("inf", "wpcl", MIN_PLUS) == WConst(MIN_PLUS.zero)
    with pytest.raises(ParseError):
        parse_formula("inf", "wpcl", VITERBI)
    with pytest.raises(ParseError):
        parse_formula("2.5", "wpcl", NATURAL)
    with pytest.raises(ParseError):
        parse_formula("- {p}", "wpcl", NATURAL)


@pytest.mark.parametrize("dialect", ["pil", "pcl", "wpcl", "focl", "wfocl"])
def test_print_parse_identity(dialect):
    rng = random.Random(hash(dialect) % 1000 or 7)
    rng = random.Random({"pil": 1, "pcl": 2, "wpcl": 3, "focl": 4, "wfocl": 5}[dialect])
    model = random_model(rng)
    for i in range(1000):
        K = ALL_SEMIRINGS[i % 6]
        if dialect == "pil":
            node = random_pil(P3, rng, 3)
            text = pil_to_text(node)
        elif dialect == "pcl":
            node = random_pcl(P3, rng, 3)
            text = pcl_to_text(node)
        elif dialect == "wpcl":
            node = random_wpcl(P3, K, rng, 3)
            text = wpcl_to_text(node)
        elif dialect == "focl":
            node = random_focl(model, rng, 2)
            text = focl_to_text(node)
        else:
            node = random_wfocl(model, K, rng, 2)
            text = wfocl_to_text(node)
        again = parse_formula(text, dialect, K if dialect in ("wpcl", "wfocl") else None)
        assert again == node, f"{dialect} round trip failed on: {text}"


def test_encoder_formulas_round_trip():
    from wcl.printer import formula_to_text
    from wcl.styles import (
        DistanceMatrix,
        PriorityTable,
        master_slave_wfocl,
        master_slave_wpcl,
        pubsub_wfocl,
        tsp_formula,
    )
    from wcl.semiring import MAX_PLUS

    weights = PriorityTable.of([[1.5, 4.25], [2.0, 3.125]])
    _, z = master_slave_wpcl(2, 2, weights)
    assert parse_formula(formula_to_text(z), "wpcl", MAX_PLUS) == z

    model, zf = master_slave_wfocl(2, 2, weights)
    assert parse_formula(formula_to_text(zf), "wfocl", MAX_PLUS) == zf

    priorities = PriorityTable.of([[0.9, 0.8], [0.7, 0.6], [0.5, 0.4]])
    _, zp = pubsub_wfocl(2, 3, 2, priorities)
    assert parse_formula(formula_to_text(zp), "wfocl", VITERBI) == zp

    matrix = DistanceMatrix.of([[0, 1, 9, 4], [1, 0, 2, 9], [9, 2, 0, 3], [4, 9, 3, 0]])
    _, zt = tsp_formula(matrix)
    assert parse_formula(formula_to_text(zt), "wpcl", MIN_PLUS) == zt


def test_configuration_round_trip():
    gamma = parse_configuration("{ {q, p}, {b1.m} }")
    assert str(gamma) == "{{p, q}, {b1.m}}"
    assert parse_configuration(str(gamma)) == gamma
    with pytest.raises(ParseError):
        parse_configuration("{}")
    with pytest.raises(ParseError):
        parse_configuration("{ {p}")


def test_parse_ports():
    assert parse_ports("q,p") == port_universe(["p", "q"])
    assert parse_ports("b1.m, b2.m") == port_universe(["b1.m", "b2.m"])
    with pytest.raises(UsageError):
        parse_ports("p,p")


from hypothesis import given, settings, strategies as st  # noqa: E402


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="pq{}()!&|~+\\/=# ()*orclse01.5,:", max_size=40))
def test_parser_never_crashes(text):
    for dialect, K in (("pcl", None), ("wpcl", NATURAL)):
        try:
            parse_formula(text, dialect, K)
        except ParseError:
            pass
        except UsageError:
            pass


def test_parse_model():
    text = """
    # a master/slave model
    type M ports m
    type S ports s
    component b1 : M
    component d1 : S
    """
    model = parse_model(text)
    assert [c.name for c in model.components] == ["b1", "d1"]
    assert [str(p) for p in model.port_universe()] == ["b1.m", "d1.s"]
    with pytest.raises(ParseError):
        parse_model("component x : Missing")
    with pytest.raises(ParseError):
        parse_model("type T")
    with pytest.raises(ParseError):
        parse_model("type T ports p\ncomponent a : T\ncomponent a : T")
