"""The acceptance suite: exact-value regressions plus algebraic-law checks.

Each criterion is a function returning (ok, detail); the runner adds wall
time and compares it against the criterion's budget.  Everything is
seeded, so repeated runs produce identical output.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import WclError
from .focl import (
    FBool,
    FCoalesce,
    FExists,
    FNot,
    FSum,
    FUnion,
    Model,
    PRED_TRUE,
    ZCoalesce,
    ZClosure,
    ZOplus,
    ZOtimes,
    ZOuplus,
    ZPlus,
    ZTimes,
    f_closure,
    f_forall,
    f_meet,
    focl_satisfies,
    matching_components,
    wfocl_eval,
)
from .interactions import (
    Configuration,
    Interaction,
    PilAtom,
    Port,
    enumerate_configurations,
    monomial,
    pil_and,
    port_universe,
)
from .normal_form import fnf_of_wpcl, fnf_eval, fnf_statements_hold
from .pcl import (
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
    pcl_closure,
    pcl_disj,
    pcl_meet,
    pcl_satisfies,
    wdisj,
    wpcl_eval,
    wpcl_eval_sparse,
    wpcl_polynomial,
)
from .randgen import random_focl, random_model, random_pcl, random_pil, random_wfocl, random_wpcl
from .semiring import ALL_SEMIRINGS, IDEMPOTENT_SEMIRINGS, NATURAL, VITERBI, MIN_PLUS, Semiring
from .styles import (
    DistanceMatrix,
    PriorityTable,
    cyclic_tours,
    master_slave_full_configuration,
    master_slave_wpcl,
    pubsub_example_configuration,
    pubsub_wfocl,
    tsp_brute_force,
    tsp_configuration,
    tsp_formula,
)

TOLERANCE = 1e-9


@dataclass
class CriterionResult:
    name: str
    ok: bool
    detail: str
    elapsed: float
    budget: float

    @property
    def passed(self) -> bool:
        return self.ok and self.elapsed < self.budget


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

_P2 = port_universe(["p", "q"])
_P3 = port_universe(["p", "q", "r"])


def _poly_agree(z1, z2, ports, K) -> bool:
    s1 = wpcl_polynomial(z1, ports, K)
    s2 = wpcl_polynomial(z2, ports, K)
    zero = K.zero
    for key in s1.keys() | s2.keys():
        if not K.eq(s1.get(key, zero), s2.get(key, zero), TOLERANCE):
            return False
    return True


def _small_configs(ports, rng: random.Random, count: int, max_size: int = 4):
    pool = [g for g in enumerate_configurations(ports) if len(g) <= max_size]
    return [rng.choice(pool) for _ in range(count)]


def _law_holds(build, semirings: Sequence[Semiring], rounds: int, seed: int) -> str:
    """Check a two-sided law on full |P|=2 polynomials and sampled |P|=3 configs.

    ``build(rng, ports, K)`` returns the (lhs, rhs) weighted formulas.
    Returns an empty string on success, else a description of the failure.
    """
    rng = random.Random(seed)
    sample_pool = [g for g in enumerate_configurations(_P3) if len(g) <= 4]
    for i in range(rounds):
        K = semirings[i % len(semirings)]
        lhs, rhs = build(rng, _P2, K)
        if not _poly_agree(lhs, rhs, _P2, K):
            return f"instance {i} over {K.name} fails on |P|=2"
        lhs3, rhs3 = build(rng, _P3, K)
        for gamma in (rng.choice(sample_pool) for _ in range(3)):
            a = wpcl_eval(lhs3, gamma, K)
            b = wpcl_eval(rhs3, gamma, K)
            if not K.eq(a, b, TOLERANCE):
                return f"instance {i} over {K.name} fails at {gamma} on |P|=3: {a} vs {b}"
    return ""


# ---------------------------------------------------------------------------
# Criterion 1: the associativity counterexample values
# ---------------------------------------------------------------------------


def criterion_counterexample() -> tuple[bool, str]:
    p, q = Port("p"), Port("q")
    gamma = Configuration([Interaction([p, q])])
    pq = PclBool(monomial([p, q]))
    zeta = WPlus(WConst(5), WBool(pq))
    z1 = WTimes(WBool(pq), WConst(6))
    z2 = WTimes(WBool(pq), WConst(3))
    factored = WTimes(zeta, WCoalesce(z1, z2))
    expanded = WCoalesce(WTimes(zeta, z1), WTimes(zeta, z2))
    start = time.perf_counter()
    a = wpcl_eval(factored, gamma, NATURAL)
    b = wpcl_eval(expanded, gamma, NATURAL)
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    ok = a == 108 and b == 648 and elapsed_ms < 1.0
    return ok, f"got {a} and {b} in {elapsed_ms:.3f} ms"


# ---------------------------------------------------------------------------
# Criterion 2: TSP against the brute-force oracle
# ---------------------------------------------------------------------------


def criterion_tsp() -> tuple[bool, str]:
    expected_tours = {4: 3, 5: 12, 6: 60}
    for n, want in expected_tours.items():
        got = len(cyclic_tours(n))
        if got != want:
            return False, f"tour count for n={n}: got {got}, want {want}"
    rng = random.Random(20240117)
    checked = 0
    for n in (4, 5, 6):
        gamma = tsp_configuration(n)
        for _ in range(100):
            d = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    d[i][j] = d[j][i] = rng.randint(1, 99)
            matrix = DistanceMatrix.of(d)
            _, zeta = tsp_formula(matrix)
            value = wpcl_eval_sparse(zeta, gamma, MIN_PLUS)
            oracle = tsp_brute_force(matrix)
            if value != oracle:
                return False, f"n={n}: formula {value} != oracle {oracle}"
            checked += 1
    return True, f"{checked} matrices agree exactly; tour counts 3/12/60"


# ---------------------------------------------------------------------------
# Criterion 3: weighted algebraic laws
# ---------------------------------------------------------------------------


def _weighted_laws() -> list[tuple[str, Callable]]:
    def coal_assoc(rng, ports, K):
        z1, z2, z3 = (random_wpcl(ports, K, rng, 2) for _ in range(3))
        return WCoalesce(WCoalesce(z1, z2), z3), WCoalesce(z1, WCoalesce(z2, z3))

    def coal_zero(rng, ports, K):
        z1 = random_wpcl(ports, K, rng, 2)
        return WCoalesce(z1, WConst(K.zero)), WConst(K.zero)

    def coal_comm(rng, ports, K):
        z1, z2 = (random_wpcl(ports, K, rng, 2) for _ in range(2))
        return WCoalesce(z1, z2), WCoalesce(z2, z1)

    def coal_over_plus(rng, ports, K):
        z1, z2, z3 = (random_wpcl(ports, K, rng, 2) for _ in range(3))
        return (
            WCoalesce(z1, WPlus(z2, z3)),
            WPlus(WCoalesce(z1, z2), WCoalesce(z1, z3)),
        )

    def conj_over_coal(rng, ports, K):
        phi = WBool(PclBool(random_pil(ports, rng, 2)))
        z1, z2 = (random_wpcl(ports, K, rng, 2) for _ in range(2))
        return (
            WTimes(phi, WCoalesce(z1, z2)),
            WCoalesce(WTimes(phi, z1), WTimes(phi, z2)),
        )

    def clos_plus(rng, ports, K):
        z1, z2 = (random_wpcl(ports, K, rng, 2) for _ in range(2))
        return WClosure(WPlus(z1, z2)), WPlus(WClosure(z1), WClosure(z2))

    def clos_coal(rng, ports, K):
        z1, z2 = (random_wpcl(ports, K, rng, 2) for _ in range(2))
        return WClosure(WCoalesce(z1, z2)), WTimes(WClosure(z1), WClosure(z2))

    return [
        ("coalescing associativity", coal_assoc),
        ("coalescing absorbs zero", coal_zero),
        ("coalescing commutativity", coal_comm),
        ("coalescing distributes over plus", coal_over_plus),
        ("interaction factor distributes over coalescing", conj_over_coal),
        ("closure splits plus", clos_plus),
        ("closure of coalescing is product of closures", clos_coal),
    ]


def _idempotent_laws() -> list[tuple[str, Callable]]:
    def disj_over_plus(rng, ports, K):
        z1, z2, z3 = (random_wpcl(ports, K, rng, 2) for _ in range(3))
        return (
            wdisj(z1, WPlus(z2, z3)),
            WPlus(wdisj(z1, z2), wdisj(z1, z3)),
        )

    def clos_coal_idem(rng, ports, K):
        z1, z2 = (random_wpcl(ports, K, rng, 2) for _ in range(2))
        return WClosure(WCoalesce(z1, z2)), WCoalesce(WClosure(z1), WClosure(z2))

    def clos_idem(rng, ports, K):
        z = random_wpcl(ports, K, rng, 2)
        return WClosure(WClosure(z)), WClosure(z)

    return [
        ("weighted disjunction distributes over plus", disj_over_plus),
        ("closure commutes with coalescing", clos_coal_idem),
        ("closure is idempotent", clos_idem),
    ]


def _natural_counterexample(build) -> str:
    """Search tiny constant instances violating an idempotent-only law over nat."""
    p = Port("p")
    pool = [WConst(1), WConst(2), WBool(PclBool(PilAtom(p)))]
    gammas = enumerate_configurations(_P2)
    for z1 in pool:
        for z2 in pool:
            for z3 in pool:
                lhs, rhs = build(z1, z2, z3)
                for gamma in gammas:
                    a = wpcl_eval(lhs, gamma, NATURAL)
                    b = wpcl_eval(rhs, gamma, NATURAL)
                    if a != b:
                        return f"{a} != {b} at {gamma}"
    return ""


def criterion_weighted_laws() -> tuple[bool, str]:
    for index, (name, build) in enumerate(_weighted_laws()):
        failure = _law_holds(build, ALL_SEMIRINGS, rounds=200, seed=1000 + index)
        if failure:
            return False, f"{name}: {failure}"
    for index, (name, build) in enumerate(_idempotent_laws()):
        failure = _law_holds(build, IDEMPOTENT_SEMIRINGS, rounds=200, seed=2000 + index)
        if failure:
            return False, f"{name} (idempotent): {failure}"

    counterexamples = {
        "weighted disjunction over plus": _natural_counterexample(
            lambda z1, z2, z3: (
                wdisj(z1, WPlus(z2, z3)),
                WPlus(wdisj(z1, z2), wdisj(z1, z3)),
            )
        ),
        "closure/coalescing swap": _natural_counterexample(
            lambda z1, z2, z3: (
                WClosure(WCoalesce(z1, z2)),
                WCoalesce(WClosure(z1), WClosure(z2)),
            )
        ),
        "closure idempotence": _natural_counterexample(
            lambda z1, z2, z3: (WClosure(WClosure(z1)), WClosure(z1))
        ),
    }
    missing = [name for name, found in counterexamples.items() if not found]
    if missing:
        return False, f"no natural-semiring counterexample found for: {missing}"
    notes = "; ".join(f"nat counterexample for {k}: {v}" for k, v in counterexamples.items())
    return True, "10 laws x 200 instances hold; " + notes


# ---------------------------------------------------------------------------
# Criterion 4: unweighted configuration-logic laws
# ---------------------------------------------------------------------------


def _pcl_equiv_on(f1, f2, gammas) -> bool:
    return all(pcl_satisfies(g, f1) == pcl_satisfies(g, f2) for g in gammas)


def _pcl_implies_on(f1, f2, gammas) -> bool:
    return all(pcl_satisfies(g, f2) for g in gammas if pcl_satisfies(g, f1))


def criterion_unweighted_laws() -> tuple[bool, str]:
    rng = random.Random(1789)
    gammas = enumerate_configurations(_P2)
    for i in range(200):
        phi = PclBool(random_pil(_P2, rng, 2))
        psi = PclBool(random_pil(_P2, rng, 2))
        f1, f2, f3 = (random_pcl(_P2, rng, 2) for _ in range(3))

        checks = [
            # conjunction agrees with meet on interaction formulas
            (
                "conj-vs-meet",
                _pcl_equiv_on(
                    PclBool(pil_and(phi.formula, psi.formula)), pcl_meet(phi, psi), gammas
                ),
            ),
            (
                "interaction meet over coalescing",
                _pcl_equiv_on(
                    pcl_meet(phi, PclCoalesce(f1, f2)),
                    PclCoalesce(pcl_meet(phi, f1), pcl_meet(phi, f2)),
                    gammas,
                ),
            ),
            (
                "coalescing over union",
                _pcl_equiv_on(
                    PclCoalesce(f1, PclUnion(f2, f3)),
                    PclUnion(PclCoalesce(f1, f2), PclCoalesce(f1, f3)),
                    gammas,
                ),
            ),
            (
                "disjunction over union",
                _pcl_equiv_on(
                    pcl_disj(f1, PclUnion(f2, f3)),
                    PclUnion(pcl_disj(f1, f2), pcl_disj(f1, f3)),
                    gammas,
                ),
            ),
            (
                "coalescing into meet (implication)",
                _pcl_implies_on(
                    PclCoalesce(f1, pcl_meet(f2, f3)),
                    pcl_meet(PclCoalesce(f1, f2), PclCoalesce(f1, f3)),
                    gammas,
                ),
            ),
            (
                "union-closed coalescing over disjunction",
                _pcl_equiv_on(
                    PclCoalesce(phi, pcl_disj(f2, f3)),
                    pcl_disj(PclCoalesce(phi, f2), PclCoalesce(phi, f3)),
                    gammas,
                ),
            ),
            (
                "interaction coalescing idempotence",
                _pcl_equiv_on(PclCoalesce(phi, phi), phi, gammas),
            ),
            (
                "closure idempotence",
                _pcl_equiv_on(pcl_closure(pcl_closure(f1)), pcl_closure(f1), gammas),
            ),
            (
                "formula implies its closure",
                _pcl_implies_on(f1, pcl_closure(f1), gammas),
            ),
            (
                "interior implies formula",
                _pcl_implies_on(PclNot(pcl_closure(PclNot(f1))), f1, gammas),
            ),
            (
                "closure over union",
                _pcl_equiv_on(
                    pcl_closure(PclUnion(f1, f2)),
                    PclUnion(pcl_closure(f1), pcl_closure(f2)),
                    gammas,
                )
                and _pcl_equiv_on(
                    pcl_closure(PclUnion(f1, f2)),
                    pcl_closure(pcl_disj(f1, f2)),
                    gammas,
                ),
            ),
            (
                "closure over coalescing",
                _pcl_equiv_on(
                    PclCoalesce(pcl_closure(f1), pcl_closure(f2)),
                    pcl_closure(PclCoalesce(f1, f2)),
                    gammas,
                )
                and _pcl_equiv_on(
                    pcl_closure(PclCoalesce(f1, f2)),
                    pcl_meet(pcl_closure(f1), pcl_closure(f2)),
                    gammas,
                ),
            ),
        ]
        for name, ok in checks:
            if not ok:
                return False, f"{name} fails on instance {i}"
    return True, "12 law families x 200 instances hold exhaustively over |P|=2"


# ---------------------------------------------------------------------------
# Criterion 5: full normal forms
# ---------------------------------------------------------------------------


def _rewritten_partner(z, rng: random.Random, ports, K):
    """A formula equivalent to a combination of z by a licensed rewrite."""
    other = random_wpcl(ports, K, rng, 1)
    third = random_wpcl(ports, K, rng, 1)
    choice = rng.randrange(4)
    if choice == 0:
        return WCoalesce(z, other), WCoalesce(other, z)
    if choice == 1:
        return (
            WCoalesce(WCoalesce(z, other), third),
            WCoalesce(z, WCoalesce(other, third)),
        )
    if choice == 2:
        return (
            WCoalesce(z, WPlus(other, third)),
            WPlus(WCoalesce(z, other), WCoalesce(z, third)),
        )
    phi = WBool(PclBool(random_pil(ports, rng, 1)))
    return (
        WTimes(phi, WCoalesce(z, other)),
        WCoalesce(WTimes(phi, z), WTimes(phi, other)),
    )


def _check_fnf_batch(ports, count, rng, depth) -> str:
    configs = enumerate_configurations(ports)
    for i in range(count):
        K = ALL_SEMIRINGS[i % 6]
        z = random_wpcl(ports, K, rng, depth)
        fnf = fnf_of_wpcl(z, ports, K)
        if not fnf_statements_hold(fnf, ports):
            return f"statement check fails on instance {i} over {K.name}"
        for gamma in configs:
            if not K.eq(fnf_eval(fnf, gamma, K), wpcl_eval(z, gamma, K), TOLERANCE):
                return f"pointwise mismatch on instance {i} over {K.name} at {gamma}"
        lhs, rhs = _rewritten_partner(z, rng, ports, K)
        if not fnf_of_wpcl(lhs, ports, K).equals(fnf_of_wpcl(rhs, ports, K), K, TOLERANCE):
            return f"rewrite pair has different canonical forms on instance {i} ({K.name})"
    return ""


def _master_slave_fnf_expected(weights: PriorityTable, ports, K):
    """Family-by-family expansion of the expected normal form."""
    from .interactions import enumerate_interactions
    import itertools as it

    interactions = enumerate_interactions(ports)
    expected: dict = {}
    for j1 in (1, 2):
        for j2 in (1, 2):
            coeff = K.times(weights.at(0, j1 - 1), weights.at(1, j2 - 1))
            base = Configuration(
                [
                    Interaction([Port("s1"), Port(f"m{j1}")]),
                    Interaction([Port("s2"), Port(f"m{j2}")]),
                ]
            )
            for r in range(1, len(interactions) + 1):
                for combo in it.combinations(interactions, r):
                    key = base.union(Configuration._from_sorted(combo))
                    prev = expected.get(key)
                    expected[key] = coeff if prev is None else K.plus(prev, coeff)
    return expected


def criterion_full_normal_form() -> tuple[bool, str]:
    rng = random.Random(5150)
    failure = _check_fnf_batch(_P2, 200, rng, depth=2)
    if failure:
        return False, f"|P|=2: {failure}"
    failure = _check_fnf_batch(_P3, 50, rng, depth=2)
    if failure:
        return False, f"|P|=3: {failure}"

    weights = PriorityTable.of([[0.9, 0.8], [0.7, 0.6]])
    ports, zeta = master_slave_wpcl(2, 2, weights)
    fnf = fnf_of_wpcl(zeta, ports, VITERBI)
    expected = _master_slave_fnf_expected(weights, ports, VITERBI)
    if set(expected) != set(fnf.terms):
        return False, "master/slave normal form has wrong support"
    for key, value in expected.items():
        if not VITERBI.eq(value, fnf.terms[key], TOLERANCE):
            return False, f"master/slave coefficient mismatch at {key}"
    pair_products = set()
    for j1 in (1, 2):
        for j2 in (1, 2):
            base = Configuration(
                [
                    Interaction([Port("s1"), Port(f"m{j1}")]),
                    Interaction([Port("s2"), Port(f"m{j2}")]),
                ]
            )
            pair_products.add(round(fnf.terms[base], 12))
    want = {
        round(VITERBI.times(weights.at(0, a), weights.at(1, b)), 12)
        for a in (0, 1)
        for b in (0, 1)
    }
    if pair_products != want:
        return False, f"bare-pair coefficients {pair_products} != {want}"
    return True, (
        "250 random formulas: statements, pointwise oracle, rewrite-canonicality; "
        f"master/slave families verified ({len(fnf)} terms)"
    )


# ---------------------------------------------------------------------------
# Criterion 6: first-order suites
# ---------------------------------------------------------------------------


def _models_for_laws(rng: random.Random, count: int) -> list[Model]:
    models = []
    while len(models) < count:
        model = random_model(rng)
        if len(model.port_universe()) <= 3:
            models.append(model)
    return models


def _focl_equiv_on(model, f1, f2, gammas) -> bool:
    return all(
        focl_satisfies(model, g, f1) == focl_satisfies(model, g, f2) for g in gammas
    )


def _focl_implies_on(model, f1, f2, gammas) -> bool:
    return all(
        focl_satisfies(model, g, f2) for g in gammas if focl_satisfies(model, g, f1)
    )


def _unweighted_focl_failures(models, rng) -> str:
    for model in models:
        gammas = enumerate_configurations(model.port_universe())
        for trial in range(4):
            var = "v1"
            type_name = rng.choice(list(model.types) + ["U"])
            scope = [(var, type_name)]
            F = random_focl(model, rng, 1, scope=scope)
            F1 = random_focl(model, rng, 1, scope=scope)
            F2 = random_focl(model, rng, 1, scope=scope)
            G1 = random_focl(model, rng, 1)
            G2 = random_focl(model, rng, 1)
            has_match = bool(matching_components(model, type_name, PRED_TRUE))

            cases = [
                ("closure idempotent", _focl_equiv_on(model, f_closure(f_closure(G1)), f_closure(G1), gammas)),
                ("formula implies closure", _focl_implies_on(model, G1, f_closure(G1), gammas)),
                ("interior implies formula", _focl_implies_on(model, FNot(f_closure(FNot(G1))), G1, gammas)),
                (
                    "closure over union",
                    _focl_equiv_on(
                        model,
                        f_closure(FUnion(G1, G2)),
                        FUnion(f_closure(G1), f_closure(G2)),
                        gammas,
                    ),
                ),
                (
                    "closure over coalescing",
                    _focl_equiv_on(
                        model,
                        f_closure(FCoalesce(G1, G2)),
                        FCoalesce(f_closure(G1), f_closure(G2)),
                        gammas,
                    ),
                ),
                (
                    "closure through exists",
                    _focl_equiv_on(
                        model,
                        f_closure(FExists(var, type_name, PRED_TRUE, F)),
                        FExists(var, type_name, PRED_TRUE, f_closure(F)),
                        gammas,
                    ),
                ),
                (
                    "exists over union",
                    _focl_equiv_on(
                        model,
                        FExists(var, type_name, PRED_TRUE, FUnion(F1, F2)),
                        FUnion(
                            FExists(var, type_name, PRED_TRUE, F1),
                            FExists(var, type_name, PRED_TRUE, F2),
                        ),
                        gammas,
                    ),
                ),
                (
                    "forall over meet",
                    _focl_equiv_on(
                        model,
                        f_forall(var, type_name, PRED_TRUE, f_meet(F1, F2)),
                        f_meet(
                            f_forall(var, type_name, PRED_TRUE, F1),
                            f_forall(var, type_name, PRED_TRUE, F2),
                        ),
                        gammas,
                    ),
                ),
            ]
            if has_match:
                cases += [
                    (
                        "closure through sum",
                        _focl_equiv_on(
                            model,
                            f_closure(FSum(var, type_name, PRED_TRUE, F)),
                            FSum(var, type_name, PRED_TRUE, f_closure(F)),
                            gammas,
                        )
                        and _focl_equiv_on(
                            model,
                            f_closure(FSum(var, type_name, PRED_TRUE, F)),
                            f_forall(var, type_name, PRED_TRUE, f_closure(F)),
                            gammas,
                        ),
                    ),
                    (
                        "sum over coalescing",
                        _focl_equiv_on(
                            model,
                            FSum(var, type_name, PRED_TRUE, FCoalesce(F1, F2)),
                            FCoalesce(
                                FSum(var, type_name, PRED_TRUE, F1),
                                FSum(var, type_name, PRED_TRUE, F2),
                            ),
                            gammas,
                        ),
                    ),
                    (
                        "paired closures of sums",
                        _focl_equiv_on(
                            model,
                            f_meet(
                                f_closure(FSum(var, type_name, PRED_TRUE, F1)),
                                f_closure(FSum(var, type_name, PRED_TRUE, F2)),
                            ),
                            f_forall(var, type_name, PRED_TRUE, f_closure(FCoalesce(F1, F2))),
                            gammas,
                        ),
                    ),
                    (
                        "forall coalescing implies sum coalescing",
                        _focl_implies_on(
                            model,
                            f_forall(var, type_name, PRED_TRUE, FCoalesce(F1, F2)),
                            FCoalesce(
                                FSum(var, type_name, PRED_TRUE, F1),
                                FSum(var, type_name, PRED_TRUE, F2),
                            ),
                            gammas,
                        ),
                    ),
                    (
                        "sum of meet implies meet of sums",
                        _focl_implies_on(
                            model,
                            FSum(var, type_name, PRED_TRUE, f_meet(F1, F2)),
                            f_meet(
                                FSum(var, type_name, PRED_TRUE, F1),
                                FSum(var, type_name, PRED_TRUE, F2),
                            ),
                            gammas,
                        ),
                    ),
                ]
            for name, ok in cases:
                if not ok:
                    return f"{name} fails on {model!r} trial {trial}"
    return ""


def _focl_counterexamples() -> str:
    from .focl import Component, ComponentType

    # universal-quantifier converse
    T = ComponentType("T", ("p",))
    model = Model([T], [Component("c1", T), Component("c2", T)])
    F1 = FCoalesce(FBool_atom("c", "p"), FBool_atom("c1", "p"))
    F2 = FBool_atom("c1", "p")
    lhs = f_forall("c", "T", PRED_TRUE, FCoalesce(F1, F2))
    rhs = FCoalesce(FSum("c", "T", PRED_TRUE, F1), FSum("c", "T", PRED_TRUE, F2))
    gamma = Configuration([Interaction([Port("p", "c1")]), Interaction([Port("p", "c2")])])
    if not (focl_satisfies(model, gamma, rhs) and not focl_satisfies(model, gamma, lhs)):
        return "universal-quantifier counterexample does not reproduce"

    # meet-under-sum converse
    T1 = ComponentType("T1", ("p",))
    T2 = ComponentType("T2", ("q",))
    model2 = Model([T1, T2], [Component("b", T1), Component("c", T1), Component("d", T2)])
    G1 = FBool(pil_and(PilAtom(Port("p", "s")), PilAtom(Port("q", "d"))))
    G2 = FCoalesce(
        FBool_atom("c", "p"),
        FBool(pil_and(PilAtom(Port("p", "s")), PilAtom(Port("q", "d")))),
    )
    lhs2 = FSum("s", "T1", PRED_TRUE, f_meet(G1, G2))
    rhs2 = f_meet(FSum("s", "T1", PRED_TRUE, G1), FSum("s", "T1", PRED_TRUE, G2))
    gamma2 = Configuration(
        [
            Interaction([Port("p", "b"), Port("q", "d")]),
            Interaction([Port("p", "c"), Port("q", "d")]),
        ]
    )
    if not (focl_satisfies(model2, gamma2, rhs2) and not focl_satisfies(model2, gamma2, lhs2)):
        return "meet-under-sum counterexample does not reproduce"
    return ""


def FBool_atom(owner: str, name: str) -> FBool:
    return FBool(PilAtom(Port(name, owner)))


def _weighted_focl_failures(models, rng) -> str:
    for index, model in enumerate(models):
        gammas = enumerate_configurations(model.port_universe())
        for trial in range(3):
            K = ALL_SEMIRINGS[(index * 3 + trial) % 6]
            var = "v1"
            type_name = rng.choice(list(model.types) + ["U"])
            scope = [(var, type_name)]
            Z = random_wfocl(model, K, rng, 1, scope=scope)
            Z1 = random_wfocl(model, K, rng, 1, scope=scope)
            Z2 = random_wfocl(model, K, rng, 1, scope=scope)
            pairs = [
                (
                    "closure through plus-quantifier",
                    ZClosure(ZOplus(var, type_name, PRED_TRUE, Z)),
                    ZOplus(var, type_name, PRED_TRUE, ZClosure(Z)),
                ),
                (
                    "plus-quantifier over plus",
                    ZOplus(var, type_name, PRED_TRUE, ZPlus(Z1, Z2)),
                    ZPlus(
                        ZOplus(var, type_name, PRED_TRUE, Z1),
                        ZOplus(var, type_name, PRED_TRUE, Z2),
                    ),
                ),
                (
                    "times-quantifier over times",
                    ZOtimes(var, type_name, PRED_TRUE, ZTimes(Z1, Z2)),
                    ZTimes(
                        ZOtimes(var, type_name, PRED_TRUE, Z1),
                        ZOtimes(var, type_name, PRED_TRUE, Z2),
                    ),
                ),
                (
                    "coalescing-quantifier over coalescing",
                    ZOuplus(var, type_name, PRED_TRUE, ZCoalesce(Z1, Z2)),
                    ZCoalesce(
                        ZOuplus(var, type_name, PRED_TRUE, Z1),
                        ZOuplus(var, type_name, PRED_TRUE, Z2),
                    ),
                ),
            ]
            for name, lhs, rhs in pairs:
                for gamma in gammas:
                    a = wfocl_eval(lhs, model, gamma, K)
                    b = wfocl_eval(rhs, model, gamma, K)
                    if not K.eq(a, b, TOLERANCE):
                        return f"{name} fails over {K.name} on {model!r} at {gamma}: {a} vs {b}"
    return ""


def criterion_focl() -> tuple[bool, str]:
    rng = random.Random(60486)
    models = _models_for_laws(rng, 10)
    failure = _unweighted_focl_failures(models, rng)
    if failure:
        return False, failure
    failure = _focl_counterexamples()
    if failure:
        return False, failure
    failure = _weighted_focl_failures(models, rng)
    if failure:
        return False, failure
    return True, (
        "unweighted propositions, both counterexamples, and the four weighted "
        f"quantifier laws hold on {len(models)} models with exhaustive configurations"
    )


# ---------------------------------------------------------------------------
# Criterion 7: publish/subscribe value
# ---------------------------------------------------------------------------


def criterion_pubsub() -> tuple[bool, str]:
    rng = random.Random(31337)
    gamma = pubsub_example_configuration()
    for trial in range(20):
        rows = [[round(rng.random(), 6) for _ in range(2)] for _ in range(3)]
        priorities = PriorityTable.of(rows)
        model, z = pubsub_wfocl(2, 3, 2, priorities)
        value = wfocl_eval(z, model, gamma, VITERBI)
        expected = VITERBI.times(priorities.at(0, 0), priorities.at(2, 1))
        if not VITERBI.eq(value, expected, TOLERANCE):
            return False, f"trial {trial}: got {value}, want {expected}"
    return True, "20 random priority tables give k11 * k32 exactly"


# ---------------------------------------------------------------------------
# Criterion 8: strategy agreement
# ---------------------------------------------------------------------------


def criterion_strategy_agreement() -> tuple[bool, str]:
    rng = random.Random(271828)
    configs = enumerate_configurations(_P3)
    small = [g for g in configs if len(g) <= 5]
    for trial in range(500):
        K = ALL_SEMIRINGS[trial % 6]
        z = random_wpcl(_P3, K, rng, 2)
        gamma = rng.choice(small if trial % 3 else configs)
        direct = wpcl_eval(z, gamma, K)
        sparse = wpcl_eval_sparse(z, gamma, K)
        if not K.eq(direct, sparse, TOLERANCE):
            return False, f"trial {trial} over {K.name} at {gamma}: {direct} vs {sparse}"
    return True, "500 random formula/configuration pairs agree across both strategies"


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------

CRITERIA: list[tuple[str, Callable[[], tuple[bool, str]], float]] = [
    ("counterexample-regression", criterion_counterexample, 1.0),
    ("tsp-oracle", criterion_tsp, 10.0),
    ("weighted-laws", criterion_weighted_laws, 60.0),
    ("unweighted-pcl", criterion_unweighted_laws, 30.0),
    ("fnf-normal-form", criterion_full_normal_form, 120.0),
    ("focl-suites", criterion_focl, 60.0),
    ("pubsub", criterion_pubsub, 5.0),
    ("strategy-agreement", criterion_strategy_agreement, 30.0),
]


def run_criterion(name: str, fn: Callable[[], tuple[bool, str]], budget: float) -> CriterionResult:
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except WclError as exc:
        ok, detail = False, f"error: {exc}"
    elapsed = time.perf_counter() - start
    return CriterionResult(name, ok, detail, elapsed, budget)


def run_selftest(name_filter: str = "", out=None) -> bool:
    """Run every criterion, print one PASS/FAIL line each, return overall."""
    import sys

    out = out or sys.stdout
    all_ok = True
    for name, fn, budget in CRITERIA:
        if name_filter and name_filter not in name:
            continue
        result = run_criterion(name, fn, budget)
        status = "PASS" if result.passed else "FAIL"
        if not result.passed:
            all_ok = False
        print(f"{status} {result.name} ({result.elapsed:.2f}s / {result.budget:.0f}s budget)", file=out)
        print(f"     {result.detail}", file=out)
        if result.ok and not result.passed:
            print("     (over time budget)", file=out)
    return all_ok
