"""Seeded random generators for formulas, models, and weights.

Used by the self-test suite and the property tests; everything is driven
by an explicit ``random.Random`` so runs are reproducible byte for byte.
"""

from __future__ import annotations

import math
import random
from typing import Optional, Sequence

from .focl import (
    Component,
    ComponentType,
    FBool,
    FCoalesce,
    FExists,
    FNot,
    FSum,
    FTrue,
    FUnion,
    FoclFormula,
    Model,
    PRED_TRUE,
    PredCmp,
    WfoclFormula,
    ZBool,
    ZCoalesce,
    ZConst,
    ZOplus,
    ZOtimes,
    ZOuplus,
    ZPlus,
    ZTimes,
    f_forall,
)
from .interactions import PilAtom, PilFormula, PilNeg, PilOr, PIL_TRUE, Port, pil_and
from .pcl import (
    PCL_TRUE,
    PclBool,
    PclCoalesce,
    PclFormula,
    PclNot,
    PclUnion,
    WBool,
    WClosure,
    WCoalesce,
    WConst,
    WPlus,
    WTimes,
    WpclFormula,
)
from .semiring import Semiring


def random_weight(semiring: Semiring, rng: random.Random):
    if semiring.name == "nat":
        return rng.randint(0, 6)
    if semiring.name == "bool":
        return rng.randint(0, 1)
    if semiring.name == "minplus":
        if rng.random() < 0.1:
            return math.inf
        return float(rng.randint(0, 40)) / 4.0
    if semiring.name == "maxplus":
        if rng.random() < 0.1:
            return -math.inf
        return float(rng.randint(0, 40)) / 4.0
    return round(rng.random(), 6)


def random_pil(ports: Sequence[Port], rng: random.Random, depth: int = 2) -> PilFormula:
    roll = rng.random()
    if depth <= 0 or roll < 0.45:
        if rng.random() < 0.06:
            return PIL_TRUE
        return PilAtom(rng.choice(list(ports)))
    if roll < 0.6:
        return PilNeg(random_pil(ports, rng, 0)) if rng.random() < 0.5 else PilNeg(
            PilOr(random_pil(ports, rng, depth - 1), random_pil(ports, rng, depth - 1))
        )
    if roll < 0.8:
        return PilOr(random_pil(ports, rng, depth - 1), random_pil(ports, rng, depth - 1))
    return pil_and(random_pil(ports, rng, depth - 1), random_pil(ports, rng, depth - 1))


def random_pcl(ports: Sequence[Port], rng: random.Random, depth: int = 2) -> PclFormula:
    roll = rng.random()
    if depth <= 0 or roll < 0.4:
        if rng.random() < 0.08:
            return PCL_TRUE
        return PclBool(random_pil(ports, rng, 1))
    if roll < 0.55:
        return PclNot(random_pcl(ports, rng, depth - 1))
    if roll < 0.75:
        return PclUnion(random_pcl(ports, rng, depth - 1), random_pcl(ports, rng, depth - 1))
    return PclCoalesce(random_pcl(ports, rng, depth - 1), random_pcl(ports, rng, depth - 1))


def random_wpcl(
    ports: Sequence[Port],
    semiring: Semiring,
    rng: random.Random,
    depth: int = 2,
) -> WpclFormula:
    roll = rng.random()
    if depth <= 0 or roll < 0.35:
        if rng.random() < 0.4:
            return WConst(random_weight(semiring, rng))
        return WBool(random_pcl(ports, rng, 1))
    if roll < 0.55:
        return WPlus(
            random_wpcl(ports, semiring, rng, depth - 1),
            random_wpcl(ports, semiring, rng, depth - 1),
        )
    if roll < 0.75:
        return WTimes(
            random_wpcl(ports, semiring, rng, depth - 1),
            random_wpcl(ports, semiring, rng, depth - 1),
        )
    if roll < 0.92:
        return WCoalesce(
            random_wpcl(ports, semiring, rng, depth - 1),
            random_wpcl(ports, semiring, rng, depth - 1),
        )
    return WClosure(random_wpcl(ports, semiring, rng, depth - 1))


def random_model(rng: random.Random, max_components: int = 3, max_ports: int = 2) -> Model:
    """A small typed model; total port count stays low enough to exhaust."""
    n_types = rng.randint(1, 2)
    types = []
    for t in range(n_types):
        n_ports = rng.randint(1, max_ports)
        types.append(ComponentType(f"T{t + 1}", tuple(f"p{k + 1}" for k in range(n_ports))))
    n_components = rng.randint(1, max_components)
    components = []
    for i in range(n_components):
        components.append(Component(f"c{i + 1}", rng.choice(types)))
    return Model(types, components)


Scope = list[tuple[str, str]]  # (variable, type it ranges over)


def _var_ports(model: Model, type_name: str) -> list[str]:
    if type_name == "U":
        # only ports shared by every type are safe under a universal binding
        port_sets = [set(t.ports) for t in model.types.values()]
        common = set.intersection(*port_sets) if port_sets else set()
        return sorted(common)
    return list(model.types[type_name].ports)


def _random_quantifier_parts(model: Model, rng: random.Random, scope: Scope):
    var = f"v{len(scope) + 1}"
    type_name = rng.choice(list(model.types) + ["U"])
    pred = PRED_TRUE
    others = [c.name for c in model.components] + [v for v, _ in scope]
    if others and rng.random() < 0.4:
        pred = PredCmp(var, rng.choice(others), rng.random() < 0.3)
    return var, type_name, pred


def random_pil_over_model(model: Model, rng: random.Random, scope: Scope, depth: int = 1) -> PilFormula:
    candidates = [Port(p, c.name) for c in model.components for p in c.ctype.ports]
    for var, type_name in scope:
        for p in _var_ports(model, type_name):
            candidates.append(Port(p, var))
    if depth <= 0 or rng.random() < 0.5:
        atom = PilAtom(rng.choice(candidates))
        return PilNeg(atom) if rng.random() < 0.4 else atom
    if rng.random() < 0.5:
        return pil_and(
            random_pil_over_model(model, rng, scope, depth - 1),
            random_pil_over_model(model, rng, scope, depth - 1),
        )
    return PilOr(
        random_pil_over_model(model, rng, scope, depth - 1),
        random_pil_over_model(model, rng, scope, depth - 1),
    )


def random_focl(
    model: Model, rng: random.Random, depth: int = 2, scope: Optional[Scope] = None
) -> FoclFormula:
    scope = scope if scope is not None else []
    roll = rng.random()
    if depth <= 0 or roll < 0.3:
        if rng.random() < 0.06:
            return FTrue()
        return FBool(random_pil_over_model(model, rng, scope))
    if roll < 0.45:
        return FNot(random_focl(model, rng, depth - 1, scope))
    if roll < 0.6:
        return FUnion(
            random_focl(model, rng, depth - 1, scope),
            random_focl(model, rng, depth - 1, scope),
        )
    if roll < 0.75:
        return FCoalesce(
            random_focl(model, rng, depth - 1, scope),
            random_focl(model, rng, depth - 1, scope),
        )
    var, type_name, pred = _random_quantifier_parts(model, rng, scope)
    body = random_focl(model, rng, depth - 1, scope + [(var, type_name)])
    kind = rng.random()
    if kind < 0.4:
        return FExists(var, type_name, pred, body)
    if kind < 0.7:
        return FSum(var, type_name, pred, body)
    return f_forall(var, type_name, pred, body)


def random_wfocl(
    model: Model,
    semiring: Semiring,
    rng: random.Random,
    depth: int = 2,
    scope: Optional[Scope] = None,
) -> WfoclFormula:
    scope = scope if scope is not None else []
    roll = rng.random()
    if depth <= 0 or roll < 0.3:
        if rng.random() < 0.35:
            return ZConst(random_weight(semiring, rng))
        return ZBool(random_focl(model, rng, 1, scope))
    if roll < 0.45:
        return ZPlus(
            random_wfocl(model, semiring, rng, depth - 1, scope),
            random_wfocl(model, semiring, rng, depth - 1, scope),
        )
    if roll < 0.6:
        return ZTimes(
            random_wfocl(model, semiring, rng, depth - 1, scope),
            random_wfocl(model, semiring, rng, depth - 1, scope),
        )
    if roll < 0.72:
        return ZCoalesce(
            random_wfocl(model, semiring, rng, depth - 1, scope),
            random_wfocl(model, semiring, rng, depth - 1, scope),
        )
    var, type_name, pred = _random_quantifier_parts(model, rng, scope)
    body = random_wfocl(model, semiring, rng, depth - 1, scope + [(var, type_name)])
    kind = rng.random()
    if kind < 0.4:
        return ZOplus(var, type_name, pred, body)
    if kind < 0.7:
        return ZOtimes(var, type_name, pred, body)
    return ZOuplus(var, type_name, pred, body)
