"""First-order configuration logic over typed component models.

A model is a finite set of typed component instances; each instance
contributes the qualified ports of its type.  Quantifiers range over the
components of a type that satisfy a predicate (equality comparisons over
component terms), and evaluation proceeds by grounding: every quantifier
expands to a finite combination of substituted bodies, after which the
propositional machinery applies over the model's port universe.

Expansion table (matches sorted by component name):

=============  =========================  ==============================
quantifier     combination                empty match set
=============  =========================  ==============================
exists         union of instances         false
sum            coalescing of instances    false (the clause requires one)
forall         not exists not             true
Oplus          plus-fold                  zero
Otimes         times-fold                 one (empty product)
Ouplus         coalescing-fold            zero (no covering family)
=============  =========================  ==============================
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import UsageError
from .interactions import (
    Configuration,
    PilAtom,
    PilFormula,
    PilNeg,
    PilOr,
    PilTrue,
    Port,
    port_universe,
)
from .pcl import (
    DEFAULT_CAPS,
    EvalCaps,
    PclBool,
    PclCoalesce,
    PclFormula,
    PclNot,
    PclTrue,
    PclUnion,
    WBool,
    WClosure,
    WCoalesce,
    WConst,
    WPlus,
    WTimes,
    WpclFormula,
    pcl_satisfies,
    wpcl_value,
)
from .semiring import Semiring, Value


@dataclass(frozen=True)
class ComponentType:
    name: str
    ports: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.ports)) != len(self.ports):
            raise UsageError(f"duplicate port names in type {self.name}")


UNIVERSAL_TYPE = ComponentType("U", ())


@dataclass(frozen=True)
class Component:
    name: str
    ctype: ComponentType


class Model:
    """Declared component types plus a set of named instances."""

    def __init__(self, types: Iterable[ComponentType], components: Iterable[Component]):
        self.types = {t.name: t for t in types}
        if UNIVERSAL_TYPE.name in self.types:
            raise UsageError("type name 'U' is reserved for the universal type")
        self.components = tuple(sorted(components, key=lambda c: c.name))
        names = [c.name for c in self.components]
        if len(set(names)) != len(names):
            raise UsageError("component names must be unique within a model")
        for c in self.components:
            declared = self.types.get(c.ctype.name)
            if declared is None or declared != c.ctype:
                raise UsageError(f"component {c.name} has undeclared type {c.ctype.name}")
        self._by_name = {c.name: c for c in self.components}

    def component(self, name: str) -> Component:
        try:
            return self._by_name[name]
        except KeyError:
            raise UsageError(f"unknown component {name!r}") from None

    def has_component(self, name: str) -> bool:
        return name in self._by_name

    def port_universe(self) -> tuple[Port, ...]:
        ports = [
            Port(p, c.name) for c in self.components for p in c.ctype.ports
        ]
        return port_universe(ports)

    def __repr__(self) -> str:
        return f"Model({', '.join(f'{c.name}:{c.ctype.name}' for c in self.components)})"


# ---------------------------------------------------------------------------
# Predicates over component terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PredTrue:
    pass


@dataclass(frozen=True)
class PredCmp:
    left: str
    right: str
    equal: bool


@dataclass(frozen=True)
class PredAnd:
    left: "Predicate"
    right: "Predicate"


Predicate = PredTrue | PredCmp | PredAnd

PRED_TRUE = PredTrue()


def pred_eval(pred: Predicate, env: dict[str, str]) -> bool:
    """Evaluate with all variables bound; unbound terms are literal names."""
    if isinstance(pred, PredTrue):
        return True
    if isinstance(pred, PredCmp):
        left = env.get(pred.left, pred.left)
        right = env.get(pred.right, pred.right)
        return (left == right) == pred.equal
    return pred_eval(pred.left, env) and pred_eval(pred.right, env)


def pred_terms(pred: Predicate) -> set[str]:
    if isinstance(pred, PredTrue):
        return set()
    if isinstance(pred, PredCmp):
        return {pred.left, pred.right}
    return pred_terms(pred.left) | pred_terms(pred.right)


def matching_components(
    model: Model,
    type_name: str,
    pred: Predicate = PRED_TRUE,
    env: Optional[dict[str, str]] = None,
    var: Optional[str] = None,
) -> list[Component]:
    """Components of the type satisfying the predicate, in name order."""
    env = dict(env or {})
    if type_name != UNIVERSAL_TYPE.name and type_name not in model.types:
        raise UsageError(f"unknown component type {type_name!r}")
    out = []
    for c in model.components:
        if type_name != UNIVERSAL_TYPE.name and c.ctype.name != type_name:
            continue
        if var is not None:
            env[var] = c.name
        if pred_eval(pred, env):
            out.append(c)
    return out


# ---------------------------------------------------------------------------
# Formula ASTs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FTrue:
    pass


@dataclass(frozen=True)
class FBool:
    formula: PilFormula  # over qualified ports; owners may be variables


@dataclass(frozen=True)
class FNot:
    inner: "FoclFormula"


@dataclass(frozen=True)
class FUnion:
    left: "FoclFormula"
    right: "FoclFormula"


@dataclass(frozen=True)
class FCoalesce:
    left: "FoclFormula"
    right: "FoclFormula"


@dataclass(frozen=True)
class FExists:
    var: str
    type_name: str
    pred: Predicate
    body: "FoclFormula"


@dataclass(frozen=True)
class FSum:
    var: str
    type_name: str
    pred: Predicate
    body: "FoclFormula"


FoclFormula = FTrue | FBool | FNot | FUnion | FCoalesce | FExists | FSum

FOCL_TRUE = FTrue()


def f_false() -> FoclFormula:
    return FNot(FOCL_TRUE)


def f_meet(left: FoclFormula, right: FoclFormula) -> FoclFormula:
    return FNot(FUnion(FNot(left), FNot(right)))


def f_implies(left: FoclFormula, right: FoclFormula) -> FoclFormula:
    return FUnion(FNot(left), right)


def f_closure(f: FoclFormula) -> FoclFormula:
    return FCoalesce(f, FOCL_TRUE)


def f_disj(left: FoclFormula, right: FoclFormula) -> FoclFormula:
    return FUnion(FUnion(left, right), FCoalesce(left, right))


def f_forall(var: str, type_name: str, pred: Predicate, body: FoclFormula) -> FoclFormula:
    return FNot(FExists(var, type_name, pred, FNot(body)))


@dataclass(frozen=True)
class ZConst:
    value: Value


@dataclass(frozen=True)
class ZBool:
    formula: FoclFormula


@dataclass(frozen=True)
class ZPlus:
    left: "WfoclFormula"
    right: "WfoclFormula"


@dataclass(frozen=True)
class ZTimes:
    left: "WfoclFormula"
    right: "WfoclFormula"


@dataclass(frozen=True)
class ZCoalesce:
    left: "WfoclFormula"
    right: "WfoclFormula"


@dataclass(frozen=True)
class ZClosure:
    inner: "WfoclFormula"


@dataclass(frozen=True)
class ZOplus:
    var: str
    type_name: str
    pred: Predicate
    body: "WfoclFormula"


@dataclass(frozen=True)
class ZOtimes:
    var: str
    type_name: str
    pred: Predicate
    body: "WfoclFormula"


@dataclass(frozen=True)
class ZOuplus:
    var: str
    type_name: str
    pred: Predicate
    body: "WfoclFormula"


@dataclass(frozen=True)
class ZPredGuard:
    """Weight selected by a component-identity condition, one elsewhere."""

    pred: Predicate
    body: "WfoclFormula"


WfoclFormula = (
    ZConst
    | ZBool
    | ZPlus
    | ZTimes
    | ZCoalesce
    | ZClosure
    | ZOplus
    | ZOtimes
    | ZOuplus
    | ZPredGuard
)

_QUANTIFIERS = (FExists, FSum, ZOplus, ZOtimes, ZOuplus)


def z_guard(f: FoclFormula, z: WfoclFormula) -> WfoclFormula:
    return ZPlus(ZBool(FNot(f)), ZTimes(ZBool(f), z))


def z_closure(z: WfoclFormula) -> WfoclFormula:
    return ZClosure(z)


def z_disj(z1: WfoclFormula, z2: WfoclFormula) -> WfoclFormula:
    return ZPlus(ZPlus(z1, z2), ZCoalesce(z1, z2))


# ---------------------------------------------------------------------------
# Substitution and free variables
# ---------------------------------------------------------------------------


def _subst_pil(phi: PilFormula, var: str, name: str) -> PilFormula:
    if isinstance(phi, PilAtom):
        if phi.port.owner == var:
            return PilAtom(Port(phi.port.name, name))
        return phi
    if isinstance(phi, PilTrue):
        return phi
    if isinstance(phi, PilNeg):
        return PilNeg(_subst_pil(phi.inner, var, name))
    return PilOr(_subst_pil(phi.left, var, name), _subst_pil(phi.right, var, name))


def _subst_pred(pred: Predicate, var: str, name: str) -> Predicate:
    if isinstance(pred, PredTrue):
        return pred
    if isinstance(pred, PredCmp):
        return PredCmp(
            name if pred.left == var else pred.left,
            name if pred.right == var else pred.right,
            pred.equal,
        )
    return PredAnd(_subst_pred(pred.left, var, name), _subst_pred(pred.right, var, name))


def substitute(node, var: str, component_name: str):
    """Capture-free replacement of a free component variable.

    Shadowing is rejected at construction time, so plain descent suffices;
    hitting a quantifier that binds the variable is a usage error.
    """
    if isinstance(node, (FTrue,)):
        return node
    if isinstance(node, FBool):
        return FBool(_subst_pil(node.formula, var, component_name))
    if isinstance(node, FNot):
        return FNot(substitute(node.inner, var, component_name))
    if isinstance(node, (FUnion, FCoalesce, ZPlus, ZTimes, ZCoalesce)):
        return type(node)(
            substitute(node.left, var, component_name),
            substitute(node.right, var, component_name),
        )
    if isinstance(node, _QUANTIFIERS):
        if node.var == var:
            raise UsageError(f"cannot substitute bound variable {var!r}")
        return type(node)(
            node.var,
            node.type_name,
            _subst_pred(node.pred, var, component_name),
            substitute(node.body, var, component_name),
        )
    if isinstance(node, ZConst):
        return node
    if isinstance(node, ZBool):
        return ZBool(substitute(node.formula, var, component_name))
    if isinstance(node, ZClosure):
        return ZClosure(substitute(node.inner, var, component_name))
    if isinstance(node, ZPredGuard):
        return ZPredGuard(
            _subst_pred(node.pred, var, component_name),
            substitute(node.body, var, component_name),
        )
    raise UsageError(f"not a first-order formula: {node!r}")


def check_no_shadowing(node, bound: frozenset[str] = frozenset()) -> None:
    if isinstance(node, _QUANTIFIERS):
        if node.var in bound:
            raise UsageError(f"quantifier variable {node.var!r} shadows an outer one")
        check_no_shadowing(node.body, bound | {node.var})
    elif isinstance(node, (FNot, ZClosure)):
        check_no_shadowing(node.inner, bound)
    elif isinstance(node, (FUnion, FCoalesce, ZPlus, ZTimes, ZCoalesce)):
        check_no_shadowing(node.left, bound)
        check_no_shadowing(node.right, bound)
    elif isinstance(node, ZBool):
        check_no_shadowing(node.formula, bound)
    elif isinstance(node, ZPredGuard):
        check_no_shadowing(node.body, bound)


# ---------------------------------------------------------------------------
# Grounding
# ---------------------------------------------------------------------------


def _owners_ok(phi: PilFormula, model: Model) -> None:
    from .interactions import pil_ports

    for p in pil_ports(phi):
        if p.owner is None:
            raise UsageError(f"port {p} is not qualified with a component")
        if not model.has_component(p.owner):
            raise UsageError(
                f"unbound variable or unknown component {p.owner!r} in {p}"
            )
        if p.name not in model.component(p.owner).ctype.ports:
            raise UsageError(
                f"component {p.owner} of type "
                f"{model.component(p.owner).ctype.name} has no port {p.name!r}"
            )


def ground_focl(f: FoclFormula, model: Model) -> PclFormula:
    """Expand quantifiers into finite combinations over the model."""
    if isinstance(f, FTrue):
        return PclTrue()
    if isinstance(f, FBool):
        _owners_ok(f.formula, model)
        return PclBool(f.formula)
    if isinstance(f, FNot):
        return PclNot(ground_focl(f.inner, model))
    if isinstance(f, FUnion):
        return PclUnion(ground_focl(f.left, model), ground_focl(f.right, model))
    if isinstance(f, FCoalesce):
        return PclCoalesce(ground_focl(f.left, model), ground_focl(f.right, model))
    if isinstance(f, FExists):
        grounded = _ground_instances(f, model, ground_focl)
        if not grounded:
            return PclNot(PclTrue())
        out = grounded[0]
        for g in grounded[1:]:
            out = PclUnion(out, g)
        return out
    if isinstance(f, FSum):
        grounded = _ground_instances(f, model, ground_focl)
        if not grounded:
            return PclNot(PclTrue())
        out = grounded[0]
        for g in grounded[1:]:
            out = PclCoalesce(out, g)
        return out
    raise UsageError(f"not a first-order formula: {f!r}")


def _ground_instances(node, model: Model, rec, *extra):
    # by grounding time, outer variables are substituted away, so any
    # predicate term besides this quantifier's own variable must name a
    # component of the model
    loose = [
        t
        for t in pred_terms(node.pred)
        if t != node.var and not model.has_component(t)
    ]
    if loose:
        raise UsageError(f"unbound variables in quantifier predicate: {sorted(loose)}")
    matches = matching_components(model, node.type_name, node.pred, var=node.var)
    return [
        rec(substitute(node.body, node.var, c.name), model, *extra) for c in matches
    ]


def ground_wfocl(z: WfoclFormula, model: Model, semiring: Semiring) -> WpclFormula:
    if isinstance(z, ZConst):
        return WConst(z.value)
    if isinstance(z, ZBool):
        return WBool(ground_focl(z.formula, model))
    if isinstance(z, ZPlus):
        return WPlus(ground_wfocl(z.left, model, semiring), ground_wfocl(z.right, model, semiring))
    if isinstance(z, ZTimes):
        return WTimes(ground_wfocl(z.left, model, semiring), ground_wfocl(z.right, model, semiring))
    if isinstance(z, ZCoalesce):
        return WCoalesce(ground_wfocl(z.left, model, semiring), ground_wfocl(z.right, model, semiring))
    if isinstance(z, ZClosure):
        return WClosure(ground_wfocl(z.inner, model, semiring))
    if isinstance(z, ZOplus):
        grounded = _ground_instances(z, model, ground_wfocl, semiring)
        if not grounded:
            return WConst(semiring.zero)
        out = grounded[0]
        for g in grounded[1:]:
            out = WPlus(out, g)
        return out
    if isinstance(z, ZOtimes):
        grounded = _ground_instances(z, model, ground_wfocl, semiring)
        if not grounded:
            return WConst(semiring.one)
        out = grounded[0]
        for g in grounded[1:]:
            out = WTimes(out, g)
        return out
    if isinstance(z, ZOuplus):
        grounded = _ground_instances(z, model, ground_wfocl, semiring)
        if not grounded:
            return WConst(semiring.zero)
        out = grounded[-1]
        for g in reversed(grounded[:-1]):
            out = WCoalesce(g, out)
        return out
    if isinstance(z, ZPredGuard):
        terms = pred_terms(z.pred)
        unknown = [t for t in terms if not model.has_component(t)]
        if unknown:
            raise UsageError(f"unbound variables in guard predicate: {unknown}")
        if pred_eval(z.pred, {}):
            return ground_wfocl(z.body, model, semiring)
        return WConst(semiring.one)
    raise UsageError(f"not a weighted first-order formula: {z!r}")


# ---------------------------------------------------------------------------
# Satisfaction and evaluation
# ---------------------------------------------------------------------------


def focl_satisfies(
    model: Model,
    gamma: Configuration,
    f: FoclFormula,
    caps: EvalCaps = DEFAULT_CAPS,
) -> bool:
    """Configurations straying outside the model's ports are unsatisfied."""
    check_no_shadowing(f)
    if not gamma.is_over(model.port_universe()):
        return False
    return pcl_satisfies(gamma, ground_focl(f, model), caps)


def wfocl_eval(
    z: WfoclFormula,
    model: Model,
    gamma: Configuration,
    semiring: Semiring,
    strategy: str = "auto",
    caps: EvalCaps = DEFAULT_CAPS,
) -> Value:
    check_no_shadowing(z)
    if not gamma.is_over(model.port_universe()):
        return semiring.zero
    grounded = ground_wfocl(z, model, semiring)
    return wpcl_value(grounded, gamma, semiring, strategy, caps)
