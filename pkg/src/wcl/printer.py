"""Canonical text rendering of formulas, predicates, and values.

Printing targets the same surface syntax the parser accepts, with parens
inserted per the precedence table, so parsing a printed formula yields the
identical tree.  Derived connectives that expand at construction print in
sugared form whenever the expansion pattern is recognizable (conjunction,
meet, closure, universal quantification); the sugar reparses to the same
expansion.
"""

from __future__ import annotations

from .errors import UsageError
from .focl import (
    FBool,
    FCoalesce,
    FExists,
    FNot,
    FSum,
    FTrue,
    FUnion,
    FoclFormula,
    PredAnd,
    PredCmp,
    PredTrue,
    Predicate,
    ZBool,
    ZClosure,
    ZCoalesce,
    ZConst,
    ZOplus,
    ZOtimes,
    ZOuplus,
    ZPlus,
    ZPredGuard,
    ZTimes,
    WfoclFormula,
)
from .interactions import PilAtom, PilFormula, PilNeg, PilOr, PilTrue
from .pcl import (
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
)
from .semiring import format_value

_PREC_QUANT = 0
_PREC_UNION = 2
_PREC_COAL = 3
_PREC_CONJ = 4
_PREC_UNARY = 5
_PREC_ATOM = 6


def _wrap(text: str, prec: int, required: int) -> str:
    return f"({text})" if prec < required else text


# ---------------------------------------------------------------------------
# Interaction-level formulas
# ---------------------------------------------------------------------------


def pil_to_text(phi: PilFormula, required: int = 0) -> str:
    from .interactions import pil_neg

    if isinstance(phi, PilTrue):
        return "true"
    if isinstance(phi, PilAtom):
        return str(phi.port)
    if isinstance(phi, PilNeg):
        if isinstance(phi.inner, PilTrue):
            return "false"
        if isinstance(phi.inner, PilOr):
            # A negated disjunction prints as the conjunction it denotes.
            left = pil_to_text(pil_neg(phi.inner.left), _PREC_CONJ)
            right = pil_to_text(pil_neg(phi.inner.right), _PREC_CONJ + 1)
            return _wrap(f"{left} & {right}", _PREC_CONJ, required)
        return "!" + pil_to_text(phi.inner, _PREC_UNARY)
    left = pil_to_text(phi.left, _PREC_UNION)
    right = pil_to_text(phi.right, _PREC_UNION + 1)
    return _wrap(f"{left} | {right}", _PREC_UNION, required)


# ---------------------------------------------------------------------------
# Configuration-level formulas
# ---------------------------------------------------------------------------


def pcl_to_text(f: PclFormula, required: int = 0) -> str:
    if isinstance(f, PclTrue):
        return "true"
    if isinstance(f, PclBool):
        return "{" + pil_to_text(f.formula) + "}"
    if isinstance(f, PclNot):
        inner = f.inner
        if isinstance(inner, PclTrue):
            return "false"
        if (
            isinstance(inner, PclUnion)
            and isinstance(inner.left, PclNot)
            and isinstance(inner.right, PclNot)
        ):
            left = pcl_to_text(inner.left.inner, _PREC_CONJ)
            right = pcl_to_text(inner.right.inner, _PREC_CONJ + 1)
            return _wrap(f"{left} /\\ {right}", _PREC_CONJ, required)
        return "not " + pcl_to_text(inner, _PREC_UNARY)
    if isinstance(f, PclUnion):
        left = pcl_to_text(f.left, _PREC_UNION)
        right = pcl_to_text(f.right, _PREC_UNION + 1)
        return _wrap(f"{left} \\/ {right}", _PREC_UNION, required)
    if isinstance(f, PclCoalesce):
        if isinstance(f.right, PclTrue):
            return "~" + pcl_to_text(f.left, _PREC_UNARY)
        left = pcl_to_text(f.left, _PREC_COAL)
        right = pcl_to_text(f.right, _PREC_COAL + 1)
        return _wrap(f"{left} + {right}", _PREC_COAL, required)
    raise UsageError(f"cannot print {f!r}")


def wpcl_to_text(z: WpclFormula, required: int = 0) -> str:
    if isinstance(z, WConst):
        return format_value(z.value)
    if isinstance(z, WBool):
        return pcl_to_text(z.formula, required)
    if isinstance(z, WPlus):
        left = wpcl_to_text(z.left, _PREC_UNION)
        right = wpcl_to_text(z.right, _PREC_UNION + 1)
        return _wrap(f"{left} (+) {right}", _PREC_UNION, required)
    if isinstance(z, WTimes):
        left = wpcl_to_text(z.left, _PREC_CONJ)
        right = wpcl_to_text(z.right, _PREC_CONJ + 1)
        return _wrap(f"{left} (*) {right}", _PREC_CONJ, required)
    if isinstance(z, WCoalesce):
        left = wpcl_to_text(z.left, _PREC_COAL)
        right = wpcl_to_text(z.right, _PREC_COAL + 1)
        return _wrap(f"{left} (#) {right}", _PREC_COAL, required)
    if isinstance(z, WClosure):
        return "close(" + wpcl_to_text(z.inner) + ")"
    raise UsageError(f"cannot print {z!r}")


# ---------------------------------------------------------------------------
# First-order formulas
# ---------------------------------------------------------------------------


def pred_to_text(pred: Predicate) -> str:
    if isinstance(pred, PredTrue):
        return "true"
    if isinstance(pred, PredCmp):
        op = "=" if pred.equal else "!="
        return f"{pred.left} {op} {pred.right}"
    return f"{pred_to_text(pred.left)} && {pred_to_text(pred.right)}"


def _quant_head(kind: str, var: str, type_name: str, pred) -> str:
    head = f"{kind} {var}:{type_name}"
    if not isinstance(pred, PredTrue):
        head += f" where {pred_to_text(pred)}"
    return head


def focl_to_text(f: FoclFormula, required: int = 0) -> str:
    if isinstance(f, FTrue):
        return "true"
    if isinstance(f, FBool):
        return "{" + pil_to_text(f.formula) + "}"
    if isinstance(f, FNot):
        inner = f.inner
        if isinstance(inner, FTrue):
            return "false"
        if isinstance(inner, FExists) and isinstance(inner.body, FNot):
            head = _quant_head("forall", inner.var, inner.type_name, inner.pred)
            body = focl_to_text(inner.body.inner, _PREC_QUANT)
            return _wrap(f"{head} . {body}", _PREC_QUANT, required)
        if (
            isinstance(inner, FUnion)
            and isinstance(inner.left, FNot)
            and isinstance(inner.right, FNot)
        ):
            left = focl_to_text(inner.left.inner, _PREC_CONJ)
            right = focl_to_text(inner.right.inner, _PREC_CONJ + 1)
            return _wrap(f"{left} /\\ {right}", _PREC_CONJ, required)
        return "not " + focl_to_text(inner, _PREC_UNARY)
    if isinstance(f, FUnion):
        left = focl_to_text(f.left, _PREC_UNION)
        right = focl_to_text(f.right, _PREC_UNION + 1)
        return _wrap(f"{left} \\/ {right}", _PREC_UNION, required)
    if isinstance(f, FCoalesce):
        if isinstance(f.right, FTrue):
            return "~" + focl_to_text(f.left, _PREC_UNARY)
        left = focl_to_text(f.left, _PREC_COAL)
        right = focl_to_text(f.right, _PREC_COAL + 1)
        return _wrap(f"{left} + {right}", _PREC_COAL, required)
    if isinstance(f, FExists):
        head = _quant_head("exists", f.var, f.type_name, f.pred)
        return _wrap(f"{head} . {focl_to_text(f.body, _PREC_QUANT)}", _PREC_QUANT, required)
    if isinstance(f, FSum):
        head = _quant_head("sum", f.var, f.type_name, f.pred)
        return _wrap(f"{head} . {focl_to_text(f.body, _PREC_QUANT)}", _PREC_QUANT, required)
    raise UsageError(f"cannot print {f!r}")


def wfocl_to_text(z: WfoclFormula, required: int = 0) -> str:
    if isinstance(z, ZConst):
        return format_value(z.value)
    if isinstance(z, ZBool):
        return focl_to_text(z.formula, required)
    if isinstance(z, ZPlus):
        left = wfocl_to_text(z.left, _PREC_UNION)
        right = wfocl_to_text(z.right, _PREC_UNION + 1)
        return _wrap(f"{left} (+) {right}", _PREC_UNION, required)
    if isinstance(z, ZTimes):
        left = wfocl_to_text(z.left, _PREC_CONJ)
        right = wfocl_to_text(z.right, _PREC_CONJ + 1)
        return _wrap(f"{left} (*) {right}", _PREC_CONJ, required)
    if isinstance(z, ZCoalesce):
        left = wfocl_to_text(z.left, _PREC_COAL)
        right = wfocl_to_text(z.right, _PREC_COAL + 1)
        return _wrap(f"{left} (#) {right}", _PREC_COAL, required)
    if isinstance(z, ZClosure):
        return "close(" + wfocl_to_text(z.inner) + ")"
    if isinstance(z, ZPredGuard):
        return f"pguard({pred_to_text(z.pred)}, {wfocl_to_text(z.body)})"
    if isinstance(z, (ZOplus, ZOtimes, ZOuplus)):
        kind = {ZOplus: "Oplus", ZOtimes: "Otimes", ZOuplus: "Ouplus"}[type(z)]
        head = _quant_head(kind, z.var, z.type_name, z.pred)
        return _wrap(f"{head} . {wfocl_to_text(z.body, _PREC_QUANT)}", _PREC_QUANT, required)
    raise UsageError(f"cannot print {z!r}")


def formula_to_text(node) -> str:
    """Render any formula kind by dispatching on its AST family."""
    if isinstance(node, (PilTrue, PilAtom, PilNeg, PilOr)):
        return pil_to_text(node)
    if isinstance(node, (PclTrue, PclBool, PclNot, PclUnion, PclCoalesce)):
        return pcl_to_text(node)
    if isinstance(node, (WConst, WBool, WPlus, WTimes, WCoalesce, WClosure)):
        return wpcl_to_text(node)
    if isinstance(node, (FTrue, FBool, FNot, FUnion, FCoalesce, FExists, FSum)):
        return focl_to_text(node)
    return wfocl_to_text(node)
