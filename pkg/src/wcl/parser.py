"""Recursive-descent parsers for formulas, configurations, and model files.

Dialects: ``pil`` (bare interaction formulas), ``pcl`` / ``wpcl``
(configuration level), ``focl`` / ``wfocl`` (first-order level).  Weighted
dialects need the active semiring so weight literals are interpreted and
range-checked on the spot.

Precedence, tightest first: unary (``!``, ``not``, ``~``, ``close``);
``&`` / ``/\\`` / ``(*)``; ``+`` / ``(#)``; ``|`` / ``\\/`` / ``(+)`` /
``or``; ``=>``; quantifier bodies extend as far right as possible.
Binary operators associate to the left, ``=>`` to the right.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .errors import ParseError, UsageError
from .focl import (
    FBool,
    FCoalesce,
    FExists,
    FNot,
    FSum,
    FTrue,
    FUnion,
    Model,
    Component,
    ComponentType,
    PRED_TRUE,
    PredAnd,
    PredCmp,
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
    f_closure,
    f_disj,
    f_forall,
    f_implies,
    f_meet,
    z_disj,
    z_guard,
)
from .interactions import (
    Configuration,
    Interaction,
    PilAtom,
    Port,
    PIL_TRUE,
    pil_and,
    pil_false,
    pil_neg,
    pil_or,
)
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
    pcl_implies,
    pcl_meet,
    wdisj,
    wguard,
)
from .semiring import Semiring

DIALECTS = ("pil", "pcl", "wpcl", "focl", "wfocl")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>\(\+\)|\(\*\)|\(\#\)|\\/|/\\|=>|!=|&&|[{}(),.:!&|~+=\-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'num', 'ident', a symbol string, or 'eof'
    text: str
    offset: int
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}",
                offset=pos,
                line=line,
                column=pos - line_start + 1,
            )
        if m.lastgroup == "ws":
            chunk = m.group()
            newlines = chunk.count("\n")
            if newlines:
                line += newlines
                line_start = m.start() + chunk.rfind("\n") + 1
            pos = m.end()
            continue
        kind = m.lastgroup
        value = m.group()
        if kind == "sym":
            kind = value
        tokens.append(Token(kind, value, m.start(), line, m.start() - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", n, line, n - line_start + 1))
    return tokens


_KEYWORDS = {
    "true",
    "false",
    "not",
    "or",
    "close",
    "guard",
    "pguard",
    "exists",
    "sum",
    "forall",
    "where",
    "Oplus",
    "Otimes",
    "Ouplus",
    "inf",
}


class _Parser:
    def __init__(self, text: str, dialect: str, semiring: Optional[Semiring]):
        if dialect not in DIALECTS:
            raise UsageError(f"unknown dialect {dialect!r} (one of {', '.join(DIALECTS)})")
        self.dialect = dialect
        self.weighted = dialect in ("wpcl", "wfocl")
        self.first_order = dialect in ("focl", "wfocl")
        if self.weighted and semiring is None:
            raise UsageError(f"dialect {dialect!r} needs a semiring for weight literals")
        self.semiring = semiring
        self.tokens = tokenize(text)
        self.pos = 0
        self.scope: list[str] = []

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at(self, *kinds: str) -> bool:
        return self.tokens[self.pos].kind in kinds

    def at_word(self, *words: str) -> bool:
        tok = self.tokens[self.pos]
        return tok.kind == "ident" and tok.text in words

    def eat(self, kind: str) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != kind:
            raise self.error(f"got {tok.text or 'end of input'!r}", expected=(kind,))
        self.pos += 1
        return tok

    def eat_word(self, word: str) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "ident" or tok.text != word:
            raise self.error(f"got {tok.text or 'end of input'!r}", expected=(word,))
        self.pos += 1
        return tok

    def error(self, message: str, expected=()) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.offset, tok.line, tok.column, expected)

    # -- dialect helpers ---------------------------------------------------

    def _need_weighted_dialect(self, what: str) -> None:
        if not self.weighted:
            raise self.error(f"{what} is not allowed in the {self.dialect} dialect")

    def _need_first_order(self, what: str) -> None:
        if not self.first_order:
            raise self.error(f"{what} is not allowed in the {self.dialect} dialect")

    def to_weighted(self, tagged):
        tag, node = tagged
        if tag == "w":
            return node
        return ZBool(node) if self.first_order else WBool(node)

    def to_unweighted(self, tagged, what: str):
        tag, node = tagged
        if tag == "w":
            raise self.error(f"{what} needs an unweighted operand")
        return node

    # -- grammar -----------------------------------------------------------

    def parse(self):
        if self.dialect == "pil":
            phi = self.parse_pil()
            self.eat("eof")
            return phi
        tagged = self.parse_expr()
        self.eat("eof")
        if self.weighted:
            return self.to_weighted(tagged)
        return self.to_unweighted(tagged, "this dialect")

    def parse_expr(self):
        return self.parse_implies()

    def parse_implies(self):
        left = self.parse_union()
        if self.at("=>"):
            self.next()
            right = self.parse_implies()
            lf = self.to_unweighted(left, "'=>'")
            rf = self.to_unweighted(right, "'=>'")
            build = f_implies if self.first_order else pcl_implies
            return ("u", build(lf, rf))
        return left

    def parse_union(self):
        left = self.parse_coalesce()
        while True:
            if self.at("\\/"):
                self.next()
                right = self.parse_coalesce()
                lf = self.to_unweighted(left, "'\\/'")
                rf = self.to_unweighted(right, "'\\/'")
                node = FUnion(lf, rf) if self.first_order else PclUnion(lf, rf)
                left = ("u", node)
            elif self.at("(+)"):
                self._need_weighted_dialect("'(+)'")
                self.next()
                right = self.parse_coalesce()
                lz, rz = self.to_weighted(left), self.to_weighted(right)
                node = ZPlus(lz, rz) if self.first_order else WPlus(lz, rz)
                left = ("w", node)
            elif self.at_word("or"):
                self.next()
                right = self.parse_coalesce()
                if left[0] == "w" or right[0] == "w":
                    self._need_weighted_dialect("weighted 'or'")
                    lz, rz = self.to_weighted(left), self.to_weighted(right)
                    node = z_disj(lz, rz) if self.first_order else wdisj(lz, rz)
                    left = ("w", node)
                else:
                    build = f_disj if self.first_order else pcl_disj
                    left = ("u", build(left[1], right[1]))
            else:
                return left

    def parse_coalesce(self):
        left = self.parse_conj()
        while True:
            if self.at("+"):
                self.next()
                right = self.parse_conj()
                lf = self.to_unweighted(left, "'+'")
                rf = self.to_unweighted(right, "'+'")
                node = FCoalesce(lf, rf) if self.first_order else PclCoalesce(lf, rf)
                left = ("u", node)
            elif self.at("(#)"):
                self._need_weighted_dialect("'(#)'")
                self.next()
                right = self.parse_conj()
                lz, rz = self.to_weighted(left), self.to_weighted(right)
                node = ZCoalesce(lz, rz) if self.first_order else WCoalesce(lz, rz)
                left = ("w", node)
            else:
                return left

    def parse_conj(self):
        left = self.parse_unary()
        while True:
            if self.at("/\\") or self.at("&"):
                self.next()
                right = self.parse_unary()
                lf = self.to_unweighted(left, "'/\\'")
                rf = self.to_unweighted(right, "'/\\'")
                build = f_meet if self.first_order else pcl_meet
                left = ("u", build(lf, rf))
            elif self.at("(*)"):
                self._need_weighted_dialect("'(*)'")
                self.next()
                right = self.parse_unary()
                lz, rz = self.to_weighted(left), self.to_weighted(right)
                node = ZTimes(lz, rz) if self.first_order else WTimes(lz, rz)
                left = ("w", node)
            else:
                return left

    def parse_unary(self):
        if self.at("!") or self.at_word("not"):
            self.next()
            operand = self.to_unweighted(self.parse_unary(), "negation")
            node = FNot(operand) if self.first_order else PclNot(operand)
            return ("u", node)
        if self.at("~"):
            self.next()
            operand = self.to_unweighted(self.parse_unary(), "closure '~'")
            build = f_closure if self.first_order else pcl_closure
            return ("u", build(operand))
        if self.at_word("close"):
            self._need_weighted_dialect("'close'")
            self.next()
            self.eat("(")
            inner = self.to_weighted(self.parse_expr())
            self.eat(")")
            node = ZClosure(inner) if self.first_order else WClosure(inner)
            return ("w", node)
        if self.at_word("guard"):
            self._need_weighted_dialect("'guard'")
            self.next()
            self.eat("(")
            condition = self.to_unweighted(self.parse_expr(), "guard condition")
            self.eat(",")
            body = self.to_weighted(self.parse_expr())
            self.eat(")")
            build = z_guard if self.first_order else wguard
            return ("w", build(condition, body))
        if self.at_word("pguard"):
            self._need_weighted_dialect("'pguard'")
            self._need_first_order("'pguard'")
            self.next()
            self.eat("(")
            pred = self.parse_pred()
            self.eat(",")
            body = self.to_weighted(self.parse_expr())
            self.eat(")")
            return ("w", ZPredGuard(pred, body))
        if self.at_word("exists", "sum", "forall", "Oplus", "Otimes", "Ouplus"):
            return self.parse_quantifier()
        return self.parse_atom()

    def parse_quantifier(self):
        kw = self.next().text
        self._need_first_order(f"{kw!r}")
        if kw in ("Oplus", "Otimes", "Ouplus"):
            self._need_weighted_dialect(f"{kw!r}")
        var_tok = self.eat("ident")
        var = var_tok.text
        if var in _KEYWORDS:
            raise self.error(f"{var!r} is a reserved word")
        if var in self.scope:
            raise self.error(f"quantifier variable {var!r} shadows an outer one")
        self.eat(":")
        type_name = self.eat("ident").text
        pred: Predicate = PRED_TRUE
        if self.at_word("where"):
            self.next()
            pred = self.parse_pred()
        self.eat(".")
        self.scope.append(var)
        try:
            body = self.parse_expr()
        finally:
            self.scope.pop()
        if kw == "exists":
            return ("u", FExists(var, type_name, pred, self.to_unweighted(body, kw)))
        if kw == "sum":
            return ("u", FSum(var, type_name, pred, self.to_unweighted(body, kw)))
        if kw == "forall":
            return ("u", f_forall(var, type_name, pred, self.to_unweighted(body, kw)))
        node_type = {"Oplus": ZOplus, "Otimes": ZOtimes, "Ouplus": ZOuplus}[kw]
        return ("w", node_type(var, type_name, pred, self.to_weighted(body)))

    def parse_atom(self):
        tok = self.peek()
        if self.at_word("true"):
            self.next()
            return ("u", FTrue() if self.first_order else PCL_TRUE)
        if self.at_word("false"):
            self.next()
            node = FNot(FTrue()) if self.first_order else PclNot(PCL_TRUE)
            return ("u", node)
        if self.at("num") or self.at_word("inf") or self.at("-"):
            self._need_weighted_dialect("a weight literal")
            text = self.next().text
            if text == "-":
                text += self.next_weight_tail()
            value = self._weight(text)
            return ("w", ZConst(value) if self.first_order else WConst(value))
        if self.at("{"):
            self.next()
            phi = self.parse_pil()
            self.eat("}")
            node = FBool(phi) if self.first_order else PclBool(phi)
            return ("u", node)
        if self.at("("):
            self.next()
            inner = self.parse_expr()
            self.eat(")")
            return inner
        if tok.kind == "ident":
            raise self.error(
                f"unexpected identifier {tok.text!r}; interaction formulas go in braces"
            )
        raise self.error(f"unexpected {tok.text or 'end of input'!r}")

    def next_weight_tail(self) -> str:
        if self.at("num"):
            return self.next().text
        if self.at_word("inf"):
            self.next()
            return "inf"
        raise self.error("'-' must be followed by a number or 'inf'")

    def _weight(self, text: str):
        try:
            return self.semiring.parse_weight(text)
        except UsageError as exc:
            raise self.error(str(exc)) from None

    # -- interaction formulas (inside braces, or the whole pil dialect) ----

    def parse_pil(self):
        return self.parse_pil_or()

    def parse_pil_or(self):
        left = self.parse_pil_and()
        while self.at("|"):
            self.next()
            left = pil_or(left, self.parse_pil_and())
        return left

    def parse_pil_and(self):
        left = self.parse_pil_unary()
        while self.at("&"):
            self.next()
            left = pil_and(left, self.parse_pil_unary())
        return left

    def parse_pil_unary(self):
        if self.at("!"):
            self.next()
            return pil_neg(self.parse_pil_unary())
        if self.at("("):
            self.next()
            inner = self.parse_pil_or()
            self.eat(")")
            return inner
        if self.at_word("true"):
            self.next()
            return PIL_TRUE
        if self.at_word("false"):
            self.next()
            return pil_false()
        if self.at("ident"):
            return PilAtom(self.parse_port())
        raise self.error(
            f"unexpected {self.peek().text or 'end of input'!r} in interaction formula"
        )

    def parse_port(self) -> Port:
        first = self.eat("ident").text
        if first in ("true", "false"):
            raise self.error(f"{first!r} is not a port name")
        if self.at("."):
            self.next()
            second = self.eat("ident").text
            return Port(second, first)
        return Port(first)

    # -- predicates ----------------------------------------------------------

    def parse_pred(self) -> Predicate:
        left = self.parse_pred_atom()
        while self.at("&&"):
            self.next()
            left = PredAnd(left, self.parse_pred_atom())
        return left

    def parse_pred_atom(self) -> Predicate:
        if self.at("("):
            self.next()
            inner = self.parse_pred()
            self.eat(")")
            return inner
        if self.at_word("true"):
            self.next()
            return PRED_TRUE
        left = self.eat("ident").text
        if self.at("="):
            self.next()
            return PredCmp(left, self.eat("ident").text, True)
        if self.at("!="):
            self.next()
            return PredCmp(left, self.eat("ident").text, False)
        raise self.error("expected '=' or '!=' in predicate")


def parse_formula(text: str, dialect: str, semiring: Optional[Semiring] = None):
    """Parse ``text`` in the given dialect; weighted dialects need a semiring."""
    return _Parser(text, dialect, semiring).parse()


# ---------------------------------------------------------------------------
# Configurations
# ---------------------------------------------------------------------------


def parse_configuration(text: str) -> Configuration:
    """Configuration literal: ``{ {p, q}, {b1.m} }`` (whitespace-insensitive)."""
    parser = _Parser(text, "pcl", None)
    parser.eat("{")
    interactions = [_parse_interaction(parser)]
    while parser.at(","):
        parser.next()
        interactions.append(_parse_interaction(parser))
    parser.eat("}")
    parser.eat("eof")
    return Configuration(interactions)


def _parse_interaction(parser: _Parser) -> Interaction:
    parser.eat("{")
    ports = [parser.parse_port()]
    while parser.at(","):
        parser.next()
        ports.append(parser.parse_port())
    parser.eat("}")
    return Interaction(ports)


def parse_interaction(text: str) -> Interaction:
    parser = _Parser(text, "pcl", None)
    inter = _parse_interaction(parser)
    parser.eat("eof")
    return inter


def parse_ports(text: str) -> tuple[Port, ...]:
    """Comma-separated port list, e.g. ``p,q`` or ``b1.m,b2.m``."""
    from .interactions import port_universe

    parser = _Parser(text, "pcl", None)
    ports = [parser.parse_port()]
    while parser.at(","):
        parser.next()
        ports.append(parser.parse_port())
    parser.eat("eof")
    return port_universe(ports)


# ---------------------------------------------------------------------------
# Model files
# ---------------------------------------------------------------------------


def parse_model(text: str) -> Model:
    """Model file: ``type <Name> ports <p1>,<p2>`` and ``component <n> : <T>`` lines."""
    types: dict[str, ComponentType] = {}
    pending: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "type":
            if len(fields) < 4 or fields[2] != "ports":
                raise ParseError("expected 'type <Name> ports <p1>,<p2>'", line=lineno)
            name = fields[1]
            ports = tuple(p.strip() for p in " ".join(fields[3:]).split(",") if p.strip())
            if not ports:
                raise ParseError(f"type {name} declares no ports", line=lineno)
            if name in types:
                raise ParseError(f"duplicate type {name}", line=lineno)
            types[name] = ComponentType(name, ports)
        elif fields[0] == "component":
            rest = " ".join(fields[1:])
            if ":" not in rest:
                raise ParseError("expected 'component <name> : <TypeName>'", line=lineno)
            name, _, type_name = (part.strip() for part in rest.partition(":"))
            if not name or not type_name:
                raise ParseError("expected 'component <name> : <TypeName>'", line=lineno)
            pending.append((name, type_name, lineno))
        else:
            raise ParseError(f"unknown declaration {fields[0]!r}", line=lineno)
    components = []
    for name, type_name, lineno in pending:
        if type_name not in types:
            raise ParseError(f"component {name} has undeclared type {type_name}", line=lineno)
        components.append(Component(name, types[type_name]))
    try:
        return Model(types.values(), components)
    except UsageError as exc:
        raise ParseError(str(exc)) from None
