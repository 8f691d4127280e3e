"""Commutative semirings used as weight domains.

Six standard instances are provided: the natural numbers, the Boolean
semiring, min-plus (tropical), max-plus (arctical), the Viterbi semiring
on [0,1], and the fuzzy semiring on [0,1].  All are commutative; all but
the natural numbers are additively idempotent.

Values are plain Python payloads (``int`` for the exact carriers, ``float``
for the real ones, with ``math.inf`` / ``-math.inf`` as the tropical zero
elements).  A thin :class:`SemiringValue` wrapper is available when tagged
values with mixed-operand checking are wanted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable

from .errors import UsageError

Value = Any


@dataclass(frozen=True)
class Semiring:
    """A commutative semiring (carrier, plus, times, zero, one)."""

    name: str
    zero: Value
    one: Value
    idempotent: bool
    exact: bool  # integer carrier, compared exactly
    _plus: Callable[[Value, Value], Value]
    _times: Callable[[Value, Value], Value]
    _valid: Callable[[Value], bool]

    def plus(self, a: Value, b: Value) -> Value:
        return self._plus(a, b)

    def times(self, a: Value, b: Value) -> Value:
        return self._times(a, b)

    def sum(self, values: Iterable[Value]) -> Value:
        """Fold of plus; the empty sum is the zero element."""
        acc = self.zero
        for v in values:
            acc = self._plus(acc, v)
        return acc

    def prod(self, values: Iterable[Value]) -> Value:
        """Fold of times; the empty product is the one element."""
        acc = self.one
        for v in values:
            acc = self._times(acc, v)
        return acc

    def sum_repeat(self, value: Value, n: int) -> Value:
        """n-fold sum of a single value (n >= 0).

        Collapses to ``value`` on idempotent instances; the natural
        numbers are the only non-idempotent instance here.
        """
        if n <= 0:
            return self.zero
        if self.idempotent:
            return value
        return value * n

    def eq(self, a: Value, b: Value, tol: float = 1e-9) -> bool:
        """Equality: exact for integer carriers, tolerance for real ones.

        Infinities are equal only to themselves.
        """
        if tol < 0:
            raise UsageError("tolerance must be nonnegative")
        if a == b:
            return True
        if self.exact:
            return False
        if math.isinf(a) or math.isinf(b):
            return False
        return abs(a - b) <= tol

    def validate(self, value: Value) -> Value:
        if not self._valid(value):
            raise UsageError(f"{value!r} is not a valid {self.name} value")
        return value

    def parse_weight(self, text: str) -> Value:
        """Parse a formula weight literal as a member of this semiring.

        The bare literals ``0`` and ``1`` denote the semiring's zero and
        one elements, keeping formula text portable across instances;
        decimal forms like ``0.0`` denote carrier values.  ``inf`` and
        ``-inf`` are accepted only where they are the zero element.
        """
        text = text.strip()
        if text == "0":
            return self.zero
        if text == "1":
            return self.one
        return self.parse_carrier(text)

    def parse_carrier(self, text: str) -> Value:
        """Parse a carrier value (data files, weight tables)."""
        text = text.strip()
        if self.exact:
            try:
                value = int(text)
            except ValueError:
                raise UsageError(
                    f"{self.name} weights must be integer literals, got {text!r}"
                ) from None
        else:
            if text == "inf":
                value = math.inf
            elif text == "-inf":
                value = -math.inf
            else:
                try:
                    value = float(text)
                except ValueError:
                    raise UsageError(f"bad weight literal {text!r}") from None
            if math.isinf(value) and value != self.zero:
                raise UsageError(
                    f"'{text}' is not an element of the {self.name} semiring"
                )
        return self.validate(value)

    def format_weight(self, value: Value) -> str:
        return format_value(value)

    def __repr__(self) -> str:
        return f"Semiring({self.name})"


def format_value(value: Value) -> str:
    """Canonical printing: integers bare, reals to 9 significant decimals.

    Real values always carry a decimal point (or exponent) so they read
    back as carrier values rather than as the 0/1 constant literals.
    """
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if value == math.inf:
        return "inf"
    if value == -math.inf:
        return "-inf"
    text = f"{value:.9g}"
    if "." not in text and "e" not in text and "E" not in text:
        text += ".0"
    return text


def _nat_valid(v: Value) -> bool:
    return isinstance(v, int) and not isinstance(v, bool) and v >= 0


def _bool_valid(v: Value) -> bool:
    return v in (0, 1)


def _minplus_valid(v: Value) -> bool:
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        return False
    return v == math.inf or (not math.isnan(v) and 0 <= v < math.inf)


def _maxplus_valid(v: Value) -> bool:
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        return False
    return v == -math.inf or (not math.isnan(v) and 0 <= v < math.inf)


def _unit_valid(v: Value) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and 0 <= v <= 1


NATURAL = Semiring(
    name="nat",
    zero=0,
    one=1,
    idempotent=False,
    exact=True,
    _plus=lambda a, b: a + b,
    _times=lambda a, b: a * b,
    _valid=_nat_valid,
)

BOOLEAN = Semiring(
    name="bool",
    zero=0,
    one=1,
    idempotent=True,
    exact=True,
    _plus=lambda a, b: a | b,
    _times=lambda a, b: a & b,
    _valid=_bool_valid,
)

MIN_PLUS = Semiring(
    name="minplus",
    zero=math.inf,
    one=0.0,
    idempotent=True,
    exact=False,
    _plus=min,
    _times=lambda a, b: a + b,
    _valid=_minplus_valid,
)

MAX_PLUS = Semiring(
    name="maxplus",
    zero=-math.inf,
    one=0.0,
    idempotent=True,
    exact=False,
    _plus=max,
    _times=lambda a, b: a + b,
    _valid=_maxplus_valid,
)

VITERBI = Semiring(
    name="viterbi",
    zero=0.0,
    one=1.0,
    idempotent=True,
    exact=False,
    _plus=max,
    _times=lambda a, b: a * b,
    _valid=_unit_valid,
)

FUZZY = Semiring(
    name="fuzzy",
    zero=0.0,
    one=1.0,
    idempotent=True,
    exact=False,
    _plus=max,
    _times=min,
    _valid=_unit_valid,
)

ALL_SEMIRINGS = (NATURAL, BOOLEAN, MIN_PLUS, MAX_PLUS, VITERBI, FUZZY)
IDEMPOTENT_SEMIRINGS = tuple(s for s in ALL_SEMIRINGS if s.idempotent)

_REGISTRY = {s.name: s for s in ALL_SEMIRINGS}
_REGISTRY.update({"natural": NATURAL, "boolean": BOOLEAN, "min-plus": MIN_PLUS, "max-plus": MAX_PLUS})


def get_semiring(name: str) -> Semiring:
    try:
        return _REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(set(s.name for s in ALL_SEMIRINGS)))
        raise UsageError(f"unknown semiring {name!r} (one of: {known})") from None


@dataclass(frozen=True)
class SemiringValue:
    """A tagged semiring element; arithmetic rejects mixed-semiring operands."""

    semiring: Semiring
    payload: Value

    def _check(self, other: "SemiringValue") -> None:
        if not isinstance(other, SemiringValue):
            raise UsageError("operand is not a SemiringValue")
        if other.semiring is not self.semiring:
            raise UsageError(
                f"mixed-semiring operands: {self.semiring.name} vs {other.semiring.name}"
            )

    def __add__(self, other: "SemiringValue") -> "SemiringValue":
        self._check(other)
        return SemiringValue(self.semiring, self.semiring.plus(self.payload, other.payload))

    def __mul__(self, other: "SemiringValue") -> "SemiringValue":
        self._check(other)
        return SemiringValue(self.semiring, self.semiring.times(self.payload, other.payload))

    def eq(self, other: "SemiringValue", tol: float = 1e-9) -> bool:
        self._check(other)
        return self.semiring.eq(self.payload, other.payload, tol)

    def __str__(self) -> str:
        return format_value(self.payload)


def sr_plus(k1: SemiringValue, k2: SemiringValue) -> SemiringValue:
    return k1 + k2


def sr_times(k1: SemiringValue, k2: SemiringValue) -> SemiringValue:
    return k1 * k2


def sr_fold_sum(semiring: Semiring, values: Iterable[Value]) -> Value:
    return semiring.sum(values)


def sr_fold_prod(semiring: Semiring, values: Iterable[Value]) -> Value:
    return semiring.prod(values)


def sr_eq(k1: SemiringValue, k2: SemiringValue, tol: float = 1e-9) -> bool:
    return k1.eq(k2, tol)
