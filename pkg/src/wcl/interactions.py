"""Ports, interactions, configurations, and the interaction-level logic.

An interaction is a nonempty set of ports executed jointly; a configuration
is a nonempty set of interactions.  Both are kept in a canonical sorted
order so that printing, hashing, and normal-form keys are deterministic.

The interaction-level logic has Boolean formulas over ports (atoms, bar
negation, disjunction), evaluated against a single interaction, plus a
weighted layer whose constants live in a semiring.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Iterator, Optional, Sequence

from .errors import CapExceeded, UsageError
from .semiring import Semiring, Value

DEFAULT_ENUM_PORT_CAP = 4


@total_ordering
@dataclass(frozen=True)
class Port:
    """A named connection point, optionally owned by a component (``c.p``)."""

    name: str
    owner: Optional[str] = None

    def __post_init__(self):
        if not self.name:
            raise UsageError("port names must be nonempty")

    @property
    def key(self):
        return (self.owner or "", self.name)

    def __lt__(self, other: "Port") -> bool:
        return self.key < other.key

    def __str__(self) -> str:
        return f"{self.owner}.{self.name}" if self.owner else self.name


def port(text: str) -> Port:
    """Build a port from ``p`` or qualified ``c.p`` text."""
    if "." in text:
        owner, _, name = text.partition(".")
        if not owner or not name or "." in name:
            raise UsageError(f"bad port name {text!r}")
        return Port(name, owner)
    return Port(text)


def port_universe(ports: Iterable[Port | str]) -> tuple[Port, ...]:
    """Canonicalize a port universe: sorted, duplicates rejected."""
    resolved = [p if isinstance(p, Port) else port(p) for p in ports]
    if not resolved:
        raise UsageError("a port universe must be nonempty")
    out = tuple(sorted(resolved))
    for a, b in zip(out, out[1:]):
        if a == b:
            raise UsageError(f"duplicate port {a} in universe")
    return out


class Interaction:
    """A nonempty, canonically ordered set of ports."""

    __slots__ = ("ports", "_set", "_hash")

    def __init__(self, ports: Iterable[Port]):
        items = tuple(sorted(set(ports)))
        if not items:
            raise UsageError("interactions are nonempty")
        object.__setattr__(self, "ports", items)
        object.__setattr__(self, "_set", frozenset(items))
        object.__setattr__(self, "_hash", hash(items))

    @classmethod
    def _from_sorted(cls, items: tuple[Port, ...]) -> "Interaction":
        self = object.__new__(cls)
        object.__setattr__(self, "ports", items)
        object.__setattr__(self, "_set", frozenset(items))
        object.__setattr__(self, "_hash", hash(items))
        return self

    def __contains__(self, p: Port) -> bool:
        return p in self._set

    def __iter__(self) -> Iterator[Port]:
        return iter(self.ports)

    def __len__(self) -> int:
        return len(self.ports)

    def __eq__(self, other) -> bool:
        return isinstance(other, Interaction) and self.ports == other.ports

    def __lt__(self, other: "Interaction") -> bool:
        return self.ports < other.ports

    def __le__(self, other: "Interaction") -> bool:
        return self.ports <= other.ports

    def __hash__(self) -> int:
        return self._hash

    def issubset(self, universe: Iterable[Port]) -> bool:
        return self._set.issubset(universe)

    def __str__(self) -> str:
        return "{" + ", ".join(str(p) for p in self.ports) + "}"

    def __repr__(self) -> str:
        return f"Interaction({str(self)})"


class Configuration:
    """A nonempty, canonically ordered set of interactions."""

    __slots__ = ("interactions", "_set", "_hash")

    def __init__(self, interactions: Iterable[Interaction]):
        items = tuple(sorted(set(interactions)))
        if not items:
            raise UsageError("configurations are nonempty")
        object.__setattr__(self, "interactions", items)
        object.__setattr__(self, "_set", frozenset(items))
        object.__setattr__(self, "_hash", hash(items))

    @classmethod
    def _from_sorted(cls, items: tuple[Interaction, ...]) -> "Configuration":
        self = object.__new__(cls)
        object.__setattr__(self, "interactions", items)
        object.__setattr__(self, "_set", frozenset(items))
        object.__setattr__(self, "_hash", hash(items))
        return self

    def __contains__(self, a: Interaction) -> bool:
        return a in self._set

    def __iter__(self) -> Iterator[Interaction]:
        return iter(self.interactions)

    def __len__(self) -> int:
        return len(self.interactions)

    def __eq__(self, other) -> bool:
        return isinstance(other, Configuration) and self.interactions == other.interactions

    def __lt__(self, other: "Configuration") -> bool:
        return self.interactions < other.interactions

    def __hash__(self) -> int:
        return self._hash

    def union(self, other: "Configuration") -> "Configuration":
        if self._set >= other._set:
            return self
        if other._set >= self._set:
            return other
        return Configuration(self._set | other._set)

    def issubset_of(self, other: "Configuration") -> bool:
        return self._set <= other._set

    def is_over(self, universe: Iterable[Port]) -> bool:
        u = set(universe)
        return all(a.issubset(u) for a in self.interactions)

    def __str__(self) -> str:
        return "{" + ", ".join(str(a) for a in self.interactions) + "}"

    def __repr__(self) -> str:
        return f"Configuration({str(self)})"


def interaction(ports_text: Iterable[str]) -> Interaction:
    return Interaction(port(t) for t in ports_text)


def configuration(groups: Iterable[Iterable[str]]) -> Configuration:
    return Configuration(interaction(g) for g in groups)


# ---------------------------------------------------------------------------
# Interaction-level Boolean formulas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PilTrue:
    pass


@dataclass(frozen=True)
class PilAtom:
    port: Port


@dataclass(frozen=True)
class PilNeg:
    inner: "PilFormula"


@dataclass(frozen=True)
class PilOr:
    left: "PilFormula"
    right: "PilFormula"


PilFormula = PilTrue | PilAtom | PilNeg | PilOr

PIL_TRUE = PilTrue()


def pil_neg(phi: PilFormula) -> PilFormula:
    """Bar negation, normalizing double bars away at construction."""
    if isinstance(phi, PilNeg):
        return phi.inner
    return PilNeg(phi)


def pil_false() -> PilFormula:
    return PilNeg(PIL_TRUE)


def pil_or(left: PilFormula, right: PilFormula) -> PilFormula:
    return PilOr(left, right)


def pil_and(left: PilFormula, right: PilFormula) -> PilFormula:
    return pil_neg(PilOr(pil_neg(left), pil_neg(right)))


def pil_and_all(parts: Sequence[PilFormula]) -> PilFormula:
    if not parts:
        return PIL_TRUE
    acc = parts[0]
    for p in parts[1:]:
        acc = pil_and(acc, p)
    return acc


def monomial(positive: Iterable[Port], negative: Iterable[Port] = ()) -> PilFormula:
    """Conjunction of positive and negated port literals (canonical order)."""
    lits: list[PilFormula] = [PilAtom(p) for p in sorted(positive)]
    lits += [pil_neg(PilAtom(p)) for p in sorted(negative)]
    if not lits:
        raise UsageError("monomials are nonempty")
    return pil_and_all(lits)


def pil_ports(phi: PilFormula) -> set[Port]:
    if isinstance(phi, PilTrue):
        return set()
    if isinstance(phi, PilAtom):
        return {phi.port}
    if isinstance(phi, PilNeg):
        return pil_ports(phi.inner)
    return pil_ports(phi.left) | pil_ports(phi.right)


def pil_owners(phi: PilFormula) -> set[str]:
    return {p.owner for p in pil_ports(phi) if p.owner is not None}


def pil_satisfies(a: Interaction, phi: PilFormula, universe: Sequence[Port] | None = None) -> bool:
    """Truth of ``phi`` under the valuation that makes exactly ``a`` true."""
    if universe is not None:
        extra = pil_ports(phi) - set(universe)
        if extra:
            raise UsageError(f"formula mentions ports outside the universe: {sorted(extra)}")
    return _pil_eval(a, phi)


def _pil_eval(a: Interaction, phi: PilFormula) -> bool:
    if isinstance(phi, PilAtom):
        return phi.port in a
    if isinstance(phi, PilTrue):
        return True
    if isinstance(phi, PilNeg):
        return not _pil_eval(a, phi.inner)
    return _pil_eval(a, phi.left) or _pil_eval(a, phi.right)


def characteristic_monomial(a: Interaction, universe: Sequence[Port]) -> PilFormula:
    """The monomial satisfied by ``a`` and by no other interaction over P."""
    u = set(universe)
    if not a.issubset(u):
        raise UsageError("interaction is not over the given universe")
    return monomial(a.ports, sorted(u - set(a.ports)))


# ---------------------------------------------------------------------------
# Weighted interaction formulas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WpConst:
    value: Value


@dataclass(frozen=True)
class WpBool:
    formula: PilFormula


@dataclass(frozen=True)
class WpPlus:
    left: "WpilFormula"
    right: "WpilFormula"


@dataclass(frozen=True)
class WpTimes:
    left: "WpilFormula"
    right: "WpilFormula"


WpilFormula = WpConst | WpBool | WpPlus | WpTimes


def wpil_eval(varphi: WpilFormula, a: Interaction, semiring: Semiring) -> Value:
    """Value of a weighted interaction formula at a single interaction."""
    if isinstance(varphi, WpConst):
        return varphi.value
    if isinstance(varphi, WpBool):
        return semiring.one if _pil_eval(a, varphi.formula) else semiring.zero
    if isinstance(varphi, WpPlus):
        return semiring.plus(wpil_eval(varphi.left, a, semiring), wpil_eval(varphi.right, a, semiring))
    return semiring.times(wpil_eval(varphi.left, a, semiring), wpil_eval(varphi.right, a, semiring))


# ---------------------------------------------------------------------------
# Finite universes
# ---------------------------------------------------------------------------


def enumerate_interactions(universe: Sequence[Port], cap: int = 16) -> list[Interaction]:
    """All nonempty subsets of P, in canonical order (2^|P| - 1 of them)."""
    ports = port_universe(universe)
    if len(ports) > cap:
        raise CapExceeded(f"universe too large: {len(ports)} ports exceeds the cap of {cap}")
    out = []
    for r in range(1, len(ports) + 1):
        for combo in itertools.combinations(ports, r):
            out.append(Interaction._from_sorted(combo))
    out.sort()
    return out


def enumerate_configurations(
    universe: Sequence[Port], cap: int = DEFAULT_ENUM_PORT_CAP
) -> list[Configuration]:
    """All nonempty sets of interactions over P (doubly exponential)."""
    ports = port_universe(universe)
    if len(ports) > cap:
        raise CapExceeded(
            f"universe too large: {len(ports)} ports exceeds the configuration "
            f"enumeration cap of {cap}"
        )
    inters = enumerate_interactions(ports)
    out = []
    for r in range(1, len(inters) + 1):
        for combo in itertools.combinations(inters, r):
            out.append(Configuration._from_sorted(combo))
    out.sort()
    return out
