"""Full monomials, full normal forms, and normal-form based equivalence.

A full monomial mentions every port of the universe, positively or
negated, so it is satisfied by exactly one interaction.  A coalescing of
full monomials is therefore the indicator of exactly one configuration,
and a weighted formula in full normal form is a sum of such indicators
scaled by coefficients.  That makes the canonical representation here a
finite map from configurations to coefficients: two terms with the same
monomial set merge by adding coefficients, distinct terms have distinct
keys, and zero coefficients are dropped.

The construction is by structural induction:

* a constant becomes that coefficient on every configuration;
* an unweighted formula becomes coefficient one on its models;
* a sum merges term maps pointwise;
* a product keeps only keys present on both sides (distinct monomial sums
  multiply to the zero polynomial) and multiplies coefficients;
* a coalescing convolves the two maps, uniting keys and multiplying
  coefficients, merging collisions additively;
* a closure replaces each coefficient by the sum over all sub-keys
  (subset-sum transform).

Because the empty sum is not expressible in the normal-form grammar, the
empty map stands for the zero polynomial and prints as the formula ``0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import CapExceeded, UsageError
from .interactions import (
    Configuration,
    Interaction,
    PilFormula,
    Port,
    enumerate_configurations,
    enumerate_interactions,
    monomial,
    port_universe,
)
from .pcl import (
    DEFAULT_CAPS,
    EvalCaps,
    PclBool,
    PclCoalesce,
    PclFormula,
    WBool,
    WClosure,
    WCoalesce,
    WConst,
    WPlus,
    WTimes,
    WpclFormula,
    _indicator_poly,
    _materialize,
    full_configuration,
)
from .semiring import Semiring, Value


@dataclass(frozen=True, order=True)
class FullMonomial:
    """A monomial over the whole universe: positives plus negated rest."""

    positives: tuple[Port, ...]
    negatives: tuple[Port, ...]

    def interaction(self) -> Interaction:
        return Interaction(self.positives)

    def formula(self) -> PilFormula:
        return monomial(self.positives, self.negatives)


def full_monomial(a: Interaction, universe: Sequence[Port]) -> FullMonomial:
    ports = port_universe(universe)
    pos = set(a.ports)
    if not pos.issubset(ports):
        raise UsageError("interaction is not over the given universe")
    return FullMonomial(a.ports, tuple(p for p in ports if p not in pos))


def config_to_monomials(gamma: Configuration, universe: Sequence[Port]) -> tuple[FullMonomial, ...]:
    """The canonical monomial set whose coalescing is satisfied exactly by gamma."""
    return tuple(full_monomial(a, universe) for a in gamma.interactions)


def monomials_to_config(monomials: Iterable[FullMonomial]) -> Configuration:
    return Configuration(m.interaction() for m in monomials)


class FullNormalForm:
    """Canonical term map: configuration key -> nonzero coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Configuration, Value]):
        self.terms = terms

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __eq__(self, other) -> bool:
        return isinstance(other, FullNormalForm) and self.terms == other.terms

    def coefficient(self, gamma: Configuration, semiring: Semiring) -> Value:
        return self.terms.get(gamma, semiring.zero)

    def equals(self, other: "FullNormalForm", semiring: Semiring, tol: float = 1e-9) -> bool:
        if self.terms.keys() != other.terms.keys():
            return False
        return all(
            semiring.eq(v, other.terms[k], tol) for k, v in self.terms.items()
        )

    def __repr__(self) -> str:
        return f"FullNormalForm({len(self.terms)} terms)"


def _check_universe(universe: Sequence[Port], caps: EvalCaps) -> tuple[Port, ...]:
    ports = port_universe(universe)
    if len(ports) > caps.enum_ports:
        raise CapExceeded(
            f"universe too large: normal forms over {len(ports)} ports exceed "
            f"the cap of {caps.enum_ports} "
            f"({2 ** (2 ** len(ports) - 1) - 1} candidate terms)"
        )
    return ports


def fnf_of_pcl(
    f: PclFormula,
    universe: Sequence[Port],
    semiring: Semiring,
    caps: EvalCaps = DEFAULT_CAPS,
) -> FullNormalForm:
    """One coefficient-one term per satisfying configuration.

    The model set is computed on the indicator-polynomial representation,
    which survives coalescing-heavy formulas that a per-configuration
    satisfaction sweep could not.
    """
    ports = _check_universe(universe, caps)
    ambient = full_configuration(ports)
    poly = _materialize(_indicator_poly(f, ambient, semiring, caps), ambient, semiring, caps)
    one = semiring.one
    terms = {gamma: one for gamma, value in poly.table.items() if value == one}
    return FullNormalForm(terms)


def fnf_of_wpcl(
    zeta: WpclFormula,
    universe: Sequence[Port],
    semiring: Semiring,
    caps: EvalCaps = DEFAULT_CAPS,
) -> FullNormalForm:
    ports = _check_universe(universe, caps)
    return FullNormalForm(_build(zeta, ports, semiring, caps))


def _build(zeta, ports, K, caps) -> dict[Configuration, Value]:
    zero = K.zero
    if isinstance(zeta, WConst):
        if zeta.value == zero:
            return {}
        return {
            gamma: zeta.value
            for gamma in enumerate_configurations(ports, caps.enum_ports)
        }
    if isinstance(zeta, WBool):
        return dict(fnf_of_pcl(zeta.formula, ports, K, caps).terms)
    if isinstance(zeta, WPlus):
        left = _build(zeta.left, ports, K, caps)
        right = _build(zeta.right, ports, K, caps)
        out = dict(left)
        for key, v in right.items():
            prev = out.get(key)
            merged = v if prev is None else K.plus(prev, v)
            if merged == zero:
                out.pop(key, None)
            else:
                out[key] = merged
        return out
    if isinstance(zeta, WTimes):
        left = _build(zeta.left, ports, K, caps)
        right = _build(zeta.right, ports, K, caps)
        if len(left) > len(right):
            left, right = right, left
        out = {}
        for key, v in left.items():
            w = right.get(key)
            if w is None:
                continue
            merged = K.times(v, w)
            if merged != zero:
                out[key] = merged
        return out
    if isinstance(zeta, WCoalesce):
        left = _build(zeta.left, ports, K, caps)
        right = _build(zeta.right, ports, K, caps)
        if len(left) * len(right) > caps.pair_budget:
            raise CapExceeded(
                f"normal-form coalescing of {len(left)} x {len(right)} terms "
                "exceeds the pair budget"
            )
        out: dict[Configuration, Value] = {}
        for k1, v1 in left.items():
            for k2, v2 in right.items():
                v = K.times(v1, v2)
                if v == zero:
                    continue
                key = k1.union(k2)
                prev = out.get(key)
                merged = v if prev is None else K.plus(prev, v)
                out[key] = merged
        return {k: v for k, v in out.items() if v != zero}
    if isinstance(zeta, WClosure):
        inner = _build(zeta.inner, ports, K, caps)
        return _subset_sum(inner, ports, K, caps)
    raise UsageError(f"not a weighted configuration-logic formula: {zeta!r}")


def _subset_sum(terms, ports, K, caps) -> dict[Configuration, Value]:
    """Map each configuration to the sum of coefficients on its subsets."""
    if not terms:
        return {}
    interactions = enumerate_interactions(ports)
    index = {a: i for i, a in enumerate(interactions)}
    n = len(interactions)
    size = 1 << n
    zero = K.zero
    values = [zero] * size
    for gamma, v in terms.items():
        mask = 0
        for a in gamma.interactions:
            mask |= 1 << index[a]
        values[mask] = v
    plus = K.plus
    for bit in range(n):
        step = 1 << bit
        for mask in range(size):
            if mask & step:
                lower = values[mask ^ step]
                if lower != zero:
                    values[mask] = plus(values[mask], lower)
    out = {}
    for mask in range(1, size):
        v = values[mask]
        if v != zero:
            gamma = Configuration._from_sorted(
                tuple(interactions[i] for i in range(n) if mask & (1 << i))
            )
            out[gamma] = v
    return out


def fnf_eval(fnf: FullNormalForm, gamma: Configuration, semiring: Semiring) -> Value:
    """A monomial-sum indicator is one exactly at its own configuration."""
    return fnf.terms.get(gamma, semiring.zero)


def fnf_to_formula(
    fnf: FullNormalForm, universe: Sequence[Port], semiring: Semiring
) -> WpclFormula:
    """Literal sum-of-scaled-indicators rendering; the empty map prints as 0."""
    ports = port_universe(universe)
    result: Optional[WpclFormula] = None
    for gamma, coeff in fnf:
        parts = [PclBool(m.formula()) for m in config_to_monomials(gamma, ports)]
        body: PclFormula = parts[0]
        for part in parts[1:]:
            body = PclCoalesce(body, part)
        term = WTimes(WConst(coeff), WBool(body))
        result = term if result is None else WPlus(result, term)
    if result is None:
        return WConst(semiring.zero)
    return result


def fnf_equiv(
    z1: WpclFormula,
    z2: WpclFormula,
    universe: Sequence[Port],
    semiring: Semiring,
    tol: float = 1e-9,
    caps: EvalCaps = DEFAULT_CAPS,
) -> bool:
    """Decide equivalence by comparing canonical normal forms."""
    f1 = fnf_of_wpcl(z1, universe, semiring, caps)
    f2 = fnf_of_wpcl(z2, universe, semiring, caps)
    return f1.equals(f2, semiring, tol)


def fnf_statements_hold(fnf: FullNormalForm, universe: Sequence[Port]) -> bool:
    """Structural checks: distinct monomials within a term, distinct terms.

    Both hold by construction of the representation; this verifies them on
    the materialized monomial sets rather than trusting the invariant.
    """
    ports = port_universe(universe)
    seen: set[tuple[FullMonomial, ...]] = set()
    for gamma, _coeff in fnf:
        monomials = config_to_monomials(gamma, ports)
        if len(set(monomials)) != len(monomials):
            return False
        if monomials in seen:
            return False
        seen.add(monomials)
        if monomials_to_config(monomials) != gamma:
            return False
    return True
