"""Configuration logic and its weighted counterpart.

Unweighted formulas are satisfied by configurations; the weighted layer
assigns each configuration a semiring value.  The distinctive connective
is coalescing: a configuration satisfies ``f1 + f2`` when it splits into a
covering pair of nonempty parts satisfying the conjuncts, and the weighted
coalescing sums the products over all such ordered splits, each counted
once.

Two evaluation strategies are provided.  The direct strategy follows the
defining clauses, enumerating splits of the given configuration.  The
sparse strategy computes, bottom-up, the whole restriction of each
subformula's polynomial to the nonempty subsets of the target
configuration, representing it as a default value plus a table of
exceptions; coalescing then becomes a union-convolution of supports.  The
two strategies agree wherever both are defined.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Iterator, Optional, Sequence

from .errors import CapExceeded, UsageError
from .interactions import (
    Configuration,
    Interaction,
    PilFormula,
    Port,
    _pil_eval,
    pil_ports,
    port_universe,
    enumerate_configurations,
    enumerate_interactions,
)
from .semiring import Semiring, Value


@dataclass(frozen=True)
class EvalCaps:
    """Size caps guarding the exponential corners; all overridable."""

    coalesce_width: int = 12      # direct split enumeration: 3^n - 2 pairs
    closure_width: int = 16       # direct subset enumeration: 2^n - 1 subsets
    bool_table_width: int = 15    # sparse materialization of dense operands
    support_width: int = 14       # sparse power-set support of a Boolean leaf
    pair_budget: int = 2_000_000  # sparse convolution: |supp1| * |supp2|
    enum_ports: int = 4           # configuration enumeration / dense constants
    auto_direct_max: int = 5      # strategy "auto": direct up to this |gamma|

    @classmethod
    def from_dict(cls, data: dict) -> "EvalCaps":
        caps = cls()
        unknown = set(data) - set(caps.__dataclass_fields__)
        if unknown:
            raise UsageError(f"unknown cap names: {sorted(unknown)}")
        return replace(caps, **data)


DEFAULT_CAPS = EvalCaps()


# ---------------------------------------------------------------------------
# ASTs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PclTrue:
    pass


@dataclass(frozen=True)
class PclBool:
    formula: PilFormula


@dataclass(frozen=True)
class PclNot:
    inner: "PclFormula"


@dataclass(frozen=True)
class PclUnion:
    left: "PclFormula"
    right: "PclFormula"


@dataclass(frozen=True)
class PclCoalesce:
    left: "PclFormula"
    right: "PclFormula"


PclFormula = PclTrue | PclBool | PclNot | PclUnion | PclCoalesce

PCL_TRUE = PclTrue()


def pcl_false() -> PclFormula:
    return PclNot(PCL_TRUE)


def pcl_meet(left: PclFormula, right: PclFormula) -> PclFormula:
    return PclNot(PclUnion(PclNot(left), PclNot(right)))


def pcl_implies(left: PclFormula, right: PclFormula) -> PclFormula:
    return PclUnion(PclNot(left), right)


def pcl_closure(f: PclFormula) -> PclFormula:
    return PclCoalesce(f, PCL_TRUE)


def pcl_disj(left: PclFormula, right: PclFormula) -> PclFormula:
    return PclUnion(PclUnion(left, right), PclCoalesce(left, right))


def pcl_ports(f: PclFormula) -> set[Port]:
    if isinstance(f, PclTrue):
        return set()
    if isinstance(f, PclBool):
        return pil_ports(f.formula)
    if isinstance(f, PclNot):
        return pcl_ports(f.inner)
    return pcl_ports(f.left) | pcl_ports(f.right)


@dataclass(frozen=True)
class WConst:
    value: Value


@dataclass(frozen=True)
class WBool:
    formula: PclFormula


@dataclass(frozen=True)
class WPlus:
    left: "WpclFormula"
    right: "WpclFormula"


@dataclass(frozen=True)
class WTimes:
    left: "WpclFormula"
    right: "WpclFormula"


@dataclass(frozen=True)
class WCoalesce:
    left: "WpclFormula"
    right: "WpclFormula"


@dataclass(frozen=True)
class WClosure:
    """Aggregation over all nonempty sub-configurations of the argument."""

    inner: "WpclFormula"


WpclFormula = WConst | WBool | WPlus | WTimes | WCoalesce | WClosure


def wdisj(z1: WpclFormula, z2: WpclFormula) -> WpclFormula:
    """z1 or z2 or both at once: z1 (+) z2 (+) (z1 (#) z2)."""
    return WPlus(WPlus(z1, z2), WCoalesce(z1, z2))


def wguard(f: PclFormula, z: WpclFormula) -> WpclFormula:
    """Value of z where f holds, one elsewhere: not f (+) (f (*) z)."""
    return WPlus(WBool(PclNot(f)), WTimes(WBool(f), z))


def wpcl_ports(zeta: WpclFormula) -> set[Port]:
    if isinstance(zeta, WConst):
        return set()
    if isinstance(zeta, WBool):
        return pcl_ports(zeta.formula)
    if isinstance(zeta, WClosure):
        return wpcl_ports(zeta.inner)
    return wpcl_ports(zeta.left) | wpcl_ports(zeta.right)


def wpcl_constants(zeta: WpclFormula) -> list[Value]:
    if isinstance(zeta, WConst):
        return [zeta.value]
    if isinstance(zeta, WBool):
        return []
    if isinstance(zeta, WClosure):
        return wpcl_constants(zeta.inner)
    return wpcl_constants(zeta.left) + wpcl_constants(zeta.right)


def validate_weights(zeta: WpclFormula, semiring: Semiring) -> None:
    """Check that every constant in the formula lies in the semiring."""
    for value in wpcl_constants(zeta):
        semiring.validate(value)


# ---------------------------------------------------------------------------
# Splits and subsets of a configuration
# ---------------------------------------------------------------------------


def decompositions2(
    gamma: Configuration, cap: int = DEFAULT_CAPS.coalesce_width
) -> Iterator[tuple[Configuration, Configuration]]:
    """All ordered pairs (g1, g2) of nonempty parts with g1 | g2 == gamma.

    Each interaction is assigned to the left part, the right part, or
    both; assignments emptying a side are skipped, so there are
    3^|gamma| - 2 pairs, each yielded exactly once.
    """
    items = gamma.interactions
    n = len(items)
    if n > cap:
        raise CapExceeded(
            f"direct coalescing over {n} interactions exceeds the cap of {cap}; "
            "use the sparse strategy"
        )
    for codes in itertools.product((1, 2, 3), repeat=n):
        left = tuple(a for a, c in zip(items, codes) if c != 2)
        if not left:
            continue
        right = tuple(a for a, c in zip(items, codes) if c != 1)
        if not right:
            continue
        yield (
            Configuration._from_sorted(left),
            Configuration._from_sorted(right),
        )


def config_subsets(gamma: Configuration) -> Iterator[Configuration]:
    """All nonempty sub-configurations of gamma, smallest first."""
    items = gamma.interactions
    for r in range(1, len(items) + 1):
        for combo in itertools.combinations(items, r):
            yield Configuration._from_sorted(combo)


# ---------------------------------------------------------------------------
# Satisfaction
# ---------------------------------------------------------------------------


def pcl_satisfies(
    gamma: Configuration, f: PclFormula, caps: EvalCaps = DEFAULT_CAPS
) -> bool:
    """Does gamma satisfy f?  Coalescing searches covering splits."""
    return _sat(gamma, f, caps, {})


def _sat(gamma, f, caps, memo) -> bool:
    key = (id(f), gamma)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(f, PclBool):
        phi = f.formula
        result = all(_pil_eval(a, phi) for a in gamma.interactions)
    elif isinstance(f, PclTrue):
        result = True
    elif isinstance(f, PclNot):
        result = not _sat(gamma, f.inner, caps, memo)
    elif isinstance(f, PclUnion):
        result = _sat(gamma, f.left, caps, memo) or _sat(gamma, f.right, caps, memo)
    elif isinstance(f, PclCoalesce):
        result = _sat_coalesce(gamma, f, caps, memo)
    else:
        raise UsageError(f"not a configuration-logic formula: {f!r}")
    memo[key] = result
    return result


def _sat_coalesce(gamma, f, caps, memo) -> bool:
    # true + f and f + true reduce to a subset search; worth special-casing
    # because the closure macro uses them pervasively.
    left, right = f.left, f.right
    if isinstance(right, PclTrue) or isinstance(left, PclTrue):
        body = left if isinstance(right, PclTrue) else right
        return any(_sat(sub, body, caps, memo) for sub in config_subsets(gamma))
    for g1, g2 in decompositions2(gamma, caps.coalesce_width):
        if _sat(g1, left, caps, memo) and _sat(g2, right, caps, memo):
            return True
    return False


# ---------------------------------------------------------------------------
# Direct evaluation
# ---------------------------------------------------------------------------


def wpcl_eval(
    zeta: WpclFormula,
    gamma: Configuration,
    semiring: Semiring,
    caps: EvalCaps = DEFAULT_CAPS,
) -> Value:
    """Clause-by-clause evaluation at a single configuration."""
    return _eval(zeta, gamma, semiring, caps, {}, {})


def _eval(zeta, gamma, K, caps, memo, sat_memo) -> Value:
    key = (id(zeta), gamma)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(zeta, WConst):
        value = zeta.value
    elif isinstance(zeta, WBool):
        value = K.one if _sat(gamma, zeta.formula, caps, sat_memo) else K.zero
    elif isinstance(zeta, WPlus):
        value = K.plus(
            _eval(zeta.left, gamma, K, caps, memo, sat_memo),
            _eval(zeta.right, gamma, K, caps, memo, sat_memo),
        )
    elif isinstance(zeta, WTimes):
        value = K.times(
            _eval(zeta.left, gamma, K, caps, memo, sat_memo),
            _eval(zeta.right, gamma, K, caps, memo, sat_memo),
        )
    elif isinstance(zeta, WCoalesce):
        plus, times = K.plus, K.times
        value = K.zero
        for g1, g2 in decompositions2(gamma, caps.coalesce_width):
            value = plus(
                value,
                times(
                    _eval(zeta.left, g1, K, caps, memo, sat_memo),
                    _eval(zeta.right, g2, K, caps, memo, sat_memo),
                ),
            )
    elif isinstance(zeta, WClosure):
        if len(gamma) > caps.closure_width:
            raise CapExceeded(
                f"direct closure over {len(gamma)} interactions exceeds the cap "
                f"of {caps.closure_width}; use the sparse strategy"
            )
        value = K.sum(
            _eval(zeta.inner, sub, K, caps, memo, sat_memo)
            for sub in config_subsets(gamma)
        )
    else:
        raise UsageError(f"not a weighted configuration-logic formula: {zeta!r}")
    memo[key] = value
    return value


# ---------------------------------------------------------------------------
# Sparse evaluation
# ---------------------------------------------------------------------------


class Polynomial:
    """Restriction of a formula's semantics to the subsets of one configuration.

    ``table`` maps sub-configurations to values; every subset absent from
    the table has value ``default``.  A nonzero default is how dense
    constants are carried around without materializing 2^n entries.
    """

    __slots__ = ("default", "table")

    def __init__(self, default: Value, table: Optional[dict] = None):
        self.default = default
        self.table = table if table is not None else {}

    def value_at(self, gamma: Configuration) -> Value:
        return self.table.get(gamma, self.default)

    def support(self) -> dict:
        return self.table


def _poly_pointwise(op, p1: Polynomial, p2: Polynomial) -> Polynomial:
    default = op(p1.default, p2.default)
    table = {}
    for key in p1.table.keys() | p2.table.keys():
        v = op(p1.table.get(key, p1.default), p2.table.get(key, p2.default))
        if v != default:
            table[key] = v
    return Polynomial(default, table)


def _materialize(p: Polynomial, ambient: Configuration, K: Semiring, caps: EvalCaps) -> Polynomial:
    """Spell out a nonzero-default polynomial as an explicit table."""
    if p.default == K.zero:
        return p
    if len(ambient) > caps.bool_table_width:
        raise CapExceeded(
            f"dense operand over {len(ambient)} interactions exceeds the "
            f"materialization cap of {caps.bool_table_width}"
        )
    table = {}
    for sub in config_subsets(ambient):
        v = p.table.get(sub, p.default)
        if v != K.zero:
            table[sub] = v
    return Polynomial(K.zero, table)


def _poly_coalesce(
    p1: Polynomial, p2: Polynomial, ambient: Configuration, K: Semiring, caps: EvalCaps
) -> Polynomial:
    p1 = _materialize(p1, ambient, K, caps)
    p2 = _materialize(p2, ambient, K, caps)
    if len(p1.table) * len(p2.table) > caps.pair_budget:
        raise CapExceeded(
            f"coalescing convolution of {len(p1.table)} x {len(p2.table)} "
            "support entries exceeds the pair budget"
        )
    plus, times, zero = K.plus, K.times, K.zero
    table: dict = {}
    for g1, v1 in p1.table.items():
        for g2, v2 in p2.table.items():
            v = times(v1, v2)
            if v == zero:
                continue
            key = g1.union(g2)
            prev = table.get(key)
            table[key] = v if prev is None else plus(prev, v)
    return Polynomial(zero, {k: v for k, v in table.items() if v != zero})


def _poly_closure(
    p: Polynomial, ambient: Configuration, K: Semiring, caps: EvalCaps
) -> Polynomial:
    """Subset-sum transform: result(g) = sum of p over nonempty subsets of g."""
    n = len(ambient)
    if n > caps.bool_table_width:
        raise CapExceeded(
            f"closure materialization over {n} interactions exceeds the cap of "
            f"{caps.bool_table_width}"
        )
    items = ambient.interactions
    index = {a: i for i, a in enumerate(items)}
    size = 1 << n
    values = [p.default] * size
    values[0] = K.zero
    for sub, v in p.table.items():
        mask = 0
        for a in sub.interactions:
            mask |= 1 << index[a]
        values[mask] = v
    plus = K.plus
    for bit in range(n):
        step = 1 << bit
        for mask in range(size):
            if mask & step:
                values[mask] = plus(values[mask], values[mask ^ step])
    table = {}
    by_mask = _subsets_by_mask(items)
    for mask in range(1, size):
        v = values[mask]
        if v != K.zero:
            table[by_mask[mask]] = v
    return Polynomial(K.zero, table)


def _subsets_by_mask(items: tuple[Interaction, ...]) -> list:
    n = len(items)
    out: list = [None] * (1 << n)
    for mask in range(1, 1 << n):
        out[mask] = Configuration._from_sorted(
            tuple(items[i] for i in range(n) if mask & (1 << i))
        )
    return out


def _closure_total(p: Polynomial, ambient: Configuration, K: Semiring) -> Value:
    """Sum of p over every nonempty subset of the ambient configuration."""
    total = K.sum(p.table.values())
    if p.default != K.zero:
        rest = (1 << len(ambient)) - 1 - len(p.table)
        total = K.plus(total, K.sum_repeat(p.default, rest))
    return total


def _indicator_poly(
    f: PclFormula, ambient: Configuration, K: Semiring, caps: EvalCaps
) -> Polynomial:
    """Polynomial of an unweighted formula (value one where satisfied)."""
    one, zero = K.one, K.zero
    if isinstance(f, PclTrue):
        return Polynomial(one)
    if isinstance(f, PclBool):
        phi = f.formula
        sat = tuple(a for a in ambient.interactions if _pil_eval(a, phi))
        if len(sat) > caps.support_width:
            raise CapExceeded(
                f"interaction formula satisfied by {len(sat)} interactions "
                f"exceeds the support cap of {caps.support_width}"
            )
        table = {}
        for r in range(1, len(sat) + 1):
            for combo in itertools.combinations(sat, r):
                table[Configuration._from_sorted(combo)] = one
        return Polynomial(zero, table)
    if isinstance(f, PclNot):
        p = _indicator_poly(f.inner, ambient, K, caps)
        default = one if p.default == zero else zero
        table = {k: (one if v == zero else zero) for k, v in p.table.items()}
        return Polynomial(default, {k: v for k, v in table.items() if v != default})
    if isinstance(f, PclUnion):
        p1 = _indicator_poly(f.left, ambient, K, caps)
        p2 = _indicator_poly(f.right, ambient, K, caps)
        return _poly_pointwise(lambda a, b: one if (a == one or b == one) else zero, p1, p2)
    if isinstance(f, PclCoalesce):
        if isinstance(f.left, PclTrue) or isinstance(f.right, PclTrue):
            body = f.right if isinstance(f.left, PclTrue) else f.left
            inner = _materialize(_indicator_poly(body, ambient, K, caps), ambient, K, caps)
            return _upward_closure(inner, ambient, K, caps)
        p1 = _materialize(_indicator_poly(f.left, ambient, K, caps), ambient, K, caps)
        p2 = _materialize(_indicator_poly(f.right, ambient, K, caps), ambient, K, caps)
        if len(p1.table) * len(p2.table) > caps.pair_budget:
            raise CapExceeded(
                f"coalescing convolution of {len(p1.table)} x {len(p2.table)} "
                "satisfied-set entries exceeds the pair budget"
            )
        table: dict = {}
        for g1, v1 in p1.table.items():
            if v1 != one:
                continue
            for g2, v2 in p2.table.items():
                if v2 == one:
                    table[g1.union(g2)] = one
        return Polynomial(zero, table)
    raise UsageError(f"not a configuration-logic formula: {f!r}")


def _upward_closure(p: Polynomial, ambient: Configuration, K: Semiring, caps: EvalCaps) -> Polynomial:
    """Indicator of "some support entry is contained": one on all supersets."""
    n = len(ambient)
    if n > caps.bool_table_width:
        raise CapExceeded(
            f"closure materialization over {n} interactions exceeds the cap of "
            f"{caps.bool_table_width}"
        )
    items = ambient.interactions
    index = {a: i for i, a in enumerate(items)}
    size = 1 << n
    marked = bytearray(size)
    one = K.one
    for sub, v in p.table.items():
        if v == one:
            mask = 0
            for a in sub.interactions:
                mask |= 1 << index[a]
            marked[mask] = 1
    for bit in range(n):
        step = 1 << bit
        for mask in range(size):
            if mask & step and marked[mask ^ step]:
                marked[mask] = 1
    by_mask = _subsets_by_mask(items)
    table = {by_mask[mask]: one for mask in range(1, size) if marked[mask]}
    return Polynomial(K.zero, table)


def _sparse(zeta, ambient, K, caps, memo) -> Polynomial:
    hit = memo.get(id(zeta))
    if hit is not None:
        return hit
    if isinstance(zeta, WConst):
        poly = Polynomial(zeta.value)
    elif isinstance(zeta, WBool):
        poly = _indicator_poly(zeta.formula, ambient, K, caps)
    elif isinstance(zeta, WPlus):
        poly = _poly_pointwise(
            K.plus,
            _sparse(zeta.left, ambient, K, caps, memo),
            _sparse(zeta.right, ambient, K, caps, memo),
        )
    elif isinstance(zeta, WTimes):
        poly = _poly_pointwise(
            K.times,
            _sparse(zeta.left, ambient, K, caps, memo),
            _sparse(zeta.right, ambient, K, caps, memo),
        )
    elif isinstance(zeta, WCoalesce):
        poly = _poly_coalesce(
            _sparse(zeta.left, ambient, K, caps, memo),
            _sparse(zeta.right, ambient, K, caps, memo),
            ambient,
            K,
            caps,
        )
    elif isinstance(zeta, WClosure):
        poly = _poly_closure(
            _sparse(zeta.inner, ambient, K, caps, memo), ambient, K, caps
        )
    else:
        raise UsageError(f"not a weighted configuration-logic formula: {zeta!r}")
    memo[id(zeta)] = poly
    return poly


def wpcl_eval_sparse(
    zeta: WpclFormula,
    gamma: Configuration,
    semiring: Semiring,
    caps: EvalCaps = DEFAULT_CAPS,
) -> Value:
    """Bottom-up polynomial evaluation; agrees with ``wpcl_eval``."""
    # The common shape "closure of something" only needs the total over all
    # subsets, which avoids materializing the closure when gamma is wide.
    if isinstance(zeta, WClosure):
        inner = _sparse(zeta.inner, gamma, semiring, caps, {})
        return _closure_total(inner, gamma, semiring)
    poly = _sparse(zeta, gamma, semiring, caps, {})
    return poly.value_at(gamma)


def wpcl_value(
    zeta: WpclFormula,
    gamma: Configuration,
    semiring: Semiring,
    strategy: str = "auto",
    caps: EvalCaps = DEFAULT_CAPS,
) -> Value:
    """Evaluate with an explicit strategy or a width-based automatic choice."""
    if strategy == "direct":
        return wpcl_eval(zeta, gamma, semiring, caps)
    if strategy == "sparse":
        return wpcl_eval_sparse(zeta, gamma, semiring, caps)
    if strategy != "auto":
        raise UsageError(f"unknown strategy {strategy!r}")
    if len(gamma) <= caps.auto_direct_max:
        return wpcl_eval(zeta, gamma, semiring, caps)
    return wpcl_eval_sparse(zeta, gamma, semiring, caps)


# ---------------------------------------------------------------------------
# Whole-polynomial views and equivalence
# ---------------------------------------------------------------------------


def full_configuration(universe: Sequence[Port]) -> Configuration:
    """The configuration holding every interaction over the universe."""
    return Configuration(enumerate_interactions(port_universe(universe)))


def wpcl_polynomial(
    zeta: WpclFormula,
    universe: Sequence[Port],
    semiring: Semiring,
    caps: EvalCaps = DEFAULT_CAPS,
) -> dict[Configuration, Value]:
    """The finite-support map of the formula over all configurations.

    Computed with the sparse strategy against the full configuration, whose
    subsets are exactly the configurations over the universe.
    """
    ports = port_universe(universe)
    if len(ports) > caps.enum_ports:
        raise CapExceeded(
            f"universe too large: polynomial over {len(ports)} ports exceeds "
            f"the cap of {caps.enum_ports}"
        )
    ambient = full_configuration(ports)
    poly = _sparse(zeta, ambient, semiring, caps, {})
    out = {}
    zero = semiring.zero
    if poly.default != zero:
        for sub in config_subsets(ambient):
            v = poly.table.get(sub, poly.default)
            if v != zero:
                out[sub] = v
        return out
    for key, v in poly.table.items():
        if v != zero:
            out[key] = v
    return out


def wpcl_equiv_witness(
    z1: WpclFormula,
    z2: WpclFormula,
    universe: Sequence[Port],
    semiring: Semiring,
    tol: float = 1e-9,
    caps: EvalCaps = DEFAULT_CAPS,
) -> Optional[Configuration]:
    """None when the two formulas agree everywhere; otherwise a witness."""
    try:
        s1 = wpcl_polynomial(z1, universe, semiring, caps)
        s2 = wpcl_polynomial(z2, universe, semiring, caps)
    except CapExceeded as exc:
        raise CapExceeded(
            str(exc) + "; for larger universes compare full normal forms instead"
        ) from None
    zero = semiring.zero
    for key in sorted(s1.keys() | s2.keys()):
        if not semiring.eq(s1.get(key, zero), s2.get(key, zero), tol):
            return key
    return None


def wpcl_equiv(
    z1: WpclFormula,
    z2: WpclFormula,
    universe: Sequence[Port],
    semiring: Semiring,
    tol: float = 1e-9,
    caps: EvalCaps = DEFAULT_CAPS,
) -> bool:
    return wpcl_equiv_witness(z1, z2, universe, semiring, tol, caps) is None


def pcl_equiv(
    f1: PclFormula,
    f2: PclFormula,
    universe: Sequence[Port],
    caps: EvalCaps = DEFAULT_CAPS,
) -> bool:
    """Unweighted equivalence by exhaustive satisfaction over the universe."""
    for gamma in enumerate_configurations(port_universe(universe), caps.enum_ports):
        if pcl_satisfies(gamma, f1, caps) != pcl_satisfies(gamma, f2, caps):
            return False
    return True
