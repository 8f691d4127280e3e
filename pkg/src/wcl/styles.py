"""Encoders for the built-in architecture examples plus independent oracles.

Covers the Master/Slave architecture in both the propositional and the
first-order dialect, the topic-based Publish/Subscribe style, and the
travelling salesman encoding over the min-plus semiring together with a
brute-force tour oracle for cross-checking.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import UsageError
from .focl import (
    Component,
    ComponentType,
    FBool,
    FoclFormula,
    Model,
    PRED_TRUE,
    PredAnd,
    PredCmp,
    WfoclFormula,
    ZBool,
    ZClosure,
    ZCoalesce,
    ZConst,
    ZOplus,
    ZOtimes,
    ZOuplus,
    ZPredGuard,
    ZTimes,
    f_closure,
    f_forall,
    f_meet,
)
from .interactions import (
    Configuration,
    Interaction,
    PilAtom,
    Port,
    monomial,
    pil_and,
    pil_neg,
    port_universe,
)
from .pcl import WBool, WClosure, WCoalesce, WConst, WPlus, WTimes, WpclFormula, PclBool
from .semiring import Value


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric nonnegative distances with a zero diagonal."""

    distances: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        n = len(self.distances)
        if n < 3:
            raise UsageError("a distance matrix needs at least 3 cities")
        for row in self.distances:
            if len(row) != n:
                raise UsageError("distance matrix must be square")
        for i in range(n):
            if self.distances[i][i] != 0:
                raise UsageError("distance matrix diagonal must be zero")
            for j in range(n):
                d = self.distances[i][j]
                if d < 0:
                    raise UsageError("distances must be nonnegative")
                if d != self.distances[j][i]:
                    raise UsageError("distance matrix must be symmetric")

    @classmethod
    def of(cls, rows: Sequence[Sequence[float]]) -> "DistanceMatrix":
        return cls(tuple(tuple(float(x) for x in row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.distances)


@dataclass(frozen=True)
class PriorityTable:
    """Weights indexed by (row kind, column kind), e.g. (slave, master)."""

    rows: tuple[tuple[Value, ...], ...]

    @classmethod
    def of(cls, rows: Sequence[Sequence[Value]]) -> "PriorityTable":
        return cls(tuple(tuple(row) for row in rows))

    def at(self, i: int, j: int) -> Value:
        return self.rows[i][j]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)


# ---------------------------------------------------------------------------
# Master/Slave
# ---------------------------------------------------------------------------


def master_slave_ports(n_masters: int, n_slaves: int) -> tuple[Port, ...]:
    names = [f"s{i}" for i in range(1, n_slaves + 1)]
    names += [f"m{j}" for j in range(1, n_masters + 1)]
    return port_universe(names)


def master_slave_wpcl(
    n_masters: int, n_slaves: int, weights: PriorityTable
) -> tuple[tuple[Port, ...], WpclFormula]:
    """Closure of the coalescing, over slaves, of weighted master choices.

    ``weights.at(i-1, j-1)`` is the cost of wiring slave i to master j.
    Each pairing monomial links one slave port to one master port and
    negates every other port of the universe.
    """
    if n_masters < 1 or n_slaves < 1:
        raise UsageError("need at least one master and one slave")
    if weights.shape != (n_slaves, n_masters):
        raise UsageError(f"weight table must be {n_slaves} x {n_masters}")
    ports = master_slave_ports(n_masters, n_slaves)
    universe = set(ports)

    def pairing(i: int, j: int) -> WpclFormula:
        pos = {Port(f"s{i}"), Port(f"m{j}")}
        phi = monomial(sorted(pos), sorted(universe - pos))
        return WTimes(WConst(weights.at(i - 1, j - 1)), WBool(PclBool(phi)))

    per_slave = []
    for i in range(1, n_slaves + 1):
        choice = pairing(i, 1)
        for j in range(2, n_masters + 1):
            choice = WPlus(choice, pairing(i, j))
        per_slave.append(choice)
    body = per_slave[-1]
    for part in reversed(per_slave[:-1]):
        body = WCoalesce(part, body)
    return ports, WClosure(body)


def master_slave_model(n_masters: int, n_slaves: int) -> Model:
    master = ComponentType("M", ("m",))
    slave = ComponentType("S", ("s",))
    components = [Component(f"b{j}", master) for j in range(1, n_masters + 1)]
    components += [Component(f"d{i}", slave) for i in range(1, n_slaves + 1)]
    return Model([master, slave], components)


def master_slave_wfocl(
    n_masters: int, n_slaves: int, weights: PriorityTable
) -> tuple[Model, WfoclFormula]:
    """First-order rendering: per-slave coalescing quantifier over master picks.

    The weight of a binding is selected by identity guards comparing the
    bound slave/master against each concrete pair, and the trailing
    quantifiers negate every other component's port.
    """
    if n_masters < 1 or n_slaves < 1:
        raise UsageError("need at least one master and one slave")
    if weights.shape != (n_slaves, n_masters):
        raise UsageError(f"weight table must be {n_slaves} x {n_masters}")
    model = master_slave_model(n_masters, n_slaves)

    link = FBool(pil_and(PilAtom(Port("s", "c")), PilAtom(Port("m", "c1"))))
    guarded: WfoclFormula = ZBool(link)
    for i in range(1, n_slaves + 1):
        for j in range(1, n_masters + 1):
            condition = PredAnd(PredCmp("c", f"d{i}", True), PredCmp("c1", f"b{j}", True))
            guarded = ZTimes(
                guarded, ZPredGuard(condition, ZConst(weights.at(i - 1, j - 1)))
            )
    others = ZOtimes(
        "c2",
        "M",
        PredCmp("c2", "c1", False),
        ZOtimes(
            "c3",
            "S",
            PredCmp("c3", "c", False),
            ZBool(FBool(pil_and(pil_neg(PilAtom(Port("m", "c2"))), pil_neg(PilAtom(Port("s", "c3")))))),
        ),
    )
    z_prime = ZTimes(guarded, others)
    z = ZClosure(ZOuplus("c", "S", PRED_TRUE, ZOplus("c1", "M", PRED_TRUE, z_prime)))
    return model, z


def master_slave_full_configuration(n_masters: int, n_slaves: int) -> Configuration:
    """All slave-master pairings at once (the example's target configuration)."""
    return Configuration(
        Interaction([Port(f"s{i}"), Port(f"m{j}")])
        for i in range(1, n_slaves + 1)
        for j in range(1, n_masters + 1)
    )


def master_slave_focl_configuration(n_masters: int, n_slaves: int) -> Configuration:
    return Configuration(
        Interaction([Port("s", f"d{i}"), Port("m", f"b{j}")])
        for i in range(1, n_slaves + 1)
        for j in range(1, n_masters + 1)
    )


# ---------------------------------------------------------------------------
# Travelling salesman
# ---------------------------------------------------------------------------


def cyclic_tours(n: int) -> list[tuple[int, ...]]:
    """Cyclic orders of n cities, anchored at city 0, orientation-reduced.

    A tour lists each city once, starting at city 0; reversing direction
    gives the same cycle, so only tours whose second city index is below
    the last one are kept.  That leaves (n-1)!/2 tours.
    """
    if n < 3:
        raise UsageError("tours need at least 3 cities")
    tours = []
    for perm in itertools.permutations(range(1, n)):
        if perm[0] < perm[-1]:
            tours.append((0,) + perm)
    return tours


def tour_edges(tour: tuple[int, ...]) -> list[tuple[int, int]]:
    """Consecutive pairs plus the closing edge back to the anchor city."""
    edges = list(zip(tour, tour[1:]))
    edges.append((tour[-1], tour[0]))
    return edges


def tsp_ports(n: int) -> tuple[Port, ...]:
    return port_universe([f"c{i}" for i in range(1, n + 1)])


def tsp_configuration(n: int) -> Configuration:
    """Every two-city connection at once."""
    return Configuration(
        Interaction([Port(f"c{i + 1}"), Port(f"c{j + 1}")])
        for i in range(n)
        for j in range(i + 1, n)
    )


def tsp_formula(matrix: DistanceMatrix) -> tuple[tuple[Port, ...], WpclFormula]:
    """Closure of the sum, over tours, of coalesced weighted edge monomials.

    Over min-plus, the value at the all-pairs configuration is the length
    of the shortest round trip.
    """
    n = matrix.n
    ports = tsp_ports(n)
    universe = set(ports)

    def edge(i: int, j: int) -> WpclFormula:
        pos = {Port(f"c{i + 1}"), Port(f"c{j + 1}")}
        phi = monomial(sorted(pos), sorted(universe - pos))
        return WTimes(WConst(matrix.distances[i][j]), WBool(PclBool(phi)))

    tour_terms = []
    for tour in cyclic_tours(n):
        edges = tour_edges(tour)
        chain = edge(*edges[-1])
        for i, j in reversed(edges[:-1]):
            chain = WCoalesce(edge(i, j), chain)
        tour_terms.append(chain)
    body = tour_terms[0]
    for term in tour_terms[1:]:
        body = WPlus(body, term)
    return ports, WClosure(body)


def tsp_brute_force(matrix: DistanceMatrix) -> float:
    """Minimum cycle length over all tours; independent of the formula path."""
    n = matrix.n
    if n > 10:
        raise UsageError("brute-force oracle is limited to 10 cities")
    d = matrix.distances
    best = float("inf")
    for tour in cyclic_tours(n):
        total = 0.0
        for i, j in tour_edges(tour):
            total += d[i][j]
        if total < best:
            best = total
    return best


# ---------------------------------------------------------------------------
# Publish/Subscribe
# ---------------------------------------------------------------------------


def pubsub_model(n_publishers: int, n_topics: int, n_subscribers: int) -> Model:
    if min(n_publishers, n_topics, n_subscribers) < 1:
        raise UsageError("need at least one publisher, topic, and subscriber")
    publisher = ComponentType("P", ("p",))
    topic = ComponentType("T", ("t1", "t2"))
    subscriber = ComponentType("S", ("s",))
    components = [Component(f"p{i}", publisher) for i in range(1, n_publishers + 1)]
    components += [Component(f"r{i}", topic) for i in range(1, n_topics + 1)]
    components += [Component(f"s{i}", subscriber) for i in range(1, n_subscribers + 1)]
    return Model([publisher, topic, subscriber], components)


def pubsub_wfocl(
    n_publishers: int, n_topics: int, n_subscribers: int, priorities: PriorityTable
) -> tuple[Model, WfoclFormula]:
    """Topic-based publish/subscribe with per-subscriber topic priorities.

    ``priorities.at(i-1, j-1)`` is subscriber j's priority for topic i.
    For every subscriber there must be a topic and a publisher such that
    the publisher feeds the topic and the topic feeds the subscriber; the
    two interactions are combined by coalescing and weighted by the
    subscriber's priority for that topic.
    """
    if priorities.shape != (n_topics, n_subscribers):
        raise UsageError(f"priority table must be {n_topics} x {n_subscribers}")
    model = pubsub_model(n_publishers, n_topics, n_subscribers)

    def qport(owner: str, name: str) -> PilAtom:
        return PilAtom(Port(name, owner))

    # publisher c3 -> topic c2 (first topic port), nothing else active
    z1 = f_forall(
        "d1",
        "P",
        PredCmp("d1", "c3", False),
        f_forall(
            "d2",
            "T",
            PredCmp("d2", "c2", False),
            f_forall(
                "d3",
                "S",
                PRED_TRUE,
                FBool(
                    _conj(
                        pil_neg(qport("d1", "p")),
                        pil_neg(qport("d2", "t1")),
                        pil_neg(qport("d2", "t2")),
                        pil_neg(qport("d3", "s")),
                        pil_neg(qport("c2", "t2")),
                    )
                ),
            ),
        ),
    )
    z2 = f_closure(f_meet(FBool(pil_and(qport("c3", "p"), qport("c2", "t1"))), z1))

    # topic c2 (second topic port) -> subscriber c1, nothing else active
    z3 = f_forall(
        "d1",
        "P",
        PRED_TRUE,
        f_forall(
            "d2",
            "T",
            PredCmp("d2", "c2", False),
            f_forall(
                "d3",
                "S",
                PredCmp("d3", "c1", False),
                FBool(
                    _conj(
                        pil_neg(qport("d1", "p")),
                        pil_neg(qport("d2", "t1")),
                        pil_neg(qport("d2", "t2")),
                        pil_neg(qport("d3", "s")),
                        pil_neg(qport("c2", "t1")),
                    )
                ),
            ),
        ),
    )
    z4: WfoclFormula | None = None
    for i in range(1, n_topics + 1):
        for j in range(1, n_subscribers + 1):
            guard = ZPredGuard(
                PredAnd(PredCmp("c2", f"r{i}", True), PredCmp("c1", f"s{j}", True)),
                ZConst(priorities.at(i - 1, j - 1)),
            )
            z4 = guard if z4 is None else ZTimes(z4, guard)
    z5 = ZTimes(
        ZBool(f_closure(f_meet(FBool(pil_and(qport("c2", "t2"), qport("c1", "s"))), z3))),
        z4,
    )
    z = ZOtimes(
        "c1",
        "S",
        PRED_TRUE,
        ZOplus("c2", "T", PRED_TRUE, ZOplus("c3", "P", PRED_TRUE, ZCoalesce(ZBool(z2), z5))),
    )
    return model, z


def _conj(*parts):
    acc = parts[0]
    for p in parts[1:]:
        acc = pil_and(acc, p)
    return acc


def pubsub_example_configuration() -> Configuration:
    """The demonstration topology: 2 publishers, 3 topics, 2 subscribers."""
    def inter(*ports_text: str) -> Interaction:
        out = []
        for t in ports_text:
            owner, _, name = t.partition(".")
            out.append(Port(name, owner))
        return Interaction(out)

    return Configuration(
        [
            inter("p1.p", "r1.t1"),
            inter("p1.p", "r3.t1"),
            inter("p2.p", "r1.t1"),
            inter("r1.t2", "s1.s"),
            inter("r2.t2", "s2.s"),
            inter("r3.t2", "s2.s"),
        ]
    )
