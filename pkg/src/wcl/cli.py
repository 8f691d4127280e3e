"""Command-line interface.

Exit status: 0 on success, 1 on a semantic FAIL (an inequivalence, an
unsatisfied formula, an oracle mismatch, a failed self-test), 2 on usage,
parse, or cap errors.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .acceptance import run_selftest
from .errors import ParseError, UsageError, WclError
from .focl import Model, wfocl_eval
from .interactions import Port
from .normal_form import config_to_monomials, fnf_of_wpcl
from .parser import (
    parse_configuration,
    parse_formula,
    parse_model,
    parse_ports,
)
from .pcl import EvalCaps, pcl_satisfies, wpcl_equiv_witness, wpcl_value
from .printer import formula_to_text, pil_to_text
from .semiring import Semiring, format_value, get_semiring
from .styles import (
    DistanceMatrix,
    PriorityTable,
    master_slave_focl_configuration,
    master_slave_full_configuration,
    master_slave_wfocl,
    master_slave_wpcl,
    pubsub_example_configuration,
    pubsub_wfocl,
    tsp_brute_force,
    tsp_configuration,
    tsp_formula,
)

_EXTENSION_DIALECTS = {
    ".pil": "pil",
    ".pcl": "pcl",
    ".wpcl": "wpcl",
    ".focl": "focl",
    ".wfocl": "wfocl",
}


@dataclass
class RunConfig:
    """Validated bundle of everything one invocation needs."""

    semiring: Optional[Semiring] = None
    ports: Optional[tuple[Port, ...]] = None
    model: Optional[Model] = None
    dialect: Optional[str] = None
    strategy: str = "auto"
    caps: EvalCaps = field(default_factory=EvalCaps)
    output_format: str = "text"
    tolerance: float = 1e-9

    def require_ports(self) -> tuple[Port, ...]:
        if self.ports is not None:
            return self.ports
        if self.model is not None:
            return self.model.port_universe()
        raise UsageError("a port universe is required: pass --ports or --model")

    def require_model(self) -> Model:
        if self.model is None:
            raise UsageError("a first-order formula requires --model")
        return self.model


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _formula_source(arg: str) -> tuple[str, Optional[str]]:
    """Return (text, dialect-from-extension); literals pass through."""
    _, ext = os.path.splitext(arg)
    if os.path.exists(arg):
        return _read_text(arg), _EXTENSION_DIALECTS.get(ext)
    if ext in _EXTENSION_DIALECTS:
        raise UsageError(f"formula file {arg!r} does not exist")
    return arg, None


def _load_formula(arg: str, default_dialect: str, config: RunConfig):
    text, ext_dialect = _formula_source(arg)
    dialect = config.dialect or ext_dialect or default_dialect
    return parse_formula(text, dialect, config.semiring), dialect


def _load_configuration(arg: str):
    text = arg
    if not arg.lstrip().startswith("{") and os.path.exists(arg):
        text = _read_text(arg)
    return parse_configuration(text)


def _load_csv_rows(path: str) -> list[list[str]]:
    rows = []
    for line in _read_text(path).splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([cell.strip() for cell in line.split(",")])
    if not rows:
        raise UsageError(f"{path} holds no rows")
    return rows


def _load_matrix(path: str) -> DistanceMatrix:
    rows = [[float(cell) for cell in row] for row in _load_csv_rows(path)]
    return DistanceMatrix.of(rows)


def _load_weight_table(path: str, semiring: Semiring) -> PriorityTable:
    rows = [[semiring.parse_carrier(cell) for cell in row] for row in _load_csv_rows(path)]
    widths = {len(row) for row in rows}
    if len(widths) != 1:
        raise UsageError(f"{path} rows have unequal lengths")
    return PriorityTable.of(rows)


def _build_config(args) -> RunConfig:
    config = RunConfig()
    if getattr(args, "semiring", None):
        config.semiring = get_semiring(args.semiring)
    if getattr(args, "ports", None):
        config.ports = parse_ports(args.ports)
    if getattr(args, "model", None):
        config.model = parse_model(_read_text(args.model))
    if getattr(args, "dialect", None):
        config.dialect = args.dialect
    if getattr(args, "strategy", None):
        config.strategy = args.strategy
    if getattr(args, "format", None):
        config.output_format = args.format
    if getattr(args, "tolerance", None) is not None:
        if args.tolerance < 0:
            raise UsageError("tolerance must be nonnegative")
        config.tolerance = args.tolerance
    if getattr(args, "caps", None):
        config.caps = EvalCaps.from_dict(json.loads(_read_text(args.caps)))
    return config


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _as_weighted(formula, dialect):
    """Lift unweighted propositional formulas to their 0/1-valued form."""
    from .pcl import PclBool, WBool

    if dialect in ("focl", "wfocl"):
        raise UsageError("use 'wcl focl-eval' for first-order formulas")
    if dialect == "pil":
        return WBool(PclBool(formula))
    if dialect == "pcl":
        return WBool(formula)
    return formula


def _cmd_eval(args) -> int:
    config = _build_config(args)
    if config.semiring is None:
        raise UsageError("--semiring is required")
    formula, dialect = _load_formula(args.formula, "wpcl", config)
    gamma = _load_configuration(args.config)
    formula = _as_weighted(formula, dialect)
    ports = config.require_ports()
    _check_over_universe(gamma, formula, ports)
    value = wpcl_value(formula, gamma, config.semiring, config.strategy, config.caps)
    print(format_value(value))
    return 0


def _check_over_universe(gamma, formula, ports) -> None:
    from .pcl import wpcl_ports

    universe = set(ports)
    if not gamma.is_over(universe):
        raise UsageError("configuration mentions ports outside the universe")
    extra = wpcl_ports(formula) - universe
    if extra:
        raise UsageError(f"formula mentions ports outside the universe: {sorted(map(str, extra))}")


def _cmd_satisfies(args) -> int:
    from .pcl import PclBool

    config = _build_config(args)
    formula, dialect = _load_formula(args.formula, "pcl", config)
    gamma = _load_configuration(args.config)
    if dialect == "focl":
        from .focl import focl_satisfies

        model = config.require_model()
        result = focl_satisfies(model, gamma, formula, config.caps)
    else:
        if dialect == "pil":
            formula = PclBool(formula)
        result = pcl_satisfies(gamma, formula, config.caps)
    print("true" if result else "false")
    return 0 if result else 1


def _cmd_fnf(args) -> int:
    config = _build_config(args)
    if config.semiring is None:
        raise UsageError("--semiring is required")
    formula, dialect = _load_formula(args.formula, "wpcl", config)
    if dialect in ("focl", "wfocl"):
        raise UsageError("normal forms are defined for propositional formulas only")
    formula = _as_weighted(formula, dialect)
    ports = config.require_ports()
    fnf = fnf_of_wpcl(formula, ports, config.semiring, config.caps)
    for gamma, coeff in fnf:
        if config.output_format == "tsv":
            print(f"{format_value(coeff)}\t{gamma}")
        else:
            monomials = " + ".join(
                pil_to_text(m.formula()) for m in config_to_monomials(gamma, ports)
            )
            print(f"{format_value(coeff)} (*) {{ {monomials} }}")
    return 0


def _cmd_equiv(args) -> int:
    config = _build_config(args)
    if config.semiring is None:
        raise UsageError("--semiring is required")
    left, dialect_left = _load_formula(args.left, "wpcl", config)
    right, dialect_right = _load_formula(args.right, "wpcl", config)
    if {dialect_left, dialect_right} & {"focl", "wfocl"}:
        raise UsageError("equivalence checking covers propositional formulas only")
    left = _as_weighted(left, dialect_left)
    right = _as_weighted(right, dialect_right)
    ports = config.require_ports()
    witness = wpcl_equiv_witness(
        left, right, ports, config.semiring, config.tolerance, config.caps
    )
    if witness is None:
        print("equivalent")
        return 0
    print(f"not equivalent; witness {witness}")
    return 1


def _cmd_focl_eval(args) -> int:
    from .focl import ZBool

    config = _build_config(args)
    if config.semiring is None:
        raise UsageError("--semiring is required")
    model = config.require_model()
    formula, dialect = _load_formula(args.formula, "wfocl", config)
    gamma = _load_configuration(args.config)
    if dialect == "focl":
        formula = ZBool(formula)
    elif dialect in ("pil", "pcl", "wpcl"):
        raise UsageError("focl-eval expects a first-order formula; use 'wcl eval'")
    value = wfocl_eval(formula, model, gamma, config.semiring, config.strategy, config.caps)
    print(format_value(value))
    return 0


def _cmd_tsp(args) -> int:
    config = _build_config(args)
    matrix = _load_matrix(args.matrix)
    from .semiring import MIN_PLUS

    _, zeta = tsp_formula(matrix)
    gamma = tsp_configuration(matrix.n)
    strategy = config.strategy if config.strategy != "auto" else "sparse"
    value = wpcl_value(zeta, gamma, MIN_PLUS, strategy, config.caps)
    oracle = tsp_brute_force(matrix)
    match = MIN_PLUS.eq(value, oracle, config.tolerance)
    print(f"formula {format_value(value)}")
    print(f"oracle {format_value(oracle)}")
    print("PASS" if match else "FAIL")
    return 0 if match else 1


def _cmd_example(args) -> int:
    config = _build_config(args)
    if args.kind == "master-slave":
        semiring = config.semiring or get_semiring("minplus")
        weights = (
            _load_weight_table(args.weights, semiring)
            if args.weights
            else PriorityTable.of(
                [[1 + i + j for j in range(args.masters)] for i in range(args.slaves)]
            )
        )
        if args.dialect == "wfocl":
            model, z = master_slave_wfocl(args.masters, args.slaves, weights)
            gamma = master_slave_focl_configuration(args.masters, args.slaves)
            value = wfocl_eval(z, model, gamma, semiring, config.strategy, config.caps)
        else:
            _, z = master_slave_wpcl(args.masters, args.slaves, weights)
            gamma = master_slave_full_configuration(args.masters, args.slaves)
            value = wpcl_value(z, gamma, semiring, config.strategy, config.caps)
        print(formula_to_text(z))
        print(f"value at {gamma}: {format_value(value)}")
        return 0
    if args.kind == "pubsub":
        semiring = config.semiring or get_semiring("viterbi")
        priorities = (
            _load_weight_table(args.priorities, semiring)
            if args.priorities
            else PriorityTable.of([[0.9, 0.8], [0.7, 0.6], [0.5, 0.4]])
        )
        n_topics, n_subscribers = priorities.shape
        model, z = pubsub_wfocl(args.publishers, n_topics, n_subscribers, priorities)
        print(formula_to_text(z))
        if (args.publishers, n_topics, n_subscribers) == (2, 3, 2):
            gamma = pubsub_example_configuration()
            value = wfocl_eval(z, model, gamma, semiring, config.strategy, config.caps)
            print(f"value at {gamma}: {format_value(value)}")
        return 0
    raise UsageError(f"unknown example {args.kind!r}")


def _cmd_selftest(args) -> int:
    ok = run_selftest(args.filter or "")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# Argument wiring
# ---------------------------------------------------------------------------


def _add_shared(sub, *, semiring=True, ports=True, model=True, strategy=True):
    if semiring:
        sub.add_argument("--semiring", choices=["nat", "bool", "minplus", "maxplus", "viterbi", "fuzzy"])
    if ports:
        sub.add_argument("--ports", help="comma-separated port universe, e.g. p,q")
    if model:
        sub.add_argument("--model", help="model file path")
    if strategy:
        sub.add_argument("--strategy", choices=["auto", "direct", "sparse"], default="auto")
    sub.add_argument("--dialect", choices=["pil", "pcl", "wpcl", "focl", "wfocl"])
    sub.add_argument("--caps", help="JSON file overriding evaluation caps")
    sub.add_argument("--tolerance", type=float, default=None)
    sub.add_argument("--format", choices=["text", "tsv"], default="text")


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wcl",
        description="Weighted configuration logic: evaluation, normal forms, equivalence, examples.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    cmd = commands.add_parser("eval", help="evaluate a weighted formula at a configuration")
    cmd.add_argument("--formula", required=True, help="formula file or literal text")
    cmd.add_argument("--config", required=True, help="configuration literal or file")
    _add_shared(cmd)
    cmd.set_defaults(handler=_cmd_eval)

    cmd = commands.add_parser("satisfies", help="check satisfaction of an unweighted formula")
    cmd.add_argument("--formula", required=True)
    cmd.add_argument("--config", required=True)
    _add_shared(cmd, semiring=False)
    cmd.set_defaults(handler=_cmd_satisfies)

    cmd = commands.add_parser("fnf", help="print the full normal form of a weighted formula")
    cmd.add_argument("--formula", required=True)
    _add_shared(cmd)
    cmd.set_defaults(handler=_cmd_fnf)

    cmd = commands.add_parser("equiv", help="decide equivalence of two weighted formulas")
    cmd.add_argument("left")
    cmd.add_argument("right")
    _add_shared(cmd)
    cmd.set_defaults(handler=_cmd_equiv)

    cmd = commands.add_parser("focl-eval", help="evaluate a weighted first-order formula")
    cmd.add_argument("--formula", required=True)
    cmd.add_argument("--config", required=True)
    _add_shared(cmd)
    cmd.set_defaults(handler=_cmd_focl_eval)

    cmd = commands.add_parser("tsp", help="evaluate the salesman encoding against the oracle")
    cmd.add_argument("--matrix", required=True, help="CSV distance matrix")
    _add_shared(cmd, semiring=False, ports=False, model=False)
    cmd.set_defaults(handler=_cmd_tsp)

    cmd = commands.add_parser("example", help="generate and evaluate a built-in example")
    cmd.add_argument("kind", choices=["master-slave", "pubsub"])
    cmd.add_argument("--masters", type=int, default=2)
    cmd.add_argument("--slaves", type=int, default=2)
    cmd.add_argument("--publishers", type=int, default=2)
    cmd.add_argument("--weights", help="CSV weight table (slaves x masters)")
    cmd.add_argument("--priorities", help="CSV priority table (topics x subscribers)")
    _add_shared(cmd, ports=False, model=False)
    cmd.set_defaults(handler=_cmd_example)

    cmd = commands.add_parser("selftest", help="run the acceptance suite")
    cmd.add_argument("--filter", help="run only criteria whose name contains this substring")
    cmd.set_defaults(handler=_cmd_selftest)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except WclError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
