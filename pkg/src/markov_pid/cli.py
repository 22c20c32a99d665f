"""``markov-pid`` command line: solve input files, rerun the gate examples, run suites.

Exit status is 0 on success (and when every assertable suite passes), 1 on
an internal error or a failing suite, 2 on bad input or usage.  Environment
variables are never read; every setting comes from the command line.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass
from typing import Sequence

from . import __version__
from .discrete_ui import CANONICAL, Mode, canonical_example, decompose_discrete
from .exceptions import (
    DomainError,
    EnumerationCapError,
    IllConditionedError,
    UsageError,
    ValidationError,
)
from .gaussian_ui import pid_terms_gaussian, ui_gaussian
from .io import dumps, read_discrete, read_gaussian
from .pid import Definition, PIDTerms
from .units import InfoUnit
from .verify import CLI_SUITES, SuiteReport, run_named_suite

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT = 0, 1, 2
INPUT_ERRORS = (ValidationError, UsageError, DomainError, IllConditionedError, EnumerationCapError)
PRECISION = 6


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str | None = None
    target: str | None = None
    definition: str = "tmxy"
    unit: str = "bits"
    t_card: int | None = None
    mode: str = "exact"
    trials: int | None = None
    seed: int = 0
    tol: float = 1e-6
    output: str = "table"


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, bool) or v is None:
        return str(v).lower() if isinstance(v, bool) else "-"
    if isinstance(v, float):
        out = f"{v:.{PRECISION}f}"
        # a value that rounds to zero prints unsigned
        return out[1:] if out.startswith("-") and not out.strip("-0.") else out
    return str(v)


def render_table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [list(header)] + [[_fmt(v) for v in r] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _terms_table(terms: PIDTerms, label: str | None = None) -> str:
    vals = terms.values()
    head = (["definition"] if label else []) + list(vals)
    row = ([label] if label else []) + list(vals.values())
    return render_table(head, [row])


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _need_input(cfg: RunConfig) -> str:
    if not cfg.input_path:
        raise UsageError(f"{cfg.command} needs --input")
    return cfg.input_path


def cmd_gaussian(cfg: RunConfig) -> tuple[int, dict, str]:
    g = read_gaussian(_need_input(cfg))
    m, x, y = g.names
    terms = pid_terms_gaussian(g, cfg.definition, cfg.unit)
    ux = ui_gaussian(g, cfg.definition, cfg.unit)
    uy = ui_gaussian(g.reorder((m, y, x)), cfg.definition, cfg.unit)
    result = {"pid": terms.to_dict(), "ui_x": ux.to_dict(), "ui_y": uy.to_dict()}
    text = "\n".join(
        [
            _terms_table(terms, cfg.definition),
            "",
            render_table(
                ["source", "ui", "kernel_dim", "unit"],
                [["X", ux.value, ux.kernel_dim, cfg.unit], ["Y", uy.value, uy.kernel_dim, cfg.unit]],
            ),
            "restricted to jointly Gaussian extractors",
        ]
    )
    return EXIT_OK, result, text


def cmd_discrete(cfg: RunConfig) -> tuple[int, dict, str]:
    joint = read_discrete(_need_input(cfg))
    dec = decompose_discrete(joint, cfg.definition, cfg.t_card, cfg.mode, cfg.unit, cfg.seed)
    result = {"pid": dec.terms.to_dict(), "ui_x": dec.ui_x.to_dict(), "ui_y": dec.ui_y.to_dict()}
    rows = [
        [src, r.value, r.t_card, r.method.value, r.certified, r.vertices_examined]
        for src, r in (("X", dec.ui_x), ("Y", dec.ui_y))
    ]
    text = "\n".join(
        [
            _terms_table(dec.terms, cfg.definition),
            "",
            render_table(["source", "ui", "t_card", "method", "certified", "vertices"], rows),
        ]
    )
    return EXIT_OK, result, text


def cmd_examples(cfg: RunConfig) -> tuple[int, dict, str]:
    name = (cfg.target or "all").upper()
    names = CANONICAL if name == "ALL" else (name,)
    if name != "ALL" and name not in CANONICAL:
        raise UsageError(f"unknown example {cfg.target!r}; choose from rdn, unq, xor, and, all")
    result, rows = {}, []
    for ex in names:
        joint = canonical_example(ex)
        result[ex] = {}
        for d in Definition:
            dec = decompose_discrete(joint, d, cfg.t_card, cfg.mode, cfg.unit, cfg.seed)
            ui_x, ui_y, r, s = dec.terms.table_row()
            result[ex][d.value] = {
                "table_row": {"ui_x": ui_x, "ui_y": ui_y, "r": r, "s": s},
                "pid": dec.terms.to_dict(),
                "certified": dec.ui_x.certified and dec.ui_y.certified,
            }
            rows.append([ex, d.value.upper(), ui_x, ui_y, r, s, dec.ui_x.certified and dec.ui_y.certified])
    text = render_table(["example", "definition", "ui_x", "ui_y", "r", "s", "certified"], rows)
    return EXIT_OK, result, text + f"\nunit: {cfg.unit}; r and s are taken from source X"


def _report_text(rep: SuiteReport) -> str:
    lines = [rep.summary_line()]
    for f in rep.failures:
        lines.append(
            f"  trial {f['trial']} [{f['fingerprint']}] {f['check']}: observed {_fmt(float(f['observed']))}, "
            f"bound {_fmt(float(f['bound']))}"
        )
    if rep.rows and (not rep.assertable or rep.suite_name == "symmetry_counterexample"):
        keys = [k for k in rep.rows[0] if not isinstance(rep.rows[0][k], (list, dict))]
        lines.append(render_table(keys, [[r.get(k) for k in keys] for r in rep.rows]))
    return "\n".join(lines)


def cmd_verify(cfg: RunConfig) -> tuple[int, dict, str]:
    suite = (cfg.target or "all").lower()
    if suite not in CLI_SUITES + ("all",):
        raise UsageError(f"unknown suite {cfg.target!r}; choose from {', '.join(CLI_SUITES + ('all',))}")
    if cfg.trials is not None and cfg.trials < 1:
        raise UsageError("--trials must be at least 1")
    reports = run_named_suite(suite, cfg.trials, cfg.seed, InfoUnit(cfg.unit), cfg.tol)
    ok = all(r.passed for r in reports if r.assertable)
    result = {"passed": ok, "suites": [r.to_dict() for r in reports]}
    text = "\n\n".join(_report_text(r) for r in reports)
    return (EXIT_OK if ok else EXIT_INTERNAL), result, text


COMMANDS = {
    "gaussian": cmd_gaussian,
    "discrete": cmd_discrete,
    "examples": cmd_examples,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--definition", choices=[d.value for d in Definition], default="tmxy")
    common.add_argument("--unit", choices=[u.value for u in InfoUnit], default="bits")
    common.add_argument("--t-card", type=_positive_int, default=None, help="extractor alphabet size (default |source|+1)")
    common.add_argument("--mode", choices=[m.value for m in Mode], default="exact")
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=1e-6, help="closed-form vs numeric tolerance in nats")
    common.add_argument("--output", choices=["json", "table"], default="table")
    common.add_argument("--input", dest="input_path", default=None)

    parser = _Parser(prog="markov-pid", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("gaussian", parents=[common], help="Gaussian JSON input")
    sub.add_parser("discrete", parents=[common], help="discrete JSON input")
    ex = sub.add_parser("examples", parents=[common], help="RDN, UNQ, XOR and AND gates")
    ex.add_argument("target", nargs="?", default="all", metavar="{rdn,unq,xor,and,all}")
    ve = sub.add_parser("verify", parents=[common], help="verification suites")
    ve.add_argument("target", nargs="?", default="all", metavar="{" + ",".join(CLI_SUITES + ("all",)) + "}")
    return parser


def parse_config(argv: Sequence[str] | None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    return RunConfig(**{k: v for k, v in ns.items() if k in RunConfig.__dataclass_fields__})


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
        status, result, text = COMMANDS[cfg.command](cfg)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - report, never traceback
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if cfg.output == "json":
        envelope = {"tool_version": __version__, "command": cfg.command, "config": asdict(cfg), "result": result}
        print(dumps(envelope))
    else:
        print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
