"""Command-line surface: sweeps, verification, spectra, combinatorics tables.

Exit codes: 0 success, 1 validation error (bad flags, malformed ranges,
oracle size cap), 2 internal consistency violation (broken exact
identities or cross-checks), so CI can tell environment problems apart
from scientific regressions.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .errors import ConsistencyError
from .metrics import MetricsRow, metrics_row, success_probability
from .oracle import oracle_success_probability
from .partitions import marked_partition_count, partition_count, w_upper_bound
from .permutations import enumerate_marked_classes, marked_class_size
from .spectral import DEFAULT_PRECISION, compute_spectrum, rho_power, spectral_projector

VERIFY_TOL = 1e-8
CSV_HEADER = "N,d,S,F_e,F,F_e_low,F_e_up"


class CliError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def parse_dims(text: str) -> list[int]:
    """Inclusive range ``a..b`` or comma-separated list of dimensions."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..")
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(tok) for tok in text.split(",")]
    except ValueError:
        raise CliError(f"malformed dimension range: {text!r}") from None


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _rows_csv(rows: Sequence[MetricsRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.n},{r.d},{_fmt(r.s)},{_fmt(r.f_e)},{_fmt(r.f)},"
            f"{_fmt(r.f_e_low)},{_fmt(r.f_e_up)}"
        )
    return "\n".join(lines) + "\n"


def _rows_json(rows: Sequence[MetricsRow]) -> str:
    payload = [
        {
            "N": r.n,
            "d": r.d,
            "S": r.s,
            "F_e": r.f_e,
            "F": r.f,
            "F_e_low": r.f_e_low,
            "F_e_up": r.f_e_up,
        }
        for r in rows
    ]
    return json.dumps(payload, indent=2) + "\n"


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_table(args, prefer_closed_form: bool) -> int:
    rows = [
        metrics_row(args.ports, d, args.precision, prefer_closed_form)
        for d in parse_dims(args.dims)
    ]
    text = _rows_json(rows) if args.format == "json" else _rows_csv(rows)
    _emit(text, args.out)
    return 0


def _cmd_verify(args) -> int:
    s_pipe = success_probability(args.ports, args.dim, args.precision)
    s_oracle = oracle_success_probability(args.ports, args.dim)
    diff = abs(s_pipe - s_oracle)
    ok = diff <= VERIFY_TOL
    _emit(
        f"N={args.ports} d={args.dim} S_pipeline={_fmt(s_pipe)} "
        f"S_oracle={_fmt(s_oracle)} abs_diff={diff:.3e} "
        f"{'PASS' if ok else 'FAIL'}\n",
        args.out,
    )
    return 0 if ok else 2


def _cmd_spectrum(args) -> int:
    spectrum = compute_spectrum(args.ports, args.dim)
    lines = [
        "# closure polynomial coefficients (ascending): "
        + ", ".join(str(c) for c in spectrum.closure.coeffs),
        "lambda,projTrace",
    ]
    for lam, m in spectrum.entries:
        lines.append(f"{lam},{m}")
    if args.dump_algebra:
        lines.append("# rho:")
        lines.append(rho_power(args.ports, 1).dump())
        for lam, _ in spectrum.retained:
            lines.append(f"# projector for lambda={lam}:")
            lines.append(spectral_projector(spectrum, lam).dump())
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_classes(args) -> int:
    lines = []
    for c in enumerate_marked_classes(args.ports):
        part = "+".join(str(k) for k in c.cycle_type)
        lines.append(f"{part} {c.marked_len} {marked_class_size(c)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_partitions(args) -> int:
    lines = ["n,P,W,bound"]
    for n in range(1, args.max + 1):
        lines.append(
            f"{n},{partition_count(n)},{marked_partition_count(n)},{w_upper_bound(n)}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="pbtperf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, ports=True):
        if ports:
            p.add_argument("--ports", type=int, required=True, help="number of ports N")
        p.add_argument("--out", default=None, help="write output to this file")
        p.add_argument(
            "--precision",
            type=int,
            default=int(os.environ.get("PBT_PRECISION", DEFAULT_PRECISION)),
            help="significant digits for real arithmetic (>= 15)",
        )

    for name, doc in (
        ("metrics", "spectral-pipeline sweep over dimensions"),
        ("bounds", "closed-form sweep (spectral fallback where no closed form)"),
    ):
        p = sub.add_parser(name, help=doc)
        add_common(p)
        p.add_argument("--dims", required=True, help="range a..b or list v1,v2,...")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("verify", help="compare pipeline against the dense oracle")
    add_common(p)
    p.add_argument("--dim", type=int, required=True)

    p = sub.add_parser("spectrum", help="eigenvalues and multiplicities of rho")
    add_common(p)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--dump-algebra", action="store_true")

    p = sub.add_parser("classes", help="marked conjugacy classes of S_N")
    add_common(p)

    p = sub.add_parser("partitions", help="P(n), W(n), and the upper bound")
    add_common(p, ports=False)
    p.add_argument("--max", type=int, required=True)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "precision", DEFAULT_PRECISION) < 15:
            raise CliError("--precision must be at least 15")
        if getattr(args, "ports", 1) < 1:
            raise CliError("--ports must be at least 1")
        handlers = {
            "metrics": lambda a: _cmd_table(a, prefer_closed_form=False),
            "bounds": lambda a: _cmd_table(a, prefer_closed_form=True),
            "verify": _cmd_verify,
            "spectrum": _cmd_spectrum,
            "classes": _cmd_classes,
            "partitions": _cmd_partitions,
        }
        return handlers[args.command](args)
    except (CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConsistencyError as exc:
        print(f"consistency violation: {exc}", file=sys.stderr)
        return 2


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
