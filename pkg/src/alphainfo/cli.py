"""Command-line entry point.

Subcommands: ``info`` (measures of a distribution file), ``compare-defs``
(conditional-information definitions on one joint), ``bound`` (invert an
information value into a success ceiling), ``qmin`` (threshold crossing of
a tabulated curve), ``simulate`` / ``sweep`` (leakage-model experiments),
and ``plotdata`` (reshape a curve file for plotting).

Every output starts with ``#``-prefixed lines carrying the resolved
configuration, so files are self-describing and runs are reproducible;
identical configuration and seed give byte-identical output.  Exit codes:
0 success, 2 usage or input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import sys
from typing import List, Optional, Sequence

import numpy as np

from . import __version__, kernels
from .cond_info import compare_definitions, cond_alpha_info
from .fano import ThresholdNotReachedError, invert_success_bound, qmin_from_table
from .prob import InvalidDistributionError, Joint2, Joint3, Pmf, load_distribution
from .renyi import (
    LogBase,
    Order,
    alpha_divergence,
    alpha_entropy,
    arimoto_cond_entropy,
    sibson_info,
)
from .sca import EmptyPosteriorError, LeakageModel, build_bound_curve

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _parse_alpha_list(text: str) -> List[Order]:
    orders = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            orders.append(Order.from_float(float(token)))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad order {token!r}: {exc}")
    if not orders:
        raise argparse.ArgumentTypeError("empty order list")
    return orders


def _parse_q_grid(text: str) -> List[int]:
    """Grid grammar: 'q1,q2,...', 'start:stop[:step]', or 'start:stop:logN'
    (N log-spaced points, default 16 for plain 'log')."""
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) == 2:
                start, stop = int(parts[0]), int(parts[1])
                step = 1
            elif len(parts) == 3:
                start, stop = int(parts[0]), int(parts[1])
                if parts[2].startswith("log"):
                    count = int(parts[2][3:]) if parts[2] != "log" else 16
                    if count < 1 or start < 1:
                        raise ValueError("log grid needs start >= 1")
                    grid = np.unique(np.rint(np.geomspace(
                        start, stop, count)).astype(int))
                    return [int(v) for v in grid]
                step = int(parts[2])
            else:
                raise ValueError("too many ':' separators")
            if step < 1 or stop < start:
                raise ValueError("need start <= stop and step >= 1")
            return list(range(start, stop + 1, step))
        values = [int(t) for t in text.split(",") if t.strip()]
        if not values or any(v < 0 for v in values):
            raise ValueError("need a nonempty list of nonnegative counts")
        return sorted(set(values))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad q grid {text!r}: {exc}")


@contextlib.contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _emit(fh, command: str, config: dict, columns: Sequence[str],
          rows: Sequence[Sequence]) -> None:
    fh.write(f"# alphainfo {__version__}\n")
    fh.write(f"# command={command}\n")
    for key in sorted(config):
        fh.write(f"# {key}={config[key]}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def _alpha_csv(alphas: Sequence[Order]) -> str:
    return ",".join(str(a) for a in alphas)


def _base(args) -> LogBase:
    return LogBase.NATS if getattr(args, "nats", False) else LogBase.BITS


def cmd_info(args) -> int:
    dist = load_distribution(args.input)
    ref = load_distribution(args.q) if args.q else None
    base = _base(args)
    rows = []
    for a in args.alpha:
        if isinstance(dist, Pmf):
            rows.append(("entropy", str(a), alpha_entropy(dist, a, base)))
        elif isinstance(dist, Joint2):
            rows.append(("entropy_x", str(a),
                         alpha_entropy(Pmf(dist.probs.sum(axis=1)), a, base)))
            rows.append(("cond_entropy_x_given_y", str(a),
                         arimoto_cond_entropy(dist, a, base)))
            rows.append(("sibson_info", str(a), sibson_info(dist, a, base)))
        else:
            rows.append(("cond_info_011", str(a),
                         cond_alpha_info(dist, a, base)))
        if ref is not None:
            if ref.probs.shape != dist.probs.shape:
                raise InvalidDistributionError(
                    "reference distribution has a different shape")
            rows.append(("divergence", str(a),
                         alpha_divergence(Pmf(dist.probs.ravel()),
                                          Pmf(ref.probs.ravel()), a, base)))
    config = {"input": args.input, "q": args.q or "", "base": base.value,
              "alpha": _alpha_csv(args.alpha)}
    with _open_out(args.out) as fh:
        _emit(fh, "info", config, ("measure", "alpha", "value"), rows)
    return EXIT_OK


def cmd_compare_defs(args) -> int:
    dist = load_distribution(args.input)
    if not isinstance(dist, Joint3):
        raise InvalidDistributionError(
            "compare-defs needs a three-variable distribution file")
    base = _base(args)
    rows = []
    for a in args.alpha:
        rep = compare_definitions(dist, a, base)
        rows.append((str(a), rep.i000, rep.i001, rep.i010, rep.i011,
                     rep.ordering_ok))
    config = {"input": args.input, "base": base.value,
              "alpha": _alpha_csv(args.alpha)}
    with _open_out(args.out) as fh:
        _emit(fh, "compare-defs", config,
              ("alpha", "i000", "i001", "i010", "i011", "ordering_ok"), rows)
    return EXIT_OK


def cmd_bound(args) -> int:
    a = args.alpha[0]
    res = invert_success_bound(args.info_bits, args.M, a)
    config = {"alpha": str(a), "M": args.M, "info_bits": _fmt(args.info_bits)}
    with _open_out(args.out) as fh:
        _emit(fh, "bound", config,
              ("alpha", "M", "info_bits", "ps_upper"),
              [(str(a), args.M, args.info_bits, res.ps_upper)])
    return EXIT_OK


def _read_curve_file(path: str):
    """Rows and column names of a curve CSV, ignoring '#' comments."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        raw = [line for line in fh if not line.startswith("#")]
    rows = list(csv.reader(raw))
    if not rows:
        raise InvalidDistributionError(f"{path}: empty curve file")
    return rows[0], rows[1:]


def _curve_column(header: List[str], rows: List[List[str]], name: str,
                  path: str) -> np.ndarray:
    try:
        idx = header.index(name)
    except ValueError:
        raise InvalidDistributionError(
            f"{path}: no column {name!r} (have {header})") from None
    try:
        return np.array([float(r[idx]) for r in rows])
    except (ValueError, IndexError) as exc:
        raise InvalidDistributionError(f"{path}: bad value ({exc})") from None


def cmd_qmin(args) -> int:
    a = args.alpha[0]
    header, rows = _read_curve_file(args.curve)
    qs = _curve_column(header, rows, "q", args.curve).astype(int)
    if "info_bits" in header:
        infos = _curve_column(header, rows, "info_bits", args.curve)
    else:
        infos = _curve_column(header, rows, f"info_bits_{a}", args.curve)
    res = qmin_from_table(qs, infos, args.target_ps, args.M, a)
    config = {"curve": args.curve, "alpha": str(a), "M": args.M,
              "target_ps": _fmt(args.target_ps)}
    with _open_out(args.out) as fh:
        _emit(fh, "qmin", config,
              ("alpha", "M", "target_ps", "threshold_bits", "q_min",
               "info_at_qmin", "q_prev", "info_at_qprev"),
              [(str(a), args.M, args.target_ps, res.threshold_bits,
                res.q_min, res.info_at_qmin,
                "" if res.q_prev is None else res.q_prev,
                "" if res.info_at_qprev is None else res.info_at_qprev)])
    return EXIT_OK


def _curve_columns(alphas: Sequence[Order]) -> List[str]:
    cols = ["q", "sigma"]
    for a in alphas:
        cols += [f"info_bits_{a}", f"ps_upper_{a}"]
    return cols + ["ps_empirical", "emp_stderr"]


def _curve_rows(curve) -> List[list]:
    rows = []
    for qi, q in enumerate(curve.qs):
        row = [int(q), curve.sigma]
        for ai in range(len(curve.alphas)):
            row += [curve.info_bits[qi, ai], curve.ps_upper[qi, ai]]
        row += [curve.ps_empirical[qi], curve.emp_stderr[qi]]
        rows.append(row)
    return rows


def _sim_config(args, model: LeakageModel) -> dict:
    return {
        "bits": args.bits, "sigma": _fmt(args.sigma),
        "alpha": _alpha_csv(args.alphas), "q_grid": ",".join(
            str(q) for q in args.q_grid),
        "samples": args.samples, "trials": args.trials, "seed": args.seed,
        "M": model.key_cardinality, "backend": kernels.BACKEND,
    }


def _run_curve(args) -> tuple:
    model = LeakageModel.for_bits(args.bits, args.sigma)
    curve = build_bound_curve(model, args.q_grid, args.alphas,
                              n_samples=args.samples, n_trials=args.trials,
                              seed=args.seed)
    return model, curve


def cmd_simulate(args) -> int:
    model, curve = _run_curve(args)
    with _open_out(args.out) as fh:
        _emit(fh, "simulate", _sim_config(args, model),
              _curve_columns(curve.alphas), _curve_rows(curve))
    return EXIT_OK


def cmd_sweep(args) -> int:
    model, curve = _run_curve(args)
    config = _sim_config(args, model)
    config["target_ps"] = _fmt(args.target_ps)
    with _open_out(args.out_curve) as fh:
        _emit(fh, "sweep", config, _curve_columns(curve.alphas),
              _curve_rows(curve))
    qrows = []
    for ai, a in enumerate(curve.alphas):
        try:
            res = qmin_from_table(curve.qs, curve.info_bits[:, ai],
                                  args.target_ps, model.key_cardinality, a)
            qrows.append((str(a), args.target_ps, res.threshold_bits, True,
                          res.q_min, res.info_at_qmin,
                          "" if res.q_prev is None else res.q_prev,
                          "" if res.info_at_qprev is None else res.info_at_qprev))
        except ThresholdNotReachedError as exc:
            qrows.append((str(a), args.target_ps, exc.threshold_bits, False,
                          "", "", "", ""))
    if all(not row[3] for row in qrows):
        raise ThresholdNotReachedError(qrows[0][2], int(curve.qs[-1]))
    with _open_out(args.out_qmin) as fh:
        _emit(fh, "sweep", config,
              ("alpha", "target_ps", "threshold_bits", "reached", "q_min",
               "info_at_qmin", "q_prev", "info_at_qprev"), qrows)
    return EXIT_OK


def cmd_plotdata(args) -> int:
    header, rows = _read_curve_file(args.curve)
    alphas = [c[len("info_bits_"):] for c in header
              if c.startswith("info_bits_")]
    if not alphas:
        raise InvalidDistributionError(
            f"{args.curve}: not a sweep curve file (no per-alpha columns)")
    qs = _curve_column(header, rows, "q", args.curve)
    sigma = _curve_column(header, rows, "sigma", args.curve)
    emp = _curve_column(header, rows, "ps_empirical", args.curve)
    emp_se = _curve_column(header, rows, "emp_stderr", args.curve)
    out_rows = []
    for a in alphas:
        info = _curve_column(header, rows, f"info_bits_{a}", args.curve)
        up = _curve_column(header, rows, f"ps_upper_{a}", args.curve)
        for i in range(len(qs)):
            out_rows.append((a, int(qs[i]), sigma[i], info[i], up[i],
                             emp[i], emp_se[i]))
    with _open_out(args.out) as fh:
        _emit(fh, "plotdata", {"curve": args.curve},
              ("alpha", "q", "sigma", "info_bits", "ps_upper",
               "ps_empirical", "emp_stderr"), out_rows)
    return EXIT_OK


def _add_sim_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bits", type=int, choices=(4, 8), default=4,
                   help="word width: 4 for the desk-scale model, 8 for AES")
    p.add_argument("--sigma", type=float, required=True,
                   help="noise standard deviation")
    p.add_argument("--alphas", type=_parse_alpha_list, required=True,
                   help="comma-separated orders, 1 = Shannon")
    p.add_argument("--q-grid", type=_parse_q_grid, required=True,
                   help="trace counts: 'q1,q2,...', 'a:b[:step]' or 'a:b:logN'")
    p.add_argument("--samples", type=int, default=4000,
                   help="Monte-Carlo samples per estimate")
    p.add_argument("--trials", type=int, default=1000,
                   help="attack trials per grid point")
    p.add_argument("--seed", type=int, default=0, help="master seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alphainfo",
        description="Renyi-order information measures and side-channel "
                    "success-rate ceilings")
    parser.add_argument("--version", action="version",
                        version=f"alphainfo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="measures of a distribution file")
    p.add_argument("input", help="distribution CSV (1, 2 or 3 variables)")
    p.add_argument("--alpha", type=_parse_alpha_list, default=[Order.shannon()],
                   help="comma-separated orders (default 1 = Shannon)")
    p.add_argument("--q", default=None,
                   help="reference distribution for a divergence row")
    p.add_argument("--nats", action="store_true", help="report in nats")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("compare-defs",
                       help="conditional-information definitions on a joint")
    p.add_argument("input", help="three-variable distribution CSV")
    p.add_argument("--alpha", type=_parse_alpha_list, required=True)
    p.add_argument("--nats", action="store_true")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_compare_defs)

    p = sub.add_parser("bound", help="success ceiling from an information value")
    p.add_argument("--alpha", type=_parse_alpha_list, required=True)
    p.add_argument("--M", type=int, required=True, help="key cardinality")
    p.add_argument("--info-bits", type=float, required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("qmin", help="threshold crossing of a curve file")
    p.add_argument("curve", help="CSV with columns q,info_bits (or sweep output)")
    p.add_argument("--alpha", type=_parse_alpha_list, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--target-ps", type=float, default=0.95)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_qmin)

    p = sub.add_parser("simulate", help="estimate + attack over a trace grid")
    _add_sim_options(p)
    p.add_argument("--out", default="curve.csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep",
                       help="simulate, then minimum trace counts per order")
    _add_sim_options(p)
    p.add_argument("--target-ps", type=float, default=0.95)
    p.add_argument("--out-curve", default="curve.csv")
    p.add_argument("--out-qmin", default="qmin.csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("plotdata", help="curve file to one series per order")
    p.add_argument("curve")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_plotdata)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "alpha", None) is not None and args.command in (
            "bound", "qmin") and len(args.alpha) != 1:
        parser.error(f"{args.command} takes a single --alpha")
    try:
        return args.func(args)
    except (InvalidDistributionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EmptyPosteriorError, ThresholdNotReachedError,
            FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
