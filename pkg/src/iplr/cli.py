"""Command line: ``iplr construct|points|convergence|integrate``.

Exit codes: 0 success, 2 invalid input, 3 size/scale guard violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path
from typing import Sequence

from .criteria import CriterionKind, optimize_lambda, theoretical_bound
from .descriptor import RuleDescriptor
from .integrand import PolyProductIntegrand, fit_slope, qmc_estimate
from .interlace import generate_interlaced_points
from .search import ALGORITHMS, SearchConfig, SearchGuardError, construct
from .validation import check_weights
from .walsh import Weights

EXIT_OK, EXIT_INPUT, EXIT_GUARD = 0, 2, 3
NAIVE_MAX_POINTS = 2**20
FAST_MAX_POINTS = 2**24

logger = logging.getLogger("iplr")


class GuardError(Exception):
    pass


class InputError(Exception):
    pass


def thread_count() -> int:
    """Value of IPLR_THREADS (default 1); computation is single-threaded either way."""
    raw = os.environ.get("IPLR_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"IPLR_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InputError(f"IPLR_THREADS must be a positive integer, got {raw!r}")
    return n


def _json_arg(text: str):
    """Inline JSON, a path to a JSON file, or None if ``text`` is neither."""
    path = Path(text)
    if path.is_file():
        try:
            return json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"{text}: invalid JSON ({exc})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return None


def parse_weights(text: str | None, s: int) -> Weights:
    """``--weights``: JSON (inline or file), a comma list of product weights, or one value for all."""
    if text is None:
        return check_weights(None, s)
    obj = _json_arg(text)
    try:
        if obj is None:
            obj = [float(v) for v in text.split(",")]
        elif isinstance(obj, (int, float)):
            obj = [float(obj)] * s
        return check_weights(obj, s)
    except (TypeError, ValueError, KeyError) as exc:
        raise InputError(f"bad --weights: {exc}") from None


def parse_integrand(text: str | None, s: int) -> PolyProductIntegrand:
    if text is None:
        return PolyProductIntegrand.harmonic(s)
    obj = _json_arg(text)
    try:
        if obj is None:
            f = PolyProductIntegrand(tuple(float(v) for v in text.split(",")))
        elif isinstance(obj, (int, float)):
            f = PolyProductIntegrand((float(obj),) * s)
        elif isinstance(obj, list):
            f = PolyProductIntegrand(tuple(obj))
        else:
            f = PolyProductIntegrand.from_json(obj)
    except (TypeError, ValueError, KeyError) as exc:
        raise InputError(f"bad --integrand: {exc}") from None
    if f.s != s:
        raise InputError(f"integrand has s = {f.s}, rule has s = {s}")
    return f


def parse_m_range(text: str) -> range:
    try:
        lo, hi = (int(v) for v in text.split(".."))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from None
    if not 1 <= lo <= hi:
        raise argparse.ArgumentTypeError(f"need 1 <= a <= b, got {text!r}")
    return range(lo, hi + 1)


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _config(args, m: int) -> SearchConfig:
    try:
        alpha = args.alpha if args.alpha is not None else args.d
        kind = CriterionKind.b1(alpha) if args.criterion == "b1" else CriterionKind.b2(alpha)
        return SearchConfig(args.b, m, args.s, args.d, kind, parse_weights(args.weights, args.s))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _guard_scale(args, m: int) -> None:
    limit = FAST_MAX_POINTS if args.algorithm == "fast-cbc" else NAIVE_MAX_POINTS
    if args.b**m > limit:
        raise GuardError(f"b**m = {args.b**m} exceeds the {args.algorithm} limit {limit}")


def best_bound(config: SearchConfig, algorithm: str) -> tuple[float, float]:
    """Tightest theoretical bound over the lambda grid: ``(lambda*, value)``."""
    family = "korobov" if algorithm == "korobov" else "cbc"
    alpha = config.criterion.alpha or config.d
    params = {"b": config.b, "m": config.m, "s": config.s, "d": config.d, "alpha": alpha}
    if config.weights.is_zero():
        return 1.0, 0.0
    return optimize_lambda(
        lambda lam: theoretical_bound(family, config.criterion, params, config.weights, lam), params)


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def _load(path: str) -> RuleDescriptor:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read descriptor: {exc}") from None
    return RuleDescriptor.loads(text)


def cmd_construct(args) -> int:
    _guard_scale(args, args.m)
    config = _config(args, args.m)
    result = construct(config, args.algorithm)
    desc = RuleDescriptor.from_result(result)
    _write(desc.dumps(), args.out)
    lam, bound = best_bound(config, args.algorithm)
    print(f"criterion {config.criterion.name} value {result.value.value!r}")
    print(f"bound {bound!r} at lambda {lam!r}")
    print(f"initial error (gamma_empty) {config.weights.gamma_empty!r}")
    return EXIT_OK


def cmd_points(args) -> int:
    desc = _load(args.descriptor)
    pts = generate_interlaced_points(desc.rule)
    den = pts.denominator
    if args.format == "rational":
        rows = (",".join(f"{int(v)}/{den}" for v in row) for row in pts.numerators)
    else:
        rows = (",".join(repr(float(v)) for v in row) for row in pts.as_float())
    _write("".join(r + "\n" for r in rows), args.out)
    return EXIT_OK


def cmd_convergence(args) -> int:
    for m in args.m_range:
        _guard_scale(args, m)
    lines = ["m,N,value,bound,lambda"]
    ms, values = [], []
    for m in args.m_range:
        config = _config(args, m)
        result = construct(config, args.algorithm)
        lam, bound = best_bound(config, args.algorithm)
        lines.append(f"{m},{config.b**m},{result.value.value!r},{bound!r},{lam!r}")
        ms.append(m)
        values.append(result.value.value)
        logger.info("m=%d value=%.6e bound=%.6e", m, result.value.value, bound)
    slope = fit_slope(ms, values, base=args.b)
    _write("\n".join(lines) + "\n", args.out)
    msg = f"slope {'nan' if math.isnan(slope) else repr(slope)}\n"
    (sys.stdout if args.out else sys.stderr).write(msg)
    return EXIT_OK


def cmd_integrate(args) -> int:
    desc = _load(args.descriptor)
    f = parse_integrand(args.integrand, desc.rule.s)
    est = qmc_estimate(f, generate_interlaced_points(desc.rule).as_float())
    out = {"estimate": est, "exact": f.exact, "abs_error": abs(est - f.exact),
           "n_points": desc.rule.n_points, "integrand": f.to_json()}
    _write(json.dumps(out, indent=2) + "\n", args.out)
    return EXIT_OK


def _add_construct_flags(p: argparse.ArgumentParser, with_m: bool) -> None:
    p.add_argument("--b", type=_positive, default=2)
    if with_m:
        p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--s", type=_positive, required=True)
    p.add_argument("--d", type=_positive, required=True)
    p.add_argument("--alpha", type=_positive, default=None, help="smoothness (default d)")
    p.add_argument("--criterion", choices=["b1", "b2"], default="b1")
    p.add_argument("--algorithm", choices=sorted(ALGORITHMS), default="cbc")
    p.add_argument("--weights", default=None,
                   help="JSON file, inline JSON or comma list of product weights (default j**-2)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iplr", description="Interlaced polynomial lattice rules.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="search for a generating vector")
    _add_construct_flags(p, with_m=True)
    p.add_argument("--out", required=True, help="descriptor JSON path")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("points", help="export the interlaced point set as CSV")
    p.add_argument("descriptor")
    p.add_argument("--format", choices=["rational", "double"], default="rational")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("convergence", help="criterion and bound over a range of m")
    _add_construct_flags(p, with_m=False)
    p.add_argument("--m-range", type=parse_m_range, required=True, dest="m_range")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("integrate", help="apply a rule to a test integrand")
    p.add_argument("descriptor")
    p.add_argument("--integrand", default=None,
                   help="JSON (inline or file) or comma list of coefficients (default c_j = 1/j)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_integrate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        thread_count()
        return args.func(args)
    except (GuardError, SearchGuardError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
