"""Command-line front end with machine-readable output and a result cache.

JSON is the stable interface; csv and table renderings are conveniences
derived from the same payload. Exit codes: 0 success/verified, 1 a
verification reported false, 2 usage error, 3 internal assertion failure,
4 certificate gap.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Any

from . import __version__
from .search import (
    MODE_EXACT_H,
    MODE_PAPER_RELAXATION,
    CertificateGap,
    dominance_chain,
    explore_gaps,
    global_min_r,
    n_min,
    tail_bound_n0,
    verify_twin_theorem,
)
from .serialize import (
    certificate_to_json,
    chain_report_to_json,
    gap_record_to_json,
    search_report_to_json,
    twin_report_to_json,
)
from .valuation import (
    InternalCheckError,
    PrimeContext,
    PrimeContextExhausted,
    factorize_factorial,
    legendre_digit_form,
    legendre_floor_sum,
    primes_upto,
)

EXIT_OK = 0
EXIT_REPORTED_FALSE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3
EXIT_CERTIFICATE_GAP = 4

CONFIG_ENV_VAR = "FACTDOM_CONFIG"

_CONFIG_KEYS = {"format", "cache", "precision_cap", "precision_start", "sieve_limit"}


@dataclass
class RunConfig:
    precision_start_bits: int = 64
    precision_cap_bits: int = 4096
    sieve_limit: int = 1_000_000
    output_format: str = "json"
    cache_path: str | None = None

    def validate(self) -> None:
        if self.precision_start_bits < 1:
            raise ValueError("precision start must be positive")
        if self.precision_start_bits > self.precision_cap_bits:
            raise ValueError("precision start exceeds precision cap")
        if self.sieve_limit < 2:
            raise ValueError("sieve limit must be >= 2")
        if self.output_format not in ("json", "csv", "table"):
            raise ValueError(f"unknown output format {self.output_format!r}")


def _load_config_file() -> dict[str, Any]:
    path = os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys in {path}: {sorted(unknown)}")
    return data


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    defaults = _load_config_file()
    config = RunConfig(
        precision_start_bits=int(defaults.get("precision_start", 64)),
        precision_cap_bits=int(defaults.get("precision_cap", 4096)),
        sieve_limit=int(defaults.get("sieve_limit", 1_000_000)),
        output_format=str(defaults.get("format", "json")),
        cache_path=defaults.get("cache"),
    )
    if getattr(args, "format", None) is not None:
        config.output_format = args.format
    if getattr(args, "cache", None) is not None:
        config.cache_path = args.cache
    if getattr(args, "precision_cap", None) is not None:
        config.precision_cap_bits = args.precision_cap
    if getattr(args, "sieve_limit", None) is not None:
        config.sieve_limit = args.sieve_limit
    config.validate()
    return config


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (payload, exit_code)
# ---------------------------------------------------------------------------


def _require_positive(value: int, name: str) -> None:
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")


def _target_primes(args: argparse.Namespace, ctx: PrimeContext) -> list[int]:
    if (args.p is None) == (args.upto is None):
        raise ValueError("exactly one of --p or --upto is required")
    if args.p is not None:
        ctx.require_prime(args.p)
        return [args.p]
    if args.upto < 2:
        raise ValueError("--upto must be >= 2")
    return [p for p in ctx.primes if p <= args.upto]


def _cmd_valuation(args, config, ctx) -> tuple[dict[str, Any], int]:
    _require_positive(args.n, "--n")
    ctx.require_prime(args.p)
    floor_sum = legendre_floor_sum(args.n, args.p)
    digit_form = legendre_digit_form(args.n, args.p)
    if floor_sum != digit_form:
        raise InternalCheckError(
            f"Legendre forms disagree at n={args.n}, p={args.p}: "
            f"{floor_sum} vs {digit_form}"
        )
    result = {
        "n": args.n,
        "p": args.p,
        "floor_sum": floor_sum,
        "digit_form": digit_form,
        "nu": digit_form,
    }
    return {"result": result}, EXIT_OK


def _cmd_factorize(args, config, ctx) -> tuple[dict[str, Any], int]:
    if args.n < 2:
        raise ValueError(f"--n must be >= 2, got {args.n}")
    factorization = factorize_factorial(args.n, ctx)
    checked = args.n <= 500
    if checked and factorization.reconstruct() != math.factorial(args.n):
        raise InternalCheckError(f"reconstruction of {args.n}! failed")
    result = {
        "n": args.n,
        "factors": [list(pair) for pair in factorization.factors],
        "reconstruction_checked": checked,
    }
    return {"result": result}, EXIT_OK


def _cmd_nmin(args, config, ctx) -> tuple[dict[str, Any], int]:
    reports = [
        n_min(
            p,
            ctx,
            precision_bits=config.precision_start_bits,
            cap_bits=config.precision_cap_bits,
        )
        for p in _target_primes(args, ctx)
    ]
    serialized = [search_report_to_json(r) for r in reports]
    if args.p is not None:
        return {
            "result": serialized[0],
            "certificate": serialized[0]["certificate"],
        }, EXIT_OK
    return {"result": serialized}, EXIT_OK


def _cmd_n0(args, config, ctx) -> tuple[dict[str, Any], int]:
    ctx.require_prime(args.p)
    mode = MODE_PAPER_RELAXATION if args.mode == "paper-relaxation" else MODE_EXACT_H
    cert = tail_bound_n0(
        args.p,
        mode,
        ctx,
        precision_bits=config.precision_start_bits,
        cap_bits=config.precision_cap_bits,
    )
    payload = certificate_to_json(cert)
    return {"result": payload, "certificate": payload}, EXIT_OK


def _cmd_rmin(args, config, ctx) -> tuple[dict[str, Any], int]:
    ctx.require_prime(args.p)
    if not ctx.is_prime(args.p + 2):
        raise ValueError(f"{args.p} is not a twin-lower prime ({args.p + 2} is composite)")
    report = global_min_r(
        args.p,
        ctx,
        precision_bits=config.precision_start_bits,
        cap_bits=config.precision_cap_bits,
    )
    serialized = search_report_to_json(report)
    return {"result": serialized, "certificate": serialized["certificate"]}, EXIT_OK


def _cmd_verify_twin(args, config, ctx) -> tuple[dict[str, Any], int]:
    targets = _target_primes(args, ctx)
    if args.upto is not None:
        targets = [p for p in targets if p != 2 and ctx.is_prime(p + 2)]
        if not targets:
            raise ValueError(f"no twin-lower primes up to {args.upto}")
    else:
        p = targets[0]
        if p == 2 or not ctx.is_prime(p + 2):
            raise ValueError(f"{p} is not a twin-lower prime")
    reports = [verify_twin_theorem(p, ctx) for p in targets]
    all_passed = all(r.verdict for r in reports)
    serialized = [twin_report_to_json(r) for r in reports]
    result = serialized[0] if args.p is not None else serialized
    return {"result": result}, EXIT_OK if all_passed else EXIT_REPORTED_FALSE


def _cmd_chain(args, config, ctx) -> tuple[dict[str, Any], int]:
    report = dominance_chain(args.n, args.m, ctx)
    return (
        {"result": chain_report_to_json(report)},
        EXIT_OK if report.holds else EXIT_REPORTED_FALSE,
    )


def _cmd_explore_gaps(args, config, ctx) -> tuple[dict[str, Any], int]:
    if args.upto is None:
        raise ValueError("--upto is required")
    records = explore_gaps(
        args.upto,
        ctx,
        precision_bits=config.precision_start_bits,
        cap_bits=config.precision_cap_bits,
    )
    return {"result": [gap_record_to_json(r) for r in records]}, EXIT_OK


_HANDLERS = {
    "valuation": _cmd_valuation,
    "factorize": _cmd_factorize,
    "nmin": _cmd_nmin,
    "n0": _cmd_n0,
    "rmin": _cmd_rmin,
    "verify-twin": _cmd_verify_twin,
    "chain": _cmd_chain,
    "explore-gaps": _cmd_explore_gaps,
}


def _params_of(args: argparse.Namespace) -> dict[str, Any]:
    params = {}
    for key in ("n", "p", "m", "upto", "mode"):
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    return params


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------


def _cache_key(subcommand: str, params: dict[str, Any]) -> str:
    return json.dumps(
        {"subcommand": subcommand, "params": params},
        sort_keys=True,
        separators=(",", ":"),
    )


def _cache_lookup(path: str, key: str) -> dict[str, Any] | None:
    try:
        handle = open(path, encoding="utf-8")
    except OSError:
        return None
    hit = None
    with handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                entry = json.loads(line)
                if entry["key"] == key and entry["tool_version"] == __version__:
                    hit = entry["value"]
            except (json.JSONDecodeError, KeyError, TypeError):
                print(
                    f"warning: skipping corrupt cache line {lineno} in {path}",
                    file=sys.stderr,
                )
    return hit


def _cache_store(path: str, key: str, value: dict[str, Any]) -> None:
    entry = {
        "key": key,
        "value": value,
        "tool_version": __version__,
        "created_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    with open(path, "a", encoding="utf-8") as handle:
        handle.write(json.dumps(entry, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _flatten(value: Any, prefix: str = "") -> list[tuple[str, str]]:
    if isinstance(value, dict):
        rows = []
        for key, child in value.items():
            rows.extend(_flatten(child, f"{prefix}.{key}" if prefix else key))
        return rows
    if isinstance(value, list):
        rows = []
        for i, child in enumerate(value):
            rows.extend(_flatten(child, f"{prefix}.{i}"))
        return rows
    return [(prefix, "" if value is None else str(value))]


def _render(envelope: dict[str, Any], output_format: str) -> str:
    if output_format == "json":
        return json.dumps(envelope, indent=2, sort_keys=True) + "\n"
    rows = _flatten(envelope)
    if output_format == "csv":
        lines = ["key,value"]
        for key, value in rows:
            needs_quote = "," in value or '"' in value
            if needs_quote:
                value = '"' + value.replace('"', '""') + '"'
            lines.append(f"{key},{value}")
        return "\n".join(lines) + "\n"
    width = max((len(key) for key, _ in rows), default=0)
    return "\n".join(f"{key.ljust(width)}  {value}" for key, value in rows) + "\n"


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps subparsers from clobbering values parsed before the
    # subcommand, so the shared flags work in either position
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--format", choices=("json", "csv", "table"), default=argparse.SUPPRESS
    )
    shared.add_argument("--cache", metavar="PATH", default=argparse.SUPPRESS)
    shared.add_argument(
        "--precision-cap", type=int, metavar="BITS", default=argparse.SUPPRESS
    )
    shared.add_argument(
        "--sieve-limit", type=int, metavar="N", default=argparse.SUPPRESS
    )
    parser = argparse.ArgumentParser(
        prog="factdom",
        description="maximal prime-power divisors of factorials: "
        "certified dominance, thresholds, and twin-prime verification",
        parents=[shared],
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    cmd = sub.add_parser(
        "valuation",
        help="exponent of p in n! by both Legendre forms",
        parents=[shared],
    )
    cmd.add_argument("--n", type=int, required=True)
    cmd.add_argument("--p", type=int, required=True)

    cmd = sub.add_parser(
        "factorize", help="full prime factorization of n!", parents=[shared]
    )
    cmd.add_argument("--n", type=int, required=True)

    cmd = sub.add_parser(
        "nmin",
        help="least N beyond which p dominates its successor",
        parents=[shared],
    )
    cmd.add_argument("--p", type=int)
    cmd.add_argument("--upto", type=int)

    cmd = sub.add_parser(
        "n0",
        help="certified tail threshold for the floor-log bound",
        parents=[shared],
    )
    cmd.add_argument("--p", type=int, required=True)
    cmd.add_argument(
        "--mode",
        choices=("exact-h", "paper-relaxation"),
        default="exact-h",
    )

    cmd = sub.add_parser(
        "rmin", help="global minimum of the twin digit-sum ratio", parents=[shared]
    )
    cmd.add_argument("--p", type=int, required=True)

    cmd = sub.add_parser(
        "verify-twin",
        help="verify n_min(p) = (p^2+p)/2 for twins",
        parents=[shared],
    )
    cmd.add_argument("--p", type=int)
    cmd.add_argument("--upto", type=int)

    cmd = sub.add_parser(
        "chain",
        help="descending chain of maximal prime powers at n",
        parents=[shared],
    )
    cmd.add_argument("--n", type=int, required=True)
    cmd.add_argument("--m", type=int, required=True)

    cmd = sub.add_parser(
        "explore-gaps", help="n_min survey grouped by prime gap", parents=[shared]
    )
    cmd.add_argument("--upto", type=int, required=True)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        config = _resolve_config(args)
        ctx = primes_upto(config.sieve_limit)
        handler = _HANDLERS[args.subcommand]
        params = _params_of(args)
        key = _cache_key(args.subcommand, params)
        cached = _cache_lookup(config.cache_path, key) if config.cache_path else None
        if cached is not None:
            payload, code = cached["payload"], int(cached["exit_code"])
        else:
            payload, code = handler(args, config, ctx)
            if config.cache_path:
                _cache_store(
                    config.cache_path, key, {"payload": payload, "exit_code": code}
                )
        envelope = {
            "tool_version": __version__,
            "subcommand": args.subcommand,
            "params": params,
        }
        envelope.update(payload)
        sys.stdout.write(_render(envelope, config.output_format))
        return code
    except (ValueError, PrimeContextExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalCheckError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except CertificateGap as exc:
        print(f"certificate gap: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE_GAP


if __name__ == "__main__":
    sys.exit(main())
