"""Command-line surface: encode, decode, plan, audit, rates.

Exit codes: 0 success, 1 validation or audit failure (bad share files,
unreadable input, violated bound, oversized oracle instance), 2 usage
errors (argparse rejections, malformed --alpha, directory-count
mismatch).  The leakage budget is only ever accepted as a fraction
string "l/k"; floats would silently break the exact-rational contract.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from pathlib import Path

from . import codec
from .audit import entropy_oracle, rate_report, structural_audit
from .errors import XorshardError
from .layout import build_layout, format_plan
from .params import PrivacyBudget, derive_params, normalize_alpha
from .shareio import Dispersal, collect, disperse

SEED_ENV_VAR = "XORSHARD_SEED"


def _alpha_arg(text: str) -> PrivacyBudget:
    numerator, slash, denominator = text.partition("/")
    if not slash or not numerator.isdigit() or not denominator.isdigit():
        raise argparse.ArgumentTypeError(
            f"alpha must be a fraction like 3/10, got {text!r}")
    try:
        return normalize_alpha(int(numerator), int(denominator))
    except XorshardError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _servers_arg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"server count must be an integer, got {text!r}") from None
    if value < 2:
        raise argparse.ArgumentTypeError(f"need at least 2 servers, got {value}")
    return value


def _add_budget_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=_alpha_arg, required=True,
                        metavar="L/K", help="leakage budget as a fraction, e.g. 3/10")
    parser.add_argument("-T", "--servers", type=_servers_arg, required=True,
                        metavar="N", help="number of server directories")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xorshard",
        description="Split a file across T servers; all T reconstruct it, "
                    "any T-1 learn at most an alpha fraction.")
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode", help="split a file into per-directory shares")
    _add_budget_args(enc)
    enc.add_argument("--seed", type=int, default=None,
                     help="deterministic keys (TEST MODE ONLY, breaks secrecy)")
    enc.add_argument("input", type=Path, help="file to split")
    enc.add_argument("dirs", nargs="+", type=Path, metavar="DIR",
                     help="one directory per server, exactly T of them")

    dec = sub.add_parser("decode", help="reconstruct the file from all share directories")
    dec.add_argument("-o", "--output", type=Path, required=True)
    dec.add_argument("dirs", nargs="+", type=Path, metavar="DIR")

    pln = sub.add_parser("plan", help="print the symbolic slot layout")
    _add_budget_args(pln)

    aud = sub.add_parser("audit", help="verify the leakage bounds for a parameter set")
    _add_budget_args(aud)
    aud.add_argument("--entropy", action="store_true",
                     help="also run the exact mutual-information oracle")
    aud.add_argument("--part-bits", type=int, default=1, metavar="B",
                     help="oracle granularity in bits per part (default 1)")

    rat = sub.add_parser("rates", help="print storage/randomness ratios vs their floors")
    _add_budget_args(rat)
    rat.add_argument("--part-len", type=int, default=1, metavar="BYTES",
                     help="part length used for the concrete bit counts (default 1)")

    return parser


def _usage_error(message: str) -> int:
    print(f"usage error: {message}", file=sys.stderr)
    return 2


def _pick_rng(seed: int | None) -> random.Random | None:
    if seed is None:
        return None  # production path: operating-system randomness
    override = os.environ.get(SEED_ENV_VAR)
    if override is not None:
        seed = int(override)
    return random.Random(seed)


def _cmd_encode(args) -> int:
    if len(args.dirs) != args.servers:
        return _usage_error(
            f"got {len(args.dirs)} directories for {args.servers} servers")
    if args.seed is not None:
        try:
            rng = _pick_rng(args.seed)
        except ValueError:
            return _usage_error(f"{SEED_ENV_VAR} must be an integer")
    else:
        rng = None
    params = derive_params(args.servers, args.alpha)
    plan = build_layout(params)
    data = args.input.read_bytes()
    blobs = codec.encode(data, plan, rng)
    paths = disperse(blobs, Dispersal.from_dirs(args.dirs))
    part_len = blobs[0].part_len
    print(params.describe())
    print(f"part_len={part_len} original_len={len(data)}")
    print(f"lambda_bits={(params.parts - params.leak) * part_len * 8} "
          f"rho_bits={params.n_keys * part_len * 8}")
    for path in paths:
        print(f"wrote {path}")
    return 0


def _cmd_decode(args) -> int:
    blobs = collect(Dispersal.from_dirs(args.dirs))
    first = blobs[0]
    params = derive_params(first.servers, PrivacyBudget(first.leak, first.parts))
    plan = build_layout(params)
    data = codec.decode(blobs, plan)
    args.output.write_bytes(data)
    print(f"reconstructed {len(data)} bytes from {len(blobs)} shares "
          f"-> {args.output}")
    return 0


def _cmd_plan(args) -> int:
    params = derive_params(args.servers, args.alpha)
    print(params.describe())
    print(format_plan(build_layout(params)))
    return 0


def _cmd_audit(args) -> int:
    if args.part_bits < 1:
        return _usage_error(f"--part-bits must be >= 1, got {args.part_bits}")
    params = derive_params(args.servers, args.alpha)
    if args.entropy:
        report = entropy_oracle(params, args.part_bits)
    else:
        report = structural_audit(build_layout(params))
    for line in report.as_text():
        print(line)
    return 0 if report.passed else 1


def _cmd_rates(args) -> int:
    if args.part_len < 1:
        return _usage_error(f"--part-len must be >= 1, got {args.part_len}")
    params = derive_params(args.servers, args.alpha)
    report = rate_report(build_layout(params), args.part_len)
    for line in report.as_kv():
        print(line)
    return 0


_COMMANDS = {
    "encode": _cmd_encode,
    "decode": _cmd_decode,
    "plan": _cmd_plan,
    "audit": _cmd_audit,
    "rates": _cmd_rates,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except XorshardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
