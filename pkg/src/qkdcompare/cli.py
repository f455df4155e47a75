"""Command-line interface.

Subcommands:
    rate          evaluate one protocol at one channel point
    bounds        repeaterless capacity bounds for one channel point
    sweep         run a grid sweep from a config file (CSV + metadata)
    compare       build a comparison map from a config file
    oracle-check  cross-check closed-form qubit statistics against the
                  numeric Fock-space channel representation

Exit codes: 0 success, 2 configuration/usage error, 3 evaluation error,
4 oracle deviation above tolerance.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import numpy as np

from ._version import __version__
from .bounds import plob_bounds
from .channel import PhaseNoise, ThermalLossChannel, combined_channel_stats
from .config import (
    COMPARE_KINDS,
    load_document,
    parse_compare_config,
    parse_sweep_config,
)
from .dv import Protocol
from .errors import ConfigError, KeyRateError
from .fock import oracle_qubit_channel, oracle_rail_probabilities, oracle_x_basis_qber
from .link import eta_from_distance
from .protocols import evaluate_rate
from .sweep import run_compare, run_sweep, write_artifacts

FULL_ETAS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
FULL_NTHS = (0.01, 0.1, 0.5, 1.0, 2.0)
DEPHASE_ETAS = (0.1, 0.3, 0.5, 0.7, 0.9)
DEPHASE_NTHS = (0.01, 0.1, 0.3, 1.0, 2.0)
DEPHASE_SIGMA2S = (0.0, 0.01, 0.04)

_PHI_PLUS = np.zeros((4, 4))
_PHI_PLUS[np.ix_((0, 3), (0, 3))] = 0.5


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return str(obj)


def _emit(document: dict) -> None:
    print(json.dumps(document, indent=2, sort_keys=True, default=_json_default))


def _channel_from_args(args) -> ThermalLossChannel:
    if args.eta is not None:
        eta = args.eta
    else:
        eta = eta_from_distance(args.distance_km, args.attenuation_db_per_km)
    return ThermalLossChannel(eta=eta, n_th=args.nth)


def _add_channel_arguments(parser: argparse.ArgumentParser) -> None:
    loss = parser.add_mutually_exclusive_group(required=True)
    loss.add_argument("--eta", type=float, help="channel transmissivity in (0, 1]")
    loss.add_argument("--distance-km", type=float, help="fibre length in km")
    parser.add_argument("--nth", type=float, default=0.0,
                        help="thermal occupation of the environment")
    parser.add_argument("--attenuation-db-per-km", type=float, default=0.2)


def _cmd_rate(args) -> int:
    channel = _channel_from_args(args)
    phase = PhaseNoise(args.sigma2)
    options: dict = {}
    if args.mu is not None:
        options["mu"] = args.mu
    if args.squeezing_db is not None:
        options["squeezing_db"] = args.squeezing_db
    if args.optimize_va:
        options["optimize_va"] = True
    if args.mu_max_db is not None:
        options["mu_max"] = 10.0 ** (args.mu_max_db / 10.0)
    if args.xi_b is not None:
        options["xi_b"] = args.xi_b
    if args.optimize_xi:
        options["optimize_xi"] = True
    if args.q is not None:
        options["q"] = args.q
    if args.optimize_q:
        options["optimize_q"] = True
    if args.excess_placement is not None:
        options["excess_placement"] = args.excess_placement
    result = evaluate_rate(Protocol(args.protocol), channel, phase, **options)
    _emit(
        {
            "protocol": result.protocol.value,
            "eta": channel.eta,
            "nth": channel.n_th,
            "sigma2": phase.variance,
            "raw_rate": result.raw_rate,
            "rate": result.rate,
            "optimal_param": result.optimal_param,
            "diagnostics": dict(result.diagnostics),
        }
    )
    return 0


def _cmd_bounds(args) -> int:
    channel = _channel_from_args(args)
    bounds = plob_bounds(channel)
    _emit(
        {
            "eta": channel.eta,
            "nth": channel.n_th,
            "k_lower": bounds.lower,
            "k_upper": bounds.upper,
            "eb_breaking": bounds.eb_breaking,
        }
    )
    return 0


def _cmd_sweep(args) -> int:
    document = load_document(args.config)
    config = parse_sweep_config(document)
    result = run_sweep(config)
    metadata = write_artifacts(result, config.output_csv, config.output_metadata)
    _emit(
        {
            "csv": config.output_csv,
            "metadata": config.output_metadata,
            "rows": metadata["row_count"],
            "csv_sha256": metadata["csv_sha256"],
        }
    )
    return 0


def _cmd_compare(args) -> int:
    document = load_document(args.config)
    config = parse_compare_config(document, args.kind)
    result = run_compare(config)
    metadata = write_artifacts(result, config.output_csv, config.output_metadata)
    _emit(
        {
            "kind": config.kind,
            "csv": config.output_csv,
            "metadata": config.output_metadata,
            "rows": metadata["row_count"],
            "csv_sha256": metadata["csv_sha256"],
        }
    )
    return 0


def _oracle_lambda(channel: ThermalLossChannel) -> float:
    """Depolarizing weight via the Bell-state fidelity of the two-rail map."""
    action = oracle_qubit_channel(channel)
    choi = action.choi()
    choi = choi / np.trace(choi).real
    fidelity = float(np.sum(choi * _PHI_PLUS).real)
    return 4.0 * (1.0 - fidelity) / 3.0


def _cmd_oracle_check(args) -> int:
    etas = FULL_ETAS if not args.quick else (0.1, 0.5, 0.9)
    nths = FULL_NTHS if not args.quick else (0.1, 1.0)
    dep_etas = DEPHASE_ETAS if not args.quick else (0.3, 0.9)
    dep_nths = DEPHASE_NTHS if not args.quick else (0.1, 1.0)
    dep_sigma2s = DEPHASE_SIGMA2S if not args.quick else (0.0, 0.04)
    worst = {"q_z": 0.0, "p_success": 0.0, "lambda": 0.0, "q_x": 0.0}
    for eta in etas:
        for nth in nths:
            channel = ThermalLossChannel(eta=eta, n_th=nth)
            stats = combined_channel_stats(channel)
            rails = oracle_rail_probabilities(channel)
            worst["q_z"] = max(worst["q_z"], abs(stats.q_z - rails.q_z))
            worst["p_success"] = max(
                worst["p_success"], abs(stats.p_success - rails.p_success)
            )
            worst["lambda"] = max(
                worst["lambda"], abs(stats.lam - _oracle_lambda(channel))
            )
    for eta in dep_etas:
        for nth in dep_nths:
            channel = ThermalLossChannel(eta=eta, n_th=nth)
            for sigma2 in dep_sigma2s:
                phase = PhaseNoise(sigma2)
                stats = combined_channel_stats(channel, phase)
                q_x = oracle_x_basis_qber(channel, phase=phase)
                worst["q_x"] = max(worst["q_x"], abs(stats.q_x - q_x))
    failed = False
    for name, deviation in worst.items():
        ok = deviation <= args.max_dev
        failed = failed or not ok
        print(f"{name}: max abs deviation {deviation:.3e} "
              f"(tolerance {args.max_dev:.1e}) {'ok' if ok else 'FAIL'}")
    print("oracle check " + ("FAILED" if failed else "passed"))
    return 4 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkdcompare",
        description="Key rates, capacity bounds and comparison maps for "
                    "discrete- and continuous-variable QKD over thermal-loss "
                    "channels with phase noise.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    rate = sub.add_parser("rate", help="evaluate one protocol at one point")
    rate.add_argument("--protocol", required=True,
                      choices=[p.value for p in Protocol])
    _add_channel_arguments(rate)
    rate.add_argument("--sigma2", type=float, default=0.0,
                      help="phase-noise variance in rad^2")
    rate.add_argument("--mu", type=float, help="CV source variance (shot units)")
    rate.add_argument("--squeezing-db", type=float,
                      help="CV source squeezing in dB")
    rate.add_argument("--optimize-va", action="store_true",
                      help="optimize the CV modulation variance")
    rate.add_argument("--mu-max-db", type=float,
                      help="cap for the optimized CV source, in dB")
    rate.add_argument("--xi-b", type=float,
                      help="trusted detector noise (NSqz-Hom only)")
    rate.add_argument("--optimize-xi", action="store_true",
                      help="optimize the trusted noise (NSqz-Hom only)")
    rate.add_argument("--q", type=float,
                      help="preprocessing flip rate (NBB84/N6S only)")
    rate.add_argument("--optimize-q", action="store_true",
                      help="optimize the preprocessing flip rate")
    rate.add_argument("--excess-placement", choices=["at_output", "at_input"],
                      help="where phase-induced excess noise is referred")
    rate.set_defaults(func=_cmd_rate)

    bounds = sub.add_parser("bounds", help="repeaterless capacity bounds")
    _add_channel_arguments(bounds)
    bounds.set_defaults(func=_cmd_bounds)

    sweep = sub.add_parser("sweep", help="run a grid sweep from a config file")
    sweep.add_argument("--config", required=True)
    sweep.set_defaults(func=_cmd_sweep)

    compare = sub.add_parser("compare", help="build a comparison map")
    compare.add_argument("kind", choices=list(COMPARE_KINDS))
    compare.add_argument("--config", required=True)
    compare.set_defaults(func=_cmd_compare)

    oracle = sub.add_parser(
        "oracle-check",
        help="verify closed-form statistics against the Fock-space channel",
    )
    oracle.add_argument("--max-dev", type=float, default=1e-6,
                        help="maximum tolerated absolute deviation")
    oracle.add_argument("--quick", action="store_true",
                        help="smaller grids for a fast smoke test")
    oracle.set_defaults(func=_cmd_oracle_check)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (KeyRateError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
