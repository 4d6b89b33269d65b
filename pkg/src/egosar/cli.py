"""Command-line front end for the experiment harness."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import harness
from .errors import EgosarError


def _float_list(text):
    return tuple(float(v) for v in text.split(","))


def _int_list(text):
    return tuple(int(v) for v in text.split(","))


def _add_common(parser):
    parser.add_argument("--config", help="experiment config file (key = value lines)")
    parser.add_argument("--out", help="output CSV path")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--trials", type=int, help="override the trial count")
    parser.add_argument("--threads", type=int, default=1, help="worker processes")


def _load(args) -> harness.ExperimentConfig:
    config = (
        harness.load_config(args.config)
        if args.config
        else harness.ExperimentConfig()
    )
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.trials is not None:
        config = replace(config, trials=args.trials)
    return config


def build_parser():
    parser = argparse.ArgumentParser(
        prog="egosar",
        description=(
            "Monte-Carlo and closed-form angle-accuracy experiments for "
            "automotive SAR with radar-only ego-velocity estimation."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rmse", help="simulated vs predicted angle RMSE sweep")
    _add_common(p)

    p = sub.add_parser("resolution", help="noiseless 3 dB beamwidth vs angle")
    _add_common(p)
    p.add_argument("--apertures", type=_float_list, default=(1.0, 2.5, 3.0),
                   help="synthetic apertures in meters, comma separated")

    p = sub.add_parser("gain", help="closed-form gain and degradation ratios")
    _add_common(p)

    p = sub.add_parser("velcov", help="velocity-error std: simulation vs formula")
    _add_common(p)
    p.add_argument("--sigma-phi-list", type=_float_list, default=(1.0, 3.0, 10.0))
    p.add_argument("--speed-list", type=_float_list, default=(3.0, 10.0, 25.0))
    p.add_argument("--k-list", type=_int_list, default=(5, 10))

    p = sub.add_parser("lemma", help="exact frame-count polynomial identities")
    _add_common(p)
    p.add_argument("--n-values", type=_int_list, default=(2, 3, 5, 10, 100, 1000))

    p = sub.add_parser("image", help="range-angle image under a velocity offset")
    _add_common(p)
    p.add_argument("--target-range-m", type=float, default=28.0)
    p.add_argument("--target-angle-deg", type=float, default=6.0)
    p.add_argument("--delta-vy-mps", type=float, default=0.03)
    p.add_argument("--delta-vx-mps", type=float, default=0.0)
    p.add_argument("--range-half-span-m", type=float, default=3.0)
    p.add_argument("--range-step-m", type=float, default=0.05)
    p.add_argument("--angle-half-span-deg", type=float, default=6.0)
    p.add_argument("--angle-step-deg", type=float, default=0.02)

    p = sub.add_parser("predict", help="closed-form predictions over the theta grid")
    _add_common(p)

    return parser


def _emit(columns, rows, config, out):
    harness.write_csv(out, columns, rows, config)
    print(f"wrote {out} ({len(rows)} rows)")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load(args)
        if args.command == "rmse":
            points = harness.run_rmse_sweep(config, threads=max(1, args.threads))
            rows = [
                (
                    p.sweep_value,
                    p.theta_deg,
                    p.rmse_sim_deg,
                    p.rmse_analysis_deg,
                    p.rmse_asymptotic_deg,
                    p.trials_used,
                    p.failed_trials,
                )
                for p in points
            ]
            _emit(harness.RMSE_COLUMNS, rows, config, args.out or "rmse.csv")
        elif args.command == "resolution":
            rows = harness.run_resolution_sweep(args.apertures, config)
            _emit(harness.RESOLUTION_COLUMNS, rows, config, args.out or "resolution.csv")
        elif args.command == "gain":
            rows = harness.run_gain_report(config)
            _emit(harness.GAIN_COLUMNS, rows, config, args.out or "gain.csv")
        elif args.command == "velcov":
            rows = harness.run_velocity_cov_report(
                config, args.sigma_phi_list, args.speed_list, args.k_list
            )
            _emit(harness.VELCOV_COLUMNS, rows, config, args.out or "velcov.csv")
        elif args.command == "lemma":
            rows = harness.run_lemma_check(args.n_values)
            _emit(harness.LEMMA_COLUMNS, rows, config, args.out or "lemma.csv")
        elif args.command == "image":
            image = harness.run_image(
                config,
                target_range_m=args.target_range_m,
                target_angle_deg=args.target_angle_deg,
                delta_v=(args.delta_vx_mps, args.delta_vy_mps),
                range_half_span_m=args.range_half_span_m,
                range_step_m=args.range_step_m,
                angle_half_span_deg=args.angle_half_span_deg,
                angle_step_deg=args.angle_step_deg,
            )
            out = args.out or "image.csv"
            harness.write_image_csv(image, out, config)
            print(f"wrote {out} ({image.intensity_db.shape[0]}x{image.intensity_db.shape[1]} cells)")
        elif args.command == "predict":
            rows = harness.run_predict(config)
            if args.out:
                harness.write_csv(args.out, harness.PREDICT_COLUMNS, rows, config)
                print(f"wrote {args.out} ({len(rows)} rows)")
            else:
                print(",".join(harness.PREDICT_COLUMNS))
                for row in rows:
                    print(",".join(harness._fmt(v) for v in row))
    except EgosarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
