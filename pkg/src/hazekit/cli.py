"""Command line entry point: ``hazekit {dehaze,airlight,transmission,synthesize,metrics}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from hazekit import imgcore
from hazekit.airlight import estimate_airlight
from hazekit.config import DehazeConfig
from hazekit.metrics import combined_losses
from hazekit.pipeline import PipelineRun, format_airlight, run_pipeline
from hazekit.restore import SynthesisParams, sample_synthesis_params, synthesize
from hazekit.transmission import estimate_transmission

EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DIMENSION = 4
EXIT_CONFIG = 5


def _triple(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected R,G,B, got {text!r}")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three numbers, got {text!r}") from None
    if not all(0.0 < v <= 1.0 for v in vals):
        raise argparse.ArgumentTypeError(f"airlight channels must lie in (0, 1], got {text!r}")
    return vals


def _bins(text: str) -> tuple[int, int]:
    try:
        n_theta, n_psi = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected THETAxPSI, got {text!r}") from None
    return n_theta, n_psi


def _add_config_args(p: argparse.ArgumentParser) -> None:
    d = DehazeConfig()
    p.add_argument("--rho", type=int, default=d.rho, help="window radius (default %(default)s)")
    p.add_argument("--nu", type=int, default=d.nu, help="haze-line subset cap (default %(default)s)")
    p.add_argument("--bins", type=_bins, default=(d.n_theta, d.n_psi), metavar="TxP",
                   help="angular bin counts (default 1440x720)")
    p.add_argument("--t-floor", type=float, default=d.t_floor, help="transmission floor (default %(default)s)")
    p.add_argument("--stop-size", type=int, default=d.stop_size,
                   help="airlight quadtree stop size in pixels (default %(default)s)")
    p.add_argument("--workers", type=int, default=1, help="threads for window filters (default 1)")


def _config(args) -> DehazeConfig:
    return DehazeConfig(rho=args.rho, nu=args.nu, n_theta=args.bins[0], n_psi=args.bins[1],
                        t_floor=args.t_floor, stop_size=args.stop_size)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hazekit", description="Model-based single image dehazing.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dehaze", help="run the full pipeline on a hazy image")
    p.add_argument("input", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True, help="restored 8-bit PNG")
    _add_config_args(p)
    p.add_argument("--airlight", type=_triple, metavar="R,G,B", help="use this airlight instead of estimating")
    p.add_argument("--transmission", type=Path, metavar="PATH",
                   help="externally refined transmission map (PFM or 16-bit PNG)")
    p.add_argument("--save-transmission", type=Path, metavar="PATH")
    p.add_argument("--save-t0", type=Path, metavar="PATH")
    p.add_argument("--save-airlight", type=Path, metavar="PATH")
    p.add_argument("--skip-hla", action="store_true", help="skip haze-line averaging")

    p = sub.add_parser("airlight", help="print the estimated atmospheric light")
    p.add_argument("input", type=Path)
    p.add_argument("--stop-size", type=int, default=DehazeConfig().stop_size)

    p = sub.add_parser("transmission", help="write the transmission map")
    p.add_argument("input", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True, help="PFM, or 16-bit PNG if *.png")
    _add_config_args(p)
    p.add_argument("--airlight", type=_triple, metavar="R,G,B")
    p.add_argument("--save-t0", type=Path, metavar="PATH")
    p.add_argument("--skip-hla", action="store_true")

    p = sub.add_parser("synthesize", help="render haze over a clean image from a depth map")
    p.add_argument("clean", type=Path)
    p.add_argument("depth", type=Path, help="depth map (PFM or 16-bit PNG)")
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--heavy", action="store_true", help="draw beta from the heavy-haze range")
    p.add_argument("--beta", type=float, help="fixed scattering coefficient")
    p.add_argument("--airlight", type=_triple, metavar="R,G,B", help="fixed airlight")
    p.add_argument("--save-transmission", type=Path, metavar="PATH")

    p = sub.add_parser("metrics", help="compare a restored image against a reference")
    p.add_argument("restored", type=Path)
    p.add_argument("reference", type=Path)
    p.add_argument("--rho", type=int, default=DehazeConfig().rho)
    p.add_argument("--d-real", type=float, help="discriminator output on the reference")
    p.add_argument("--d-fake", type=float, help="discriminator output on the restored image")
    return parser


def _cmd_dehaze(args) -> None:
    run = PipelineRun(
        input_path=args.input, output_path=args.output, config=_config(args),
        airlight=args.airlight, transmission_path=args.transmission,
        save_t0=args.save_t0, save_transmission=args.save_transmission,
        save_airlight=args.save_airlight, skip_hla=args.skip_hla, workers=args.workers,
    )
    run_pipeline(run)


def _cmd_airlight(args) -> None:
    img = imgcore.load_image(args.input)
    print(format_airlight(estimate_airlight(img, args.stop_size)))


def _cmd_transmission(args) -> None:
    cfg = _config(args)
    Z = imgcore.as_image(imgcore.load_image(args.input))
    A = args.airlight if args.airlight is not None else estimate_airlight(Z, cfg.stop_size)
    t0, t = estimate_transmission(Z, A, cfg, workers=args.workers, skip_hla=args.skip_hla)
    imgcore.save_scalar_map(t, args.output)
    if args.save_t0:
        imgcore.save_scalar_map(t0, args.save_t0)


def _cmd_synthesize(args) -> None:
    clean = imgcore.load_image(args.clean)
    depth = imgcore.load_scalar_map(args.depth)
    drawn = sample_synthesis_params(args.seed, heavy=args.heavy)
    params = SynthesisParams(
        beta=args.beta if args.beta is not None else drawn.beta,
        airlight=args.airlight if args.airlight is not None else drawn.airlight,
        seed=args.seed,
    )
    Z, t = synthesize(clean, depth, params)
    imgcore.save_image(Z, args.output)
    if args.save_transmission:
        imgcore.save_scalar_map(t, args.save_transmission)
    print(f"beta={params.beta:.6f}")
    print(format_airlight(params.airlight))


def _cmd_metrics(args) -> None:
    I = imgcore.load_image(args.restored)
    T = imgcore.load_image(args.reference)
    report = combined_losses(I, T, DehazeConfig(rho=args.rho), d_real=args.d_real, d_fake=args.d_fake)
    print("\n".join(report.lines()))


COMMANDS = {
    "dehaze": _cmd_dehaze,
    "airlight": _cmd_airlight,
    "transmission": _cmd_transmission,
    "synthesize": _cmd_synthesize,
    "metrics": _cmd_metrics,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except imgcore.DimensionMismatchError as exc:
        print(f"hazekit: dimension mismatch: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except OSError as exc:
        print(f"hazekit: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"hazekit: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
