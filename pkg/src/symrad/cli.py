"""Command-line front end.

Subcommands: phantom, forward, invert, benchmark, selftest.
Exit codes: 0 success, 1 usage error, 2 numerical-contract violation (with
a one-line machine-parsable reason on stderr).
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bench, fileio
from .errors import TomographyError
from .forward import QuadratureSpec, SinogramSpec, radon_forward
from .grids import GridSpec
from .inversion import (CircleMeanParams, SpectralParams, invert_helgason,
                        invert_m2_fourier, invert_radon_circle_mean,
                        reconstruction_error)
from .phantoms import Phantom
from .selftest import run_selftest


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"error: usage: {message}\n")


def _add_sinogram_opts(p):
    p.add_argument("--angles", type=int, default=180)
    p.add_argument("--offsets", type=int, default=256)
    p.add_argument("--offset-extent", type=float, default=8.0)


def _add_grid_opts(p):
    p.add_argument("--samples", type=int, default=128)
    p.add_argument("--extent", type=float, default=5.0)


def _add_quad_opts(p):
    p.add_argument("--rule", choices=["midpoint", "gauss-legendre"],
                   default="gauss-legendre")
    p.add_argument("--nodes", type=int, default=64)
    p.add_argument("--s-halfwidth", type=float, default=10.0)


def _add_spectral_opts(p):
    p.add_argument("--pad-factor", type=int, choices=[1, 2, 4], default=2)
    p.add_argument("--slice-interp", choices=["linear", "cubic"],
                   default="linear")


def _add_circle_mean_opts(p):
    p.add_argument("--epsilons", type=str, default="0.16,0.08,0.04,0.02",
                   help="decreasing comma-separated cutoff schedule")
    p.add_argument("--r-max", type=float, default=3.0)
    p.add_argument("--n-r", type=int, default=128)
    p.add_argument("--n-theta", type=int, default=96)


def _build_parser():
    parser = _Parser(prog="symrad",
                     description="Radon / symplectic tomography toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phantom", parents=[], help="write a phantom file")
    p.add_argument("--out", required=True)
    p.add_argument("--term", action="append", nargs="+", type=float,
                   metavar="W ALPHA C1 C2 ...", default=[],
                   help="one Gaussian term: weight alpha c1 c2 [... cn]")
    p.add_argument("--dims", type=int, default=2)

    p = sub.add_parser("forward", help="project a phantom to a sinogram")
    p.add_argument("--phantom", required=True)
    p.add_argument("--out", required=True)
    _add_sinogram_opts(p)
    _add_quad_opts(p)

    p = sub.add_parser("invert", help="reconstruct a field from a sinogram")
    p.add_argument("--sinogram", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--method", choices=list(bench.METHODS), required=True)
    p.add_argument("--phantom", help="reference phantom for an error report")
    p.add_argument("--report", help="error-report path (default: stdout)")
    p.add_argument("--path", choices=["central-slice", "direct-quadrature"],
                   default="central-slice")
    p.add_argument("--printed-multiplier", action="store_true",
                   help="debug: use the non-rotation-invariant "
                        "(k1+k2)^(1/2) multiplier in the Helgason path")
    _add_grid_opts(p)
    _add_spectral_opts(p)
    _add_circle_mean_opts(p)

    p = sub.add_parser("benchmark",
                       help="time and score all requested inversions")
    p.add_argument("--phantom", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--methods", default=",".join(bench.METHODS))
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--no-figures", action="store_true")
    _add_sinogram_opts(p)
    _add_grid_opts(p)
    _add_quad_opts(p)
    _add_spectral_opts(p)
    _add_circle_mean_opts(p)

    sub.add_parser("selftest", help="run the closed-form oracle suite")
    return parser


def _phantom_from_args(args) -> Phantom:
    terms = []
    for t in args.term:
        if len(t) < 4:
            raise TomographyError(
                "usage-term: each --term needs weight alpha c1 c2 [... cn]"
            )
        terms.append((t[0], t[2:], t[1]))
    return Phantom.from_terms(terms, dims=args.dims if not terms else None)


def _specs_from_args(args):
    sspec = SinogramSpec(n_angles=args.angles, n_offsets=args.offsets,
                         offset_halfwidth=args.offset_extent)
    quad = QuadratureSpec(rule=args.rule, n_nodes=args.nodes,
                          s_halfwidth=args.s_halfwidth)
    return sspec, quad


def _cm_from_args(args) -> CircleMeanParams:
    schedule = tuple(float(x) for x in args.epsilons.split(","))
    return CircleMeanParams(epsilon_schedule=schedule, r_max=args.r_max,
                            n_r=args.n_r, n_theta=args.n_theta)


def _cmd_phantom(args) -> int:
    fileio.write_phantom(_phantom_from_args(args), args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_forward(args) -> int:
    ph = fileio.read_phantom(args.phantom)
    sspec, quad = _specs_from_args(args)
    sg = radon_forward(ph, sspec, quad)
    fileio.write_sinogram(sg, args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_invert(args) -> int:
    sg = fileio.read_sinogram(args.sinogram)
    gspec = GridSpec(dims=2, extent=args.extent, samples=args.samples)
    sp = SpectralParams(pad_factor=args.pad_factor,
                        slice_interp=args.slice_interp)
    if args.method == "m2":
        out = invert_m2_fourier(sg, gspec, sp, path=args.path)
    elif args.method == "helgason":
        variant = "printed-sum" if args.printed_multiplier else "radial"
        out = invert_helgason(sg, gspec, sp, variant=variant)
    else:
        out = invert_radon_circle_mean(sg, gspec, _cm_from_args(args),
                                       extend="zero")
    fileio.write_field(out, args.out)
    print(f"wrote {args.out}")
    if args.phantom:
        ref = fileio.read_phantom(args.phantom)
        lines = (f"method {args.method}\n"
                 f"max_abs {reconstruction_error(out, ref, 'max_abs'):.6e}\n"
                 f"l2 {reconstruction_error(out, ref, 'l2_cellweighted'):.6e}\n")
        if args.report:
            with open(args.report, "w") as fh:
                fh.write(lines)
            print(f"wrote {args.report}")
        else:
            sys.stdout.write(lines)
    return 0


def _cmd_benchmark(args) -> int:
    ph = fileio.read_phantom(args.phantom)
    sspec, quad = _specs_from_args(args)
    gspec = GridSpec(dims=2, extent=args.extent, samples=args.samples)
    cfg = bench.ExperimentConfig(
        phantom=ph, sinogram_spec=sspec, grid_spec=gspec, quadrature=quad,
        methods=tuple(m.strip() for m in args.methods.split(",") if m.strip()),
        circle_mean=_cm_from_args(args),
        spectral=SpectralParams(pad_factor=args.pad_factor,
                                slice_interp=args.slice_interp),
        repetitions=args.repetitions,
    )
    report = bench.run_benchmark(cfg)
    artifacts = bench.write_report(report, cfg, args.out_dir,
                                   figures=not args.no_figures)
    sys.stdout.write(bench.format_table(report))
    for key, value in artifacts.items():
        print(f"{key}: {value}")
    return 0


def _cmd_selftest(args) -> int:
    return 0 if run_selftest() else 2


_COMMANDS = {
    "phantom": _cmd_phantom,
    "forward": _cmd_forward,
    "invert": _cmd_invert,
    "benchmark": _cmd_benchmark,
    "selftest": _cmd_selftest,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except TomographyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
