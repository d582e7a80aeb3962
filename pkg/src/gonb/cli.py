"""Command-line workbench.

Subcommands: symmetry, intersect, ft, stft, certificate, check-orth,
find-violation, scan. Outputs are deterministic for a fixed configuration;
exit codes: 0 success, 2 parse/config error, 3 mathematical precondition
failure, 4 scan falsification.

Vector flags take comma-separated values and accept the ``--flag=-1,-1``
form for negative entries.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io as gio
from .errors import ParseError, PreconditionError, ScanFailure, WorkbenchError
from .fourier import (
    AxisFrame,
    ConeScanParams,
    ScanGrid,
    apply_frame,
    cone_lambda_grid,
    divergence_residual,
    ft_indicator,
    ft_indicator_many,
    ft_indicator_quadrature,
    parallel_map,
)
from .gabor import (
    CertificateScanParams,
    NotFound,
    build_certificate,
    check_orthogonality,
    find_violation_pair,
    stft_indicator,
)
from .polytope import is_symmetric, translate_intersection, volume


def _vector(text: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.split(",")], dtype=float)
    except ValueError as exc:
        raise ParseError(f"bad vector {text!r}: {exc}") from exc


def _ranges(text: str) -> list[tuple[float, float]]:
    out = []
    for part in text.split(","):
        try:
            lo, hi = part.split(":")
            out.append((float(lo), float(hi)))
        except ValueError as exc:
            raise ParseError(f"bad range {part!r}: {exc}") from exc
    return out


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def _emit(args, obj: dict) -> None:
    fh = _open_out(args.out)
    try:
        gio.dump_json(obj, fh)
    finally:
        if fh is not sys.stdout:
            fh.close()


def _complex_dict(z: complex) -> dict:
    return {"re": z.real, "im": z.imag, "abs": abs(z)}


def cmd_symmetry(args) -> int:
    P = gio.load_polytope(args.infile)
    rep = is_symmetric(P, tol=args.tol)
    out = {"symmetric": rep.symmetric, "margin": rep.margin}
    if rep.witness is not None:
        F, G = rep.witness
        out["witness"] = {
            "facet_normal": [float(x) for x in F.normal],
            "facet_volume": F.volume_dm1,
            "parallel_volume": None if G is None else G.volume_dm1,
        }
    _emit(args, out)
    return 0


def cmd_intersect(args) -> int:
    P = gio.load_polytope(args.infile)
    Q = translate_intersection(P, _vector(args.t))
    out = gio.polytope_to_dict(Q)
    out["empty"] = Q.empty
    out["degenerate"] = Q.degenerate
    out["volume"] = volume(Q)
    _emit(args, out)
    return 0


def cmd_ft(args) -> int:
    P = gio.load_polytope(args.infile)
    lam = _vector(args.lam)
    val = ft_indicator(P, lam)
    out = {"lambda": [float(x) for x in lam], "value": _complex_dict(val)}
    if args.quadrature:
        q = ft_indicator_quadrature(P, lam, args.quadrature)
        out["quadrature"] = _complex_dict(q)
    _emit(args, out)
    return 0


def cmd_stft(args) -> int:
    P = gio.load_polytope(args.infile)
    t = _vector(args.t)
    lam = _vector(args.lam)
    val = stft_indicator(P, t, lam)
    _emit(args, {"t": [float(x) for x in t], "lambda": [float(x) for x in lam],
                 "value": _complex_dict(val)})
    return 0


def cmd_certificate(args) -> int:
    P = gio.load_polytope(args.infile)
    params = CertificateScanParams(lambda_max=args.lambda_max)
    cert = build_certificate(P, args.eps, args.omega, params)
    _emit(args, gio.certificate_to_dict(cert))
    return 0


def cmd_check_orth(args) -> int:
    P = gio.load_polytope(args.infile)
    L = gio.load_tf_set(args.lattice)
    reports = check_orthogonality(P, L, args.tol_zero,
                                  max_reports=args.max_reports)
    out = {
        "n_points": len(L),
        "n_violations_reported": len(reports),
        "violations": [
            {
                "v": [float(x) for x in r.pair[0].as_row()],
                "v_prime": [float(x) for x in r.pair[1].as_row()],
                "value": _complex_dict(r.value),
                "confirmed": r.confirmed,
            }
            for r in reports
        ],
    }
    _emit(args, out)
    return 0


def cmd_find_violation(args) -> int:
    P = gio.load_polytope(args.infile)
    L = gio.load_tf_set(args.lattice)
    cert = gio.load_certificate(args.certificate)
    result = find_violation_pair(P, L, cert)
    if isinstance(result, NotFound):
        _emit(args, {"found": False, "n_pairs": result.n_pairs,
                     "n_time_close": result.n_time_close,
                     "n_in_cylinder": result.n_in_cylinder,
                     "n_beyond_radius": result.n_beyond_radius,
                     "message": result.message})
    else:
        _emit(args, {"found": True,
                     "v": [float(x) for x in result.pair[0].as_row()],
                     "v_prime": [float(x) for x in result.pair[1].as_row()],
                     "value": _complex_dict(result.value)})
    return 0


def cmd_scan(args) -> int:
    P = gio.load_polytope(args.infile)
    d = P.dim
    config = {"command": "scan", "field": args.field, "in": str(args.infile)}
    if args.field in ("ft", "stft_abs"):
        if not args.lambda_box:
            raise ParseError("box scans need --lambda-box")
        ranges = _ranges(args.lambda_box)
        if len(ranges) != d:
            raise ParseError(f"--lambda-box needs {d} ranges")
        if args.grid < 2 or any(hi <= lo for lo, hi in ranges):
            raise ParseError("empty scan region")
        axes = [np.linspace(lo, hi, args.grid) for lo, hi in ranges]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
        t = _vector(args.t) if args.t else np.zeros(d)
        config.update({"t": list(map(float, t)), "lambda_box": args.lambda_box,
                       "grid": args.grid})
        Q = translate_intersection(P, t)
        vals = ft_indicator_many(Q, mesh) / (volume(P) if args.field == "stft_abs" else 1.0)
        pts = np.concatenate([np.broadcast_to(t, mesh.shape), mesh], axis=1)
    elif args.field == "gt_abs":
        if not args.certificate:
            from .errors import RegionFrameMissing
            raise RegionFrameMissing("gt_abs scans need --certificate for the frame")
        cert = gio.load_certificate(args.certificate)
        lo, hi = _ranges(args.lambda1)[0] if args.lambda1 else (10.0, 200.0)
        if args.grid < 2 or hi <= lo:
            raise ParseError("empty scan region")
        params = ConeScanParams(r0=lo, r1=hi, n_radial=args.grid,
                                n_cross=args.n_cross)
        mesh = cone_lambda_grid(d, cert.omega, params)
        t = _vector(args.t) if args.t else np.zeros(d)
        config.update({"t": list(map(float, t)), "lambda1": f"{lo}:{hi}",
                       "grid": args.grid, "n_cross": args.n_cross,
                       "omega": cert.omega})
        Q = translate_intersection(apply_frame(P, cert.frame),
                                   cert.frame.to_frame_shift(t))
        ident = AxisFrame.identity(d)
        vals = np.array(parallel_map(
            lambda lam: divergence_residual(Q, ident, lam, via_boundary=True), mesh))
        pts = np.concatenate([np.broadcast_to(t, mesh.shape), mesh], axis=1)
    else:
        raise ParseError(f"unknown field {args.field!r}")
    cols = tuple(f"t_{k+1}" for k in range(d)) + tuple(f"lambda_{k+1}" for k in range(d))
    grid = ScanGrid(cols, pts, vals)
    fh = _open_out(args.out)
    try:
        grid.write_csv(fh, config)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="gonb", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--in", dest="infile", required=True, help="polytope JSON")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("symmetry", help="Minkowski parallel-facet symmetry test")
    common(p)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(fn=cmd_symmetry)

    p = sub.add_parser("intersect", help="intersect the window with its translate")
    common(p)
    p.add_argument("--t", required=True)
    p.set_defaults(fn=cmd_intersect)

    p = sub.add_parser("ft", help="indicator Fourier transform at one frequency")
    common(p)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--quadrature", type=int, default=0,
                   help="also evaluate the midpoint oracle at this resolution")
    p.set_defaults(fn=cmd_ft)

    p = sub.add_parser("stft", help="STFT of the normalized indicator window")
    common(p)
    p.add_argument("--t", required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.set_defaults(fn=cmd_stft)

    p = sub.add_parser("certificate", help="build the non-vanishing certificate")
    common(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--lambda-max", dest="lambda_max", type=float, default=200.0)
    p.set_defaults(fn=cmd_certificate)

    p = sub.add_parser("check-orth", help="mutual-orthogonality violations")
    common(p)
    p.add_argument("--lattice", required=True, help="time-frequency set JSON")
    p.add_argument("--tol-zero", dest="tol_zero", type=float, default=1e-9)
    p.add_argument("--max-reports", dest="max_reports", type=int, default=64)
    p.set_defaults(fn=cmd_check_orth)

    p = sub.add_parser("find-violation", help="certificate-driven pair search")
    common(p)
    p.add_argument("--lattice", required=True)
    p.add_argument("--certificate", required=True)
    p.set_defaults(fn=cmd_find_violation)

    p = sub.add_parser("scan", help="emit a CSV field scan")
    common(p)
    p.add_argument("--field", required=True, choices=["ft", "stft_abs", "gt_abs"])
    p.add_argument("--t", default=None)
    p.add_argument("--lambda-box", dest="lambda_box", default=None,
                   help="per-axis ranges lo:hi, comma separated")
    p.add_argument("--lambda1", default=None, help="axial range lo:hi for gt_abs")
    p.add_argument("--grid", type=int, default=61)
    p.add_argument("--n-cross", dest="n_cross", type=int, default=16)
    p.add_argument("--certificate", default=None)
    p.set_defaults(fn=cmd_scan)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ScanFailure as exc:
        print(f"ScanFailure: {exc}", file=sys.stderr)
        return 4
    except (PreconditionError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except WorkbenchError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
