"""JSON readers/writers for polytopes, time-frequency sets and certificates."""

from __future__ import annotations

import json

import numpy as np

from .errors import ParseError
from .fourier import AxisFrame, ConeBound
from .gabor import (
    CertificateProvenance,
    NonZeroCertificate,
    TimeFrequencySet,
    lattice_points,
)
from .polytope import HPolytope, from_vertices, normalize


def load_polytope(source) -> HPolytope:
    """Parse {"dim", "halfspaces": [...]} or {"dim", "vertices": [...]} JSON."""
    data = _load(source)
    try:
        dim = int(data["dim"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"polytope JSON needs an integer 'dim': {exc}") from exc
    if "halfspaces" in data:
        try:
            raw = [(hs["normal"], hs["offset"]) for hs in data["halfspaces"]]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad halfspace entry: {exc}") from exc
        if not raw:
            raise ParseError("empty halfspace list")
        return normalize(raw, dim)
    if "vertices" in data:
        verts = np.asarray(data["vertices"], dtype=float)
        if verts.ndim != 2 or verts.shape[1] != dim:
            raise ParseError("vertices must be rows of length dim")
        return from_vertices(verts, dim)
    raise ParseError("polytope JSON needs 'halfspaces' or 'vertices'")


def polytope_to_dict(P: HPolytope) -> dict:
    return {
        "dim": P.dim,
        "halfspaces": [
            {"normal": [float(x) for x in h.normal], "offset": float(h.offset)}
            for h in P.halfspaces
        ],
    }


def load_tf_set(source) -> TimeFrequencySet:
    """Parse {"points": [[...]]} or {"lattice": {"basis", "shift", "box"}}."""
    data = _load(source)
    if "points" in data:
        pts = np.asarray(data["points"], dtype=float)
        if pts.ndim != 2 or pts.shape[1] % 2 != 0:
            raise ParseError("points must be rows of even length 2d")
        return TimeFrequencySet(pts)
    if "lattice" in data:
        lat = data["lattice"]
        try:
            basis = np.asarray(lat["basis"], dtype=float)
            shift = np.asarray(lat.get("shift", np.zeros(basis.shape[0])), dtype=float)
            box = lat["box"]
            lo = np.asarray(box["lo"], dtype=float)
            hi = np.asarray(box["hi"], dtype=float)
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad lattice spec: {exc}") from exc
        pts = lattice_points(basis, shift, lo, hi)
        if pts.shape[0] == 0:
            raise ParseError("lattice truncation is empty")
        return TimeFrequencySet(pts, (lo, hi))
    raise ParseError("time-frequency JSON needs 'points' or 'lattice'")


def frame_to_dict(frame: AxisFrame) -> dict:
    return {
        "origin": [float(x) for x in frame.origin],
        "basis": [[float(x) for x in row] for row in frame.basis],
        "scale": float(frame.scale),
    }


def frame_from_dict(data: dict) -> AxisFrame:
    return AxisFrame(np.asarray(data["origin"], dtype=float),
                     np.asarray(data["basis"], dtype=float),
                     float(data["scale"]))


def certificate_to_dict(cert: NonZeroCertificate) -> dict:
    prov = cert.provenance
    return {
        "eps": cert.eps,
        "delta": cert.delta,
        "R": cert.R,
        "omega": cert.omega,
        "eta": cert.eta,
        "C": cert.C,
        "frame": frame_to_dict(cert.frame),
        "min_abs_scanned": cert.min_abs_scanned,
        "provenance": {
            "window_hash": prov.window_hash,
            "n_scan_points": prov.n_scan_points,
            "n_t": prov.n_t,
            "n_lambda": prov.n_lambda,
            "min_sigma_gap": prov.min_sigma_gap,
            "max_axial_residual": prov.max_axial_residual,
            "min_chain_slack": prov.min_chain_slack,
            "cone": {
                "value": prov.cone.value,
                "arg_t": [float(x) for x in prov.cone.arg_t],
                "arg_lam": [float(x) for x in prov.cone.arg_lam],
                "min_sin_theta": prov.cone.min_sin_theta,
            },
            "min_abs_point": {
                "t": [float(x) for x in prov.min_abs_point[0]],
                "lam": [float(x) for x in prov.min_abs_point[1]],
            },
        },
    }


def certificate_from_dict(data: dict) -> NonZeroCertificate:
    try:
        prov = data["provenance"]
        cone = prov["cone"]
        provenance = CertificateProvenance(
            prov["window_hash"], int(prov["n_scan_points"]), int(prov["n_t"]),
            int(prov["n_lambda"]), float(prov["min_sigma_gap"]),
            float(prov["max_axial_residual"]), float(prov["min_chain_slack"]),
            ConeBound(float(cone["value"]), np.asarray(cone["arg_t"], float),
                      np.asarray(cone["arg_lam"], float),
                      float(cone["min_sin_theta"])),
            (np.asarray(prov["min_abs_point"]["t"], float),
             np.asarray(prov["min_abs_point"]["lam"], float)),
        )
        return NonZeroCertificate(
            float(data["eps"]), float(data["delta"]), float(data["R"]),
            float(data["omega"]), float(data["eta"]), float(data["C"]),
            frame_from_dict(data["frame"]), float(data["min_abs_scanned"]),
            provenance,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad certificate JSON: {exc}") from exc


def load_certificate(source) -> NonZeroCertificate:
    return certificate_from_dict(_load(source))


def _load(source) -> dict:
    if isinstance(source, dict):
        return source
    try:
        if hasattr(source, "read"):
            data = json.load(source)
        else:
            with open(source) as fh:
                data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read JSON input: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("top-level JSON value must be an object")
    return data


def dump_json(obj: dict, fh) -> None:
    json.dump(obj, fh, indent=2)
    fh.write("\n")
