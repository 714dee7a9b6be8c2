"""Command-line front end: one JSON medium document in, one JSON report out.

Usage:
    dcmedia build --input medium.json
    dcmedia detect-dcm --input medium.json --tol 1e-8
    dcmedia dispersion --input medium.json --seed 3 --samples 4
    dcmedia planewave --input medium.json --nu 0,0,1,1
    dcmedia convert --input medium.json --to gibbsian
    dcmedia classify-quadratic --input medium.json

Exit codes: 0 success, 2 invalid input, 3 numeric failure.  A report with
an ``error`` field is written on the failure paths too.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import __version__, dyadics, media, waves
from . import exterior as ex
from .errors import NumericError
from .serialize import (SCHEMA_VERSION, DocumentError, dumps, gibbsian_document, loads,
                        raw_document)

log = logging.getLogger("dcmedia")

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3

COMMANDS = ("build", "ho-decompose", "detect-dcm", "dispersion", "planewave", "convert",
            "classify-quadratic")

DEFAULT_TOL = {
    "build": 1e-9,
    "ho-decompose": 1e-9,
    "detect-dcm": 1e-8,
    "dispersion": waves.CLASSIFY_TOL,
    "planewave": waves.CLASSIFY_TOL,
    "convert": 1e-10,
    "classify-quadratic": 1e-8,
}


def _witness_json(w):
    return {"alpha": w.alpha, "beta": w.beta, "gamma": w.gamma, "A": w.A.coords,
            "B": w.B.coords, "residual": w.residual}


def _known_pair(medium):
    """(A, B) from the construction, if the class has them."""
    if medium.kind in ("QDCM", "PDCM", "Q", "P"):
        A, B = media.bivectors_ab(medium)
        return A.coords, B.coords
    if medium.kind == "SDCM":
        p = medium.provenance.params
        return p["A"], p["B"]
    return None


# -- commands ---------------------------------------------------------------------

def cmd_build(doc, medium, args, tol):
    res = {"M": medium.M.matrix, "Mg": medium.Mg.matrix, "class": medium.kind}
    warnings = []
    try:
        w = media.witness_from_construction(medium)
        res["witness"] = _witness_json(w)
        if w.residual > tol * max(1.0, np.linalg.norm(medium.Mg.matrix) ** 2):
            warnings.append(f"construction witness residual {w.residual:.3g} above tolerance")
    except ValueError:
        res["witness"] = None
    return res, warnings


def cmd_ho(doc, medium, args, tol):
    parts = dyadics.ho_decompose(medium.M)
    rec = parts.reconstruct().matrix
    lifted_p = ex.G @ parts.principal.matrix
    lifted_s = ex.G @ parts.skewon.matrix
    return {
        "principal": parts.principal.matrix,
        "skewon": parts.skewon.matrix,
        "axion": parts.axion_scalar,
        "checks": {
            "reconstruction": float(np.linalg.norm(rec - medium.M.matrix)),
            "principal_trace": float(abs(np.trace(parts.principal.matrix))),
            "principal_lift_asymmetry": float(np.linalg.norm(lifted_p - lifted_p.T)),
            "skewon_lift_symmetry": float(np.linalg.norm(lifted_s + lifted_s.T)),
        },
    }, []


def cmd_detect(doc, medium, args, tol):
    found = media.detect_dcm(medium, accept=tol)
    res = {"witnesses": [_witness_json(w) for w in found], "found": bool(found)}
    notes = ["the condition is sufficient for decomposability; a negative result is "
             "not a proof of non-decomposability"]
    if not found:
        notes.append("no witness found under this search")
    if doc.kind == "uniaxial":
        g = media.uniaxial_gibbsian(*(complex(doc.parameters[k])
                                      for k in ("eps_t", "eps_z", "mu_t", "mu_z")))
        res["te_tm_unique"] = g.provenance["te_tm_unique"]
        notes.append("uniaxial medium: A-waves and B-waves are the TE and TM waves with "
                     "respect to the axis u_z")
    res["notes"] = notes
    return res, []


def cmd_dispersion(doc, medium, args, tol):
    rep = waves.dispersion_report(medium, args.samples, args.seed, tol)
    res = {
        "monomials": [list(m) for m in waves.monomials()],
        "quartic": rep.quartic.coeffs,
        "fit_residual": rep.quartic.fit_residual,
    }
    if rep.factors is not None:
        res["factors"] = [q.S for q in rep.factors]
        res["factor_check"] = {"scale": rep.check.scale, "max_rel_err": rep.check.max_rel_err}
    res["waves"] = []
    for n, ((k, w), o) in enumerate(zip(rep.waves, rep.orthogonality)):
        entry = {"nu": w.nu.coords, "factor": k, "orthogonality": list(o),
                 "dispersion_residual": w.residual}
        if rep.classes:
            c = rep.classes[n]
            entry.update(tag=c.tag, residual_a=c.residual_a, residual_b=c.residual_b)
        res["waves"].append(entry)
    return res, list(rep.warnings)


def _parse_nu(text):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise DocumentError(f"--nu: expected four comma-separated numbers, got {text!r}") from None
    if len(vals) != 4:
        raise DocumentError("--nu: expected four components")
    return np.array(vals, dtype=complex)


def cmd_planewave(doc, medium, args, tol):
    warnings = []
    pair = _known_pair(medium)
    if args.nu is not None:
        nu = _parse_nu(args.nu)
    else:
        rng = np.random.default_rng(args.seed)
        d = rng.standard_normal(3)
        if pair is not None:
            nu = waves.roots_along_direction(waves.predicted_factors(medium)[0], d)[0]
        else:
            nu = waves.quartic_roots_along_direction(medium, d)[0]
        warnings.append("wave one-form sampled from a seeded random direction")
    w = waves.solve_plane_wave(medium, nu)
    res = {"nu": w.nu.coords, "phi": w.phi.coords, "Phi": w.Phi.coords, "Psi": w.Psi.coords,
           "dispersion_residual": w.residual, "orthogonality": list(waves.orthogonality(w))}
    if pair is not None:
        c = waves.classify_wave(w, *pair, tol=tol)
        res["classification"] = {"tag": c.tag, "residual_a": c.residual_a,
                                 "residual_b": c.residual_b}
    return res, warnings


def cmd_convert(doc, medium, args, tol):
    if args.to == "raw6x6":
        out = raw_document(medium, {"converted_from": doc.kind})
    else:
        out = gibbsian_document(media.gibbsian_from_4d(medium), {"converted_from": doc.kind})
    back = out.medium()
    err = np.linalg.norm(back.M.matrix - medium.M.matrix) / max(np.linalg.norm(medium.M.matrix),
                                                                  1e-300)
    warnings = [] if err <= tol else [f"round-trip error {err:.3g} above tolerance"]
    return {"document": out.to_json(), "round_trip_error": float(err)}, warnings


def cmd_classify(doc, medium, args, tol):
    m = medium.M.matrix
    alpha = args.alpha
    if alpha is None:
        # M^T G M = alpha G  =>  alpha = tr(G M^T G M) / 6
        alpha = complex(np.trace(ex.G @ m.T @ ex.G @ m) / 6)
    c = media.classify_quadratic_medium(medium, alpha, tol=tol)
    return {
        "kind": c.kind,
        "recovered": c.recovered.matrix,
        "scale": c.scale,
        "alpha": complex(alpha),
        "double_eigenvalue": c.A,
        "invertible": c.invertible_pair,
        "condition_numbers": c.conditions,
        "residual": c.residual,
    }, list(c.warnings)


HANDLERS = {
    "build": cmd_build,
    "ho-decompose": cmd_ho,
    "detect-dcm": cmd_detect,
    "dispersion": cmd_dispersion,
    "planewave": cmd_planewave,
    "convert": cmd_convert,
    "classify-quadratic": cmd_classify,
}


# -- plumbing ---------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="dcmedia", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--input", default="-", help="medium document (PATH or - for stdin)")
        s.add_argument("--output", default="-", help="report destination (PATH or -)")
        s.add_argument("--tol", type=float, default=None,
                       help=f"main tolerance (default {DEFAULT_TOL[name]:g})")
        s.add_argument("--seed", type=int, default=0, help="seed for sampled routines")
        s.add_argument("--format", choices=["json"], default="json")
        if name == "dispersion":
            s.add_argument("--samples", type=int, default=4,
                           help="random spatial directions to sample roots on")
        if name == "planewave":
            s.add_argument("--nu", default=None, help="wave one-form as nu1,nu2,nu3,nu4")
        if name == "convert":
            s.add_argument("--to", choices=["raw6x6", "gibbsian"], default="raw6x6")
        if name == "classify-quadratic":
            s.add_argument("--alpha", type=complex, default=None,
                           help="scalar of the quadratic equation (estimated if omitted)")
    return p


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def run(argv=None):
    """Run one command; returns ``(exit code, report dict, output path)``."""
    args = build_parser().parse_args(argv)
    tol = args.tol if args.tol is not None else DEFAULT_TOL[args.command]
    report = {"schema_version": SCHEMA_VERSION, "command": args.command,
              "tolerances": {}, "seed": args.seed, "warnings": []}
    code = EXIT_OK
    try:
        if not (tol > 0 and np.isfinite(tol)):
            raise DocumentError(f"--tol must be a positive number, got {tol!r}")
        report["tolerances"]["tol"] = tol
        try:
            text = _read(args.input)
        except OSError as exc:
            raise DocumentError(f"cannot read input: {exc}") from None
        doc = loads(text)
        report["inputs"] = doc.to_json()
        medium = doc.medium()
        results, warnings = HANDLERS[args.command](doc, medium, args, tol)
        report["results"] = results
        report["warnings"] = warnings
    except (DocumentError, ValueError, TypeError) as exc:
        code = EXIT_INVALID
        report["error"] = {"kind": "validation", "type": type(exc).__name__, "message": str(exc)}
    except (NumericError, np.linalg.LinAlgError, ArithmeticError) as exc:
        code = EXIT_NUMERIC
        report["error"] = {"kind": "numeric", "type": type(exc).__name__, "message": str(exc)}
    return code, report, args.output


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    code, report, output = run(argv)
    _write(output, dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
