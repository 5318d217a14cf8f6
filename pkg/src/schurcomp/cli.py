"""
Command-line front end.

Exit codes: 0 success, 2 infeasible input, 1 any other error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import completion, feasibility, jframe, matrix_io, spectral, verify
from .core import NONDECREASING, NONINCREASING, eigendecompose_hermitian, random_hermitian
from .errors import InfeasibleInput, SchurCompError

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE = 0, 1, 2


class CliError(Exception):
    def __init__(self, message, code=EXIT_ERROR):
        super().__init__(message)
        self.code = code


def _eps_list(text):
    if text is None:
        return None
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"--eps: cannot parse {text!r}") from None


def _load_AD(args):
    if not args.A or not args.D:
        raise CliError("both --A and --D are required")
    A = matrix_io.load_matrix(args.A)
    D = matrix_io.load_matrix(args.D)
    return A, D


def _complete(args):
    A, D = _load_AD(args)
    try:
        return completion.complete(A, D, args.kappa, args.mode, _eps_list(args.eps),
                                   args.zero_tol)
    except InfeasibleInput as exc:
        raise CliError(f"infeasible: {exc}", EXIT_INFEASIBLE) from None


def _certificate(args):
    """Certificate from ``--cert`` or built from ``--A/--D``, plus eigensystems."""
    if getattr(args, "cert", None):
        with open(args.cert) as fh:
            cert = completion.CompletionCertificate.from_dict(json.load(fh))
        eigsA, eigsD = completion.eigensystems_from_certificate(cert)
        return cert, eigsA, eigsD
    cert, eigsA, eigsD, _ = _complete(args)
    return cert, eigsA, eigsD


def cmd_feasibility(args):
    A, D = _load_AD(args)
    eigsA = eigendecompose_hermitian(A, NONINCREASING)
    eigsD = eigendecompose_hermitian(D, NONDECREASING)
    v = feasibility.check_feasible(eigsA, eigsD, args.kappa, args.mode, args.zero_tol)
    out = v.to_dict()
    if args.min_kappa:
        out["minimal_kappa"] = feasibility.minimal_kappa(eigsA, eigsD, args.mode, args.zero_tol)
    if args.out == "text":
        return out, (EXIT_OK if v.feasible else EXIT_INFEASIBLE), v.reason + "\n"
    return out, (EXIT_OK if v.feasible else EXIT_INFEASIBLE), None


def cmd_construct(args):
    cert, _, _, _ = _complete(args)
    return cert.to_dict(), EXIT_OK, None


def cmd_spectrum(args):
    cert, eigsA, eigsD = _certificate(args)
    pred = spectral.predict_spectrum(cert, eigsA, eigsD)
    num = verify.numeric_spectrum(cert.S)
    tol = 1e-8 * (1 + np.linalg.norm(cert.S, 2))
    cmp = verify.compare_spectra(pred, num, tol)
    out = pred.to_dict()
    out["numeric"] = matrix_io.complex_list(sorted(num, key=lambda z: (z.real, z.imag)))
    out["comparison"] = {"max_distance": cmp.max_distance, "tolerance": tol,
                         "matched": cmp.matched}
    return out, EXIT_OK, None


def cmd_rootlocus(args):
    grid = spectral.parse_grid(args.grid)
    if args.lam is not None or args.mu is not None:
        if args.lam is None or args.mu is None:
            raise CliError("--lam and --mu must be given together")
        loc = spectral.root_locus_scalar(args.lam, args.mu, grid, args.kappa, args.mode)
    else:
        A, D = _load_AD(args)
        eigsA = eigendecompose_hermitian(A, NONINCREASING)
        eigsD = eigendecompose_hermitian(D, NONDECREASING)
        loc = spectral.root_locus(eigsA, eigsD, args.index - 1, grid, args.kappa, args.mode)
    if args.out == "json":
        return loc.to_dict(), EXIT_OK, None
    return None, EXIT_OK, loc.to_csv()


def cmd_jframe(args):
    cert, eigsA, eigsD = _certificate(args)
    rep = jframe.is_jframe_matrix(cert.S, cert.n, cert.m)
    if not rep.is_jframe_matrix:
        return rep.to_dict(), EXIT_INFEASIBLE, None
    rep = jframe.frame_bounds(cert, eigsA, eigsD)
    out = rep.to_dict()
    out["apriori_checks"] = jframe.apriori_checks(rep)
    if args.synthesize:
        fam = jframe.synthesize_jframe(cert)
        out["family"] = fam.to_dict()
        out["operator_residual"] = float(np.linalg.norm(fam.operator() - cert.S))
    return out, EXIT_OK, None


def cmd_verify(args):
    if args.A and args.D:
        A, D = _load_AD(args)
        cert, _, _, _ = completion.complete(A, D, args.kappa, args.mode, None, args.zero_tol)
        K = cert.K
    else:
        rng = np.random.default_rng(args.seed)
        n, m = args.n, args.m
        A = random_hermitian(rng.uniform(0.5, 3.0, n) * rng.choice([-1, 1], n), rng)
        D = random_hermitian(rng.uniform(-3.0, 3.0, m), rng)
        K = (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / np.sqrt(2 * n)
    B, C = -A @ K, K.conj().T @ A
    rep = verify.check_identities(A, B, C, D, K)
    return rep.to_dict(), (EXIT_OK if rep.ok else EXIT_ERROR), None


def _fmt(z):
    if z.imag == 0:
        return repr(float(z.real))
    sign = "+" if z.imag > 0 else "-"
    return f"{float(z.real)!r}{sign}{abs(float(z.imag))!r}i"


def cmd_demo(args):
    a, eps = args.a, args.eps_value
    if not a > 0:
        raise CliError("--a must be positive")
    cert, eigsA, eigsD, _ = completion.complete([[a]], [[0.0]], 1.0, "definite", [eps])
    pred = spectral.predict_spectrum(cert, eigsA, eigsD)
    num = verify.numeric_spectrum(cert.S)
    values = pred.values
    jordan = not pred.diagonalizable
    out = {
        "a": a,
        "eps": eps,
        "alpha": completion.collision_threshold(a, 0.0),
        "S": matrix_io.matrix_to_dict(cert.S),
        "case": pred.eigens[0].case_label,
        "predicted": matrix_io.complex_list(values),
        "numeric": matrix_io.complex_list(sorted(num, key=lambda z: (z.real, z.imag))),
        "jordan_chain": jordan,
        "diagonalizable": pred.diagonalizable,
    }
    if jordan:
        out["jordan_rank_probe"] = list(verify.jordan_rank_probe(cert.S, values[0].real))
    lines = [f"S = [[{a!r}, {float(cert.S[0, 1].real)!r}], [{float(cert.S[1, 0].real)!r}, 0.0]]",
             f"alpha = {out['alpha']!r}, case {out['case']}"]
    if jordan:
        lines.append(f"double eigenvalue {float(values[0].real)!r} (Jordan chain of length 2, "
                     "not diagonalizable)")
    else:
        lines.append("eigenvalues " + ", ".join(_fmt(z) for z in values))
    return out, EXIT_OK, "\n".join(lines) + "\n"


COMMANDS = {
    "feasibility": cmd_feasibility,
    "construct": cmd_construct,
    "spectrum": cmd_spectrum,
    "rootlocus": cmd_rootlocus,
    "jframe": cmd_jframe,
    "verify": cmd_verify,
    "demo": cmd_demo,
}


def _common(p, inputs=True):
    if inputs:
        p.add_argument("--A", help="matrix JSON file for the top-left block")
        p.add_argument("--D", help="matrix JSON file for the bottom-right block")
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--mode", choices=feasibility.MODES, default="definite")
    p.add_argument("--zero-tol", dest="zero_tol", type=float, default=None)
    p.add_argument("--eps", default=None, help="comma-separated epsilon overrides")
    p.add_argument("--out", choices=("json", "csv", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schurcomp",
                                     description="Schur-complement completion toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("feasibility", help="decide whether a completing K exists")
    _common(p)
    p.add_argument("--min-kappa", dest="min_kappa", action="store_true",
                   help="also bisect for the smallest feasible kappa")
    _common(sub.add_parser("construct", help="build K and the certificate"))
    p = sub.add_parser("spectrum", help="predicted vs numeric spectrum of S")
    _common(p)
    p.add_argument("--cert", help="certificate JSON from 'construct'")
    p = sub.add_parser("rootlocus", help="eta trajectories over an eps grid")
    _common(p)
    p.add_argument("--index", type=int, default=1, help="1-based coupled index")
    p.add_argument("--lam", type=float, default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--grid", required=True, help="start:stop:step (stop exclusive) or e1,e2,...")
    p.set_defaults(out="csv")
    p = sub.add_parser("jframe", help="J-frame report and synthesis")
    _common(p)
    p.add_argument("--cert")
    p.add_argument("--synthesize", action="store_true")
    p = sub.add_parser("verify", help="identity suite")
    _common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-n", type=int, default=4)
    p.add_argument("-m", type=int, default=3)
    p = sub.add_parser("demo", help="1x1 example with A=[a], D=[0]")
    p.add_argument("--a", type=float, default=2.0)
    p.add_argument("--eps", dest="eps_value", type=float, default=0.25)
    p.add_argument("--out", choices=("json", "text"), default="text")
    return parser


def run(argv=None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, code, text = COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except InfeasibleInput as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (SchurCompError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if text is not None and (payload is None or args.out in ("text", "csv")):
        stdout.write(text)
    else:
        stdout.write(matrix_io.dumps(payload) + "\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
