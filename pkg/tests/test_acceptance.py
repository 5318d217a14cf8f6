"""
Acceptance suite: criteria 1-8 at their stated tolerances.

Each test prints one ``criterion N: PASS|FAIL ...`` line to the terminal.
Run alone with ``pytest tests/test_acceptance.py -v`` or
``python3 tests/test_acceptance.py`` for just the summary lines.
"""

import functools
import sys

import numpy as np
import pytest

from schurcomp.completion import EpsilonSchedule, build_K, complete
from schurcomp.core import (NONDECREASING, NONINCREASING, eigendecompose_hermitian,
                            random_hermitian)
from schurcomp.feasibility import DEFINITE, SEMIDEFINITE, check_feasible
from schurcomp.jframe import (apriori_checks, frame_bounds, jframe_existence, split_S,
                              synthesize_jframe)
from schurcomp.spectral import (eigenvector_basis, jordan_chain, predict_spectrum,
                                root_locus)
from schurcomp.verify import (aitken_residual, compare_spectra, congruence_violation,
                              determinant_residual, eigenbasis_rank, jordan_rank_probe,
                              numeric_spectrum, singular_product_violation, weyl_violation)

N_INSTANCES = 500
N_CONTRACTIONS = 200
N_IDENTITY = 200
N_JFRAME = 200
N_RECON = 50
KAPPAS = (0.5, 1.0, 2.0)


def _line(num, ok, detail):
    return f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}"


def _report(capsys, num, ok, detail):
    with capsys.disabled():
        print("\n" + _line(num, ok, detail))


def _complex_normal(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


# --- criteria 1 and 2 ------------------------------------------------------

def _mixed_instance(rng):
    n, m = int(rng.integers(1, 9)), int(rng.integers(1, 9))
    la = rng.uniform(-3, 3, n)
    mu = rng.uniform(-3, 3, m)
    mu[rng.random(m) < 0.15] = 0.0
    return random_hermitian(la, rng), random_hermitian(mu, rng)


def _random_contractions(rng, n, m, kappa, count):
    K = _complex_normal(rng, (count, n, m))
    K /= np.linalg.norm(K, ord=2, axis=(1, 2))[:, None, None]
    return K * (kappa * rng.random(count))[:, None, None]


def _extremal_candidate(eigsA, eigsD, kappa):
    # the structured K of the construction pushed to the edge of the budget
    n, m = eigsA.dim, eigsD.dim
    E = np.zeros((n, m))
    for i in range(min(n, m)):
        E[i, i] = kappa * (1 - 1e-12)
    return eigsA.vectors @ E @ eigsD.vectors.conj().T


@functools.lru_cache(maxsize=None)
def construction_run():
    rng = np.random.default_rng(1001)
    feasible, failures = [], []
    counts = {DEFINITE: [0, 0], SEMIDEFINITE: [0, 0]}
    best_infeasible = -np.inf
    for t in range(N_INSTANCES):
        A, D = _mixed_instance(rng)
        kappa = KAPPAS[t % len(KAPPAS)]
        eigsA = eigendecompose_hermitian(A, NONINCREASING)
        eigsD = eigendecompose_hermitian(D, NONDECREASING)
        n, m = A.shape[0], D.shape[0]
        for mode in (DEFINITE, SEMIDEFINITE):
            verdict = check_feasible(eigsA, eigsD, kappa, mode)
            if verdict.feasible:
                counts[mode][0] += 1
                cert, eA, eD, _ = complete(A, D, kappa, mode)
                lo = cert.schur_min_eig
                if mode == DEFINITE:
                    ok = cert.norm_K < kappa and lo > 0
                else:
                    ok = cert.norm_K <= kappa * (1 + 1e-12) and lo >= -1e-9
                if not ok:
                    failures.append((t, mode, "construction", cert.norm_K, lo))
                feasible.append((t, mode, cert, eA, eD))
            else:
                counts[mode][1] += 1
                Ks = _random_contractions(rng, n, m, kappa, N_CONTRACTIONS)
                Ks = np.concatenate([Ks, _extremal_candidate(eigsA, eigsD, kappa)[None]])
                H = D[None] + np.conj(np.swapaxes(Ks, 1, 2)) @ A[None] @ Ks
                H = 0.5 * (H + np.conj(np.swapaxes(H, 1, 2)))
                lo = float(np.max(np.linalg.eigvalsh(H)[:, 0]))
                best_infeasible = max(best_infeasible, lo)
                if lo > 1e-9:
                    failures.append((t, mode, "contraction", lo))
    return feasible, failures, counts, best_infeasible


def criterion_1():
    feasible, failures, counts, best = construction_run()
    detail = (f"definite feasible/infeasible {counts[DEFINITE][0]}/{counts[DEFINITE][1]}, "
              f"semidefinite {counts[SEMIDEFINITE][0]}/{counts[SEMIDEFINITE][1]}; "
              f"largest min-eig over random contractions on infeasible inputs {best:.3e}; "
              f"{len(failures)} failures")
    return not failures, detail


def criterion_2():
    feasible, _, _, _ = construction_run()
    worst_ratio = 0.0
    bad = []
    for t, mode, cert, eA, eD in feasible:
        pred = predict_spectrum(cert, eA, eD)
        tol = 1e-8 * (1 + np.linalg.norm(cert.S, 2))
        cmp = compare_spectra(pred, numeric_spectrum(cert.S), tol)
        worst_ratio = max(worst_ratio, cmp.max_distance / tol)
        if not cmp.matched:
            bad.append((t, mode, cmp.max_distance))
    detail = (f"{len(feasible)} feasible (instance, mode) pairs; worst pairing distance "
              f"{worst_ratio:.2e} x tolerance; {len(bad)} mismatches")
    return not bad, detail


# --- criterion 3 -------------------------------------------------------------

def _scalar_cert(a, eps):
    cert, eigsA, eigsD, _ = complete([[a]], [[0.0]], 1.0, DEFINITE, [eps])
    return cert, eigsA, eigsD


def criterion_3():
    problems = []
    for a in (0.5, 1.0, 2.0, 10.0):
        cert, eA, eD = _scalar_cert(a, 0.25)
        S = cert.S
        pred = predict_spectrum(cert, eA, eD)
        if not np.allclose(pred.values, [a / 2, a / 2], rtol=0, atol=1e-14) or pred.diagonalizable:
            problems.append(f"a={a}: prediction {pred.values}")
        num = numeric_spectrum(S)
        if not compare_spectra(pred, num, 1e-7 * (1 + a)).matched:
            problems.append(f"a={a}: numeric {num}")
        if jordan_rank_probe(S, a / 2) != (1, 2):
            problems.append(f"a={a}: rank probe {jordan_rank_probe(S, a / 2)}")
        N = S - (a / 2) * np.eye(2)
        v1, v2 = np.array([1 / a, -1 / a]), np.array([1.0, 1.0])
        res = max(np.linalg.norm(N @ v1 - v2), np.linalg.norm(N @ v2))
        w1, w2 = jordan_chain(cert, eA, eD, 0)
        res = max(res, np.linalg.norm(N @ w1 - w2), np.linalg.norm(N @ w2))
        if res > 1e-10:
            problems.append(f"a={a}: chain residual {res:.2e}")
        for eps in (0.01, 0.1, 0.2, 0.249):
            c, x, y = _scalar_cert(a, eps)
            num = numeric_spectrum(c.S)
            p = predict_spectrum(c, x, y).values
            if not (np.all(p.imag == 0) and np.all(p.real > 0) and p[0] != p[1]
                    and np.all(np.abs(num.imag) <= 1e-10) and np.all(num.real > 0)):
                problems.append(f"a={a}, eps={eps}: not two positive reals")
        for eps in (0.26, 0.5, 0.75, 0.99):
            c, x, y = _scalar_cert(a, eps)
            num = numeric_spectrum(c.S)
            p = predict_spectrum(c, x, y).values
            if not (np.all(p.imag != 0) and abs(p[0] - np.conj(p[1])) < 1e-14
                    and np.all(np.abs(num.imag) > 1e-6)):
                problems.append(f"a={a}, eps={eps}: not a conjugate pair")
    return not problems, ("a in {0.5, 1, 2, 10}: double eigenvalue a/2 with probe (1,2) and "
                          "chain residual <= 1e-10, real split below 1/4, conjugate pair in "
                          f"(1/4, 1); {len(problems)} problems {problems[:3]}")


# --- criterion 4 -------------------------------------------------------------

def _embedded(rng, lam, mu, eps):
    """Random (A, D) whose leading coupled pair is (lam, mu), assembled at eps."""
    n, m = int(rng.integers(1, 5)), int(rng.integers(1, 5))
    la = np.concatenate([[lam], rng.uniform(0.05, 0.95, n - 1) * lam])
    md = np.concatenate([[mu], rng.uniform(0.1, 3, m - 1)])
    A, D = random_hermitian(la, rng), random_hermitian(md, rng)
    eigsA = eigendecompose_hermitian(A, NONINCREASING)
    eigsD = eigendecompose_hermitian(D, NONDECREASING)
    # reuse the exact pair so that case boundaries are hit without rounding
    eigsA = type(eigsA)(np.sort(la)[::-1], eigsA.vectors, eigsA.order)
    eigsD = type(eigsD)(np.sort(md), eigsD.vectors, eigsD.order)
    p = 1 if mu == 0 else 0
    sched = EpsilonSchedule(np.array([eps]), 1.0, DEFINITE, 1, p, 1e-12)
    cert = build_K(eigsA, eigsD, sched, validate=False)
    return cert, eigsA, eigsD


def _numeric_pair(cert, eA, eD):
    pred = predict_spectrum(cert, eA, eD)
    num = numeric_spectrum(cert.S)
    tol = 1e-9 * (1 + np.linalg.norm(cert.S, 2))
    cmp = compare_spectra(pred, num, tol)
    hi, lo = pred.eigens[0].value, pred.eigens[1].value
    nhi, nlo = (num[np.argmin(np.abs(num - z))] for z in (hi, lo))
    return cmp.matched, hi, lo, nhi, nlo, pred.eigens[0].case_label


def criterion_4():
    rng = np.random.default_rng(4004)
    tol = 1e-9
    bad = []
    checked = {c: 0 for c in "abcde"}
    for _ in range(100):
        lam = rng.uniform(0.2, 5)
        mu = -rng.uniform(0.05, 3) * lam
        lower = -mu / lam
        alpha = (lam - mu) ** 2 / (4 * lam * lam)
        samples = {
            "a": lower * rng.uniform(0.02, 0.98),
            "b": lower + (alpha - lower) * rng.uniform(0.0, 0.98),
            "c": alpha + rng.uniform(0.01, 1.0),
        }
        for case, eps in samples.items():
            cert, eA, eD = _embedded(rng, lam, mu, eps)
            matched, hi, lo, nhi, nlo, label = _numeric_pair(cert, eA, eD)
            ok = matched and label == case
            for x, y in ((hi, lo), (nhi, nlo)):
                if case == "a":
                    ok &= (abs(x.imag) <= tol and abs(y.imag) <= tol
                           and lam + tol > x.real > -tol and 0 + tol > y.real > mu - tol)
                elif case == "b":
                    lo_b, hi_b = min(lam + mu, 0.0), max(lam + mu, 0.0)
                    ok &= (abs(x.imag) <= tol and abs(y.imag) <= tol and lo_b - tol <= y.real
                           and y.real <= x.real + tol and x.real <= hi_b + tol)
                else:
                    ok &= abs(x.imag) > tol and abs(x - np.conj(y)) <= tol * (1 + abs(x))
            checked[case] += 1
            if not ok:
                bad.append((case, lam, mu, eps, hi, lo, nhi, nlo))
        # d: the pair collides; a rank probe replaces the (ill-conditioned) eigenvalue match
        cert, eA, eD = _embedded(rng, lam, mu, alpha)
        pred = predict_spectrum(cert, eA, eD)
        hi, lo = pred.eigens[0].value, pred.eigens[1].value
        eta = 0.5 * (lam + mu)
        ok = (pred.eigens[0].case_label == "d" and hi == lo and abs(hi - eta) <= tol
              and jordan_rank_probe(cert.S, eta) == (1, 2))
        checked["d"] += 1
        if not ok:
            bad.append(("d", lam, mu, alpha, hi, lo))
        lam_e = rng.uniform(0.2, 5)
        cert, eA, eD = _embedded(rng, lam_e, 0.0, 0.0)
        matched, hi, lo, nhi, nlo, label = _numeric_pair(cert, eA, eD)
        ok = (matched and label == "e" and hi == lam_e and lo == 0
              and abs(nhi - lam_e) <= tol * (1 + lam_e) and abs(nlo) <= tol * (1 + lam_e))
        checked["e"] += 1
        if not ok:
            bad.append(("e", lam_e, 0.0, 0.0, hi, lo, nhi, nlo))
    detail = (f"samples per case {checked}; bounds checked on predicted and numeric "
              f"eigenvalues at tol 1e-9; {len(bad)} violations")
    return not bad, detail


# --- criterion 5 -------------------------------------------------------------

def criterion_5():
    rng = np.random.default_rng(5005)
    kappa = 0.6
    kk = kappa ** 2
    bad = []
    n_points = 0
    for _ in range(100):
        q = int(rng.integers(1, 4))
        lam = np.sort(rng.uniform(0.5, 3, q))[::-1]
        t = rng.uniform(0.2 + 1e-3, kk - 1e-3, q)      # alpha = (1 + t)^2 / 4 > kappa^2
        mu = -t * lam
        extra = int(rng.integers(0, 3))
        la = np.concatenate([lam, rng.uniform(0.1, 0.4, extra)])
        md = np.concatenate([mu, rng.uniform(0.5, 3, int(rng.integers(0, 3)))])
        A, D = random_hermitian(la, rng), random_hermitian(md, rng)
        eigsA = eigendecompose_hermitian(A, NONINCREASING)
        eigsD = eigendecompose_hermitian(D, NONDECREASING)
        if not check_feasible(eigsA, eigsD, kappa, DEFINITE).feasible:
            bad.append(("infeasible", la, md))
            continue
        grid = np.linspace(0.0, kk, 40, endpoint=False)
        for i in range(q):
            loc = root_locus(eigsA, eigsD, i, grid, kappa, DEFINITE)
            if loc.complex_reachable or not loc.alpha > kk:
                bad.append(("reachable", i))
            if any(p.eta_plus.imag != 0 or p.eta_minus.imag != 0 for p in loc.points):
                bad.append(("complex on grid", i))
        # every valid eps: assemble S and inspect its numeric spectrum
        lower = -eigsD.values[:q] / eigsA.values[:q]
        for s in np.linspace(0.02, 0.98, 12):
            eps = lower + s * (kk - lower)
            sched = EpsilonSchedule(eps, kappa, DEFINITE, q, 0, 1e-12)
            cert = build_K(eigsA, eigsD, sched, A, D)
            num = numeric_spectrum(cert.S)
            n_points += 1
            if np.max(np.abs(num.imag)) > 1e-9 * (1 + np.linalg.norm(cert.S, 2)):
                bad.append(("numeric complex", s, num))
    detail = (f"100 instances with kappa^2 = 0.36 < alpha_i; case-c range empty for every index, "
              f"root locus real on a 40-point grid, {n_points} assembled S with real spectra; "
              f"{len(bad)} violations")
    return not bad, detail


# --- criterion 6 -------------------------------------------------------------

def criterion_6():
    rng = np.random.default_rng(6006)
    worst = {"aitken": 0.0, "determinant": 0.0, "weyl": -np.inf, "sing_prod": -np.inf,
             "congruence": -np.inf}
    for _ in range(N_IDENTITY):
        n, m = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        A = _complex_normal(rng, (n, n)) + 3 * np.sqrt(n) * np.eye(n)
        B, C, D = (_complex_normal(rng, s) for s in ((n, m), (m, n), (m, m)))
        worst["aitken"] = max(worst["aitken"], aitken_residual(A, B, C, D))
        worst["determinant"] = max(worst["determinant"], determinant_residual(A, B, C, D))
    for _ in range(N_IDENTITY):
        n = int(rng.integers(1, 9))
        H1 = random_hermitian(rng.uniform(-3, 3, n), rng)
        H2 = random_hermitian(rng.uniform(-3, 3, n), rng)
        worst["weyl"] = max(worst["weyl"], weyl_violation(H1, H2))
    for _ in range(N_IDENTITY):
        p, q = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        X, Y = _complex_normal(rng, (p, q)), _complex_normal(rng, (p, q))
        if rng.random() < 0.3:
            # rank-deficient factors exercise the rank limits on the index pairs
            k = int(rng.integers(1, min(p, q) + 1))
            X = _complex_normal(rng, (p, k)) @ _complex_normal(rng, (k, q))
        worst["sing_prod"] = max(worst["sing_prod"], singular_product_violation(X, Y))
    for _ in range(N_IDENTITY):
        n, m = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        A = random_hermitian(rng.uniform(-3, 3, n), rng)
        K = _complex_normal(rng, (n, m)) * rng.uniform(0.1, 2)
        worst["congruence"] = max(worst["congruence"], congruence_violation(A, K))
    ok = (worst["aitken"] <= 1e-10 and worst["determinant"] <= 1e-8
          and worst["weyl"] <= 1e-9 and worst["sing_prod"] <= 1e-9
          and worst["congruence"] <= 1e-9)
    detail = ("worst over 200 instances each: Aitken {aitken:.1e}, determinant {determinant:.1e}, "
              "Weyl violation {weyl:.1e}, singular-value product violation {sing_prod:.1e}, "
              "congruence bound violation {congruence:.1e}").format(**worst)
    return ok, detail


# --- criteria 7 and 8 ----------------------------------------------------------

def _jframe_instance(rng):
    while True:
        n, m = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        la = rng.uniform(0.2, 3, n)
        mu = rng.uniform(-3, 3, m)
        mu[rng.random(m) < 0.15] = 0.0
        eigsA = eigendecompose_hermitian(np.diag(la), NONINCREASING)
        eigsD = eigendecompose_hermitian(np.diag(mu), NONDECREASING)
        if jframe_existence(eigsA, eigsD)[0]:
            return random_hermitian(la, rng), random_hermitian(mu, rng)


def _rayleigh_bounds(cert):
    """Frame bounds as extreme Rayleigh quotients of [S_pm g, g] / [g, g] on M_pm."""
    n, m = cert.n, cert.m
    K = cert.K
    J = np.diag(np.concatenate([np.ones(n), -np.ones(m)]))
    Sp, Sm = split_S(cert)
    G = np.vstack([np.eye(n), K.conj().T])            # M+ = range G
    num = G.conj().T @ J @ Sp @ G
    den = G.conj().T @ J @ G                          # = I - K K*
    L = np.linalg.cholesky(0.5 * (den + den.conj().T))
    Li = np.linalg.inv(L)
    wp = np.linalg.eigvalsh(0.5 * (Li @ num @ Li.conj().T + (Li @ num @ Li.conj().T).conj().T))
    H = np.vstack([np.zeros((n, m)), np.eye(m)])      # M- = range H, with -[.,.]
    wm = np.linalg.eigvalsh(-(H.T @ J @ Sm @ H))
    return wp[0], wp[-1], wm[0], wm[-1]


@functools.lru_cache(maxsize=None)
def jframe_run():
    rng = np.random.default_rng(7007)
    problems = []
    frames = []
    literal_violations = 0
    worst = {"imag": 0.0, "op": 0.0, "bounds": 0.0, "cond": 0.0}
    for t in range(N_JFRAME):
        A, D = _jframe_instance(rng)
        cert, eA, eD, _ = complete(A, D, 1.0, DEFINITE)
        n, m = cert.n, cert.m
        num = numeric_spectrum(cert.S)
        worst["imag"] = max(worst["imag"], float(np.max(np.abs(num.imag))))
        if np.max(np.abs(num.imag)) > 1e-10 or np.min(num.real) <= 0:
            problems.append((t, "spectrum", num))
        pred = predict_spectrum(cert, eA, eD)
        if not pred.diagonalizable or np.any(pred.values.imag != 0) or np.min(pred.values.real) <= 0:
            problems.append((t, "prediction"))
        rank, cond = eigenbasis_rank(cert.S)
        W = eigenvector_basis(cert, eA, eD)
        rank_w = np.linalg.matrix_rank(W, tol=1e-8 * np.linalg.norm(W, 2))
        worst["cond"] = max(worst["cond"], cond)
        if rank != n + m or rank_w != n + m or not np.isfinite(cond):
            problems.append((t, "eigenbasis", rank, rank_w, cond))
        fam = synthesize_jframe(cert)
        op_res = float(np.linalg.norm(fam.operator() - cert.S, 2))
        worst["op"] = max(worst["op"], op_res)
        if op_res > 1e-9:
            problems.append((t, "operator", op_res))
        rep = frame_bounds(cert, eA, eD)
        exact = (rep.alpha_plus, rep.beta_plus, rep.alpha_minus, rep.beta_minus)
        explicit = tuple(rep.explicit[k] for k in
                         ("alpha_plus", "beta_plus", "alpha_minus", "beta_minus"))
        rayleigh = _rayleigh_bounds(cert)
        dev = max(max(abs(a - b) for a, b in zip(exact, explicit)),
                  max(abs(a - b) for a, b in zip(exact, rayleigh)))
        worst["bounds"] = max(worst["bounds"], dev)
        if dev > 1e-10:
            problems.append((t, "bounds", exact, explicit, rayleigh))
        checks = apriori_checks(rep, slack=1e-9)
        if not all(checks.values()):
            problems.append((t, "apriori", checks))
        if rep.beta_plus > rep.apriori["beta_plus_upper_positive_sigma"] + 1e-9:
            literal_violations += 1
        frames.append((cert, fam))
    return problems, frames, literal_violations, worst


def criterion_7():
    problems, frames, literal, worst = jframe_run()
    detail = (f"{len(frames)} instances: max |imag| {worst['imag']:.1e}, "
              f"max eigenbasis cond {worst['cond']:.1e}, operator residual {worst['op']:.1e}, "
              f"bound deviation (eigen/explicit/Rayleigh) {worst['bounds']:.1e}, "
              f"a-priori checks with sigma_n(K) (zero-padded); the literal "
              f"smallest-positive-sigma form of the beta_plus bound fails on {literal}/"
              f"{len(frames)}; {len(problems)} problems")
    return not problems, detail


def criterion_8():
    _, frames, _, _ = jframe_run()
    rng = np.random.default_rng(8008)
    worst = 0.0
    for cert, fam in frames:
        Sinv = np.linalg.inv(cert.S)
        dim = cert.n + cert.m
        for _ in range(N_RECON):
            f = _complex_normal(rng, dim)
            res = np.linalg.norm(fam.reconstruct(f, Sinv) - f) / np.linalg.norm(f)
            worst = max(worst, res)
    return worst <= 1e-8, (f"{len(frames)} frames x {N_RECON} vectors: worst relative "
                           f"reconstruction residual {worst:.1e}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8]


@pytest.mark.parametrize("num", range(1, 9))
def test_criterion(num, capsys):
    ok, detail = CRITERIA[num - 1]()
    _report(capsys, num, ok, detail)
    assert ok, detail


@pytest.mark.xfail(strict=True, reason="the a-priori upper bound on beta_plus with the smallest "
                                       "positive singular value is false when rank K < n")
def test_literal_apriori_upper_bound_counterexample():
    cert, eA, eD, _ = complete(np.diag([3.0, 1.0]), np.diag([-2.0, 5.0]), 1.0)
    rep = frame_bounds(cert, eA, eD)
    # beta_plus = 1 while (1 - 49/72) * 3 = 23/24
    assert rep.beta_plus <= rep.apriori["beta_plus_upper_positive_sigma"] + 1e-9


if __name__ == "__main__":
    results = [fn() for fn in CRITERIA]
    for i, (ok, detail) in enumerate(results, 1):
        print(_line(i, ok, detail))
    sys.exit(0 if all(ok for ok, _ in results) else 1)
