"""Self-verification suite: every acceptance check, one pass/fail line each.

Each criterion is a function returning a CheckResult with the measured
and expected values; the runner executes them in order, optionally
filtered by substring, and reports deterministic text (timing goes to
stderr in the CLI so that stdout stays byte-identical across runs).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from qcf import functionals, homogeneous, spectral, stability
from qcf.catalog import (CatalogError, builtin_catalog, load_catalog)
from qcf.spectral import tau1, tau2
from qcf.tensor_core import (check_curvature_symmetries, gauss_bonnet_integrand,
                             quadratic_invariants, tensor_norm2)


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: str
    expected: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: measured {self.measured}; expected {self.expected}"


def _catalog():
    try:
        return load_catalog(), None
    except CatalogError as exc:
        return builtin_catalog(), exc


def check_catalog() -> CheckResult:
    _, err = _catalog()
    if err is None:
        return CheckResult("00-catalog", True,
                           "catalog loaded, all cross-identities hold",
                           "cross-validated catalog")
    return CheckResult("00-catalog", False, str(err), "cross-validated catalog")


def check_intervals() -> CheckResult:
    cat, _ = _catalog()
    expected: dict[str, tuple] = {}
    expected["sphere:3"] = (Fraction(-3, 8), Fraction(1, 3), True, True)
    for n in range(4, 9):
        expected[f"sphere:{n}"] = (tau1(n), Fraction(2, n * (n - 1)), True, True)
    for m in (2, 3, 4):
        expected[f"cp:{m}"] = (tau1(2 * m), Fraction(1, m * (m + 1)), True, True)
        expected[f"product:{m}"] = (tau1(2 * m),
                                    Fraction(2 - m, 2 * m * (m - 1)), True, True)
    for n in (3, 4):
        expected[f"hyperbolic:{n}"] = (Fraction(-1, 3), None, True, True)
    for n in range(5, 9):
        expected[f"hyperbolic:{n}"] = (tau1(n), Fraction(-1, n), True, False)
    bad = []
    for key, (lo, hi, lo_open, hi_open) in sorted(expected.items()):
        iv = stability.stability_interval(cat[key])
        got = (iv.lo, iv.hi, iv.lo_open, iv.hi_open)
        if got != (lo, hi, lo_open, hi_open):
            bad.append(f"{key}: got {got}, want {(lo, hi, lo_open, hi_open)}")
    if bad:
        return CheckResult("01-intervals", False, "; ".join(bad),
                           "exact match on all endpoints and openness flags")
    return CheckResult("01-intervals", True,
                       f"{len(expected)} model intervals match exactly",
                       "exact match (zero tolerance)")


def check_berger_derivatives() -> CheckResult:
    issues = []
    curve = lambda tau: (lambda s: functionals.berger_curve(tau, s))
    ests = functionals.curve_derivatives(curve(Fraction(1, 3)), 1.0)
    d1, d2, d3 = (e.value for e in ests)
    target3 = 5120.0 / 9.0
    if abs(d1) >= 1e-8:
        issues.append(f"|d1|={abs(d1):.3e} at tau=1/3")
    if abs(d2) >= 1e-6:
        issues.append(f"|d2|={abs(d2):.3e} at tau=1/3")
    if abs(d3 - target3) > 1e-3 * target3:
        issues.append(f"d3={d3:.6f} vs 5120/9 at tau=1/3")
    worst_d1 = abs(d1)
    worst_d2_rel = 0.0
    taus = [Fraction(k, 10) - 1 for k in range(20)]
    for t in taus:
        ests = functionals.curve_derivatives(curve(t), 1.0, max_order=2)
        d1t, d2t = ests[0].value, ests[1].value
        worst_d1 = max(worst_d1, abs(d1t))
        want = 128.0 * (1.0 / 3.0 - float(t))
        rel = abs(d2t - want) / abs(want)
        worst_d2_rel = max(worst_d2_rel, rel)
        if abs(d1t) >= 1e-8:
            issues.append(f"|d1|={abs(d1t):.3e} at tau={t}")
        if rel > 1e-5:
            issues.append(f"d2 rel err {rel:.3e} at tau={t}")
    measured = (f"tau=1/3: d1={d1:.2e}, d2={d2:.2e}, d3={d3:.6f}; "
                f"20 taus: max|d1|={worst_d1:.2e}, "
                f"max d2 rel err={worst_d2_rel:.2e}")
    expected = ("|d1|<1e-8, |d2|<1e-6, d3=5120/9 within 0.1%; "
                "d2=128(1/3-tau) within 1e-5 relative")
    if issues:
        return CheckResult("02-berger-derivatives", False, "; ".join(issues), expected)
    return CheckResult("02-berger-derivatives", True, measured, expected)


def check_berger_secondary() -> CheckResult:
    tau = Fraction(-2, 5)
    pts = functionals.berger_critical_points(tau)
    exact_roots = [p.s_squared for p in pts]
    pts_f = functionals.berger_critical_points(-0.4)
    float_err = min(abs(float(p.s_squared) - 2.0 / 13.0) for p in pts_f)
    ok_root = Fraction(2, 13) in exact_roots and float_err < 1e-10

    s = math.sqrt(2.0 / 13.0)
    sc = homogeneous.su2(exact=False)
    g = homogeneous.berger_metric(s, exact=False)
    grad = homogeneous.gradient_F(sc, g, float(tau))
    vol = homogeneous.volume(sc, g, homogeneous.SU2_REFERENCE_VOLUME)
    fval = homogeneous.functional_value(sc, g, float(tau),
                                        homogeneous.SU2_REFERENCE_VOLUME)
    p = 4.0 / 3.0 - 1.0
    resid_t = grad + (p / 2.0) * (fval / vol) * g
    g_inv = np.linalg.inv(g)
    resid = math.sqrt(abs(tensor_norm2(g_inv, resid_t)))
    gnorm = math.sqrt(abs(tensor_norm2(g_inv, g)))
    rel = resid / gnorm
    ok_grad = rel < 1e-8
    measured = (f"root found exactly: {Fraction(2, 13) in exact_roots}, "
                f"float path err {float_err:.2e}; criticality residual {rel:.2e}")
    expected = "s^2 = 2/13 to 1e-10; |grad F + (p/2) Vol^-1 F g|/|g| < 1e-8"
    return CheckResult("03-berger-secondary-critical", ok_root and ok_grad,
                       measured, expected)


def check_kaehler_path() -> CheckResult:
    target = -64.0 * math.pi**2
    vals = [functionals.product_sphere_curve(Fraction(-1, 2), t)
            for t in np.linspace(-1.0, 1.0, 21)]
    value_err = max(abs(v - target) for v in vals) / abs(target)
    spread = (max(vals) - min(vals)) / abs(target)
    ok = spread < 1e-10 and value_err < 1e-8
    return CheckResult(
        "04-product-kaehler-path", ok,
        f"relative spread {spread:.2e}, value error {value_err:.2e}",
        "constant to 1e-10 relative, value -64 pi^2 to 1e-8 relative")


def check_einstein_gradients() -> CheckResult:
    cat, _ = _catalog()
    bad = []
    for key in sorted(cat):
        model = cat[key]
        cd = model.curvature_data(exact=True)
        n, R = model.n, model.scal
        grad0 = homogeneous.gradient_from_einstein(cd, Fraction(0))
        grad_s = homogeneous.gradient_from_einstein(cd, Fraction(1)) - grad0
        want0 = Fraction(n - 4, 2 * n * n) * R * R
        want_s = Fraction(n - 4, 2 * n) * R * R
        for name, grad, want in (("F0", grad0, want0), ("S", grad_s, want_s)):
            defect = grad - want * cd.g
            if any(x != 0 for x in defect.ravel().tolist()):
                bad.append(f"{key} grad {name}")
    if bad:
        return CheckResult("05-einstein-gradients", False, "; ".join(bad),
                           "grad F_0 = (n-4)/(2n^2) R^2 g, grad S = (n-4)/(2n) R^2 g")
    return CheckResult("05-einstein-gradients", True,
                       f"exact equality on all {len(cat)} catalog models",
                       "grad F_0 = (n-4)/(2n^2) R^2 g, grad S = (n-4)/(2n) R^2 g "
                       "(exact, tolerance 1e-10)")


def check_divergence_free(seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    sc = homogeneous.su2(exact=False)
    worst = 0.0
    for _ in range(100):
        diag = rng.uniform(0.5, 2.0, size=3)
        tau = rng.uniform(-1.0, 1.0)
        g = np.diag(diag)
        grad = homogeneous.gradient_F(sc, g, tau)
        div = homogeneous.divergence(sc, g, grad)
        g_inv = np.linalg.inv(g)
        norm = math.sqrt(abs(float(np.einsum("ij,i,j->", g_inv, div, div))))
        worst = max(worst, norm)
    return CheckResult("06-divergence-free", worst < 1e-9,
                       f"max |delta grad F_tau| = {worst:.2e} over 100 metrics",
                       "< 1e-9")


def check_symbol(seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    issues = []
    min_sv = math.inf
    for _ in range(100):
        n = int(rng.integers(3, 9))
        while True:
            t = Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 21)))
            if abs(t - tau2(n)) > Fraction(1, 20):
                break
        v = rng.normal(size=n)
        xi = v / np.linalg.norm(v)
        sv = spectral.gauged_symbol(n, float(t), xi).min_singular_value()
        min_sv = min(min_sv, sv)
    if min_sv <= 1e-6:
        issues.append(f"min singular value {min_sv:.2e} <= 1e-6")
    for n in (3, 4, 5):
        verdict = spectral.symbol_injectivity(n, tau2(n), trials=2, seed=seed)
        if verdict.injective:
            issues.append(f"not degenerate at n={n}, tau=-n/(4(n-1))")
        elif not spectral.kernel_contains_metric(verdict, n):
            issues.append(f"metric direction missing from kernel at n={n}")
    ck_flags = []
    for n in range(2, 9):
        xi = np.zeros(n)
        xi[0] = 1.0
        ck = spectral.conformal_killing_symbol(n, xi)
        ck_flags.append(ck.degenerate)
        if ck.degenerate != (n == 2):
            issues.append(f"conformal-Killing degeneracy wrong at n={n}")
    measured = (f"100 random triples: min SV {min_sv:.3e}; degenerate with "
                f"metric kernel at the threshold for n=3,4,5; CK degenerate "
                f"flags n=2..8: {ck_flags}")
    expected = ("min SV > 1e-6 away from -n/(4(n-1)); exact degeneracy with "
                "g in kernel at the threshold; conformal-Killing degenerate "
                "iff n = 2")
    return CheckResult("07-symbol", not issues,
                       "; ".join(issues) if issues else measured, expected)


def check_rigidity() -> CheckResult:
    cat, _ = _catalog()
    issues = []
    rep3 = stability.rigidity_exceptional_taus(cat["sphere:3"])
    if not rep3.exceptional or rep3.exceptional[0].tau != Fraction(1, 3):
        issues.append(f"sphere:3 first tau {rep3.exceptional[0].tau if rep3.exceptional else None}")
    repc = stability.rigidity_exceptional_taus(cat["cp:2"])
    if not repc.exceptional or repc.exceptional[0].tau != Fraction(1, 6):
        issues.append("cp:2 first tau wrong")
    repp = stability.rigidity_exceptional_taus(cat["product:2"])
    got = [e.tau for e in repp.exceptional]
    if got != [Fraction(-1, 2), Fraction(0)]:
        issues.append(f"product:2 taus {got}")
    for rep, key in ((rep3, "sphere:3"), (repc, "cp:2"), (repp, "product:2")):
        model = cat[key]
        for e in rep.exceptional:
            val = spectral.tt_jacobi(model.n, model.scal, e.tau, e.mu)
            if val != 0:
                issues.append(f"{key}: tt polynomial {val} != 0 at "
                              f"(tau={e.tau}, mu={e.mu})")
    for key in ("sphere:4", "quotient:4:2", "cp:2", "product:2"):
        bv = stability.bach_verdict(cat[key])
        if bv.rigid is not True:
            issues.append(f"{key} not Bach-rigid: {bv.rigid}")
    measured = ("sphere:3 tau_1 = 1/3; cp:2 tau_1 = 1/6; product:2 taus "
                "{-1/2, 0}; all tt-polynomial zeros exact; Bach-rigid: "
                "sphere:4, quotient:4:2, cp:2, product:2")
    expected = "first exceptional values and exact kernel roots; Bach verdicts rigid"
    return CheckResult("08-rigidity", not issues,
                       "; ".join(issues) if issues else measured, expected)


def check_gauss_bonnet() -> CheckResult:
    cat, _ = _catalog()
    issues = []
    details = []
    for key in ("sphere:4", "product:2"):
        model = cat[key]
        cd = model.curvature_data(exact=True)
        integrand = gauss_bonnet_integrand(cd.g, cd.rm)
        vol = float(model.volume)
        lhs = vol * float(integrand)
        rhs = 32.0 * math.pi**2 * model.euler_char
        rel = abs(lhs - rhs) / abs(rhs)
        details.append(f"{key}: rel err {rel:.2e}")
        if rel > 1e-10:
            issues.append(f"{key}: {lhs} vs {rhs}")
    w2 = cat["product:2"].curvature_data(exact=True).invariants()["weyl2"]
    if w2 != Fraction(16, 3):
        issues.append(f"|W|^2(S2xS2) = {w2} != 16/3")
    details.append("|W|^2(S2xS2) = 16/3 exactly")
    return CheckResult("09-gauss-bonnet", not issues,
                       "; ".join(issues) if issues else "; ".join(details),
                       "Vol*(|W|^2 - 2|Ric|^2 + (2/3)R^2) = 32 pi^2 chi to "
                       "1e-10 relative; |W|^2(S2xS2) = 16/3")


def check_property_suites(seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    issues = []
    # curvature symmetries + pointwise quadratic identity, 100 random metrics
    worst_rmf = 0.0
    for k in range(100):
        sc = homogeneous.su2(exact=False) if k % 2 == 0 else homogeneous.su2_plus_r(exact=False)
        n = sc.n
        g = np.diag(rng.uniform(0.5, 2.0, size=n))
        cd = homogeneous.curvature(sc, g)
        try:
            check_curvature_symmetries(cd.rm, tol=1e-10)
        except ValueError as exc:
            issues.append(f"curvature symmetry: {exc}")
            break
        inv = quadratic_invariants(g, cd.rm)
        lhs = (n - 2) / 4.0 * (inv["rm2"] - inv["weyl2"])
        rhs = inv["ric2"] - inv["scal"] ** 2 / (2.0 * (n - 1))
        scale = max(abs(rhs), 1.0)
        worst_rmf = max(worst_rmf, abs(lhs - rhs) / scale)
    if worst_rmf >= 1e-9:
        issues.append(f"pointwise quadratic identity defect {worst_rmf:.2e}")
    # factorization identities, 200 random exact inputs
    for _ in range(200):
        n = int(rng.integers(3, 9))
        R = Fraction(int(rng.integers(-60, 61)), int(rng.integers(1, 13)))
        t = Fraction(int(rng.integers(-40, 41)), int(rng.integers(1, 13)))
        mu = Fraction(int(rng.integers(-60, 61)), int(rng.integers(1, 13)))
        lhs = spectral.tt_jacobi(n, R, t, mu)
        rhs = Fraction(1, 2) * (2 * R / n - mu) * ((Fraction(4, n) + 2 * t) * R - mu)
        if lhs != rhs:
            issues.append(f"tt factorization fails at n={n}, R={R}, tau={t}, mu={mu}")
            break
        lam = mu
        pc = spectral.conformal_polynomial(n, R, t)
        rhs2 = Fraction(1, 2 * n) * ((n - 1) * lam - R) * (
            n * (n - 4 * t + 4 * n * t) * lam + 2 * (n - 4) * (1 + n * t) * R)
        if pc(lam) != rhs2:
            issues.append(f"conformal factorization fails at n={n}")
            break
    # formal tau -> infinity consistency, exact
    for n in range(3, 9):
        for Rnum in (-12, -1, 0, 5, 24):
            R = Fraction(Rnum)
            p0 = spectral.conformal_polynomial(n, R, Fraction(0))
            p1 = spectral.conformal_polynomial(n, R, Fraction(1))
            slope = (p1.c0 - p0.c0, p1.c1 - p0.c1, p1.c2 - p0.c2)
            ps = spectral.conformal_s_polynomial(n, R)
            if slope != (ps.c0, ps.c1, ps.c2):
                issues.append(f"tau-slope vs S-polynomial mismatch at n={n}, R={R}")
    measured = (f"symmetries + pointwise identity (max defect {worst_rmf:.1e}) "
                "on 100 random metrics; 200 exact factorization checks; "
                "S-polynomial is the exact tau-slope")
    expected = ("identity defect < 1e-9; factorizations exact; "
                "tau->infinity limit exact")
    return CheckResult("10-property-suites", not issues,
                       "; ".join(issues) if issues else measured, expected)


CRITERIA = [
    ("00-catalog", lambda seed: check_catalog()),
    ("01-intervals", lambda seed: check_intervals()),
    ("02-berger-derivatives", lambda seed: check_berger_derivatives()),
    ("03-berger-secondary-critical", lambda seed: check_berger_secondary()),
    ("04-product-kaehler-path", lambda seed: check_kaehler_path()),
    ("05-einstein-gradients", lambda seed: check_einstein_gradients()),
    ("06-divergence-free", check_divergence_free),
    ("07-symbol", check_symbol),
    ("08-rigidity", lambda seed: check_rigidity()),
    ("09-gauss-bonnet", lambda seed: check_gauss_bonnet()),
    ("10-property-suites", check_property_suites),
]


@dataclass
class VerifyReport:
    results: list[CheckResult]
    elapsed: float

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def text(self) -> str:
        lines = [r.line() for r in self.results]
        lines.append("overall: " + ("PASS" if self.all_passed else "FAIL"))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "kind": "verify",
            "checks": [
                {"name": r.name, "passed": r.passed,
                 "measured": r.measured, "expected": r.expected}
                for r in self.results
            ],
            "all_passed": self.all_passed,
        }


def run_all(filter_str: str | None = None, seed: int = 0) -> VerifyReport:
    t0 = time.monotonic()
    results = []
    for name, fn in CRITERIA:
        if filter_str and filter_str not in name:
            continue
        results.append(fn(seed))
    elapsed = time.monotonic() - t0
    if filter_str is None or filter_str in "runtime":
        results.append(CheckResult(
            "runtime", elapsed < 60.0,
            "full suite under 60 s: " + ("yes" if elapsed < 60.0 else "no"),
            "under 60 seconds"))
    return VerifyReport(results, elapsed)
