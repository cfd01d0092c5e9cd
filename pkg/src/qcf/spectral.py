"""Second-variation operators as spectral polynomials, plus principal symbols.

On an Einstein manifold the Jacobi operator of the normalized quadratic
functionals acts on each Lichnerowicz eigenspace (transverse-traceless
tensors) and each Laplace eigenspace (conformal directions) as plain
multiplication, so the operators reduce to quadratic polynomials in the
eigenvalue. Those polynomials, in exact arithmetic, are what the
stability and rigidity decisions consume.

Sign conventions, fixed once: mu ranges over spec(-Delta_L) on TT
tensors and lambda over spec(-Delta) on functions, both bounded below,
so interval statements about spectra translate verbatim.

The module also builds the principal symbol of the gauged linearization
as a dense matrix on symmetric arrays, and the conformal-Killing symbol
on covectors, with exact rank decisions for rational inputs and SVD
fallbacks otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from qcf._exact import exact_rank_nullspace


def tau1(n: int) -> Fraction:
    """Lower stability threshold (4-3n)/(2n(n-1))."""
    return Fraction(4 - 3 * n, 2 * n * (n - 1))


def tau2(n: int) -> Fraction:
    """Degenerate-symbol threshold -n/(4(n-1))."""
    return Fraction(-n, 4 * (n - 1))


def _as_exact(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return float(x)


@dataclass(frozen=True)
class SpectralPolynomial:
    """Degree <= 2 polynomial c2 x^2 + c1 x + c0 in the eigenvalue variable.

    var is 'mu' (TT, eigenvalue of -Delta_L) or 'lambda' (conformal,
    eigenvalue of -Delta). Coefficients are exact ratios when the
    defining data (n, R, tau) are.
    """

    c0: Fraction
    c1: Fraction
    c2: Fraction
    var: str
    n: int
    scal: Fraction
    tau: Fraction | None = None

    def __call__(self, x):
        return (self.c2 * x + self.c1) * x + self.c0

    def roots(self) -> list[Fraction]:
        """Roots with multiplicity; exact (all cases used here are rational)."""
        if self.c2 == 0:
            if self.c1 == 0:
                return []
            return [-self.c0 / self.c1]
        disc = self.c1 * self.c1 - 4 * self.c2 * self.c0
        if disc < 0:
            return []
        if isinstance(disc, Fraction):
            num = math.isqrt(disc.numerator)
            den = math.isqrt(disc.denominator)
            if num * num != disc.numerator or den * den != disc.denominator:
                raise ValueError(f"irrational roots, discriminant {disc}")
            sq = Fraction(num, den)
        else:
            sq = math.sqrt(disc)
        r1 = (-self.c1 - sq) / (2 * self.c2)
        r2 = (-self.c1 + sq) / (2 * self.c2)
        return sorted([r1, r2])


def tt_polynomial(n: int, scal, tau, normalized: bool = True) -> SpectralPolynomial:
    """Jacobi action on a TT eigenspace of -Delta_L with eigenvalue mu.

    Normalized functional: (1/2)(2R/n - mu)((4/n + 2 tau)R - mu).
    Unnormalized differs by the constant Einstein-gradient eigenvalue
    c = (n-4)/(2n^2) (1 + n tau) R^2, i.e. unnormalized = normalized + c;
    at tau = 0 this reproduces the coefficients
    (1/2) mu^2 - (3/n) R mu + (n+4)/(2n^2) R^2.
    """
    R = _as_exact(scal)
    t = _as_exact(tau)
    half = Fraction(1, 2)
    c2 = half
    c1 = -(Fraction(3, n) + t) * R
    c0 = (Fraction(4, n * n) + 2 * t / n) * R * R
    if not normalized:
        c0 = c0 + Fraction(n - 4, 2 * n * n) * (1 + n * t) * R * R
    tau_field = t if isinstance(t, Fraction) else None
    return SpectralPolynomial(c0, c1, c2, "mu", n, R if isinstance(R, Fraction) else Fraction(0), tau_field)


def tt_s_polynomial(n: int, scal) -> SpectralPolynomial:
    """TT action for the scalar-curvature functional: R(2R/n - mu)."""
    R = _as_exact(scal)
    return SpectralPolynomial(2 * R * R / n, -R, Fraction(0), "mu", n,
                              R if isinstance(R, Fraction) else Fraction(0))

def tt_jacobi(n: int, scal, tau, mu, normalized: bool = True):
    """Evaluate the TT Jacobi polynomial; tau=None selects the S-functional."""
    if tau is None:
        return tt_s_polynomial(n, scal)(_as_exact(mu))
    return tt_polynomial(n, scal, tau, normalized)(_as_exact(mu))


def conformal_polynomial(n: int, scal, tau) -> SpectralPolynomial:
    """Conformal Jacobi trace polynomial in the -Delta eigenvalue lambda.

    p_tau(lambda) = (1/2n)((n-1)lambda - R)(n(n - 4 tau + 4 n tau)lambda
    + 2(n-4)(1 + n tau)R). At R = 0 this is ((n-1)(n-4tau+4ntau)/2) lambda^2.
    """
    R = _as_exact(scal)
    t = _as_exact(tau)
    a = n * (n - 4 * t + 4 * n * t)
    b = 2 * (n - 4) * (1 + n * t) * R
    inv2n = Fraction(1, 2 * n)
    c2 = inv2n * (n - 1) * a
    c1 = inv2n * ((n - 1) * b - R * a)
    c0 = -inv2n * R * b
    tau_field = t if isinstance(t, Fraction) else None
    return SpectralPolynomial(c0, c1, c2, "lambda", n,
                              R if isinstance(R, Fraction) else Fraction(0), tau_field)


def conformal_s_polynomial(n: int, scal) -> SpectralPolynomial:
    """Conformal polynomial of the S-functional:
    2(n-1)^2 lambda^2 + (n-6)(n-1) R lambda - (n-4) R^2."""
    R = _as_exact(scal)
    return SpectralPolynomial(-(n - 4) * R * R, (n - 6) * (n - 1) * R,
                              Fraction(2 * (n - 1) ** 2), "lambda", n,
                              R if isinstance(R, Fraction) else Fraction(0))


def conformal_jacobi(n: int, scal, tau, lam):
    """Evaluate the conformal polynomial; tau=None selects the S-functional."""
    if tau is None:
        return conformal_s_polynomial(n, scal)(_as_exact(lam))
    return conformal_polynomial(n, scal, tau)(_as_exact(lam))


def q_factor(n: int, scal, tau, lam):
    """Second factor n(n-4tau+4ntau)lambda + 2(n-4)(1+n tau)R of p_tau.

    Its sign at lambda_1 decides the conformal verdict past the
    Lichnerowicz root; the lambda coefficient is positive exactly for
    tau > -n/(4(n-1)), and at tau = -1/n the R term drops out
    (coefficient (n-2)^2 lambda).
    """
    R = _as_exact(scal)
    t = _as_exact(tau)
    return n * (n - 4 * t + 4 * n * t) * _as_exact(lam) + 2 * (n - 4) * (1 + n * t) * R


# ---------------------------------------------------------------------------
# principal symbols


def _sym_basis(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


def _sym_to_vec(h: np.ndarray, basis) -> np.ndarray:
    return np.array([h[i, j] for i, j in basis], dtype=h.dtype)


def _vec_to_sym(v, basis, n: int, dtype) -> np.ndarray:
    h = np.zeros((n, n), dtype=dtype)
    if dtype == object:
        h[:] = Fraction(0)
    for c, (i, j) in zip(v, basis):
        h[i, j] = c
        h[j, i] = c
    return h


def symbol_coefficients(n: int, tau) -> tuple:
    """The three coefficient combinations entering the gauged symbol."""
    t = _as_exact(tau)
    A = 2 * t + Fraction(n * n + 4 * n - 4, 2 * n * n)
    B = 2 * (t + Fraction(n - 1, n))
    C = 2 * t + Fraction(n**3 + 4 * n - 4, 2 * n**3)
    return A, B, C


@dataclass(frozen=True)
class SymbolOperator:
    """Dense matrix of the gauged-linearization symbol on symmetric arrays.

    Acts on h by
      (1/2)|xi|^4 h - A |xi|^2 (tr h) xi xi + B h(xi,xi) xi xi
      + C |xi|^4 (tr h) g - A |xi|^2 h(xi,xi) g
    in an orthonormal frame (g the identity). Exact entries when tau and
    xi are rational.
    """

    n: int
    tau: Fraction | float
    xi: np.ndarray
    matrix: np.ndarray = field(repr=False)
    basis: tuple = ()

    def apply(self, h: np.ndarray) -> np.ndarray:
        v = _sym_to_vec(np.asarray(h), self.basis)
        out = self.matrix @ v
        return _vec_to_sym(out, self.basis, self.n, self.matrix.dtype)

    def is_exact(self) -> bool:
        return self.matrix.dtype == object

    def min_singular_value(self) -> float:
        m = self.matrix.astype(float)
        return float(np.linalg.svd(m, compute_uv=False)[-1])

    def exact_kernel(self) -> list[np.ndarray]:
        """Nullspace basis as symmetric matrices (exact inputs only)."""
        if not self.is_exact():
            raise ValueError("exact kernel needs rational tau and xi")
        _, null = exact_rank_nullspace(self.matrix)
        return [_vec_to_sym(v, self.basis, self.n, object) for v in null]

    def trace_free_block(self) -> np.ndarray:
        """Matrix restricted and projected to trace-free symmetric arrays.

        Basis: off-diagonal E_ij plus diagonal differences E_ii - E_nn.
        """
        n = self.n
        dtype = self.matrix.dtype
        one = Fraction(1) if dtype == object else 1.0

        def blank():
            h = np.zeros((n, n), dtype=dtype)
            if dtype == object:
                h[:] = Fraction(0)
            return h

        vecs = []
        for i, j in self.basis:
            if i != j:
                h = blank()
                h[i, j] = one
                h[j, i] = one
                vecs.append(h)
        for i in range(n - 1):
            h = blank()
            h[i, i] = one
            h[n - 1, n - 1] = -one
            vecs.append(h)
        coords = _trace_free_coords(n)
        cols = []
        for h in vecs:
            out = self.apply(h)
            tr = sum(out[k, k] for k in range(n))
            for k in range(n):
                out[k, k] = out[k, k] - tr / n
            cols.append([out[i, j] for (i, j) in coords])
        return np.array(cols, dtype=dtype).T


def _trace_free_coords(n: int) -> list[tuple[int, int]]:
    coords = [(i, j) for i in range(n) for j in range(i + 1, n)]
    coords += [(i, i) for i in range(n - 1)]
    return coords


def gauged_symbol(n: int, tau, xi) -> SymbolOperator:
    """Symbol matrix at covector xi in the E_ij basis (i <= j)."""
    xi = np.asarray(xi)
    if n < 3:
        raise ValueError("dimension must be at least 3")
    if xi.shape != (n,):
        raise ValueError(f"xi must have shape ({n},)")
    if isinstance(tau, (int, Fraction)) and xi.dtype.kind in "iu":
        promoted = np.empty(n, dtype=object)
        promoted[:] = [Fraction(int(x)) for x in xi.tolist()]
        xi = promoted
    exact = isinstance(tau, (int, Fraction)) and xi.dtype == object
    if not any(bool(x != 0) for x in xi.tolist()):
        raise ValueError("xi must be nonzero")
    dtype = object if exact else float
    if not exact:
        xi = xi.astype(float)
    A, B, C = symbol_coefficients(n, tau if exact else float(tau))
    if not exact:
        A, B, C = float(A), float(B), float(C)
    xi2 = sum(x * x for x in xi.tolist())
    basis = _sym_basis(n)
    N = len(basis)
    half = Fraction(1, 2) if exact else 0.5
    cols = []
    for (i, j) in basis:
        h = _vec_to_sym([Fraction(0) if exact else 0.0] * N, basis, n, dtype)
        h[i, j] = Fraction(1) if exact else 1.0
        h[j, i] = h[i, j]
        tr = sum(h[k, k] for k in range(n))
        hxx = sum(h[p, q] * xi[p] * xi[q] for p in range(n) for q in range(n))
        out = np.zeros((n, n), dtype=dtype)
        if exact:
            out[:] = Fraction(0)
        for p in range(n):
            for q in range(n):
                val = half * xi2 * xi2 * h[p, q]
                val = val - A * xi2 * tr * xi[p] * xi[q]
                val = val + B * hxx * xi[p] * xi[q]
                if p == q:
                    val = val + C * xi2 * xi2 * tr
                    val = val - A * xi2 * hxx
                out[p, q] = val
        cols.append(_sym_to_vec(out, basis))
    matrix = np.array(cols, dtype=dtype).T
    return SymbolOperator(n=n, tau=tau, xi=xi, matrix=matrix, basis=tuple(basis))


@dataclass(frozen=True)
class InjectivityVerdict:
    injective: bool
    min_singular_value: float
    kernel: list = field(default_factory=list)
    note: str = ""

    @property
    def verdict(self) -> str:
        return "injective" if self.injective else "degenerate"


def _random_unit_xi(n: int, rng) -> np.ndarray:
    while True:
        v = rng.normal(size=n)
        norm = float(np.linalg.norm(v))
        if norm > 1e-3:
            return v / norm


def _random_rational_xi(n: int, rng) -> np.ndarray:
    while True:
        ints = rng.integers(-5, 6, size=n)
        if any(int(k) != 0 for k in ints):
            out = np.empty(n, dtype=object)
            out[:] = [Fraction(int(k)) for k in ints]
            return out


def symbol_injectivity(n: int, tau, trials: int = 100, seed: int = 0,
                       restrict_trace_free: bool = False) -> InjectivityVerdict:
    """Injectivity of the gauged symbol over random covector directions.

    Floats: smallest singular value over `trials` random unit xi,
    injective iff it exceeds 1e-10. Rational tau: exact rank checks at
    random integer xi (the symbol is homogeneous in xi, so rank is
    direction-independent of scaling); any rank drop returns the exact
    kernel basis. Per-trial randomness is seeded by seed + trial index.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    exact = isinstance(tau, (int, Fraction))
    min_sv = math.inf
    kernel: list = []
    for trial in range(trials):
        rng = np.random.default_rng(seed + trial)
        xi_f = _random_unit_xi(n, rng)
        op = gauged_symbol(n, float(tau), xi_f)
        m = op.matrix
        if restrict_trace_free:
            m = op.trace_free_block().astype(float)
        sv = float(np.linalg.svd(m, compute_uv=False)[-1])
        min_sv = min(min_sv, sv)
        if exact:
            xi_q = _random_rational_xi(n, rng)
            opq = gauged_symbol(n, Fraction(tau), xi_q)
            mq = opq.matrix if not restrict_trace_free else opq.trace_free_block()
            rank, null = exact_rank_nullspace(mq)
            if null and not kernel:
                if restrict_trace_free:
                    kernel = [np.array(v, dtype=object) for v in null]
                else:
                    kernel = [_vec_to_sym(v, opq.basis, n, object) for v in null]
    if exact:
        if kernel:
            return InjectivityVerdict(False, min_sv, kernel,
                                      note="exact rank deficiency")
        return InjectivityVerdict(True, min_sv, [],
                                  note="exact full rank at every sampled direction")
    injective = min_sv > 1e-10
    return InjectivityVerdict(injective, min_sv)


def kernel_contains_metric(verdict: InjectivityVerdict, n: int) -> bool:
    """Whether the identity matrix direction lies in the reported kernel span."""
    if not verdict.kernel:
        return False
    cols = []
    for k in verdict.kernel:
        arr = np.asarray(k)
        if arr.ndim != 2:
            return False
        cols.append([arr[i, j] for i in range(n) for j in range(i, n)])
    g_vec = [Fraction(1) if i == j else Fraction(0)
             for i in range(n) for j in range(i, n)]
    m = np.array(cols + [g_vec], dtype=object).T
    rank_with, _ = exact_rank_nullspace(m)
    m0 = np.array(cols, dtype=object).T
    rank_without, _ = exact_rank_nullspace(m0)
    return rank_with == rank_without


@dataclass(frozen=True)
class ConformalKillingVerdict:
    n: int
    eigenvalues: tuple
    min_singular_value: float
    degenerate: bool
    note: str = ""


def conformal_killing_symbol(n: int, xi) -> ConformalKillingVerdict:
    """Symbol of the conformal-Killing gauge operator on covectors.

    The matrix is |xi|^2 I + (1 - 2/n) xi xi^T with eigenvalues
    (2 - 2/n)|xi|^2 (once, along xi) and |xi|^2 (n-1 times). As a matrix
    it is invertible for every n >= 1; the gauge verdict is degenerate
    exactly in dimension two, where the conformal group is infinite
    dimensional and the gauge slice collapses. Both facts are reported:
    the true spectrum and the dimension-two degeneracy flag.
    """
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (n,):
        raise ValueError(f"xi must have shape ({n},)")
    xi2 = float(xi @ xi)
    if xi2 == 0.0:
        raise ValueError("xi must be nonzero")
    along = (2.0 - 2.0 / n) * xi2
    eigs = tuple(sorted([along] + [xi2] * (n - 1)))
    degenerate = n == 2
    note = ""
    if degenerate:
        note = ("dimension two: conformal gauge slice collapses "
                "(infinite-dimensional conformal group); matrix itself has "
                f"min singular value {min(eigs):g}")
    return ConformalKillingVerdict(n=n, eigenvalues=eigs,
                                   min_singular_value=min(eigs),
                                   degenerate=degenerate, note=note)
