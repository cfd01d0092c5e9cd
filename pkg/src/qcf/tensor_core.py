"""Dense algebraic curvature tensors in an invariant frame.

Everything here is pointwise linear algebra: Kulkarni-Nomizu products,
Ricci contractions, the Weyl/traceless-Ricci/scalar decomposition and
the quadratic invariants |Rm|^2, |Ric|^2, R^2, |W|^2. Two backends share
one code path: float64 arrays, or object arrays of fractions.Fraction
for exact arithmetic (dimensions are capped at 8, so dense is cheap).

Index conventions, fixed once and used everywhere:
  Rm[i,j,k,l] is fully covariant with Rm = (1/2) kn(g, g) for the unit
  round metric (sectional curvature +1), and Ric[j,l] = g^ik Rm[i,j,k,l]
  so the round metric has Ric = (n-1) g.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from qcf._exact import exact_det, exact_inv

DIM_MIN = 3
DIM_MAX = 8


def validate_dim(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ValueError(f"dimension must be an integer, got {n!r}")
    if n < DIM_MIN:
        raise ValueError(f"dimension {n} below minimum {DIM_MIN}")
    if n > DIM_MAX:
        raise ValueError(f"dimension {n} above dense-backend cap {DIM_MAX}")
    return int(n)


def is_exact(arr: np.ndarray) -> bool:
    return arr.dtype == object


def _one(exact: bool):
    return Fraction(1) if exact else 1.0


def as_sym2(rows, exact: bool = False) -> np.ndarray:
    """Build a symmetric 2-tensor array; exact=True keeps Fractions."""
    if exact:
        a = np.array(rows, dtype=object)
        flat = a.ravel()
        for idx, v in enumerate(flat):
            flat[idx] = Fraction(v)
        a = flat.reshape(a.shape)
    else:
        a = np.array(rows, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("symmetric 2-tensor must be a square matrix")
    if not np.array_equal(a, a.T):
        raise ValueError("2-tensor is not symmetric")
    return a


def inverse_metric(g: np.ndarray) -> np.ndarray:
    return exact_inv(g) if is_exact(g) else np.linalg.inv(g)


def metric_det(g: np.ndarray):
    return exact_det(g) if is_exact(g) else float(np.linalg.det(g))


@dataclass
class MetricFrame:
    """A metric given by its constant matrix in some invariant frame."""

    n: int
    g: np.ndarray
    g_inv: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        validate_dim(self.n)
        if self.g.shape != (self.n, self.n):
            raise ValueError("metric shape does not match dimension")
        evals = np.linalg.eigvalsh(np.asarray(self.g, dtype=float))
        if evals[0] <= 0:
            raise ValueError("metric matrix is not positive definite")
        self.g_inv = inverse_metric(self.g)

    @property
    def exact(self) -> bool:
        return is_exact(self.g)


def kulkarni_nomizu(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a kn b)_ijkl = a_ik b_jl - a_il b_jk + b_ik a_jl - b_il a_jk.

    The result satisfies all algebraic curvature symmetries including
    the first Bianchi identity whenever a and b are symmetric.
    """
    t1 = np.einsum("ik,jl->ijkl", a, b)
    t2 = np.einsum("il,jk->ijkl", a, b)
    t3 = np.einsum("ik,jl->ijkl", b, a)
    t4 = np.einsum("il,jk->ijkl", b, a)
    return t1 - t2 + t3 - t4


def constant_curvature_rm(g: np.ndarray, kappa) -> np.ndarray:
    """Curvature tensor of a space form: kappa * (1/2) g kn g."""
    half = Fraction(1, 2) if is_exact(g) else 0.5
    return (kappa * half) * kulkarni_nomizu(g, g)


def contract_ricci(g_inv: np.ndarray, rm: np.ndarray) -> np.ndarray:
    """Ric_jl = g^ik Rm_ijkl."""
    return np.einsum("ik,ijkl->jl", g_inv, rm)


def scalar_curvature(g_inv: np.ndarray, ric: np.ndarray):
    return np.einsum("jl,jl->", g_inv, ric)


def raise_all(g_inv: np.ndarray, t: np.ndarray) -> np.ndarray:
    out = t
    for axis in range(t.ndim):
        out = np.tensordot(g_inv, out, axes=([1], [axis]))
        out = np.moveaxis(out, 0, axis)
    return out


def tensor_norm2(g_inv: np.ndarray, t: np.ndarray):
    """Full contraction |T|^2 with every index raised by g_inv."""
    return np.sum(raise_all(g_inv, t) * t)


def sym2_inner(g_inv: np.ndarray, a: np.ndarray, b: np.ndarray):
    return np.einsum("ip,jq,ij,pq->", g_inv, g_inv, a, b)


def check_curvature_symmetries(rm: np.ndarray, tol: float = 1e-12) -> None:
    """Raise if rm lacks the algebraic curvature symmetries.

    Checks antisymmetry in both index pairs, pair-exchange symmetry and
    the first Bianchi identity. Exact inputs are compared exactly.
    """
    pairs = [
        ("antisymmetry (first pair)", rm + np.swapaxes(rm, 0, 1)),
        ("antisymmetry (second pair)", rm + np.swapaxes(rm, 2, 3)),
        ("pair exchange", rm - np.transpose(rm, (2, 3, 0, 1))),
        ("first Bianchi", rm + np.transpose(rm, (0, 2, 3, 1)) + np.transpose(rm, (0, 3, 1, 2))),
    ]
    for name, defect in pairs:
        if is_exact(rm):
            if any(v != 0 for v in defect.ravel()):
                raise ValueError(f"curvature symmetry violated: {name}")
        elif float(np.max(np.abs(defect))) > tol:
            raise ValueError(f"curvature symmetry violated: {name} "
                             f"(defect {float(np.max(np.abs(defect))):.3e})")


def decompose(g: np.ndarray, rm: np.ndarray):
    """Split rm into (weyl, traceless-Ricci part, scalar part).

    rm = weyl + kn(E, g)/(n-2) + R/(2n(n-1)) * kn(g, g) with
    E = Ric - (R/n) g. The three parts are orthogonal, and the Weyl
    part is totally trace-free. In dimension 3 the Weyl part of any
    tensor with curvature symmetries vanishes identically.
    """
    n = g.shape[0]
    exact = is_exact(g) and is_exact(rm)
    g_inv = inverse_metric(g)
    ric = contract_ricci(g_inv, rm)
    scal = scalar_curvature(g_inv, ric)
    cn = Fraction(1, n) if exact else 1.0 / n
    c2 = Fraction(1, n - 2) if exact else 1.0 / (n - 2)
    cs = Fraction(1, 2 * n * (n - 1)) if exact else 1.0 / (2 * n * (n - 1))
    tracefree_ric = ric - (scal * cn) * g
    ricci_part = c2 * kulkarni_nomizu(tracefree_ric, g)
    scalar_part = (scal * cs) * kulkarni_nomizu(g, g)
    weyl = rm - ricci_part - scalar_part
    return weyl, ricci_part, scalar_part


def quadratic_invariants(g: np.ndarray, rm: np.ndarray) -> dict[str, Any]:
    """Pointwise quadratic curvature invariants.

    Returns rm2 = |Rm|^2, ric2 = |Ric|^2, scal = R, scal2 = R^2,
    weyl2 = |W|^2 plus the norms of the decomposition parts. The norm
    convention is the plain full contraction (no pair-reordering
    factors), pinned by |W|^2(S^2 x S^2) = 16/3.
    """
    n = g.shape[0]
    validate_dim(n)
    g_inv = inverse_metric(g)
    ric = contract_ricci(g_inv, rm)
    scal = scalar_curvature(g_inv, ric)
    weyl, ricci_part, scalar_part = decompose(g, rm)
    return {
        "n": n,
        "rm2": tensor_norm2(g_inv, rm),
        "ric2": tensor_norm2(g_inv, ric),
        "scal": scal,
        "scal2": scal * scal,
        "weyl2": tensor_norm2(g_inv, weyl),
        "ricci_part2": tensor_norm2(g_inv, ricci_part),
        "scalar_part2": tensor_norm2(g_inv, scalar_part),
    }


def gauss_bonnet_integrand(g: np.ndarray, rm: np.ndarray):
    """The n = 4 Chern-Gauss-Bonnet density |W|^2 - 2|Ric|^2 + (2/3)R^2.

    Integrated over a closed 4-manifold this equals 32 pi^2 chi(M).
    """
    if g.shape[0] != 4:
        raise ValueError("Gauss-Bonnet density is a dimension-4 identity")
    inv = quadratic_invariants(g, rm)
    two_thirds = Fraction(2, 3) if is_exact(g) and is_exact(rm) else 2.0 / 3.0
    return inv["weyl2"] - 2 * inv["ric2"] + two_thirds * inv["scal2"]


@dataclass
class CurvatureData:
    """A metric frame together with its curvature tensor and traces."""

    n: int
    g: np.ndarray
    rm: np.ndarray
    g_inv: np.ndarray = field(init=False)
    ric: np.ndarray = field(init=False)
    scal: Any = field(init=False)

    def __post_init__(self) -> None:
        validate_dim(self.n)
        if self.rm.shape != (self.n,) * 4:
            raise ValueError("curvature tensor shape mismatch")
        self.g_inv = inverse_metric(self.g)
        self.ric = contract_ricci(self.g_inv, self.rm)
        self.scal = scalar_curvature(self.g_inv, self.ric)

    @property
    def exact(self) -> bool:
        return is_exact(self.g) and is_exact(self.rm)

    def einstein_constant(self):
        """Return kappa with Ric = kappa g, or None if not Einstein.

        Exact data is tested exactly; float data to 1e-12 relative.
        """
        n = self.n
        kappa = self.scal / n if self.exact else self.scal / n
        defect = self.ric - kappa * self.g
        if self.exact:
            return kappa if all(v == 0 for v in defect.ravel()) else None
        scale = max(1.0, float(np.max(np.abs(np.asarray(self.g, dtype=float)))))
        if float(np.max(np.abs(np.asarray(defect, dtype=float)))) <= 1e-12 * abs(float(kappa)) + 1e-12 * scale:
            return kappa
        return None

    def invariants(self) -> dict[str, Any]:
        return quadratic_invariants(self.g, self.rm)
