"""Left-invariant geometry from structure constants.

A compact homogeneous metric is described here by the structure
constants of an invariant frame, [e_i, e_j] = c^k_ij e_k, together with
a constant positive-definite matrix g_ij. The Koszul formula then has
no derivative terms, so the Levi-Civita connection, curvature tensor,
covariant derivatives of invariant tensors and the gradients of the
quadratic functionals are all finite algebra, exact over Fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from qcf.tensor_core import (
    CurvatureData,
    contract_ricci,
    inverse_metric,
    is_exact,
    metric_det,
    scalar_curvature,
    tensor_norm2,
)

# Volume of the unit round 3-sphere, the reference frame volume for SU(2)
# with the bi-invariant metric diag(1,1,1).
SU2_REFERENCE_VOLUME = 2.0 * math.pi**2


@dataclass
class StructureConstants:
    """Structure constants c[i, j, k] = c^k_ij of a Lie algebra frame.

    Validates antisymmetry in (i, j) and the Jacobi identity on
    construction: exact arrays exactly, float arrays to 1e-12.
    """

    n: int
    c: np.ndarray

    def __post_init__(self) -> None:
        if self.c.shape != (self.n,) * 3:
            raise ValueError("structure constant array must be n x n x n")
        anti = self.c + np.swapaxes(self.c, 0, 1)
        jac = (
            np.einsum("ijm,mkl->ijkl", self.c, self.c)
            + np.einsum("jkm,mil->ijkl", self.c, self.c)
            + np.einsum("kim,mjl->ijkl", self.c, self.c)
        )
        for name, defect in [("antisymmetry", anti), ("Jacobi identity", jac)]:
            if is_exact(self.c):
                if any(v != 0 for v in defect.ravel()):
                    raise ValueError(f"structure constants violate {name}")
            elif float(np.max(np.abs(defect))) > 1e-12:
                raise ValueError(f"structure constants violate {name}")

    @property
    def exact(self) -> bool:
        return is_exact(self.c)


def su2(exact: bool = False) -> StructureConstants:
    """su(2) in the frame with [e1,e2] = 2 e3 (cyclically).

    diag(1,1,1) in this frame is the unit round 3-sphere metric and
    diag(1,1,s^2) is the Berger family.
    """
    c = np.zeros((3, 3, 3), dtype=object if exact else float)
    if exact:
        c[:] = Fraction(0)
    two = Fraction(2) if exact else 2.0
    for i, j, k in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
        c[i, j, k] = two
        c[j, i, k] = -two
    return StructureConstants(3, c)


def su2_plus_r(exact: bool = False) -> StructureConstants:
    """su(2) + R: a 4-dimensional algebra with a central direction.

    Diagonal metrics here are generically non-Einstein, which is what
    the Bach-tensor trace/divergence checks need.
    """
    c = np.zeros((4, 4, 4), dtype=object if exact else float)
    if exact:
        c[:] = Fraction(0)
    two = Fraction(2) if exact else 2.0
    for i, j, k in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
        c[i, j, k] = two
        c[j, i, k] = -two
    return StructureConstants(4, c)


def berger_metric(s, exact: bool = False) -> np.ndarray:
    """diag(1, 1, s^2): the Hopf-fiber-scaled family on SU(2)."""
    if exact:
        s = Fraction(s)
        g = np.empty((3, 3), dtype=object)
        g[:] = Fraction(0)
        g[0, 0] = g[1, 1] = Fraction(1)
        g[2, 2] = s * s
        return g
    return np.diag([1.0, 1.0, float(s) ** 2])


def levi_civita(sc: StructureConstants, g: np.ndarray) -> np.ndarray:
    """Connection coefficients G[i, j, k] = Gamma^k_ij in the frame.

    Koszul with constant inner products:
    2 <nab_i e_j, e_k> = c_ij,k - c_jk,i + c_ki,j, indices lowered by g.
    The torsion defect Gamma^k_ij - Gamma^k_ji equals c^k_ij.
    """
    g_inv = inverse_metric(g)
    clow = np.einsum("kl,ijl->ijk", g, sc.c)  # c_ij,k
    # transpose(clow, (2, 0, 1))[i, j, k] = clow[j, k, i] and
    # transpose(clow, (1, 2, 0))[i, j, k] = clow[k, i, j]
    koszul = clow - np.transpose(clow, (2, 0, 1)) + np.transpose(clow, (1, 2, 0))
    half = Fraction(1, 2) if (sc.exact and is_exact(g)) else 0.5
    return half * np.einsum("kl,ijl->ijk", g_inv, koszul)


def curvature(sc: StructureConstants, g: np.ndarray) -> CurvatureData:
    """Curvature tensor of the invariant metric, as CurvatureData.

    Sign convention: R(X,Y)Z = nab_X nab_Y Z - nab_Y nab_X Z - nab_[X,Y] Z
    and Rm[i,j,k,l] = g(e_k, R(e_i,e_j) e_l), which makes the unit round
    metric come out with Rm = (1/2) g kn g and Ric = (n-1) g.
    """
    gam = levi_civita(sc, g)
    # f[i,j,k,l]: coefficient of e_l in R(e_i,e_j) e_k
    f = (
        np.einsum("jkm,iml->ijkl", gam, gam)
        - np.einsum("ikm,jml->ijkl", gam, gam)
        - np.einsum("ijm,mkl->ijkl", sc.c, gam)
    )
    rm = np.einsum("km,ijlm->ijkl", g, f)
    return CurvatureData(sc.n, g, rm)


def invariant_cov_deriv(sc: StructureConstants, g: np.ndarray, t: np.ndarray,
                        order: int = 1, _gam: np.ndarray | None = None) -> np.ndarray:
    """Covariant derivative of an invariant covariant tensor.

    Frame components of invariant tensors are constant, so
    (nab T)_{a, i1..ir} = -sum_p Gamma^m_{a i_p} T_{..m..}. The derivative
    index is prepended; order=2 gives nab_a nab_b T with axes (a, b, ...).
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    gam = levi_civita(sc, g) if _gam is None else _gam
    out = _cov1(gam, t)
    if order == 2:
        out = _cov1(gam, out)
    return out


def _cov1(gam: np.ndarray, t: np.ndarray) -> np.ndarray:
    n = gam.shape[0]
    if t.ndim == 0:
        # scalars are constant on a homogeneous space
        return np.zeros((n,), dtype=t.dtype) if t.dtype != object else _zeros_obj((n,))
    out = None
    for p in range(t.ndim):
        tmp = np.tensordot(gam, t, axes=([2], [p]))  # axes (a, i_p, rest)
        contrib = np.moveaxis(tmp, 1, p + 1)
        out = -contrib if out is None else out - contrib
    return out


def _zeros_obj(shape) -> np.ndarray:
    z = np.empty(shape, dtype=object)
    z[:] = Fraction(0)
    return z


def laplacian(sc: StructureConstants, g: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Rough Laplacian Delta T = g^ab nab_a nab_b T of an invariant tensor."""
    second = invariant_cov_deriv(sc, g, t, order=2)
    return np.einsum("ab,ab...->...", inverse_metric(g), second)


def divergence(sc: StructureConstants, g: np.ndarray, h: np.ndarray) -> np.ndarray:
    """(delta h)_j = nab^i h_ij for a symmetric 2-tensor."""
    if h.ndim != 2:
        raise ValueError("divergence here takes a 2-tensor")
    d1 = invariant_cov_deriv(sc, g, h, order=1)
    return np.einsum("ia,aij->j", inverse_metric(g), d1)


def gradient_F(sc: StructureConstants, g: np.ndarray, tau) -> np.ndarray:
    """Gradient of F_tau = int |Ric|^2 + tau int R^2 at an invariant metric.

    grad F_0 = -Delta Ric_pq - 2 Rm_pkql Ric^kl + Hess(R)_pq
               - (1/2)(Delta R) g_pq + (1/2)|Ric|^2 g_pq
    grad S   = 2 Hess(R)_pq - 2 (Delta R) g_pq - 2 R Ric_pq + (1/2) R^2 g_pq

    The scalar-curvature derivative terms are computed through the same
    covariant-derivative machinery (they vanish identically on a
    homogeneous space, since R is an invariant scalar); Delta Ric is
    genuinely nonzero away from the Einstein locus.
    """
    exact = sc.exact and is_exact(g)
    half = Fraction(1, 2) if exact else 0.5
    cd = curvature(sc, g)
    g_inv = cd.g_inv
    gam = levi_civita(sc, g)

    lap_ric = np.einsum("ab,ab...->...", g_inv,
                        _cov1(gam, _cov1(gam, cd.ric)))
    ric_up = np.einsum("ka,lb,ab->kl", g_inv, g_inv, cd.ric)
    ric2 = np.einsum("kl,kl->", ric_up, cd.ric)

    scal_t = np.asarray(cd.scal) if not exact else np.array(cd.scal, dtype=object)
    d_scal = _cov1(gam, scal_t.reshape(()))  # identically zero, kept for shape honesty
    hess_scal = _cov1(gam, d_scal)
    lap_scal = np.einsum("ab,ab->", g_inv, hess_scal)

    grad0 = (
        -lap_ric
        - 2 * np.einsum("pkql,kl->pq", cd.rm, ric_up)
        + hess_scal
        - half * lap_scal * g
        + half * ric2 * g
    )
    grad_s = (
        2 * hess_scal
        - 2 * lap_scal * g
        - 2 * cd.scal * cd.ric
        + half * cd.scal * cd.scal * g
    )
    return grad0 + tau * grad_s


def gradient_from_einstein(cd: CurvatureData, tau) -> np.ndarray:
    """Gradient of F_tau evaluated on Einstein curvature data.

    For Ric = (R/n) g the Ricci tensor is parallel, so every derivative
    term of the gradient vanishes and only the algebraic terms remain.
    Raises if the data is not Einstein (use the structure-constant route
    for non-Einstein metrics, where Delta Ric matters).
    """
    if cd.einstein_constant() is None:
        raise ValueError("curvature data is not Einstein; derivative terms "
                         "would not vanish")
    half = Fraction(1, 2) if cd.exact else 0.5
    ric_up = np.einsum("ka,lb,ab->kl", cd.g_inv, cd.g_inv, cd.ric)
    ric2 = np.einsum("kl,kl->", ric_up, cd.ric)
    grad0 = -2 * np.einsum("pkql,kl->pq", cd.rm, ric_up) + half * ric2 * cd.g
    grad_s = -2 * cd.scal * cd.ric + half * cd.scal * cd.scal * cd.g
    return grad0 + tau * grad_s


def bach_tensor(sc_or_cd, g: np.ndarray | None = None) -> np.ndarray:
    """Bach tensor in dimension 4, normalized as 2 * grad F_{-1/3}.

    By Gauss-Bonnet the Weyl functional differs from 2 F_{-1/3} by a
    topological constant, so this is the gradient of int |W|^2. It is
    trace-free and divergence-free, and vanishes on Einstein data.
    Accepts (StructureConstants, g) or a single Einstein CurvatureData.
    """
    if isinstance(sc_or_cd, CurvatureData):
        cd = sc_or_cd
        if cd.n != 4:
            raise ValueError("Bach tensor is defined in dimension 4")
        tau = Fraction(-1, 3) if cd.exact else -1.0 / 3.0
        return 2 * gradient_from_einstein(cd, tau)
    sc = sc_or_cd
    if sc.n != 4:
        raise ValueError("Bach tensor is defined in dimension 4")
    exact = sc.exact and is_exact(g)
    tau = Fraction(-1, 3) if exact else -1.0 / 3.0
    return 2 * gradient_F(sc, g, tau)


def volume(sc: StructureConstants, g: np.ndarray, vol_ref: float) -> float:
    """Total volume vol_ref * sqrt(det g).

    vol_ref is the volume in the reference frame where g = identity
    (2 pi^2 for the SU(2) frame used by su2()).
    """
    return float(vol_ref) * math.sqrt(float(metric_det(g)))


def functional_value(sc: StructureConstants, g: np.ndarray, tau,
                     vol_ref: float, normalized: bool = False) -> float:
    """F_tau (or the volume-normalized Ftilde_tau) of an invariant metric.

    The integrand is constant, so F_tau = Vol * (|Ric|^2 + tau R^2);
    the normalized version multiplies by Vol^(4/n - 1).
    """
    cd = curvature(sc, g)
    g_inv = cd.g_inv
    ric2 = float(tensor_norm2(g_inv, cd.ric))
    scal = float(cd.scal)
    vol = volume(sc, g, vol_ref)
    value = vol * (ric2 + float(tau) * scal * scal)
    if normalized:
        value *= vol ** (4.0 / sc.n - 1.0)
    return value
