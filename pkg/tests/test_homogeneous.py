"""Left-invariant curvature and functional gradients on SU(2) frames.

The exact values asserted here (Ricci eigenvalues, the F_{1/4} gradient
and the Ricci Laplacian at diag(1,1,2)) were computed independently with
a computer-algebra Koszul derivation and then frozen.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from qcf import homogeneous
from qcf.catalog import builtin_catalog
from qcf.homogeneous import (
    SU2_REFERENCE_VOLUME,
    StructureConstants,
    bach_tensor,
    berger_metric,
    curvature,
    divergence,
    functional_value,
    gradient_F,
    gradient_from_einstein,
    laplacian,
    levi_civita,
    su2,
    su2_plus_r,
    volume,
)
from qcf.tensor_core import check_curvature_symmetries, tensor_norm2


def _exact_diag(entries):
    n = len(entries)
    g = np.empty((n, n), dtype=object)
    g[:] = Fraction(0)
    for i, e in enumerate(entries):
        g[i, i] = Fraction(e)
    return g


@pytest.fixture
def su2_exact():
    return su2(exact=True)


def test_structure_constants_validate():
    c = np.zeros((3, 3, 3))
    c[0, 1, 2] = 1.0  # missing the antisymmetric partner
    with pytest.raises(ValueError, match="antisymmetry"):
        StructureConstants(3, c)

    c = np.zeros((3, 3, 3))
    c[0, 1, 2], c[1, 0, 2] = 1.0, -1.0
    c[0, 2, 0], c[2, 0, 0] = 1.0, -1.0
    with pytest.raises(ValueError, match="Jacobi"):
        StructureConstants(3, c)


def test_round_sphere_is_unit_round(su2_exact):
    g = _exact_diag([1, 1, 1])
    cd = curvature(su2_exact, g)
    assert cd.scal == 6
    assert all(cd.ric[i, i] == 2 for i in range(3))
    assert cd.einstein_constant() == 2


def test_torsion_free_and_metric_compatible(su2_exact):
    """Gamma^k_ij - Gamma^k_ji recovers c^k_ij on a generic diagonal metric."""
    g = _exact_diag([Fraction(3, 2), Fraction(5, 7), Fraction(2)])
    gam = levi_civita(su2_exact, g)
    torsion = gam - np.swapaxes(gam, 0, 1)
    assert all(v == 0 for v in (torsion - su2_exact.c).ravel())
    # nabla g = 0: Gamma_ij,k + Gamma_ik,j = 0 with the index lowered by g
    low = np.einsum("kl,ijl->ijk", g, gam)
    assert all(v == 0 for v in (low + np.swapaxes(low, 1, 2)).ravel())


def test_berger_ricci_closed_form(su2_exact):
    """Ric(diag(1,1,s^2)) = diag(4-2s^2, 4-2s^2, 2s^4) and R = 8-2s^2."""
    for s2 in (Fraction(1, 4), Fraction(1), Fraction(2), Fraction(9, 2)):
        g = _exact_diag([1, 1, s2])
        cd = curvature(su2_exact, g)
        assert cd.ric[0, 0] == 4 - 2 * s2
        assert cd.ric[1, 1] == 4 - 2 * s2
        assert cd.ric[2, 2] == 2 * s2 * s2
        assert cd.scal == 8 - 2 * s2


def test_frozen_gradient_and_laplacian(su2_exact):
    g = _exact_diag([1, 1, 2])
    cd = curvature(su2_exact, g)
    assert [cd.ric[i, i] for i in range(3)] == [0, 0, 8]

    grad = gradient_F(su2_exact, g, Fraction(1, 4))
    assert [grad[i, i] for i in range(3)] == [-22, -22, 68]
    assert grad[0, 1] == 0 and grad[0, 2] == 0 and grad[1, 2] == 0

    lap = laplacian(su2_exact, g, cd.ric)
    assert [lap[i, i] for i in range(3)] == [16, 16, -64]


def test_curvature_symmetries_generic_metric():
    rng = np.random.default_rng(5)
    for sc in (su2(), su2_plus_r()):
        for _ in range(8):
            g = np.diag(rng.uniform(0.4, 2.5, size=sc.n))
            cd = curvature(sc, g)
            check_curvature_symmetries(cd.rm, tol=1e-10)


def test_einstein_gradient_constants():
    cat = builtin_catalog()
    for key in ("sphere:3", "sphere:7", "cp:3", "product:4", "hyperbolic:6"):
        model = cat[key]
        cd = model.curvature_data()
        n, R = model.n, model.scal
        grad0 = gradient_from_einstein(cd, Fraction(0))
        want0 = Fraction(n - 4, 2 * n * n) * R * R
        assert all(v == 0 for v in (grad0 - want0 * cd.g).ravel())
        grad_s = gradient_from_einstein(cd, Fraction(1)) - grad0
        want_s = Fraction(n - 4, 2 * n) * R * R
        assert all(v == 0 for v in (grad_s - want_s * cd.g).ravel())


def test_gradient_from_einstein_rejects_non_einstein():
    sc = su2_plus_r(exact=True)
    cd = curvature(sc, _exact_diag([1, 1, 4, 1]))
    with pytest.raises(ValueError, match="not Einstein"):
        gradient_from_einstein(cd, Fraction(0))


def test_two_gradient_routes_agree_on_einstein_data(su2_exact):
    g = _exact_diag([1, 1, 1])
    cd = curvature(su2_exact, g)
    for tau in (Fraction(0), Fraction(1, 3), Fraction(-2, 5)):
        full = gradient_F(su2_exact, g, tau)
        alg = gradient_from_einstein(cd, tau)
        assert all(v == 0 for v in (full - alg).ravel())


def test_gradient_divergence_free_exact():
    sc = su2(exact=True)
    g = _exact_diag([Fraction(3, 4), Fraction(7, 5), Fraction(2)])
    grad = gradient_F(sc, g, Fraction(-1, 3))
    div = divergence(sc, g, grad)
    assert all(v == 0 for v in div.ravel())


def test_bach_tensor_properties():
    sc = su2_plus_r(exact=True)
    g = _exact_diag([Fraction(1), Fraction(4, 3), Fraction(2), Fraction(1)])
    b = bach_tensor(sc, g)
    g_inv = np.array([[Fraction(1) / g[i, i] if i == j else Fraction(0)
                       for j in range(4)] for i in range(4)], dtype=object)
    trace = sum(g_inv[i, i] * b[i, i] for i in range(4))
    assert trace == 0
    div = divergence(sc, g, b)
    assert all(v == 0 for v in div.ravel())


def test_bach_vanishes_on_einstein_four_manifolds():
    cat = builtin_catalog()
    for key in ("sphere:4", "cp:2", "product:2", "hyperbolic:4"):
        b = bach_tensor(cat[key].curvature_data())
        assert all(v == 0 for v in b.ravel())
    with pytest.raises(ValueError, match="dimension 4"):
        bach_tensor(cat["sphere:5"].curvature_data())


def test_volume_and_functional_value():
    sc = su2()
    g = berger_metric(2.0)
    assert volume(sc, g, SU2_REFERENCE_VOLUME) == pytest.approx(4.0 * math.pi**2)
    # round point: F_0 = Vol * |Ric|^2 = 2 pi^2 * 12
    f = functional_value(sc, np.eye(3), 0.0, SU2_REFERENCE_VOLUME)
    assert f == pytest.approx(24.0 * math.pi**2, rel=1e-12)
    fn = functional_value(sc, np.eye(3), 0.0, SU2_REFERENCE_VOLUME, normalized=True)
    assert fn == pytest.approx(f * (2.0 * math.pi**2) ** (4.0 / 3.0 - 1.0), rel=1e-12)


def test_scalar_laplacian_vanishes(su2_exact):
    g = _exact_diag([1, 2, 3])
    scal = np.array(Fraction(5), dtype=object)
    lap = laplacian(su2_exact, g, scal.reshape(()))
    assert lap == 0


def test_criticality_of_secondary_berger_point():
    """At tau = -2/5 the point s^2 = 2/13 solves the constrained equation.

    grad F + (p/2) Vol^-1 F g = 0 with p = 4/n - 1 is the Euler-Lagrange
    equation of the volume-normalized functional; the residual must sit
    at roundoff level.
    """
    s = math.sqrt(2.0 / 13.0)
    sc = su2()
    g = berger_metric(s)
    grad = gradient_F(sc, g, -0.4)
    vol = volume(sc, g, SU2_REFERENCE_VOLUME)
    fval = functional_value(sc, g, -0.4, SU2_REFERENCE_VOLUME)
    p = 4.0 / 3.0 - 1.0
    resid = grad + (p / 2.0) * (fval / vol) * g
    g_inv = np.linalg.inv(g)
    rel = math.sqrt(abs(tensor_norm2(g_inv, resid))) / math.sqrt(abs(tensor_norm2(g_inv, g)))
    assert rel < 1e-12
