"""Matrix-level verification of the algebraic machinery."""

import math

import numpy as np
import pytest
from scipy.linalg import expm

import qcbound as qb
from qcbound import oracle
from qcbound.euler_arnold import ClosedFormFamily

PI = math.pi


# ---------------------------------------------------------------------------
# representations close on the registered tables
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", ["sp2_J", "sp2_K", "sp4_T10", "coupled_M4"])
def test_matrix_rep_closure_exact(name):
    rep = qb.matrix_rep(name)
    assert qb.commutator_closure_residual(rep) <= 1e-12


@pytest.mark.parametrize("name,levels", [("ho4", 32), ("sp2_J", 32),
                                         ("sp2_K", 24), ("anharm5", 32)])
def test_fock_rep_interior_closure(name, levels):
    rep = qb.fock_rep(name, levels=levels)
    assert qb.commutator_closure_residual(rep) <= 1e-10


def test_fock_rep_edge_violation_is_real():
    # the full (untrimmed) ladder matrices do violate [Q, P] = i E at the edge
    rep = qb.fock_rep("ho4", levels=16)
    E, P, Q, _ = rep.matrices
    defect = Q @ P - P @ Q - 1j * E
    assert np.max(np.abs(defect)) > 1.0


def test_displacement_operator_identity_on_fock():
    rep = qb.fock_rep("ho4", levels=40)
    E, P, Q, H = rep.matrices
    a = oracle.ladder(40)
    alpha = 0.3 - 0.7j
    D1 = expm(alpha * a.conj().T - np.conj(alpha) * a)
    D2 = expm(1j * math.sqrt(2) * (alpha.imag * Q - alpha.real * P))
    assert np.max(np.abs((D1 - D2)[:32, :32])) < 1e-12


def test_unknown_rep_names():
    with pytest.raises(qb.NotRegistered):
        qb.matrix_rep("ho4")          # no finite-dimensional rep exists
    with pytest.raises(qb.NotRegistered):
        qb.fock_rep("sp4_T10")


# ---------------------------------------------------------------------------
# path-ordered exponential
# ---------------------------------------------------------------------------

def test_path_ordered_identity_for_zero_velocity():
    rep = qb.matrix_rep("sp2_J")
    sol = qb.solve_closed_form(ClosedFormFamily("sp2_J_equal_penalty"), np.zeros(3))
    U = qb.path_ordered_exponential(rep, sol, steps=10)
    assert np.array_equal(U, np.eye(2))


def test_path_ordered_constant_energy_direction():
    rep = qb.matrix_rep("sp2_J")
    wt = 0.9
    sol = qb.solve_closed_form(ClosedFormFamily("sp2_J_equal_penalty"),
                               np.array([0.0, 0.0, wt]))
    U = qb.path_ordered_exponential(rep, sol, steps=2000)
    want = np.diag([np.exp(-1j * wt), np.exp(1j * wt)])
    assert np.max(np.abs(U - want)) < 1e-9


def test_path_ordered_unitary_on_hermitian_rep():
    rep = qb.fock_rep("ho4", levels=24)
    fam = ClosedFormFamily("ho4_equal_penalty")
    sol = qb.solve_closed_form(fam, np.array([0.1, 0.3, -0.2, 0.4]))
    U = qb.path_ordered_exponential(rep, sol, steps=1000)
    assert np.max(np.abs(U @ U.conj().T - np.eye(24))) < 1e-8


def test_path_ordered_step_validation():
    rep = qb.matrix_rep("sp2_J")
    sol = qb.solve_closed_form(ClosedFormFamily("sp2_J_equal_penalty"), np.zeros(3))
    with pytest.raises(ValueError):
        qb.path_ordered_exponential(rep, sol, steps=0)


# ---------------------------------------------------------------------------
# periodicity: matrix level vs spectrum level
# ---------------------------------------------------------------------------

def test_spectrum_period_is_four_pi():
    rep = qb.fock_rep("sp2_J", levels=16)
    assert qb.spectrum_period_check(rep, omega=1.0) == pytest.approx(4 * PI)
    assert qb.spectrum_period_check(rep, omega=2.0) == pytest.approx(2 * PI)


def test_interior_spectrum_is_half_integer():
    rep = qb.fock_rep("sp2_J", levels=16)
    H = rep.interior_block(rep.matrices[rep.hamiltonian_index])
    eigs = np.sort(np.linalg.eigvalsh(H))
    assert np.allclose(eigs, np.arange(len(eigs)) + 0.5, atol=1e-12)


def test_matrix_level_period_is_two_pi():
    rep = qb.matrix_rep("sp2_J")
    J3 = rep.matrices[2]
    assert np.max(np.abs(expm(-2j * PI * J3) - np.eye(2))) < 1e-12
    # ... which is half the spectrum-level period: the covering-group mismatch
    assert np.max(np.abs(expm(-1j * PI * J3) + np.eye(2))) < 1e-12


# ---------------------------------------------------------------------------
# line element
# ---------------------------------------------------------------------------

def test_line_element_normalization_at_identity():
    rep = qb.matrix_rep("sp2_J")
    G = qb.PenaltyMatrix.diagonal([1.0, 2.0, 3.0])
    eps = 1e-3
    for i in range(3):
        ds2 = qb.line_element(rep, np.eye(2, dtype=complex),
                              -1j * eps * rep.matrices[i], G)
        assert ds2 == pytest.approx(G.weights[i] * eps ** 2, rel=1e-12)


def test_line_element_zero_displacement():
    rep = qb.matrix_rep("sp2_J")
    G = qb.PenaltyMatrix.identity(3)
    assert qb.line_element(rep, np.eye(2, dtype=complex),
                           np.zeros((2, 2)), G) == 0.0


def test_line_element_right_invariance_sweep():
    rng = np.random.default_rng(17)
    rep = qb.matrix_rep("sp2_J")
    G = qb.PenaltyMatrix.diagonal([1.0, 4.0, 0.5])
    U = oracle.random_group_element(rep, rng)
    coeffs = rng.uniform(-0.2, 0.2, size=3)
    dU = sum(c * (-1j) * M @ U for c, M in zip(coeffs, rep.matrices))
    base = qb.line_element(rep, U, dU, G)
    for _ in range(10):
        g = oracle.random_group_element(rep, rng)
        moved = qb.line_element(rep, U @ g, dU @ g, G)
        assert abs(moved - base) <= 1e-10


def test_line_element_degenerate_direction():
    rep = qb.MatrixRep("fake", 2, (np.zeros((2, 2), dtype=complex),))
    with pytest.raises(qb.DegenerateDirection):
        qb.line_element(rep, np.eye(2, dtype=complex),
                        np.eye(2, dtype=complex), qb.PenaltyMatrix.identity(1))


# ---------------------------------------------------------------------------
# leading-order truncation error scaling
# ---------------------------------------------------------------------------

def test_dyson_gap_scales_cubically():
    rep = qb.matrix_rep("sp2_J")
    fam = ClosedFormFamily("sp2_J_equal_penalty")
    direction = np.array([0.5, -0.3, 0.8])
    direction /= np.linalg.norm(direction)
    radii = np.array([0.02, 0.04, 0.08])
    errs = []
    for r in radii:
        sol = qb.solve_closed_form(fam, r * direction)
        U_po = qb.path_ordered_exponential(rep, sol, steps=4000)
        U_lo = oracle.exponential_of_coefficients(
            rep, qb.leading_order_coeffs(sol)(1.0))
        errs.append(np.linalg.norm(U_po - U_lo, 2))
    slope = np.polyfit(np.log(radii), np.log(errs), 1)[0]
    assert 2.5 <= slope <= 3.5
    # cubic envelope with a fitted constant
    K = errs[-1] / radii[-1] ** 3
    for r, e in zip(radii, errs):
        assert e <= 1.2 * K * r ** 3
