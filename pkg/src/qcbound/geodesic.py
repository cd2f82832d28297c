"""Exponent coefficients of the evolving unitary along a geodesic.

Truncating the time-ordered exponential at leading order writes the group
element as a single exponential U(s) = exp(-i sum_I c_I(s) O_I) whose
coefficients are plain integrals of the velocity components,

    c_I(s) = integral_0^s V^I(s') ds'.

Everything downstream of this truncation is an upper bound, not an exact
complexity.  For the closed-form velocity families the integrals are
evaluated analytically (with the sinc-type limits built in, so vanishing
rotation rates are regular); for numeric solutions the integral reuses the
integrator's own grid with the trapezoid rule.

The product-form parametrization
U = e^{-i a1 E} e^{-i a2 P} e^{-i a3 Q} e^{-i a4 H} is provided for the
four-generator oscillator group as an exact alternative (no Dyson
truncation), valid for vanishing central velocity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import FamilyMismatch, UnsupportedCenterVelocity
from .euler_arnold import ANHARM_MIX, VelocitySolution

__all__ = [
    "ExponentCoefficients",
    "ProductFormCoefficients",
    "leading_order_coeffs",
    "product_form_coeffs_ho4",
    "residual_product_form",
    "int_cos",
    "int_sin",
]


def int_cos(s, w):
    """integral_0^s cos(w u) du = sin(w s)/w, regular at w = 0."""
    s = np.asarray(s, dtype=float)
    return s * np.sinc(w * s / np.pi)


def int_sin(s, w):
    """integral_0^s sin(w u) du = (1 - cos(w s))/w, regular at w = 0."""
    s = np.asarray(s, dtype=float)
    return s * np.sin(0.5 * w * s) * np.sinc(0.5 * w * s / np.pi)


@dataclass(frozen=True)
class ExponentCoefficients:
    """Coefficients c_I(s) with U(s) ~ exp(-i sum_I c_I(s) O_I)."""

    algebra: str
    v0: np.ndarray
    coeffs: Callable[[np.ndarray], np.ndarray]

    def __call__(self, s):
        return self.coeffs(s)


@dataclass(frozen=True)
class ProductFormCoefficients:
    """Coefficients (a1..a4) of the ordered product of exponentials."""

    v0: np.ndarray
    coeffs: Callable[[np.ndarray], np.ndarray]

    def __call__(self, s):
        return self.coeffs(s)


def _shape(out, s):
    return out[0] if np.ndim(s) == 0 else out


def _ho4_coeffs(v0, rate):
    vE, vP, vQ, vH = v0

    def fn(s):
        s_arr = np.atleast_1d(np.asarray(s, dtype=float))
        ic, isn = int_cos(s_arr, rate), int_sin(s_arr, rate)
        out = np.column_stack([
            s_arr * vE,
            vP * ic - vQ * isn,
            vQ * ic + vP * isn,
            s_arr * vH,
        ])
        return _shape(out, s)
    return fn


def _sp2_coeffs(v0):
    v1, v2, v3 = v0
    rate = 4.0 * v3

    def fn(s):
        s_arr = np.atleast_1d(np.asarray(s, dtype=float))
        ic, isn = int_cos(s_arr, rate), int_sin(s_arr, rate)
        out = np.column_stack([v1 * ic - v2 * isn, v2 * ic + v1 * isn, s_arr * v3])
        return _shape(out, s)
    return fn


def _coupled_coeffs(v0, q, p):
    v1, v2, v3, v4 = v0
    rate = (p - 2.0 * q) * (v1 - v2) / p

    def fn(s):
        s_arr = np.atleast_1d(np.asarray(s, dtype=float))
        ic, isn = int_cos(s_arr, rate), int_sin(s_arr, rate)
        out = np.column_stack([
            s_arr * v1,
            s_arr * v2,
            v3 * ic + v4 * isn,
            v4 * ic - v3 * isn,
        ])
        return _shape(out, s)
    return fn


def _anharm_coeffs(v0):
    v1 = v0[0]
    hard = np.asarray(v0[1:])

    def fn(s):
        s_arr = np.atleast_1d(np.asarray(s, dtype=float))
        ibasis = np.stack([
            int_cos(s_arr, v1), int_sin(s_arr, v1),
            int_cos(s_arr, 3 * v1), int_sin(s_arr, 3 * v1),
        ], axis=-1)
        comps = np.einsum("kjb,j,nb->nk", ANHARM_MIX, hard, ibasis)
        out = np.column_stack([s_arr * v1, comps])
        return _shape(out, s)
    return fn


def _numeric_coeffs(sol: VelocitySolution):
    grid, states = sol.grid, sol.states
    dx = np.diff(grid)[:, None]
    cum = np.vstack([
        np.zeros((1, states.shape[1])),
        np.cumsum(0.5 * dx * (states[1:] + states[:-1]), axis=0),
    ])

    def fn(s):
        s_arr = np.atleast_1d(np.asarray(s, dtype=float))
        out = np.column_stack([np.interp(s_arr, grid, cum[:, i])
                               for i in range(states.shape[1])])
        return _shape(out, s)
    return fn


def leading_order_coeffs(sol: VelocitySolution) -> ExponentCoefficients:
    """Integrate the velocity components into exponent coefficients.

    Closed-form solutions get the analytic antiderivatives; numeric
    solutions get the trapezoid rule on the integrator grid.
    """
    if sol.family is not None:
        tag = sol.family.tag
        if tag == "ho4_equal_penalty":
            w = sol.penalties.weights
            rate = sol.v0[3] + (w[0] / w[1]) * sol.v0[0]
            fn = _ho4_coeffs(sol.v0, rate)
        elif tag == "sp2_J_equal_penalty":
            fn = _sp2_coeffs(sol.v0)
        elif tag == "coupled_pq":
            fn = _coupled_coeffs(sol.v0, sol.family.q, sol.family.p)
        elif tag == "anharm_p":
            fn = _anharm_coeffs(sol.v0)
        else:  # pragma: no cover
            raise FamilyMismatch(f"no coefficient formulas for {tag!r}")
    elif sol.grid is not None:
        fn = _numeric_coeffs(sol)
    else:
        raise FamilyMismatch("solution carries neither a family nor a dense grid")
    return ExponentCoefficients(algebra=sol.algebra, v0=sol.v0, coeffs=fn)


def product_form_coeffs_ho4(v0) -> ProductFormCoefficients:
    """Exact ordered-product coefficients for the oscillator group.

    Requires v_E = 0; the central generator only contributes a phase and the
    parametrization is solved with it switched off.
    """
    v0 = np.asarray(v0, dtype=float)
    if v0.shape != (4,):
        raise FamilyMismatch(f"expected a 4-component v0, got shape {v0.shape}")
    vE, vP, vQ, vH = v0
    if vE != 0.0:
        raise UnsupportedCenterVelocity(
            f"product form requires v_E = 0, got v_E = {vE:g}"
        )

    def fn(s):
        s_arr = np.atleast_1d(np.asarray(s, dtype=float))
        c, sn = np.cos(s_arr * vQ), np.sin(s_arr * vQ)
        c2, sn2 = np.cos(2 * s_arr * vQ), np.sin(2 * s_arr * vQ)
        a1 = 0.25 * s_arr ** 2 * ((vP ** 2 - vQ ** 2) * sn2 + 2 * vP * vQ * c2)
        a2 = s_arr * (vP * c - vQ * sn)
        a3 = s_arr * (vP * sn + vQ * c)
        a4 = s_arr * vH
        out = np.column_stack([a1, a2, a3, a4])
        return _shape(out, s)
    return ProductFormCoefficients(v0=v0, coeffs=fn)


def residual_product_form(
    coeffs: ProductFormCoefficients,
    sol: VelocitySolution,
    s_grid,
    eps: float = 1.0e-4,
) -> float:
    """Max defect of the product-form coefficient ODEs on a grid.

    Derivatives are taken by a fourth-order central stencil with step
    ``eps`` (noise floor ~1e-12); the coefficient functions are entire, so
    endpoint evaluation is safe.
    """
    if sol.algebra != "ho4":
        raise FamilyMismatch("product-form residual is defined for ho4 only")
    _, vP, vQ, vH = sol.v0
    s = np.atleast_1d(np.asarray(s_grid, dtype=float))
    a = np.atleast_2d(coeffs(s))
    da = (
        np.atleast_2d(coeffs(s - 2 * eps))
        - 8 * np.atleast_2d(coeffs(s - eps))
        + 8 * np.atleast_2d(coeffs(s + eps))
        - np.atleast_2d(coeffs(s + 2 * eps))
    ) / (12 * eps)
    c, sn = np.cos(s * vQ), np.sin(s * vQ)
    a1, a2, a3, a4 = a.T
    r1 = da[:, 0] - (a2 * vP * sn + a2 * vQ * c + 0.5 * a2 ** 2 * vQ - 0.5 * a3 ** 2 * vQ)
    r2 = da[:, 1] - (vP * c - vQ * sn - a3 * vQ)
    r3 = da[:, 2] - (vP * sn + vQ * c + a2 * vQ)
    r4 = da[:, 3] - vH
    return float(np.max(np.abs(np.column_stack([r1, r2, r3, r4]))))
