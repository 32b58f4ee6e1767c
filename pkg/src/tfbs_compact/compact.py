"""Fourth-order compact approximation of f'' on a three-point non-uniform stencil.

For nodes s_{n-1} < s_n < s_{n+1} with steps h_left = s_n - s_{n-1} and
h_right = s_{n+1} - s_n the approximation reads

    d f''_{n-1} + f''_n + e f''_{n+1} = a f_{n-1} + b f_n + c f_{n+1} + E_n

with coefficients chosen so that the Taylor terms up to f^(4) cancel.
All functions accept scalars or equally shaped arrays of steps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tfbs_compact.mesh import GradingFunction, Mesh


@dataclass(frozen=True)
class CompactStencil:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    e: np.ndarray
    D: np.ndarray
    h_left: np.ndarray
    h_right: np.ndarray

    def moment_residuals(self) -> np.ndarray:
        """Residuals of the five moment equations, shape (5, ...)."""
        a, b, c, d, e = self.a, self.b, self.c, self.d, self.e
        hl, hr = self.h_left, self.h_right
        return np.array(
            [
                a + b + c,
                c * hr - a * hl,
                (a * hl**2 + c * hr**2) / 2 - d - e - 1,
                (c * hr**3 - a * hl**3) / 6 + d * hl - e * hr,
                (a * hl**4 + c * hr**4) / 24 - (d * hl**2 + e * hr**2) / 2,
            ]
        )

    def moment_scales(self) -> np.ndarray:
        """Largest term magnitude in each moment equation (for relative checks)."""
        a, b, c, d, e = (np.abs(v) for v in (self.a, self.b, self.c, self.d, self.e))
        hl, hr = self.h_left, self.h_right
        one = np.ones_like(a)
        return np.array(
            [
                np.maximum.reduce([a, b, c]),
                np.maximum(c * hr, a * hl),
                np.maximum.reduce([a * hl**2 / 2, c * hr**2 / 2, d, e, one]),
                np.maximum.reduce([c * hr**3 / 6, a * hl**3 / 6, d * hl, e * hr]),
                np.maximum.reduce([a * hl**4 / 24, c * hr**4 / 24, d * hl**2 / 2, e * hr**2 / 2]),
            ]
        )


def stencil_coefficients(h_left, h_right) -> CompactStencil:
    """Closed-form compact coefficients for steps ``h_left``, ``h_right``.

    ``e`` is the mirror image of ``d`` (swap the two steps).  ``d`` and ``e``
    can be negative on strongly graded stencils.
    """
    hl = np.asarray(h_left, dtype=float)
    hr = np.asarray(h_right, dtype=float)
    if np.any(~(hl > 0)) or np.any(~(hr > 0)):
        raise ValueError("stencil steps must be positive")
    s = hl + hr
    D = hl * hl + 3.0 * hl * hr + hr * hr
    return CompactStencil(
        a=12.0 * hr / (s * D),
        b=-12.0 / D,
        c=12.0 * hl / (s * D),
        d=hr * (hl * hl + hl * hr - hr * hr) / (s * D),
        e=hl * (hr * hr + hl * hr - hl * hl) / (s * D),
        D=D,
        h_left=hl,
        h_right=hr,
    )


def solve_moment_system(h_left: float, h_right: float) -> np.ndarray:
    """Solve the 5x5 moment system directly; returns (a, b, c, d, e).

    Independent of the closed forms, used to check them.
    """
    hl, hr = float(h_left), float(h_right)
    mat = np.array(
        [
            [1.0, 1.0, 1.0, 0.0, 0.0],
            [-hl, 0.0, hr, 0.0, 0.0],
            [hl**2 / 2, 0.0, hr**2 / 2, -1.0, -1.0],
            [-(hl**3) / 6, 0.0, hr**3 / 6, hl, -hr],
            [hl**4 / 24, 0.0, hr**4 / 24, -(hl**2) / 2, -(hr**2) / 2],
        ]
    )
    rhs = np.array([0.0, 0.0, 1.0, 0.0, 0.0])
    return np.linalg.solve(mat, rhs)


def mesh_stencils(mesh: Mesh) -> CompactStencil:
    """Stencils at the interior nodes n = 1 .. N-1."""
    h = mesh.steps
    return stencil_coefficients(h[:-1], h[1:])


def leading_error_coefficient(stencil: CompactStencil):
    """Coefficient of f^(5)_n in the truncation error of the compact formula.

    The residual ``compact_residual`` equals minus this value times f^(5)_n
    (plus higher order terms).  Closed form:
    h_l h_r (h_l - h_r)(h_l + 2 h_r)(2 h_l + h_r) / (30 D).
    """
    s = stencil
    hl, hr = s.h_left, s.h_right
    return (s.d * hl**3 - s.e * hr**3) / 6 + (s.c * hr**5 - s.a * hl**5) / 120


def truncation_bound_node(stencil: CompactStencil, f5_bound):
    """h_left * h_right * |h_left - h_right| * f5_bound / 15."""
    if np.any(np.asarray(f5_bound) < 0):
        raise ValueError("f5_bound must be non-negative")
    hl, hr = stencil.h_left, stencil.h_right
    return hl * hr * np.abs(hl - hr) * f5_bound / 15.0


def truncation_bound_global(phi: GradingFunction, f5_bound: float, N: int) -> float:
    """(max phi')^2 (max |phi''|) f5_bound h^4 / 15 with h = 1/N."""
    d1 = phi.max_deriv1()
    d2 = phi.max_abs_deriv2()
    return d1 * d1 * d2 * f5_bound / (15.0 * float(N) ** 4)


def compact_residual(f_values, f2_values, stencil: CompactStencil):
    """d f''_l + f''_m + e f''_r - (a f_l + b f_m + c f_r).

    ``f_values``/``f2_values`` are sequences of three samples (left, mid,
    right); each sample may itself be an array matching the stencil shape.
    """
    fl, fm, fr = (np.asarray(v, dtype=float) for v in f_values)
    gl, gm, gr = (np.asarray(v, dtype=float) for v in f2_values)
    s = stencil
    return s.d * gl + gm + s.e * gr - (s.a * fl + s.b * fm + s.c * fr)
