"""Complex polynomial arithmetic.

Evaluation with derivatives (Horner), simultaneous root finding
(Aberth-Ehrlich with Newton polish) and Sylvester resultants.  Everything
is plain double-precision complex; no exact arithmetic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import NonConvergenceError

__all__ = ["CPoly", "RootSet", "all_roots", "resultant", "log_resultant"]

# Newton polish target: |p(r)| < POLISH_REL * max|coeff|  (or 50 iterations).
POLISH_REL = 1e-13
POLISH_MAX_ITER = 50
ABERTH_MAX_ITER = 400


@dataclass(frozen=True)
class CPoly:
    """Polynomial with complex coefficients, lowest degree first.

    Normalized so the stored leading coefficient is non-zero unless the
    polynomial is identically zero (represented by the single coefficient 0).
    """

    coeffs: tuple[complex, ...]

    def __post_init__(self) -> None:
        cs = tuple(complex(c) for c in self.coeffs)
        if not cs:
            cs = (0j,)
        end = len(cs)
        while end > 1 and cs[end - 1] == 0:
            end -= 1
        object.__setattr__(self, "coeffs", cs[:end])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    @classmethod
    def from_roots(cls, roots: Iterable[complex], leading: complex = 1.0) -> "CPoly":
        cs = np.array([leading], dtype=complex)
        for r in roots:
            cs = np.convolve(cs, np.array([-r, 1.0], dtype=complex))
        return cls(tuple(cs))

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def eval_derivatives(self, z: complex, n: int) -> list[complex]:
        """Return [p(z), p'(z), ..., p^(n)(z)] by Horner's scheme."""
        if n < 0:
            raise ValueError("derivative order must be >= 0")
        z = complex(z)
        # b[j] accumulates p^(j)(z)/j!
        b = [0j] * (n + 1)
        for c in reversed(self.coeffs):
            for j in range(n, 0, -1):
                b[j] = b[j] * z + b[j - 1]
            b[0] = b[0] * z + c
        fact = 1.0
        out = []
        for j in range(n + 1):
            out.append(b[j] * fact)
            fact *= j + 1
        return out

    def derivative(self) -> "CPoly":
        if self.degree == 0:
            return CPoly((0j,))
        return CPoly(tuple((k + 1) * c for k, c in enumerate(self.coeffs[1:])))

    def __mul__(self, other: "CPoly") -> "CPoly":
        a = np.array(self.coeffs, dtype=complex)
        b = np.array(other.coeffs, dtype=complex)
        return CPoly(tuple(np.convolve(a, b)))

    def __add__(self, other: "CPoly") -> "CPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0j] * (n - len(self.coeffs))
        for k, c in enumerate(other.coeffs):
            a[k] += c
        return CPoly(tuple(a))

    def scale(self, s: complex) -> "CPoly":
        return CPoly(tuple(s * c for c in self.coeffs))


@dataclass(frozen=True)
class RootSet:
    """All complex roots of a polynomial, with the worst residual |p(root)|."""

    roots: tuple[complex, ...]
    residual: float


def _newton_polish(p: CPoly, z: complex, tol_abs: float) -> complex:
    for _ in range(POLISH_MAX_ITER):
        val, der = p.eval_derivatives(z, 1)
        if abs(val) < tol_abs:
            break
        if der == 0:
            break
        step = val / der
        z = z - step
        if abs(step) < 1e-16 * (1.0 + abs(z)):
            break
    return z


def all_roots(p: CPoly, max_iter: int = ABERTH_MAX_ITER) -> RootSet:
    """All roots of ``p`` (with multiplicity) by simultaneous iteration.

    Aberth-Ehrlich from a scaled circle of initial guesses, then a Newton
    polish of every root.  Root clusters from nearly multiple roots are kept
    as-is; detecting them is the caller's business.

    Raises ``NonConvergenceError`` when the iteration stalls, which signals
    an ill-conditioned instance that the caller may perturb.
    """
    n = p.degree
    if n < 1:
        raise ValueError("need degree >= 1")
    coeff_scale = max(abs(c) for c in p.coeffs)
    if coeff_scale == 0:
        raise ValueError("zero polynomial has no well-defined root set")

    # Cauchy bound for the root radius; slightly irrational angle offset so
    # symmetric polynomials do not start in an unstable configuration.
    radius = 1.0 + max(abs(c) for c in p.coeffs[:-1]) / abs(p.leading)
    zs = np.array(
        [
            0.8 * radius * cmath.exp(2j * math.pi * (k + 0.354) / n + 0.41j)
            for k in range(n)
        ],
        dtype=complex,
    )

    for _ in range(max_iter):
        vals = np.empty(n, dtype=complex)
        ders = np.empty(n, dtype=complex)
        for i in range(n):
            v, d = p.eval_derivatives(zs[i], 1)
            vals[i] = v
            ders[i] = d
        diff = zs[:, None] - zs[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(ders != 0, vals / ders, 0.0)
            denom = 1.0 - w * s
            step = np.where(denom != 0, w / denom, w)
        zs = zs - step
        if np.all(np.abs(step) < 1e-14 * (1.0 + np.abs(zs))):
            break
    else:
        resid = max(abs(p(z)) for z in zs)
        if resid > 1e-8 * coeff_scale * max(1.0, float(np.max(np.abs(zs)))) ** n:
            raise NonConvergenceError(
                f"root iteration stalled, residual {resid:.3e}"
            )

    tol_abs = POLISH_REL * coeff_scale
    roots = tuple(_newton_polish(p, z, tol_abs) for z in zs)
    residual = max(abs(p(r)) for r in roots)
    return RootSet(roots=roots, residual=residual)


def _sylvester(f: CPoly, g: CPoly) -> np.ndarray:
    m, n = f.degree, g.degree
    size = m + n
    mat = np.zeros((size, size), dtype=complex)
    fc = list(reversed(f.coeffs))  # highest degree first
    gc = list(reversed(g.coeffs))
    for r in range(n):
        mat[r, r : r + m + 1] = fc
    for r in range(m):
        mat[n + r, r : r + n + 1] = gc
    return mat


def resultant(f: CPoly, g: CPoly) -> complex:
    """Sylvester resultant of ``f`` and ``g``.

    Convention: equals lc(f)^deg(g) * prod g(root_i(f)).  Computed as the
    Sylvester determinant by pivoted elimination, independent of any root
    finding.
    """
    if f.is_zero or g.is_zero:
        raise ValueError("resultant of the zero polynomial is undefined")
    m, n = f.degree, g.degree
    if m == 0:
        return f.coeffs[0] ** n
    if n == 0:
        return g.coeffs[0] ** m
    return complex(np.linalg.det(_sylvester(f, g)))


def log_resultant(f: CPoly, g: CPoly) -> complex:
    """log of the resultant (principal imaginary part).

    Returns a value with real part ``-inf`` when the resultant vanishes
    exactly; useful for scale-robust ratios along parameter sweeps.
    """
    if f.is_zero or g.is_zero:
        raise ValueError("resultant of the zero polynomial is undefined")
    m, n = f.degree, g.degree
    if m == 0 or n == 0:
        return cmath.log(resultant(f, g))
    sign, logabs = np.linalg.slogdet(_sylvester(f, g))
    if sign == 0:
        return complex(-math.inf, 0.0)
    return complex(logabs) + cmath.log(sign)
