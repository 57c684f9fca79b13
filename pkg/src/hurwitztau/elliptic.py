"""Genus-1 special functions on the lattice Z + sigma*Z.

The odd theta function is the single primitive: everything else (Dedekind
eta and its logarithmic derivative, Weierstrass wp/zeta/sigma, the elliptic
resultant of sigma-function products, zero localization for elliptic
functions) is derived from its q-series in the unit-lattice convention
(periods 1 and sigma, Im sigma > 0).

Normalization constants relating the theta-based and Weierstrass-based
conventions are solved from the Laurent conditions wp(z) = 1/z^2 + O(z^2)
and sigma_w(z) = z + O(z^5) rather than hard-coded, and verified at
construction time.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import (
    ContourClashError,
    CountMismatchError,
    LatticePointError,
)

__all__ = [
    "Modulus",
    "WeierstrassContext",
    "SigmaProduct",
    "theta1",
    "dedekind_eta",
    "log_dedekind_eta",
    "eta_tilde",
    "eisenstein",
    "g_invariants",
    "wp",
    "zeta_w",
    "sigma_w",
    "elliptic_resultant",
    "elliptic_zeros",
    "reduce_to_cell",
    "lattice_distance",
    "half_periods",
]

TWO_PI_I = 2j * math.pi
MIN_IM_SIGMA = 0.1
LATTICE_GUARD = 1e-8
SERIES_CAP = 400


# --------------------------------------------------------------------------
# modulus and q-series plumbing


@dataclass(frozen=True)
class Modulus:
    """Period ratio sigma of the lattice Z + sigma*Z, with series cutoffs.

    ``truncation`` caps every q-series; the effective number of terms is
    chosen adaptively below it so the first dropped term is < 1e-16 of the
    running peak.  Moduli with Im(sigma) <= 0.1 are rejected rather than
    reduced: modular reduction would silently change the homology marking.
    """

    sigma: complex
    truncation: int = SERIES_CAP

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma", complex(self.sigma))
        y = self.sigma.imag
        if not y > MIN_IM_SIGMA:
            raise ValueError(f"Im(sigma) must exceed {MIN_IM_SIGMA}, got {y}")
        if self.truncation < 8:
            raise ValueError("series truncation too small")
        # bound on the first dropped theta term, relative to the peak term
        j = self.theta_terms
        dropped = math.exp(-math.pi * y * (j * j - 0.25) + math.pi * y / 4)
        if dropped > 1e-16:
            raise ValueError("truncation too small for this modulus")

    @property
    def q(self) -> complex:
        """Nome exp(2*pi*i*sigma)."""
        return cmath.exp(TWO_PI_I * self.sigma)

    @cached_property
    def theta_terms(self) -> int:
        """Number of theta-series terms (arguments reduced to the base cell)."""
        y = self.sigma.imag
        j = math.ceil(math.sqrt(80.0 / (math.pi * y))) + 3
        return min(self.truncation, max(j, 8))

    @cached_property
    def _theta_tabs(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        j = np.arange(self.theta_terms)
        half = j + 0.5
        coeff = np.exp(1j * math.pi * self.sigma * half * half)
        coeff = coeff * np.where(j % 2 == 0, 1.0, -1.0)
        odd = 2 * j + 1
        return j, odd.astype(float), coeff

    @cached_property
    def eisenstein_terms(self) -> int:
        y = self.sigma.imag
        return min(self.truncation, math.ceil(14.0 / y) + 8)

    @cached_property
    def _divisor_sums(self) -> dict[int, np.ndarray]:
        n = self.eisenstein_terms
        out = {}
        for k in (1, 3, 5):
            s = np.zeros(n + 1)
            for d in range(1, n + 1):
                s[d::d] += float(d) ** k
            out[k] = s[1:]
        return out

    @cached_property
    def _q_powers(self) -> np.ndarray:
        n = self.eisenstein_terms
        return self.q ** np.arange(1, n + 1)


def _theta1_raw(mod: Modulus, z: complex, n_max: int) -> list[complex]:
    """z-derivatives 0..n_max of the odd theta series, |Im z| moderate."""
    _, odd, coeff = mod._theta_tabs
    ang = (math.pi * z) * odd
    s = np.sin(ang)
    c = np.cos(ang)
    trig = (s, c, -s, -c)
    out = []
    for n in range(n_max + 1):
        fac = (math.pi * odd) ** n if n else 1.0
        out.append(complex(2.0 * np.sum(coeff * fac * trig[n % 4])))
    return out


def _split_lattice(z: complex, sigma: complex) -> tuple[int, int, complex]:
    """Write z = m + n*sigma + z0 with the cell coordinates of z0 in [-1/2, 1/2)."""
    v = z.imag / sigma.imag
    u = z.real - v * sigma.real
    m = math.floor(u + 0.5)
    n = math.floor(v + 0.5)
    return m, n, z - m - n * sigma


def theta1_derivs(mod: Modulus, z: complex, n_max: int) -> list[complex]:
    """z-derivatives 0..n_max of theta1 at arbitrary z.

    The argument is reduced to the base cell; quasi-periodicity supplies the
    exponential factor, and the Leibniz rule propagates it through the
    requested derivatives.
    """
    m, n, z0 = _split_lattice(z, mod.sigma)
    raw = _theta1_raw(mod, z0, n_max)
    if m == 0 and n == 0:
        return raw
    # theta1(z0 + m + n*sigma) = (-1)^(m+n) exp(-i pi sigma n^2 - 2 pi i n z0) theta1(z0)
    expo = -1j * math.pi * mod.sigma * n * n - TWO_PI_I * n * z0
    pref = cmath.exp(expo)
    if (m + n) % 2:
        pref = -pref
    mu = -TWO_PI_I * n
    out = []
    for k in range(n_max + 1):
        acc = 0j
        for j in range(k + 1):
            acc += math.comb(k, j) * mu ** (k - j) * raw[j]
        out.append(pref * acc)
    return out


def theta1(mod: Modulus, z: complex, n_deriv: int = 0) -> complex:
    """n_deriv-th z-derivative of the odd theta function on Z + sigma*Z."""
    if n_deriv < 0:
        raise ValueError("n_deriv must be >= 0")
    return theta1_derivs(mod, z, n_deriv)[n_deriv]


def eisenstein(mod: Modulus, weight: int) -> complex:
    """Normalized Eisenstein series E_2, E_4 or E_6 at the modulus."""
    consts = {2: -24.0, 4: 240.0, 6: -504.0}
    if weight not in consts:
        raise ValueError("weight must be 2, 4 or 6")
    sig = mod._divisor_sums[weight - 1]
    return 1.0 + consts[weight] * complex(np.sum(sig * mod._q_powers))


def log_dedekind_eta(mod: Modulus) -> complex:
    """log eta(sigma), continuous in sigma (no branch ambiguity)."""
    acc = 1j * math.pi * mod.sigma / 12.0
    for w in mod._q_powers:
        if abs(w) < 1e-18:
            break
        acc += cmath.log(1.0 - w)
    return acc


def dedekind_eta(mod: Modulus) -> complex:
    """Dedekind eta: q^(1/24) * prod(1 - q^n)."""
    return cmath.exp(log_dedekind_eta(mod))


def eta_tilde(mod: Modulus) -> complex:
    """d/dsigma log eta(sigma), from the weight-2 Eisenstein series."""
    return (1j * math.pi / 12.0) * eisenstein(mod, 2)


def g_invariants(mod: Modulus) -> tuple[complex, complex]:
    """Weierstrass invariants (g2, g3) of the lattice Z + sigma*Z."""
    g2 = (4.0 * math.pi**4 / 3.0) * eisenstein(mod, 4)
    g3 = (8.0 * math.pi**6 / 27.0) * eisenstein(mod, 6)
    return g2, g3


# --------------------------------------------------------------------------
# lattice geometry helpers


def reduce_to_cell(z: complex, sigma: complex) -> complex:
    """Representative of z in the fundamental cell {x + y*sigma : x,y in [0,1)}."""
    v = z.imag / sigma.imag
    u = z.real - v * sigma.real
    return z - math.floor(u) - math.floor(v) * sigma


def lattice_distance(z: complex, sigma: complex) -> float:
    """Distance from z to the nearest lattice point of Z + sigma*Z."""
    _, _, z0 = _split_lattice(z, sigma)
    best = abs(z0)
    for m in (-1, 0, 1):
        for n in (-1, 0, 1):
            d = abs(z0 - m - n * sigma)
            if d < best:
                best = d
    return best


def half_periods(sigma: complex) -> tuple[complex, complex, complex]:
    return (0.5, sigma / 2.0, (1.0 + sigma) / 2.0)


# --------------------------------------------------------------------------
# Weierstrass functions


@dataclass(frozen=True)
class WeierstrassContext:
    """Calibrated Weierstrass-function evaluator for one modulus.

    ``calib_p`` makes wp(z) - 1/z^2 vanish at z = 0; ``calib_sigma`` makes
    sigma_w(z) = z + O(z^5).  Both are solved from the theta expansion at the
    origin, and the Laurent/Legendre conditions are re-verified numerically
    at construction so any convention slip fails fast.
    """

    modulus: Modulus
    theta1_deriv0: complex
    calib_p: complex
    calib_sigma: complex
    eta_tilde: complex
    g2: complex

    @classmethod
    def create(cls, modulus: Modulus) -> "WeierstrassContext":
        d = theta1_derivs(modulus, 0.0, 3)
        t1, t3 = d[1], d[3]
        ctx = cls(
            modulus=modulus,
            theta1_deriv0=t1,
            calib_p=t3 / (3.0 * t1),
            calib_sigma=-t3 / (6.0 * t1),
            eta_tilde=eta_tilde(modulus),
            g2=g_invariants(modulus)[0],
        )
        ctx._verify()
        return ctx

    def _verify(self) -> None:
        z = 1e-3
        if abs(wp(self, z) - 1.0 / (z * z)) > 1e-4:
            raise ValueError("wp Laurent calibration failed")
        if abs(sigma_w(self, z) / z - 1.0) > 1e-5:
            raise ValueError("sigma_w normalization failed")
        if abs(zeta_w(self, z) - 1.0 / z) > 1e-4:
            raise ValueError("zeta_w principal part failed")
        s = self.modulus.sigma
        zt = 0.31 + 0.27 * s
        e1 = zeta_w(self, zt + 1.0) - zeta_w(self, zt)
        e2 = zeta_w(self, zt + s) - zeta_w(self, zt)
        if abs(e1 * s - e2 - TWO_PI_I) > 1e-10:
            raise ValueError("Legendre relation failed")


def _log_theta_derivs(ctx: WeierstrassContext, z: complex) -> tuple[complex, complex, complex]:
    """(log theta1)', '', ''' at z (z off the lattice)."""
    t0, t1, t2, t3 = theta1_derivs(ctx.modulus, z, 3)
    r1 = t1 / t0
    r2 = t2 / t0
    r3 = t3 / t0
    return r1, r2 - r1 * r1, r3 - 3.0 * r1 * r2 + 2.0 * r1**3


def wp_derivs(ctx: WeierstrassContext, z: complex, n_max: int) -> list[complex]:
    """[wp(z), wp'(z), ..., wp^(n_max)(z)], n_max <= 5.

    wp and wp' come from the theta expansion; higher orders follow from the
    differentiated Weierstrass cubic, which needs only g2.
    """
    if n_max > 5:
        raise ValueError("wp derivatives implemented up to order 5")
    if lattice_distance(z, ctx.modulus.sigma) <= LATTICE_GUARD:
        raise LatticePointError(f"z = {z} is within {LATTICE_GUARD} of the lattice")
    _, l2, l3 = _log_theta_derivs(ctx, z)
    p = -l2 + ctx.calib_p
    out = [p]
    if n_max >= 1:
        out.append(-l3)
    if n_max >= 2:
        out.append(6.0 * p * p - ctx.g2 / 2.0)
    if n_max >= 3:
        out.append(12.0 * p * out[1])
    if n_max >= 4:
        out.append(12.0 * out[1] ** 2 + 12.0 * p * out[2])
    if n_max >= 5:
        out.append(36.0 * out[1] * out[2] + 12.0 * p * out[3])
    return out


def wp(ctx: WeierstrassContext, z: complex, n_deriv: int = 0) -> complex:
    """n_deriv-th derivative of the Weierstrass wp-function (orders 0..5)."""
    return wp_derivs(ctx, z, n_deriv)[n_deriv]


def zeta_w(ctx: WeierstrassContext, z: complex, n_deriv: int = 0) -> complex:
    """Weierstrass zeta and derivatives: zeta' = -wp, zeta'' = -wp', ...

    zeta itself is sigma_w'/sigma_w = (log theta1)'(z) + 2*calib_sigma*z.
    """
    if n_deriv == 0:
        if lattice_distance(z, ctx.modulus.sigma) <= LATTICE_GUARD:
            raise LatticePointError(f"z = {z} is within {LATTICE_GUARD} of the lattice")
        r1, _, _ = _log_theta_derivs(ctx, z)
        return r1 + 2.0 * ctx.calib_sigma * z
    return -wp_derivs(ctx, z, n_deriv - 1)[n_deriv - 1]


def zeta_derivs(ctx: WeierstrassContext, z: complex, n_max: int) -> list[complex]:
    """[zeta(z), zeta'(z), ..., zeta^(n_max)(z)] in one theta evaluation."""
    if lattice_distance(z, ctx.modulus.sigma) <= LATTICE_GUARD:
        raise LatticePointError(f"z = {z} is within {LATTICE_GUARD} of the lattice")
    r1, l2, l3 = _log_theta_derivs(ctx, z)
    out = [r1 + 2.0 * ctx.calib_sigma * z]
    if n_max >= 1:
        p = -l2 + ctx.calib_p
        wps = [p]
        if n_max >= 2:
            wps.append(-l3)
        if n_max >= 3:
            wps.append(6.0 * p * p - ctx.g2 / 2.0)
        if n_max >= 4:
            wps.append(12.0 * p * wps[1])
        if n_max >= 5:
            wps.append(12.0 * wps[1] ** 2 + 12.0 * p * wps[2])
        if n_max >= 6:
            wps.append(36.0 * wps[1] * wps[2] + 12.0 * p * wps[3])
        out.extend(-w for w in wps[: n_max])
    return out


def sigma_w(ctx: WeierstrassContext, z: complex) -> complex:
    """Weierstrass sigma, normalized so sigma_w(z) = z + O(z^5)."""
    t = theta1_derivs(ctx.modulus, z, 0)[0]
    return (t / ctx.theta1_deriv0) * cmath.exp(ctx.calib_sigma * z * z)


# --------------------------------------------------------------------------
# elliptic resultant of sigma-function products


@dataclass(frozen=True)
class SigmaProduct:
    """prefactor * prod_i sigma_w(z - zeros[i])."""

    prefactor: complex
    zeros: tuple[complex, ...]

    def __call__(self, ctx: WeierstrassContext, z: complex) -> complex:
        acc = complex(self.prefactor)
        for a in self.zeros:
            acc *= sigma_w(ctx, z - a)
        return acc


def elliptic_resultant(ctx: WeierstrassContext, F: SigmaProduct, G: SigmaProduct) -> complex:
    """Resultant of two sigma-products: F.prefactor^len(G) * prod_i G(a_i).

    Vanishes exactly when F and G share a zero modulo the lattice, and picks
    up (-1)^(M*N) under swapping the arguments.
    """
    if F.prefactor == 0 or G.prefactor == 0:
        raise ValueError("degenerate sigma-product (zero prefactor)")
    acc = F.prefactor ** len(G.zeros)
    for a in F.zeros:
        acc *= G(ctx, a)
    return acc


# --------------------------------------------------------------------------
# zero localization for elliptic functions


class _EdgeTrouble(Exception):
    """Argument tracking failed along a contour edge (zero/pole too close)."""


_OFFSETS = [
    (0.0731, 0.0457), (0.3117, 0.1723), (0.5303, 0.2919), (0.7489, 0.4115),
    (0.1327, 0.5711), (0.8923, 0.6907), (0.4519, 0.8103), (0.6115, 0.9299),
    (0.2211, 0.3495), (0.9807, 0.7691), (0.0403, 0.8887), (0.7999, 0.1083),
    (0.3595, 0.2279), (0.5191, 0.6475), (0.6787, 0.4671), (0.8383, 0.5867),
    (0.1979, 0.7063), (0.9575, 0.8259), (0.4171, 0.9455), (0.5767, 0.0651),
]


def _edge_arg_change(h: Callable[[complex], complex], za: complex, zb: complex,
                     n0: int = 12, max_depth: int = 13) -> float:
    """Total continuous argument change of h along the segment [za, zb]."""
    ts = [k / n0 for k in range(n0 + 1)]
    vals = [h(za + t * (zb - za)) for t in ts]
    total = 0.0
    stack = list(zip(ts[:-1], ts[1:], vals[:-1], vals[1:], [0] * n0))
    while stack:
        t0, t1, v0, v1, depth = stack.pop()
        if v0 == 0 or v1 == 0:
            raise _EdgeTrouble("zero on contour")
        d = cmath.phase(v1 / v0)
        if abs(d) <= 1.2:
            total += d
            continue
        if depth >= max_depth:
            raise _EdgeTrouble("argument jump on contour")
        tm = 0.5 * (t0 + t1)
        vm = h(za + tm * (zb - za))
        stack.append((t0, tm, v0, vm, depth + 1))
        stack.append((tm, t1, vm, v1, depth + 1))
    return total


def _cell_zero_count(h, corner, e1, e2, poles_uv, cell) -> int:
    """Zeros of h inside the parallelogram cell (winding + enclosed poles)."""
    u0, u1, v0, v1 = cell
    za = corner + u0 * e1 + v0 * e2
    zb = corner + u1 * e1 + v0 * e2
    zc = corner + u1 * e1 + v1 * e2
    zd = corner + u0 * e1 + v1 * e2
    total = (
        _edge_arg_change(h, za, zb)
        + _edge_arg_change(h, zb, zc)
        + _edge_arg_change(h, zc, zd)
        + _edge_arg_change(h, zd, za)
    )
    w = total / (2.0 * math.pi)
    wi = round(w)
    if abs(w - wi) > 0.2:
        raise _EdgeTrouble(f"non-integer winding {w:.3f}")
    p_in = sum(m for (u, v), m in poles_uv if u0 <= u < u1 and v0 <= v < v1)
    return wi + p_in


def _newton_zero(h, hp, z, tol, max_iter=80):
    for _ in range(max_iter):
        v = h(z)
        d = hp(z)
        if d == 0:
            return None
        step = v / d
        if abs(step) > 0.5:
            step = 0.5 * step / abs(step)
        z = z - step
        if abs(step) < tol:
            return z
    return None


def elliptic_zeros(
    mod: Modulus,
    h: Callable[[complex], complex],
    h_prime: Callable[[complex], complex],
    poles: Sequence[tuple[complex, int]],
    expected: int | None = None,
) -> list[complex]:
    """All zeros of the elliptic function h in one fundamental cell.

    ``poles`` lists pole positions with multiplicities (the full divisor in
    one cell).  The cell contour is translated until it avoids zeros and
    poles; the argument principle fixes the total count, and adaptive cell
    subdivision plus Newton polishing localizes the zeros.  Zeros are
    returned reduced to {x + y*sigma : x, y in [0, 1)}.
    """
    sigma = mod.sigma
    pole_count = sum(m for _, m in poles)
    target = pole_count if expected is None else expected
    min_cell = 1e-4
    newton_tol = 1e-12 * (1.0 + abs(sigma))

    last_trouble = "no admissible contour"
    for du, dv in _OFFSETS:
        corner = du + dv * sigma
        poles_uv = []
        ok = True
        for p, mult in poles:
            r = reduce_to_cell(p - corner, sigma)
            v = r.imag / sigma.imag
            u = r.real - v * sigma.real
            if min(u, 1 - u, v, 1 - v) < 5e-3:
                ok = False
                break
            poles_uv.append(((u, v), mult))
        if not ok:
            continue
        try:
            total = _cell_zero_count(h, corner, 1.0, sigma, poles_uv, (0.0, 1.0, 0.0, 1.0))
        except _EdgeTrouble as exc:
            last_trouble = str(exc)
            continue
        if total != target:
            if expected is not None and total == pole_count:
                raise CountMismatchError(
                    f"argument principle counts {total} zeros, expected {expected}"
                )
            last_trouble = f"count {total} != {target}"
            continue

        found: list[complex] = []
        stack = [((0.0, 1.0, 0.0, 1.0), total)]
        try:
            while stack:
                cell, count = stack.pop()
                u0, u1, v0, v1 = cell
                size = max((u1 - u0), (v1 - v0) * abs(sigma))
                center = corner + 0.5 * (u0 + u1) + 0.5 * (v0 + v1) * sigma
                if count == 1 or size < min_cell:
                    seeds = [
                        center,
                        corner + (0.75 * u0 + 0.25 * u1) + (0.75 * v0 + 0.25 * v1) * sigma,
                        corner + (0.25 * u0 + 0.75 * u1) + (0.75 * v0 + 0.25 * v1) * sigma,
                        corner + (0.75 * u0 + 0.25 * u1) + (0.25 * v0 + 0.75 * v1) * sigma,
                        corner + (0.25 * u0 + 0.75 * u1) + (0.25 * v0 + 0.75 * v1) * sigma,
                    ]
                    root = None
                    for s in seeds:
                        r = _newton_zero(h, h_prime, s, newton_tol)
                        if r is None:
                            continue
                        rr = reduce_to_cell(r - corner, sigma)
                        rv = rr.imag / sigma.imag
                        ru = rr.real - rv * sigma.real
                        in_cell = (u0 - 1e-9 <= ru <= u1 + 1e-9) and (v0 - 1e-9 <= rv <= v1 + 1e-9)
                        if in_cell or size < min_cell:
                            root = r
                            break
                    if root is None:
                        if count == 1 and size >= min_cell:
                            # Newton escaped the cell: split further
                            pass
                        else:
                            raise _EdgeTrouble("newton failed in small cell")
                    else:
                        found.extend([root] * count)
                        continue
                # split along the longer side, jiggling past any pole line
                if (u1 - u0) >= (v1 - v0) * abs(sigma):
                    um = 0.5 * (u0 + u1)
                    while any(abs(u - um) < 1e-6 for (u, _), _ in poles_uv):
                        um += 0.0137 * (u1 - u0)
                    sub = [(u0, um, v0, v1), (um, u1, v0, v1)]
                else:
                    vm = 0.5 * (v0 + v1)
                    while any(abs(v - vm) < 1e-6 for (_, v), _ in poles_uv):
                        vm += 0.0137 * (v1 - v0)
                    sub = [(u0, u1, v0, vm), (u0, u1, vm, v1)]
                for c in sub:
                    n = _cell_zero_count(h, corner, 1.0, sigma, poles_uv, c)
                    if n < 0:
                        raise _EdgeTrouble("negative zero count in cell")
                    if n > 0:
                        stack.append((c, n))
        except _EdgeTrouble as exc:
            last_trouble = str(exc)
            continue

        if len(found) != target:
            last_trouble = f"located {len(found)} of {target}"
            continue
        return [reduce_to_cell(r, sigma) for r in found]

    raise ContourClashError(f"zero localization failed: {last_trouble}")
