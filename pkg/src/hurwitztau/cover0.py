"""Genus-0 covering model: rational maps with prescribed pole profile.

A point of the moduli space is a rational map

    p(z) = z^k1 + sum_{r<=k1-2} a_r z^r - sum_{i>=2} sum_{a=1..k_i} c_{i,a}/(z-b_i)^a

with distinct poles and non-vanishing top Laurent coefficients.  This module
computes the critical data (critical points, critical values, squared local
frame f_m^2, Schwarzian values), the flat coordinates, the tau-function by
two independent closed-form routes, the G-function with its scaling anomaly,
and vanishing-order diagnostics on the caustic.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    CausticWarning,
    CommonRootError,
    OnBoundaryError,
    SlopeUnstableError,
)
from .poly import CPoly, all_roots, log_resultant, resultant

__all__ = [
    "Pole",
    "Covering0",
    "Diagnostics0",
    "CriticalData0",
    "FlatCoords0",
    "TauProduct",
    "TauResultant",
    "GFunction",
    "validate",
    "p_prime_as_ratio",
    "critical_data",
    "flat_coords",
    "tau_product",
    "tau_resultant",
    "g_function",
    "caustic_orders",
    "principal_root",
]

BOUNDARY_TOL = 1e-10
CAUSTIC_REL_TOL = 1e-6
ROOT_POLE_GUARD = 1e-8


def principal_root(c: complex, k: int) -> complex:
    """Principal k-th root exp(Log(c)/k)."""
    if k == 1:
        return complex(c)
    return cmath.exp(cmath.log(c) / k)


@dataclass(frozen=True)
class Pole:
    """One finite pole: position b and Laurent tail (c_1, ..., c_k)."""

    b: complex
    c: tuple[complex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "b", complex(self.b))
        object.__setattr__(self, "c", tuple(complex(v) for v in self.c))

    @property
    def order(self) -> int:
        return len(self.c)

    @property
    def top(self) -> complex:
        return self.c[-1]


@dataclass(frozen=True)
class Covering0:
    """Genus-0 covering with pole profile (k_1, ..., k_l), sum = N.

    ``profile[0]`` is the ramification index over infinity carried by the
    polynomial part; ``poles`` matches ``profile[1:]``.  The polynomial part
    has no z^(k1-1) term, which pins the uniformizing coordinate to z itself.
    """

    profile: tuple[int, ...]
    poly_coeffs: tuple[complex, ...]
    poles: tuple[Pole, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "profile", tuple(int(k) for k in self.profile))
        object.__setattr__(
            self, "poly_coeffs", tuple(complex(a) for a in self.poly_coeffs)
        )
        object.__setattr__(self, "poles", tuple(self.poles))
        if not self.profile or any(k < 1 for k in self.profile):
            raise ValueError("profile entries must be integers >= 1")
        k1 = self.profile[0]
        if len(self.poly_coeffs) != max(k1 - 1, 0):
            raise ValueError(
                f"need {k1 - 1} polynomial coefficients (degrees 0..k1-2), "
                f"got {len(self.poly_coeffs)}"
            )
        if len(self.poles) != len(self.profile) - 1:
            raise ValueError("poles must match profile[1:]")
        for k, pole in zip(self.profile[1:], self.poles):
            if pole.order != k:
                raise ValueError(
                    f"pole at {pole.b} carries {pole.order} tail coefficients, profile says {k}"
                )

    @property
    def genus(self) -> int:
        return 0

    @property
    def degree(self) -> int:
        return sum(self.profile)

    @property
    def n_poles(self) -> int:
        return len(self.profile)

    @property
    def dim(self) -> int:
        """Moduli dimension M = l + N - 2."""
        return len(self.profile) + self.degree - 2


@dataclass(frozen=True)
class Diagnostics0:
    dim: int
    min_pole_gap: float
    min_top_tail: float


def validate(c: Covering0) -> Diagnostics0:
    """Accept the covering iff it is off both boundary components.

    S1 is the coincident-pole locus, S2 the vanishing-top-tail locus;
    distances to both are reported.
    """
    scale = 1.0 + max((abs(p.b) for p in c.poles), default=0.0)
    min_gap = math.inf
    for i in range(len(c.poles)):
        for j in range(i + 1, len(c.poles)):
            gap = abs(c.poles[i].b - c.poles[j].b)
            min_gap = min(min_gap, gap)
            if gap <= BOUNDARY_TOL * scale:
                raise OnBoundaryError("S1", (i, j))
    min_top = math.inf
    for i, p in enumerate(c.poles):
        min_top = min(min_top, abs(p.top))
        if abs(p.top) <= BOUNDARY_TOL:
            raise OnBoundaryError("S2", (i,))
    return Diagnostics0(dim=c.dim, min_pole_gap=min_gap, min_top_tail=min_top)


def eval_p_derivs(c: Covering0, z: complex, n_max: int) -> list[complex]:
    """[p(z), p'(z), ..., p^(n_max)(z)] evaluated exactly."""
    z = complex(z)
    k1 = c.profile[0]
    poly = [0j] * (k1 + 1)
    poly[k1] = 1.0
    for r, a in enumerate(c.poly_coeffs):
        poly[r] = a
    out = CPoly(tuple(poly)).eval_derivatives(z, n_max)
    for pole in c.poles:
        w = z - pole.b
        for a, coeff in enumerate(pole.c, start=1):
            # d^n/dz^n of -(z-b)^(-a) is -(-1)^n a(a+1)...(a+n-1) (z-b)^(-a-n)
            rising = 1.0
            wpow = w ** (-a)
            for n in range(n_max + 1):
                out[n] += -coeff * ((-1) ** n) * rising * wpow
                rising *= a + n
                wpow /= w
    return out


def eval_p(c: Covering0, z: complex, n_deriv: int = 0) -> complex:
    return eval_p_derivs(c, z, n_deriv)[n_deriv]


def p_prime_as_ratio(c: Covering0) -> tuple[CPoly, CPoly]:
    """p' = f/g with g = prod (z - b_i)^(k_i + 1), built at coefficient level.

    f has degree M with leading coefficient k1; its roots are exactly the
    finite critical points.
    """
    k1 = c.profile[0]
    g = CPoly((1.0,))
    for pole in c.poles:
        g = g * CPoly.from_roots([pole.b] * (pole.order + 1))

    dpoly = [0j] * k1
    dpoly[k1 - 1] = float(k1)
    for r, a in enumerate(c.poly_coeffs):
        if r >= 1:
            dpoly[r - 1] = r * a
    f = CPoly(tuple(dpoly)) * g

    for i, pole in enumerate(c.poles):
        rest = CPoly((1.0,))
        for j, other in enumerate(c.poles):
            if j != i:
                rest = rest * CPoly.from_roots([other.b] * (other.order + 1))
        for a, coeff in enumerate(pole.c, start=1):
            term = CPoly.from_roots([pole.b] * (pole.order - a)).scale(a * coeff)
            f = f + term * rest
    return f, g


@dataclass(frozen=True)
class CriticalData0:
    """Per-critical-point bundle driving every downstream formula."""

    alpha: tuple[complex, ...]
    lam: tuple[complex, ...]
    fsq: tuple[complex, ...]
    sb: tuple[complex, ...]
    min_lambda_gap: float
    min_alpha_gap: float
    caustic: bool
    resultant_fg: complex

    @property
    def sw(self) -> tuple[complex, ...]:
        # On the sphere the Bergmann and Wirtinger connections coincide.
        return self.sb


def _sort_points(pts: list[complex]) -> list[complex]:
    return sorted(pts, key=lambda z: (round(z.real, 12), round(z.imag, 12)))


def _factorization_scale(c: Covering0, fc: "FlatCoords0") -> float:
    acc = 1.0
    bs = [p.b for p in c.poles]
    ks = c.profile[1:]
    for i in range(len(bs)):
        for j in range(len(bs)):
            if i != j:
                acc *= abs(bs[i] - bs[j]) ** ((ks[i] + 1) * (ks[j] + 1))
    for k, t in zip(ks, fc.t):
        acc *= abs(t) ** (k * (k + 1))
    return acc


def critical_data(c: Covering0, seeds: tuple[complex, ...] | None = None) -> CriticalData0:
    """Critical points (roots of f), critical values, f_m^2 and Schwarzians.

    ``fsq`` is 2/p''(alpha_m); ``sb`` is (2 beta^2 - 3 alpha gamma)/alpha^3
    from the cubic Taylor data of p' at the critical point.  With ``seeds``
    given, roots are tracked by Newton from the seed points instead of a
    global solve (used by the deformation engine).
    """
    f, g = p_prime_as_ratio(c)
    if seeds is None:
        rs = all_roots(f)
        alpha = _sort_points(list(rs.roots))
    else:
        if len(seeds) != c.dim:
            raise ValueError("seed count must equal the moduli dimension")
        alpha = []
        for s in seeds:
            z = complex(s)
            for _ in range(60):
                val, der = f.eval_derivatives(z, 1)
                if der == 0:
                    break
                step = val / der
                z -= step
                if abs(step) < 1e-15 * (1 + abs(z)):
                    break
            alpha.append(z)

    fc = flat_coords(c)
    res_fg = resultant(f, g)
    scale_b = 1.0 + max((abs(p.b) for p in c.poles), default=0.0)
    for a in alpha:
        for pole in c.poles:
            if abs(a - pole.b) < ROOT_POLE_GUARD * scale_b:
                raise CommonRootError(
                    f"critical point {a} collides with pole {pole.b}"
                )
    # R(f, g) tracks the pole/flat-coordinate factorization, so that product
    # is the right scale to call the resultant zero against
    if c.poles and abs(res_fg) < 1e-10 * _factorization_scale(c, fc):
        raise CommonRootError("resultant(f, g) vanishes; point is on the boundary")

    lam, fsq, sb = [], [], []
    for a in alpha:
        d = eval_p_derivs(c, a, 4)
        al, be, ga = d[2], d[3] / 2.0, d[4] / 6.0
        lam.append(d[0])
        fsq.append(2.0 / al)
        sb.append((2.0 * be * be - 3.0 * al * ga) / al**3)

    m = len(alpha)
    min_lgap = min(
        (abs(lam[i] - lam[j]) for i in range(m) for j in range(i + 1, m)),
        default=math.inf,
    )
    min_agap = min(
        (abs(alpha[i] - alpha[j]) for i in range(m) for j in range(i + 1, m)),
        default=math.inf,
    )
    caustic = min_lgap < CAUSTIC_REL_TOL * (max(abs(v) for v in lam) + 1.0)
    if caustic:
        warnings.warn(
            f"critical values nearly collide (gap {min_lgap:.3e})", CausticWarning
        )
    return CriticalData0(
        alpha=tuple(alpha),
        lam=tuple(lam),
        fsq=tuple(fsq),
        sb=tuple(sb),
        min_lambda_gap=min_lgap,
        min_alpha_gap=min_agap,
        caustic=caustic,
        resultant_fg=complex(res_fg),
    )


@dataclass(frozen=True)
class FlatCoords0:
    """Flat coordinates entering the closed forms: p_i = b_i, t_i = k_i c_top^(1/k_i)."""

    p_flat: tuple[complex, ...]
    t: tuple[complex, ...]
    h: tuple[complex, ...]  # c_top^(1/k_i), principal branch


def flat_coords(c: Covering0) -> FlatCoords0:
    p_flat = tuple(p.b for p in c.poles)
    hs = tuple(principal_root(p.top, k) for k, p in zip(c.profile[1:], c.poles))
    ts = tuple(k * h for k, h in zip(c.profile[1:], hs))
    return FlatCoords0(p_flat=p_flat, t=ts, h=hs)


@dataclass(frozen=True)
class TauProduct:
    """Route A: tau from the product of local frame data."""

    log_tau: complex
    log_tau_inv48: complex
    tau_inv48: complex


@dataclass(frozen=True)
class TauResultant:
    """Route B: tau^(-48) as a ratio of quasi-homogeneous polynomials."""

    log_tau_inv48: complex
    tau_inv48: complex


def tau_product(c: Covering0, cd: CriticalData0 | None = None) -> TauProduct:
    """log tau = (1/24) [sum log f_m - sum (k_s+1) log h_s], principal branches.

    The 48th inverse power is assembled from branch-free squares
    (prod fsq_m and integer powers of h_s) and reported alongside.
    """
    if cd is None:
        cd = critical_data(c)
    fc = flat_coords(c)
    log_f = [0.5 * cmath.log(v) for v in cd.fsq]
    log_h = [cmath.log(h) for h in fc.h]
    ks = c.profile[1:]
    log_tau = (sum(log_f) - sum((k + 1) * lh for k, lh in zip(ks, log_h))) / 24.0
    log48 = 2.0 * sum((k + 1) * lh for k, lh in zip(ks, log_h)) - sum(
        cmath.log(v) for v in cd.fsq
    )
    return TauProduct(log_tau=log_tau, log_tau_inv48=log48, tau_inv48=cmath.exp(log48))


def tau_resultant(c: Covering0) -> TauResultant:
    """tau^(-48) = R(f, f') / [prod (b_i-b_j)^((k_i+1)(k_j+1)) prod t_i^((k_i+1)(k_i-2))].

    Needs no root finding; vanishes exactly on the caustic R(f, f') = 0.
    """
    f, _ = p_prime_as_ratio(c)
    log_r = log_resultant(f, f.derivative())
    if log_r.real == -math.inf:
        return TauResultant(log_tau_inv48=complex(-math.inf), tau_inv48=0j)
    fc = flat_coords(c)
    ks = c.profile[1:]
    bs = [p.b for p in c.poles]
    denom = 0j
    for i in range(len(bs)):
        for j in range(len(bs)):
            if i != j:
                denom += (ks[i] + 1) * (ks[j] + 1) * cmath.log(bs[i] - bs[j])
    for k, t in zip(ks, fc.t):
        denom += (k + 1) * (k - 2) * cmath.log(t)
    log48 = log_r - denom
    return TauResultant(log_tau_inv48=log48, tau_inv48=cmath.exp(log48))


@dataclass(frozen=True)
class GFunction:
    g_value: complex
    gamma: complex
    g_from_jacobian: complex


def g_function(c: Covering0, cd: CriticalData0 | None = None) -> GFunction:
    """G = -(1/24) sum_{i>=2} (k_i+1) log t_i and its scaling anomaly.

    gamma = -(1/24) (l - 2 + sum 1/k_i + M/k1).  ``g_from_jacobian`` is the
    cross-check log(tau / J^(1/24)) with J = prod f_m: it differs from the
    closed form by the profile constant -(1/24) sum (k_i+1) log k_i.
    """
    fc = flat_coords(c)
    ks = c.profile[1:]
    g_val = -sum((k + 1) * cmath.log(t) for k, t in zip(ks, fc.t)) / 24.0
    l = c.n_poles
    k1 = c.profile[0]
    gamma = -(l - 2 + sum(1.0 / k for k in c.profile) + c.dim / k1) / 24.0
    if cd is None:
        cd = critical_data(c)
    tp = tau_product(c, cd)
    log_j = sum(0.5 * cmath.log(v) for v in cd.fsq)
    g_cross = tp.log_tau - log_j / 24.0
    return GFunction(g_value=g_val, gamma=complex(gamma), g_from_jacobian=g_cross)


# --------------------------------------------------------------------------
# caustic vanishing-order diagnostics


@dataclass(frozen=True)
class RayOrder:
    kind: str  # "top-tail" or "pole-collision"
    indices: tuple[int, ...]
    order: float
    fit_residual: float
    expected_min: float


@dataclass(frozen=True)
class CausticOrders:
    rays: tuple[RayOrder, ...]


def _log_r_ff(c: Covering0) -> float:
    f, _ = p_prime_as_ratio(c)
    return log_resultant(f, f.derivative()).real


def _fit_slope(xs: list[float], ys: list[float], label: str) -> tuple[float, float]:
    """Least-squares log-log slope with endpoint trimming.

    Shallow samples carry curvature from subleading terms and the deepest
    may hit the determinant noise floor; endpoints are dropped (keeping at
    least six points) until the fit residual is below 0.05.
    """
    xs = list(xs)
    ys = list(ys)

    def fit(x, y):
        a = np.vstack([x, np.ones(len(x))]).T
        sol, *_ = np.linalg.lstsq(a, np.array(y), rcond=None)
        return float(sol[0]), float(np.max(np.abs(a @ sol - y)))

    slope, resid = fit(xs, ys)
    while resid > 0.05 and len(xs) > 6:
        s_head, r_head = fit(xs[1:], ys[1:])
        s_tail, r_tail = fit(xs[:-1], ys[:-1])
        if r_head <= r_tail:
            xs, ys, slope, resid = xs[1:], ys[1:], s_head, r_head
        else:
            xs, ys, slope, resid = xs[:-1], ys[:-1], s_tail, r_tail
    if resid > 0.05:
        raise SlopeUnstableError(f"{label}: fit residual {resid:.3f} exceeds 0.05")
    return slope, resid


def caustic_orders(c: Covering0) -> CausticOrders:
    """Vanishing order of R(f, f') along boundary rays, by log-log slope.

    Rays: each top tail scaled towards zero (vanishing expected exactly when
    k_i = 1; for k_i >= 2 the ray leaves the moduli space at t_i = 0, so the
    evaluation stops at distance 1e-4), and each pole driven into each other
    pole (order >= k_r + k_s expected).  Windows are placed deep enough for
    the asymptote but above the determinant noise floor.
    """
    rays: list[RayOrder] = []
    fc = flat_coords(c)
    ks = c.profile[1:]

    for i, pole in enumerate(c.poles):
        k = ks[i]
        t0 = abs(fc.t[i])
        t_hi = t0 * 10.0 ** (-2.0)
        t_lo = max(1e-4, t0 * 10.0 ** (-5.5)) if k >= 2 else t0 * 10.0 ** (-6.0)
        if t_lo >= t_hi:
            continue
        tgrid = np.geomspace(t_hi, t_lo, 12)
        xs, ys = [], []
        for tmag in tgrid:
            s = (tmag / t0) ** k
            tails = list(pole.c)
            tails[-1] = pole.top * s
            poles = list(c.poles)
            poles[i] = Pole(pole.b, tuple(tails))
            y = _log_r_ff(Covering0(c.profile, c.poly_coeffs, tuple(poles)))
            if math.isfinite(y):
                xs.append(math.log10(tmag))
                ys.append(y / math.log(10))
        slope, resid = _fit_slope(xs, ys, f"top-tail ray {i}")
        rays.append(
            RayOrder(
                kind="top-tail",
                indices=(i,),
                order=slope,
                fit_residual=resid,
                expected_min=1.0 if k == 1 else 0.0,
            )
        )

    for r in range(len(c.poles)):
        for s in range(len(c.poles)):
            if r == s:
                continue
            # aim the window at |R| between ~1e-4 and ~1e-10 of its scale,
            # using the expected order as the guide
            guide = float(ks[r] + ks[s])
            eps = np.geomspace(10.0 ** (-4.0 / guide), 10.0 ** (-10.0 / guide), 12)
            xs, ys = [], []
            for e in eps:
                poles = list(c.poles)
                poles[r] = Pole(
                    c.poles[s].b + e * (c.poles[r].b - c.poles[s].b), c.poles[r].c
                )
                y = _log_r_ff(Covering0(c.profile, c.poly_coeffs, tuple(poles)))
                if math.isfinite(y):
                    xs.append(math.log10(e))
                    ys.append(y / math.log(10))
            slope, resid = _fit_slope(xs, ys, f"pole-collision ray ({r},{s})")
            rays.append(
                RayOrder(
                    kind="pole-collision",
                    indices=(r, s),
                    order=slope,
                    fit_residual=resid,
                    expected_min=guide,
                )
            )
    return CausticOrders(rays=tuple(rays))


# --------------------------------------------------------------------------
# parameter addressing (shared by the deformation engine and the CLI)


def get_param(c: Covering0, path: str) -> complex:
    parts = path.split(".")
    if parts[0] == "poly_coeffs":
        return c.poly_coeffs[int(parts[1])]
    if parts[0] == "poles":
        pole = c.poles[int(parts[1])]
        if parts[2] == "b":
            return pole.b
        if parts[2] == "c":
            return pole.c[int(parts[3])]
    raise KeyError(f"unknown parameter path {path!r}")


def set_param(c: Covering0, path: str, value: complex) -> Covering0:
    parts = path.split(".")
    if parts[0] == "poly_coeffs":
        coeffs = list(c.poly_coeffs)
        coeffs[int(parts[1])] = value
        return Covering0(c.profile, tuple(coeffs), c.poles)
    if parts[0] == "poles":
        i = int(parts[1])
        poles = list(c.poles)
        if parts[2] == "b":
            poles[i] = Pole(value, poles[i].c)
        elif parts[2] == "c":
            tails = list(poles[i].c)
            tails[int(parts[3])] = value
            poles[i] = Pole(poles[i].b, tuple(tails))
        else:
            raise KeyError(f"unknown parameter path {path!r}")
        return Covering0(c.profile, c.poly_coeffs, tuple(poles))
    raise KeyError(f"unknown parameter path {path!r}")


def deformation_params(c: Covering0) -> list[str]:
    """Paths of the M independent complex coordinates of the moduli space."""
    paths = [f"poly_coeffs.{r}" for r in range(len(c.poly_coeffs))]
    for i, pole in enumerate(c.poles):
        paths.append(f"poles.{i}.b")
        paths.extend(f"poles.{i}.c.{a}" for a in range(pole.order))
    return paths


def with_params(c: Covering0, paths: list[str], values: list[complex]) -> Covering0:
    out = c
    for p, v in zip(paths, values):
        out = set_param(out, p, v)
    return out
