"""Genus-1 covering model: elliptic functions with prescribed pole profile.

A point of the moduli space is an elliptic function on C/(Z + sigma*Z)

    p(z) = a + sum_{i=1..l} sum_{alpha=1..k_i} c_{i,alpha} zeta^(alpha-1)(z - b_i)

whose residues sum to zero (ellipticity).  The module mirrors the genus-0
one: critical data via zero localization of p', flat coordinates, the
tau-function by two closed-form routes, and the G-function with anomaly.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from functools import cached_property

from .cover0 import Pole, TauProduct, principal_root
from .elliptic import (
    Modulus,
    WeierstrassContext,
    elliptic_zeros,
    lattice_distance,
    log_dedekind_eta,
    reduce_to_cell,
    sigma_w,
    zeta_derivs,
)
from .errors import CausticWarning, CountMismatchError, NearPoleError, OnBoundaryError

__all__ = [
    "Covering1",
    "CriticalData1",
    "FlatCoords1",
    "TauResultant1",
    "GFunction1",
    "eval_p",
    "eval_p_derivs",
    "critical_data",
    "flat_coords",
    "tau_product",
    "tau_resultant",
    "g_function",
]

RESIDUE_TOL = 1e-12
POLE_GUARD = 1e-8
CAUSTIC_REL_TOL = 1e-6


@dataclass(frozen=True)
class Covering1:
    """Elliptic covering with pole profile (k_1, ..., k_l) over infinity.

    Pole positions are reduced to the fundamental cell at construction;
    the residue constraint sum_i c_{i,1} = 0 and the boundary conditions
    (poles distinct mod lattice, non-zero top tails) are enforced here.
    """

    modulus: Modulus
    constant: complex
    poles: tuple[Pole, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "constant", complex(self.constant))
        sigma = self.modulus.sigma
        object.__setattr__(
            self,
            "poles",
            tuple(Pole(reduce_to_cell(p.b, sigma), p.c) for p in self.poles),
        )
        if not self.poles:
            raise ValueError("need at least one pole")
        res = sum(p.c[0] for p in self.poles)
        scale = max(max(abs(v) for v in p.c) for p in self.poles)
        if abs(res) > RESIDUE_TOL * max(1.0, scale):
            raise ValueError(f"residues must sum to zero, got {res}")
        for i, p in enumerate(self.poles):
            if abs(p.top) <= 1e-10:
                raise OnBoundaryError("S2", (i,))
        for i in range(len(self.poles)):
            for j in range(i + 1, len(self.poles)):
                if lattice_distance(self.poles[i].b - self.poles[j].b, sigma) <= 1e-10:
                    raise OnBoundaryError("S1", (i, j))

    @property
    def genus(self) -> int:
        return 1

    @property
    def profile(self) -> tuple[int, ...]:
        return tuple(p.order for p in self.poles)

    @property
    def degree(self) -> int:
        return sum(self.profile)

    @property
    def n_poles(self) -> int:
        return len(self.poles)

    @property
    def dim(self) -> int:
        """Moduli dimension M = l + N."""
        return len(self.poles) + self.degree

    @cached_property
    def ctx(self) -> WeierstrassContext:
        return WeierstrassContext.create(self.modulus)


def eval_p_derivs(c: Covering1, z: complex, n_max: int) -> list[complex]:
    """[p(z), ..., p^(n_max)(z)] from the zeta-derivative basis."""
    sigma = c.modulus.sigma
    scale = 1.0 + abs(sigma)
    for pole in c.poles:
        if lattice_distance(z - pole.b, sigma) <= POLE_GUARD * scale:
            raise NearPoleError(f"z = {z} is too close to the pole at {pole.b}")
    out = [0j] * (n_max + 1)
    out[0] = complex(c.constant)
    ctx = c.ctx
    for pole in c.poles:
        zd = zeta_derivs(ctx, z - pole.b, pole.order - 1 + n_max)
        for a, coeff in enumerate(pole.c, start=1):
            for n in range(n_max + 1):
                out[n] += coeff * zd[a - 1 + n]
    return out


def eval_p(c: Covering1, z: complex, n_deriv: int = 0) -> complex:
    return eval_p_derivs(c, z, n_deriv)[n_deriv]


@dataclass(frozen=True)
class CriticalData1:
    """Critical points of p in the fundamental cell with local frame data.

    ``sw`` is the Schwarzian of the uniformizing coordinate in the local
    parameter; ``sb`` subtracts the marking-dependent part:
    sb = sw - 24*pi*i*eta_tilde*fsq.
    """

    z: tuple[complex, ...]
    lam: tuple[complex, ...]
    fsq: tuple[complex, ...]
    sw: tuple[complex, ...]
    sb: tuple[complex, ...]
    min_lambda_gap: float
    min_z_gap: float
    caustic: bool


def _sort_cell_points(pts: list[complex], sigma: complex) -> list[complex]:
    def key(z: complex):
        v = z.imag / sigma.imag
        u = z.real - v * sigma.real
        return (round(u, 9), round(v, 9))

    return sorted(pts, key=key)


def critical_data(c: Covering1, seeds: tuple[complex, ...] | None = None) -> CriticalData1:
    """All M = l + N zeros of p' in the fundamental cell, with frame data.

    Zeros come from the argument-principle subdivision search, or by Newton
    continuation when ``seeds`` is supplied (deformation engine path).
    """
    sigma = c.modulus.sigma
    m_expected = c.dim

    def h(z: complex) -> complex:
        return eval_p_derivs(c, z, 1)[1]

    def hp(z: complex) -> complex:
        return eval_p_derivs(c, z, 2)[2]

    if seeds is None:
        pole_divisor = [(p.b, p.order + 1) for p in c.poles]
        zs = elliptic_zeros(c.modulus, h, hp, pole_divisor, expected=m_expected)
        zs = _sort_cell_points(zs, sigma)
    else:
        if len(seeds) != m_expected:
            raise ValueError("seed count must equal the moduli dimension")
        zs = []
        for s in seeds:
            z = complex(s)
            for _ in range(60):
                step = h(z) / hp(z)
                if abs(step) > 0.2:
                    step = 0.2 * step / abs(step)
                z -= step
                if abs(step) < 1e-14 * (1 + abs(z)):
                    break
            zs.append(reduce_to_cell(z, sigma))
        for i in range(len(zs)):
            for j in range(i + 1, len(zs)):
                if lattice_distance(zs[i] - zs[j], sigma) < 1e-10:
                    raise CountMismatchError("seeded zeros collapsed onto each other")

    eta_t = c.ctx.eta_tilde
    lam, fsq, sw, sb = [], [], [], []
    for z in zs:
        d = eval_p_derivs(c, z, 4)
        al, be, ga = d[2], d[3] / 2.0, d[4] / 6.0
        lam.append(d[0])
        f2 = 2.0 / al
        fsq.append(f2)
        s = (2.0 * be * be - 3.0 * al * ga) / al**3
        sw.append(s)
        sb.append(s - 24j * math.pi * eta_t * f2)

    m = len(zs)
    min_lgap = min(
        (abs(lam[i] - lam[j]) for i in range(m) for j in range(i + 1, m)),
        default=math.inf,
    )
    min_zgap = min(
        (
            lattice_distance(zs[i] - zs[j], sigma)
            for i in range(m)
            for j in range(i + 1, m)
        ),
        default=math.inf,
    )
    caustic = min_lgap < CAUSTIC_REL_TOL * (max(abs(v) for v in lam) + 1.0)
    if caustic:
        warnings.warn(
            f"critical values nearly collide (gap {min_lgap:.3e})", CausticWarning
        )
    return CriticalData1(
        z=tuple(zs),
        lam=tuple(lam),
        fsq=tuple(fsq),
        sw=tuple(sw),
        sb=tuple(sb),
        min_lambda_gap=min_lgap,
        min_z_gap=min_zgap,
        caustic=caustic,
    )


@dataclass(frozen=True)
class FlatCoords1:
    """t0 = sigma plus the leading-Laurent-coefficient roots t_i = h_i."""

    t0: complex
    t: tuple[complex, ...]

    @property
    def h(self) -> tuple[complex, ...]:
        return self.t


def flat_coords(c: Covering1) -> FlatCoords1:
    ts = []
    for pole in c.poles:
        k = pole.order
        lead = ((-1) ** (k - 1)) * math.factorial(k - 1) * pole.top
        ts.append(principal_root(lead, k))
    return FlatCoords1(t0=c.modulus.sigma, t=tuple(ts))


def tau_product(c: Covering1, cd: CriticalData1 | None = None) -> TauProduct:
    """log tau = -log eta + (1/24)[sum log f_m - sum_{s=1..l} (k_s+1) log h_s]."""
    if cd is None:
        cd = critical_data(c)
    fc = flat_coords(c)
    log_eta = log_dedekind_eta(c.modulus)
    log_f = [0.5 * cmath.log(v) for v in cd.fsq]
    log_h = [cmath.log(h) for h in fc.h]
    ks = c.profile
    log_tau = -log_eta + (
        sum(log_f) - sum((k + 1) * lh for k, lh in zip(ks, log_h))
    ) / 24.0
    log48 = (
        48.0 * log_eta
        + 2.0 * sum((k + 1) * lh for k, lh in zip(ks, log_h))
        - sum(cmath.log(v) for v in cd.fsq)
    )
    return TauProduct(log_tau=log_tau, log_tau_inv48=log48, tau_inv48=cmath.exp(log48))


@dataclass(frozen=True)
class TauResultant1:
    """Route B: tau^(-48) from sigma-function products over the critical divisor."""

    log_tau_inv48: complex
    tau_inv48: complex
    kappa: complex


def tau_resultant(c: Covering1, cd: CriticalData1 | None = None) -> TauResultant1:
    """tau^(-48) as eta^48 f0^(2M) kappa / [prod sigma_w(b_i-b_j)^((k_i+1)(k_j+1))
    prod t_i^((k_i+1)(k_i-2))].

    kappa = prod_{r != s} sigma_w(z_r - z_s) over the critical points; f0
    normalizes the sigma-product representation of the numerator of p'.  The
    zero representatives are shifted by a lattice vector so their sum matches
    the pole divisor exactly, which makes the combination independent of the
    fundamental-cell choice.  kappa vanishes exactly on the caustic.
    """
    if cd is None:
        cd = critical_data(c)
    ctx = c.ctx
    sigma = c.modulus.sigma
    ks = c.profile
    fc = flat_coords(c)

    zs = list(cd.z)
    target = sum((k + 1) * p.b for k, p in zip(ks, c.poles))
    diff = target - sum(zs)
    v = diff.imag / sigma.imag
    u = diff.real - v * sigma.real
    mu, nu = round(u), round(v)
    if abs(diff - mu - nu * sigma) > 1e-6 * (1.0 + abs(sigma)):
        raise CountMismatchError(
            "critical divisor does not match the pole divisor modulo the lattice"
        )
    zs[-1] = cd.z[-1] + mu + nu * sigma

    kappa = 1.0 + 0j
    for r in range(len(zs)):
        for s in range(len(zs)):
            if r != s:
                kappa *= sigma_w(ctx, zs[r] - zs[s])

    b1 = c.poles[0].b
    k1 = ks[0]
    f_at_b1 = -k1 * (fc.t[0] ** k1)
    for j in range(1, len(c.poles)):
        f_at_b1 *= sigma_w(ctx, b1 - c.poles[j].b) ** (ks[j] + 1)
    denom_f0 = 1.0 + 0j
    for z in zs:
        denom_f0 *= sigma_w(ctx, b1 - z)
    f0 = f_at_b1 / denom_f0

    if kappa == 0:
        return TauResultant1(
            log_tau_inv48=complex(-math.inf), tau_inv48=0j, kappa=0j
        )

    log48 = 48.0 * log_dedekind_eta(c.modulus)
    log48 += 2.0 * c.dim * cmath.log(f0)
    log48 += cmath.log(kappa)
    for i in range(len(c.poles)):
        for j in range(len(c.poles)):
            if i != j:
                log48 -= (ks[i] + 1) * (ks[j] + 1) * cmath.log(
                    sigma_w(ctx, c.poles[i].b - c.poles[j].b)
                )
    for k, t in zip(ks, fc.t):
        log48 -= (k + 1) * (k - 2) * cmath.log(t)
    return TauResultant1(
        log_tau_inv48=log48, tau_inv48=cmath.exp(log48), kappa=complex(kappa)
    )


@dataclass(frozen=True)
class GFunction1:
    g_value: complex
    gamma: complex
    g_from_jacobian: complex


def g_function(c: Covering1, cd: CriticalData1 | None = None) -> GFunction1:
    """G = -log eta(t0) - (1/24) sum_{i=1..l} (k_i+1) log t_i, with anomaly
    gamma = -(1/24)(l + sum 1/k_i).

    The sum runs over every pole (including i = 1): this is forced by
    G = log(tau / J^(1/24)) with J = prod f_m and by the Euler identity
    E(G) = gamma, and is confirmed by the order-2 one-pole family where
    tau^(-48) is proportional to t1^12 eta^72.
    """
    fc = flat_coords(c)
    ks = c.profile
    g_val = -log_dedekind_eta(c.modulus) - sum(
        (k + 1) * cmath.log(t) for k, t in zip(ks, fc.t)
    ) / 24.0
    gamma = -(len(ks) + sum(1.0 / k for k in ks)) / 24.0
    if cd is None:
        cd = critical_data(c)
    tp = tau_product(c, cd)
    log_j = sum(0.5 * cmath.log(v) for v in cd.fsq)
    return GFunction1(
        g_value=g_val, gamma=complex(gamma), g_from_jacobian=tp.log_tau - log_j / 24.0
    )


# --------------------------------------------------------------------------
# parameter addressing


def get_param(c: Covering1, path: str) -> complex:
    parts = path.split(".")
    if parts[0] == "modulus":
        return c.modulus.sigma
    if parts[0] == "constant":
        return c.constant
    if parts[0] == "poles":
        pole = c.poles[int(parts[1])]
        if parts[2] == "b":
            return pole.b
        if parts[2] == "c":
            return pole.c[int(parts[3])]
    raise KeyError(f"unknown parameter path {path!r}")


def set_param(c: Covering1, path: str, value: complex, rebalance: bool = False) -> Covering1:
    """Return a new covering with one parameter replaced.

    With ``rebalance`` the residue of the last pole absorbs the change so
    the ellipticity constraint keeps holding (used by the deformation
    engine); otherwise the constraint is re-checked at construction.
    """
    parts = path.split(".")
    mod = c.modulus
    const = c.constant
    poles = [[p.b, list(p.c)] for p in c.poles]
    if parts[0] == "modulus":
        mod = Modulus(complex(value), truncation=c.modulus.truncation)
    elif parts[0] == "constant":
        const = complex(value)
    elif parts[0] == "poles":
        i = int(parts[1])
        if parts[2] == "b":
            poles[i][0] = complex(value)
        elif parts[2] == "c":
            poles[i][1][int(parts[3])] = complex(value)
        else:
            raise KeyError(f"unknown parameter path {path!r}")
    else:
        raise KeyError(f"unknown parameter path {path!r}")
    if rebalance and len(poles) >= 1:
        others = sum(p[1][0] for p in poles[:-1])
        poles[-1][1][0] = -others if len(poles) > 1 else 0j
    return Covering1(
        modulus=mod,
        constant=const,
        poles=tuple(Pole(b, tuple(cs)) for b, cs in poles),
    )


def deformation_params(c: Covering1) -> list[str]:
    """Paths of M independent complex coordinates.

    The first pole position is pinned (translations act trivially on the
    critical values) and the last residue is eliminated by the constraint.
    """
    paths = ["modulus", "constant"]
    l = len(c.poles)
    for i, pole in enumerate(c.poles):
        if i > 0:
            paths.append(f"poles.{i}.b")
        for a in range(pole.order):
            if a == 0 and (i == l - 1 or l == 1):
                continue
            paths.append(f"poles.{i}.c.{a}")
    return paths
