"""Isomonodromy layer shared by both genera.

Rotation coefficients from the Bergmann kernel, the commutator matrix V,
quadratic Hamiltonians by two independent routes, Schlesinger residue
matrices, and a finite-difference engine that converts derivatives in the
covering parameters into derivatives in the canonical coordinates
(the critical values).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import cover0, cover1
from .cover0 import Covering0
from .cover1 import Covering1
from .elliptic import lattice_distance, log_dedekind_eta, wp
from .errors import (
    CoincidentPointsError,
    IllConditionedError,
    StepUnderflowError,
)

__all__ = [
    "Analysis",
    "IsomonodromyData",
    "DeformationJacobian",
    "analyze",
    "bergmann_values",
    "build_isomonodromy",
    "deformation_jacobian",
    "lambda_derivatives",
    "lambda_derivative",
    "euler_unit_checks",
    "euler_scaling_expected",
    "identity_report",
    "IdentityCheck",
    "sweep_ratios",
]

Covering = Covering0 | Covering1
DEFAULT_FD_STEP = 1e-5
COND_LIMIT = 1e8


# --------------------------------------------------------------------------
# uniform analysis of a covering (both genera)


@dataclass(frozen=True)
class Analysis:
    """Everything the identity checks consume, with branch continuity.

    ``f`` and ``log_*`` entries are continuified against a base analysis
    when one is supplied (nearest branch at each step); otherwise principal
    branches are used throughout.  ``T`` is the log of the frame product
    whose canonical gradient is the Schwarzian of the uniformizing map.
    """

    covering: Covering
    genus: int
    pts: tuple[complex, ...]
    lam: tuple[complex, ...]
    fsq: tuple[complex, ...]
    sw: tuple[complex, ...]
    sb: tuple[complex, ...]
    f: tuple[complex, ...]
    h: tuple[complex, ...]
    ks: tuple[int, ...]
    sigma: complex | None
    eta_tilde: complex | None
    log_fsq: tuple[complex, ...]
    log_h: tuple[complex, ...]
    T: complex
    log_tau48: complex
    log_tau: complex
    G: complex
    gamma: complex
    caustic: bool
    min_lambda_gap: float


def _cont_log(value: complex, ref_value: complex, ref_log: complex) -> complex:
    return ref_log + cmath.log(value / ref_value)


def _match(points: Sequence[complex], base: Sequence[complex],
           dist: Callable[[complex, complex], float]) -> list[int]:
    cost = np.array([[dist(p, b) for p in points] for b in base])
    _, cols = linear_sum_assignment(cost)
    return list(cols)


def analyze(covering: Covering, base: "Analysis | None" = None) -> Analysis:
    """Critical data, flat data and closed-form scalars in one bundle."""
    if isinstance(covering, Covering0):
        genus = 0
        seeds = base.pts if base is not None else None
        cd = cover0.critical_data(covering, seeds=seeds)
        fc = cover0.flat_coords(covering)
        pts, lam, fsq, sb = cd.alpha, cd.lam, cd.fsq, cd.sb
        sw = cd.sb
        hs = fc.h
        ks = covering.profile[1:]
        sigma = None
        eta_t = None
        dist = lambda a, b: abs(a - b)
    else:
        genus = 1
        seeds = base.pts if base is not None else None
        cd = cover1.critical_data(covering, seeds=seeds)
        fc = cover1.flat_coords(covering)
        pts, lam, fsq, sb = cd.z, cd.lam, cd.fsq, cd.sb
        sw = cd.sw
        hs = fc.h
        ks = covering.profile
        sigma = covering.modulus.sigma
        eta_t = covering.ctx.eta_tilde
        s = sigma
        dist = lambda a, b: lattice_distance(a - b, s)

    if base is not None:
        order = _match(pts, base.pts, dist)
        pts = tuple(pts[i] for i in order)
        lam = tuple(lam[i] for i in order)
        fsq = tuple(fsq[i] for i in order)
        sb = tuple(sb[i] for i in order)
        sw = tuple(sw[i] for i in order)
        log_fsq = tuple(
            _cont_log(v, rv, rl) for v, rv, rl in zip(fsq, base.fsq, base.log_fsq)
        )
        f = []
        for v, rf in zip(fsq, base.f):
            r = cmath.sqrt(v)
            f.append(r if abs(r - rf) <= abs(-r - rf) else -r)
        f = tuple(f)
        log_h = []
        hs2 = []
        for hval, k, rh, rl in zip(hs, ks, base.h, base.log_h):
            # nearest among the k-th root branches of hval^k
            best = min(
                (hval * cmath.exp(2j * math.pi * j / k) for j in range(k)),
                key=lambda w: abs(w - rh),
            )
            hs2.append(best)
            log_h.append(_cont_log(best, rh, rl))
        hs = tuple(hs2)
        log_h = tuple(log_h)
    else:
        log_fsq = tuple(cmath.log(v) for v in fsq)
        f = tuple(cmath.sqrt(v) for v in fsq)
        log_h = tuple(cmath.log(h) for h in hs)
        hs = tuple(hs)

    T = 0.5 * sum(log_fsq) - sum((k + 1) * lh for k, lh in zip(ks, log_h))
    log_tau48 = 2.0 * sum((k + 1) * lh for k, lh in zip(ks, log_h)) - sum(log_fsq)
    if genus == 0:
        log_tau = T / 24.0
        g_val = -sum((k + 1) * (math.log(k) + lh) for k, lh in zip(ks, log_h)) / 24.0
        l = covering.n_poles
        k1 = covering.profile[0]
        gamma = -(l - 2 + sum(1.0 / k for k in covering.profile) + covering.dim / k1) / 24.0
    else:
        log_eta = log_dedekind_eta(covering.modulus)
        log_tau48 = log_tau48 + 48.0 * log_eta
        log_tau = -log_eta + T / 24.0
        g_val = -log_eta - sum((k + 1) * lh for k, lh in zip(ks, log_h)) / 24.0
        gamma = -(len(ks) + sum(1.0 / k for k in ks)) / 24.0

    return Analysis(
        covering=covering,
        genus=genus,
        pts=tuple(pts),
        lam=tuple(lam),
        fsq=tuple(fsq),
        sw=tuple(sw),
        sb=tuple(sb),
        f=f,
        h=hs,
        ks=tuple(ks),
        sigma=sigma,
        eta_tilde=eta_t,
        log_fsq=log_fsq,
        log_h=log_h,
        T=T,
        log_tau48=log_tau48,
        log_tau=log_tau,
        G=g_val,
        gamma=complex(gamma),
        caustic=cd.caustic,
        min_lambda_gap=cd.min_lambda_gap,
    )


# --------------------------------------------------------------------------
# Bergmann kernel values and the isomonodromy data


def bergmann_values(covering: Covering, an: Analysis | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Kernel values b(P_m, P_n) (zero diagonal) and b(P_m, infinity_s).

    Genus 0: f_m f_n / (z_m - z_n)^2 and f_m h_s / (z_m - b_s)^2 (s >= 2).
    Genus 1: [wp(z_m - z_n) - 4 pi i eta_tilde] f_m f_n and the analogue
    with the pole positions.
    """
    if an is None:
        an = analyze(covering)
    m = len(an.pts)
    B = np.zeros((m, m), dtype=complex)
    if an.genus == 0:
        poles = [p.b for p in covering.poles]
        for i in range(m):
            for j in range(m):
                if i == j:
                    continue
                dz = an.pts[i] - an.pts[j]
                if abs(dz) < 1e-12:
                    raise CoincidentPointsError("coincident critical points")
                B[i, j] = an.f[i] * an.f[j] / dz**2
        Binf = np.zeros((m, len(poles)), dtype=complex)
        for i in range(m):
            for s, b in enumerate(poles):
                Binf[i, s] = an.f[i] * an.h[s] / (an.pts[i] - b) ** 2
    else:
        ctx = covering.ctx
        four_pi_i_eta = 4j * math.pi * an.eta_tilde
        sigma = covering.modulus.sigma
        for i in range(m):
            for j in range(m):
                if i == j:
                    continue
                if lattice_distance(an.pts[i] - an.pts[j], sigma) < 1e-10:
                    raise CoincidentPointsError("coincident critical points")
                B[i, j] = (wp(ctx, an.pts[i] - an.pts[j]) - four_pi_i_eta) * an.f[i] * an.f[j]
        poles = [p.b for p in covering.poles]
        Binf = np.zeros((m, len(poles)), dtype=complex)
        for i in range(m):
            for s, b in enumerate(poles):
                Binf[i, s] = (wp(ctx, an.pts[i] - b) - four_pi_i_eta) * an.f[i] * an.h[s]
    return B, Binf


@dataclass(frozen=True)
class IsomonodromyData:
    """Rotation coefficients, commutator matrix, Hamiltonians, residues."""

    gamma_matrix: np.ndarray
    v_matrix: np.ndarray
    hamiltonians: tuple[complex, ...]
    hamiltonians_bergmann: tuple[complex, ...]
    residues: tuple[np.ndarray, ...]
    lam: tuple[complex, ...]
    caustic: bool


def build_isomonodromy(covering: Covering, an: Analysis | None = None) -> IsomonodromyData:
    """Gamma (= half the kernel values), V = [Gamma, U], and H by two routes.

    Route one is the quadratic form in V; route two is the projective
    connection value sb/24 at each ramification point.  Both are returned;
    their agreement is the central consistency check of the construction.
    On a near-caustic instance the data is still produced, tagged by the
    ``caustic`` flag (a CausticWarning is emitted by the critical data).
    """
    if an is None:
        an = analyze(covering)
    B, _ = bergmann_values(covering, an)
    m = len(an.lam)
    gamma = 0.5 * B
    lam = np.array(an.lam)
    v = gamma * (lam[None, :] - lam[:, None])
    h = []
    for i in range(m):
        acc = 0j
        for n in range(m):
            if n != i:
                acc += gamma[i, n] ** 2 * (lam[i] - lam[n])
        h.append(0.5 * acc)
    h_sb = tuple(s / 24.0 for s in an.sb)
    residues = []
    for k in range(m):
        a = np.zeros((m, m), dtype=complex)
        a[k, :] = v[k, :]
        residues.append(a)
    return IsomonodromyData(
        gamma_matrix=gamma,
        v_matrix=v,
        hamiltonians=tuple(h),
        hamiltonians_bergmann=h_sb,
        residues=tuple(residues),
        lam=an.lam,
        caustic=an.caustic,
    )


# --------------------------------------------------------------------------
# the finite-difference engine


def _params_of(covering: Covering) -> list[str]:
    if isinstance(covering, Covering0):
        return cover0.deformation_params(covering)
    return cover1.deformation_params(covering)


def _get(covering: Covering, path: str) -> complex:
    if isinstance(covering, Covering0):
        return cover0.get_param(covering, path)
    return cover1.get_param(covering, path)


def _set(covering: Covering, path: str, value: complex) -> Covering:
    if isinstance(covering, Covering0):
        return cover0.set_param(covering, path, value)
    return cover1.set_param(covering, path, value, rebalance=True)


@dataclass(frozen=True)
class DeformationJacobian:
    """d(critical values)/d(parameters) with a condition estimate."""

    params: tuple[str, ...]
    values: tuple[complex, ...]
    dlambda_dparams: np.ndarray  # shape (M, P)
    condition: float


def _bundle_arrays(bundle: dict) -> dict[str, np.ndarray]:
    return {k: np.atleast_1d(np.asarray(v, dtype=complex)) for k, v in bundle.items()}


def parameter_derivatives(
    covering: Covering,
    bundle_fn: Callable[[Covering], dict],
    rel_step: float = DEFAULT_FD_STEP,
) -> tuple[dict[str, np.ndarray], list[str], dict[str, np.ndarray]]:
    """Central differences with one Richardson level, per complex parameter.

    ``bundle_fn`` maps a covering to a dict of scalars/vectors; holomorphy
    in each complex parameter means a real-axis step determines the full
    complex derivative.  Returns (base bundle, parameter paths, derivative
    arrays of shape (P, len(value))).
    """
    base = _bundle_arrays(bundle_fn(covering))
    paths = _params_of(covering)
    derivs: dict[str, list[np.ndarray]] = {k: [] for k in base}
    for path in paths:
        v0 = _get(covering, path)
        h = rel_step * max(1.0, abs(v0))
        if h < 1e-13 * max(1.0, abs(v0)):
            raise StepUnderflowError(f"step underflow for {path}")
        evals = {}
        for mult in (1.0, -1.0, 0.5, -0.5):
            evals[mult] = _bundle_arrays(bundle_fn(_set(covering, path, v0 + mult * h)))
        for k in base:
            d1 = (evals[1.0][k] - evals[-1.0][k]) / (2.0 * h)
            d2 = (evals[0.5][k] - evals[-0.5][k]) / h
            derivs[k].append((4.0 * d2 - d1) / 3.0)
    return base, paths, {k: np.array(v) for k, v in derivs.items()}


def deformation_jacobian(covering: Covering, rel_step: float = DEFAULT_FD_STEP) -> DeformationJacobian:
    an = analyze(covering)
    bundle = lambda cov: {"lam": analyze(cov, base=an).lam}
    _, paths, derivs = parameter_derivatives(covering, bundle, rel_step)
    jac = derivs["lam"].T  # (M, P)
    return DeformationJacobian(
        params=tuple(paths),
        values=tuple(_get(covering, p) for p in paths),
        dlambda_dparams=jac,
        condition=float(np.linalg.cond(jac)),
    )


def lambda_derivatives(
    covering: Covering,
    bundle_fn: Callable[[Covering], dict],
    rel_step: float = DEFAULT_FD_STEP,
) -> tuple[dict[str, np.ndarray], dict[str, np.ndarray]]:
    """d(bundle)/d(lambda_k) for every bundle entry.

    The bundle must contain the key ``"lam"``; its parameter Jacobian is
    inverted (the parameter count equals the moduli dimension) and chained
    with every other entry's parameter derivatives.
    """
    base, _, derivs = parameter_derivatives(covering, bundle_fn, rel_step)
    jac = derivs["lam"].T  # (M, P)
    m, p = jac.shape
    if m != p:
        raise IllConditionedError(f"parameter count {p} != dimension {m}")
    cond = float(np.linalg.cond(jac))
    if cond > COND_LIMIT:
        raise IllConditionedError(f"deformation Jacobian condition {cond:.2e}")
    inv = np.linalg.inv(jac)  # (P, M): d params / d lambda
    out = {}
    for k, d in derivs.items():
        out[k] = d.T @ inv  # (len(value), M)
    return base, out


def lambda_derivative(
    covering: Covering,
    functional: Callable[[Covering], complex],
    k: int,
    rel_step: float = DEFAULT_FD_STEP,
) -> complex:
    """d functional / d lambda_k by the finite-difference engine."""
    an = analyze(covering)
    bundle = lambda cov: {"lam": analyze(cov, base=an).lam, "F": functional(cov)}
    _, d = lambda_derivatives(covering, bundle, rel_step)
    return complex(d["F"][0, k])


def check_bundle(base: Analysis) -> Callable[[Covering], dict]:
    """The standard bundle for the identity suite (branch-continuified)."""

    def fn(cov: Covering) -> dict:
        an = analyze(cov, base=base)
        out = {
            "lam": an.lam,
            "fsq": an.fsq,
            "f": an.f,
            "h": an.h,
            "T": an.T,
            "log_tau48": an.log_tau48,
            "G": an.G,
        }
        if an.genus == 1:
            out["sigma"] = an.sigma
        return out

    return fn


# --------------------------------------------------------------------------
# Euler / unit field checks


def euler_scaling_expected(covering: Covering) -> complex:
    """Closed-form value of E(log tau) = sum lambda_m H_m from the profile."""
    if isinstance(covering, Covering0):
        ks = covering.profile[1:]
        k1 = covering.profile[0]
        m = covering.dim
        return complex(
            (m * (1.0 / k1 - 0.5) - sum((k + 1) * (1.0 / k + 1.0 / k1) for k in ks))
            / 24.0
        )
    ks = covering.profile
    m = covering.dim
    return complex((-0.5 * m - sum((k + 1) / k for k in ks)) / 24.0)


@dataclass(frozen=True)
class EulerReport:
    sum_h: complex
    sum_h_rel: float
    euler_log_tau: complex
    euler_log_tau_expected: complex
    euler_g: complex
    gamma: complex


def euler_unit_checks(covering: Covering, rel_step: float = DEFAULT_FD_STEP) -> EulerReport:
    """Unit-field annihilation, Euler degree of log tau, and E(G) vs gamma."""
    an = analyze(covering)
    iso = build_isomonodromy(covering, an)
    h = np.array(iso.hamiltonians)
    lam = np.array(iso.lam)
    sum_h = complex(np.sum(h))
    scale = float(np.max(np.abs(h))) or 1.0
    _, d = lambda_derivatives(covering, check_bundle(an), rel_step)
    eg = complex(d["G"][0] @ lam)
    return EulerReport(
        sum_h=sum_h,
        sum_h_rel=abs(sum_h) / scale,
        euler_log_tau=complex(h @ lam),
        euler_log_tau_expected=euler_scaling_expected(covering),
        euler_g=eg,
        gamma=an.gamma,
    )


# --------------------------------------------------------------------------
# the identity suite


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    error: float
    tol: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.error < self.tol


def _sweep_coverings(covering: Covering, path: str, steps: int, spread: float = 0.12,
                     phase: float = 0.6) -> list[Covering]:
    v0 = _get(covering, path)
    delta = spread * max(1.0, abs(v0)) * cmath.exp(1j * phase)
    return [
        _set(covering, path, v0 + delta * (s / (steps - 1) - 0.5))
        for s in range(steps)
    ]


def _default_sweep_param(covering: Covering) -> str:
    if isinstance(covering, Covering0):
        if covering.poles:
            return "poles.0.b"
        return "poly_coeffs.0"
    k1 = covering.poles[0].order
    if k1 > 1:
        return f"poles.0.c.{k1 - 1}"
    return "poles.1.b" if len(covering.poles) > 1 else "constant"


def _ratio_drift(values: list[complex]) -> float:
    ref = values[0]
    return max(abs(v / ref - 1.0) for v in values)


def sweep_ratios(covering: Covering, path: str, target: complex, steps: int):
    """Coverings and cross-route tau data along a straight parameter segment.

    Yields (step index, covering, dict of per-step scalars).  Used by the
    sweep command; raises the underlying boundary/caustic errors at the
    offending step.
    """
    v0 = _get(covering, path)
    out = []
    for s in range(steps):
        t = s / (steps - 1) if steps > 1 else 0.0
        cov = _set(covering, path, v0 + (target - v0) * t)
        if isinstance(cov, Covering0):
            cover0.validate(cov)
            cd = cover0.critical_data(cov)
            ta = cover0.tau_product(cov, cd)
            tb = cover0.tau_resultant(cov)
            f, g = cover0.p_prime_as_ratio(cov)
            fc = cover0.flat_coords(cov)
            fact = cover0.resultant(f, g)
            denom = 1.0 + 0j
            bs = [p.b for p in cov.poles]
            ks = cov.profile[1:]
            for i in range(len(bs)):
                for j in range(len(bs)):
                    if i != j:
                        denom *= (bs[i] - bs[j]) ** ((ks[i] + 1) * (ks[j] + 1))
            for k, tt in zip(ks, fc.t):
                denom *= tt ** (k * (k + 1))
            row = {
                "tau48_product": ta.tau_inv48,
                "tau48_resultant": tb.tau_inv48,
                "route_ratio": ta.tau_inv48 / tb.tau_inv48,
                "resultant_ratio": fact / denom,
                "caustic": cd.caustic,
            }
        else:
            cd = cover1.critical_data(cov)
            ta = cover1.tau_product(cov, cd)
            tb = cover1.tau_resultant(cov, cd)
            row = {
                "tau48_product": ta.tau_inv48,
                "tau48_resultant": tb.tau_inv48,
                "route_ratio": ta.tau_inv48 / tb.tau_inv48,
                "caustic": cd.caustic,
            }
        out.append((s, cov, row))
    return out


# default tolerances per identity; a caller-supplied tolerance replaces all
DEFAULT_TOLS = {
    "tau-gradient": 1e-5,
    "rauch-ramification": 1e-5,
    "rauch-puncture": 1e-5,
    "schwarzian-gradient": 1e-5,
    "hamiltonian-two-route": 1e-8,  # 1e-6 at genus 1
    "hamiltonian-sum": 1e-10,
    "euler-anomaly": 1e-5,
    "modulus-flow": 1e-5,
    "tau-route-ratio": 1e-7,
    "resultant-factorization": 1e-8,
}


def identity_report(
    covering: Covering,
    rel_step: float = DEFAULT_FD_STEP,
    tol: float | None = None,
    seed: int = 42,
    sweep_steps: int = 5,
) -> list[IdentityCheck]:
    """Run every applicable differential/closed-form identity at one point.

    Gradient identities come from the finite-difference engine; the
    cross-route constancy identities run a short deterministic parameter
    sweep around the instance.  A not-None ``tol`` replaces every default.
    """
    an = analyze(covering)
    iso = build_isomonodromy(covering, an)
    B, Binf = bergmann_values(covering, an)
    _, d = lambda_derivatives(covering, check_bundle(an), rel_step)
    m = len(an.lam)
    lam = np.array(an.lam)
    h = np.array(iso.hamiltonians)
    h_scale = float(np.max(np.abs(h)))

    def tolerance(name: str) -> float:
        if tol is not None:
            return tol
        t = DEFAULT_TOLS[name]
        if name == "hamiltonian-two-route" and an.genus == 1:
            t = 1e-6
        return t

    checks: list[IdentityCheck] = []

    dlogtau = -d["log_tau48"][0] / 48.0
    err = float(np.max(np.abs(dlogtau - h))) / h_scale
    checks.append(IdentityCheck("tau-gradient", err, tolerance("tau-gradient"),
                                "d log tau / d lambda_k vs H_k"))

    df = d["f"]  # (M, M): df_n/dlam_m at [n, m]
    rhs = 0.5 * B.T * np.array(an.f)[None, :]  # [n, m] = 0.5 B[m, n] f_m
    mask = ~np.eye(m, dtype=bool)
    scale = float(np.max(np.abs(rhs[mask])))
    err = float(np.max(np.abs((df - rhs)[mask]))) / scale
    checks.append(IdentityCheck("rauch-ramification", err, tolerance("rauch-ramification"),
                                "d f_n / d lambda_m vs (1/2) b(P_m,P_n) f_m"))

    if an.h:
        dh = d["h"]  # (S, M)
        rhs_h = 0.5 * Binf.T * np.array(an.f)[None, :]
        scale = float(np.max(np.abs(rhs_h)))
        err = float(np.max(np.abs(dh - rhs_h))) / scale
        checks.append(IdentityCheck("rauch-puncture", err, tolerance("rauch-puncture"),
                                    "d h_s / d lambda_m vs (1/2) b(P_m,inf_s) f_m"))

    dT = d["T"][0]
    sw = np.array(an.sw)
    err = float(np.max(np.abs(dT - sw))) / float(np.max(np.abs(sw)))
    checks.append(IdentityCheck("schwarzian-gradient", err, tolerance("schwarzian-gradient"),
                                "d T / d lambda_k vs Schwarzian at P_k"))

    err = float(np.max(np.abs(h - np.array(iso.hamiltonians_bergmann)))) / h_scale
    checks.append(IdentityCheck("hamiltonian-two-route", err, tolerance("hamiltonian-two-route"),
                                "H from V-quadratic form vs projective connection"))

    err = abs(complex(np.sum(h))) / h_scale
    checks.append(IdentityCheck("hamiltonian-sum", err, tolerance("hamiltonian-sum"),
                                "sum_m H_m = 0"))

    eg = complex(d["G"][0] @ lam)
    err = abs(eg - an.gamma) / max(1.0, abs(an.gamma))
    checks.append(IdentityCheck("euler-anomaly", err, tolerance("euler-anomaly"),
                                "E(G) vs closed-form gamma"))

    if an.genus == 1:
        dsig = d["sigma"][0]
        rhs_s = 1j * math.pi * np.array(an.fsq)
        err = float(np.max(np.abs(dsig - rhs_s))) / float(np.max(np.abs(rhs_s)))
        checks.append(IdentityCheck("modulus-flow", err, tolerance("modulus-flow"),
                                    "d sigma / d lambda_k vs pi i f_k^2"))

    # cross-route constancy on a short deterministic sweep
    rng = np.random.default_rng(seed)
    path = _default_sweep_param(covering)
    phase = float(rng.uniform(0.0, 2.0 * math.pi))
    sweep = _sweep_coverings(covering, path, sweep_steps, spread=0.1, phase=phase)
    ratios = []
    factorization_ratios = []
    for cov in sweep:
        if isinstance(cov, Covering0):
            cd = cover0.critical_data(cov)
            ta = cover0.tau_product(cov, cd)
            tb = cover0.tau_resultant(cov)
            ratios.append(ta.tau_inv48 / tb.tau_inv48)
            f, g = cover0.p_prime_as_ratio(cov)
            fc = cover0.flat_coords(cov)
            denom = 1.0 + 0j
            bs = [p.b for p in cov.poles]
            ks = cov.profile[1:]
            for i in range(len(bs)):
                for j2 in range(len(bs)):
                    if i != j2:
                        denom *= (bs[i] - bs[j2]) ** ((ks[i] + 1) * (ks[j2] + 1))
            for k, tt in zip(ks, fc.t):
                denom *= tt ** (k * (k + 1))
            factorization_ratios.append(cover0.resultant(f, g) / denom)
        else:
            cd = cover1.critical_data(cov)
            ratios.append(
                cover1.tau_product(cov, cd).tau_inv48
                / cover1.tau_resultant(cov, cd).tau_inv48
            )
    checks.append(IdentityCheck("tau-route-ratio", _ratio_drift(ratios),
                                tolerance("tau-route-ratio"),
                                f"product vs resultant route along {path}"))
    if factorization_ratios:
        checks.append(IdentityCheck("resultant-factorization", _ratio_drift(factorization_ratios),
                                    tolerance("resultant-factorization"),
                                    f"R(f,g) vs pole/flat factorization along {path}"))
    return checks
