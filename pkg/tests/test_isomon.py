import cmath
import math

import numpy as np
from hurwitztau import isomon
from hurwitztau.cover0 import Covering0, Pole, critical_data as critical_data0
from hurwitztau.samples import random_covering0, random_covering1


class TestBergmann:
    def test_symmetry(self):
        for cov in (random_covering0((2, 2), seed=1), random_covering1((1, 1), seed=2)):
            B, _ = isomon.bergmann_values(cov)
            assert np.max(np.abs(B - B.T)) < 1e-12 * np.max(np.abs(B))

    def test_cubic_closed_form(self, a2):
        an = isomon.analyze(a2)
        B, _ = isomon.bergmann_values(a2, an)
        # critical points are +-1, so the kernel value is f1 f2 / 4
        want = an.f[0] * an.f[1] / (an.pts[0] - an.pts[1]) ** 2
        assert abs(B[0, 1] - want) < 1e-14


class TestIsomonodromyData:
    def test_cubic_hamiltonians_both_routes(self, a2):
        iso = isomon.build_isomonodromy(a2)
        by_lam = {round(l.real): h for l, h in zip(iso.lam, iso.hamiltonians)}
        assert abs(by_lam[-2] - 1 / 288) < 1e-14
        assert abs(by_lam[2] + 1 / 288) < 1e-14
        for h1, h2 in zip(iso.hamiltonians, iso.hamiltonians_bergmann):
            assert abs(h1 - h2) < 1e-12

    def test_v_antisymmetric_and_consistent(self):
        cov = random_covering0((3, 2), seed=3)
        iso = isomon.build_isomonodromy(cov)
        v = iso.v_matrix
        assert np.max(np.abs(v + v.T)) < 1e-12 * np.max(np.abs(v))
        lam = np.array(iso.lam)
        want = iso.gamma_matrix * (lam[None, :] - lam[:, None])
        assert np.max(np.abs(v - want)) < 1e-14 * max(1, np.max(np.abs(v)))

    def test_residue_row_structure(self):
        cov = random_covering0((2, 1), seed=4)
        iso = isomon.build_isomonodromy(cov)
        for k, a in enumerate(iso.residues):
            mask = np.ones(len(iso.lam), dtype=bool)
            mask[k] = False
            assert np.all(a[mask, :] == 0)
            assert np.max(np.abs(a[k, :] - iso.v_matrix[k, :])) == 0

    def test_residue_extraction(self):
        # contour integrals of sum_k A_k/(lambda - lambda_k) recover each A_k
        cov = random_covering0((2, 2), seed=5)
        iso = isomon.build_isomonodromy(cov)
        lam = np.array(iso.lam)
        m = len(lam)

        def mat(l):
            return sum(iso.residues[k] / (l - lam[k]) for k in range(m))

        gap = min(abs(lam[i] - lam[j]) for i in range(m) for j in range(i + 1, m))
        r = 0.2 * gap
        n = 64
        for k in range(m):
            acc = np.zeros((m, m), dtype=complex)
            for j in range(n):
                w = lam[k] + r * cmath.exp(2j * math.pi * j / n)
                acc += mat(w) * (w - lam[k])
            acc /= n
            assert np.max(np.abs(acc - iso.residues[k])) < 1e-12 * max(
                1, np.max(np.abs(iso.residues[k]))
            )

    def test_two_route_agreement_random(self):
        for seed, make in [(6, random_covering0), (7, random_covering1)]:
            cov = make((2, 1), seed=seed)
            iso = isomon.build_isomonodromy(cov)
            h1 = np.array(iso.hamiltonians)
            h2 = np.array(iso.hamiltonians_bergmann)
            tol = 1e-8 if isinstance(cov, Covering0) else 1e-6
            assert np.max(np.abs(h1 - h2)) / np.max(np.abs(h1)) < tol


class TestDeformationEngine:
    def test_jacobian_well_conditioned(self):
        for cov in (random_covering0((2, 2), seed=8), random_covering1((2,), seed=9)):
            jac = isomon.deformation_jacobian(cov)
            m = cov.dim
            assert jac.dlambda_dparams.shape == (m, m)
            assert jac.condition < 1e8

    def test_lambda_derivative_self_consistency(self):
        cov = random_covering0((2, 1), seed=10)
        an = isomon.analyze(cov)
        for k in range(cov.dim):
            for j in range(cov.dim):
                d = isomon.lambda_derivative(
                    cov, lambda c, jj=j: isomon.analyze(c, base=an).lam[jj], k
                )
                assert abs(d - (1.0 if j == k else 0.0)) < 1e-7

    def test_gamma_definition_finite_difference(self):
        # rotation coefficients: d sqrt(metric_mm) / d lambda_n / sqrt(metric_nn)
        cov = random_covering0((2, 1), seed=11)
        an = isomon.analyze(cov)
        iso = isomon.build_isomonodromy(cov, an)
        _, d = isomon.lambda_derivatives(cov, isomon.check_bundle(an))
        df = d["f"]  # df[n, m] = d f_n / d lambda_m
        m = cov.dim
        for i in range(m):
            for n in range(m):
                if i == n:
                    continue
                got = df[i, n] / an.f[n]
                assert abs(got - iso.gamma_matrix[i, n]) / abs(got) < 1e-5

    def test_schwarzian_gradient(self):
        for cov in (random_covering0((3, 2), seed=12), random_covering1((1, 1), seed=13)):
            an = isomon.analyze(cov)
            _, d = isomon.lambda_derivatives(cov, isomon.check_bundle(an))
            sw = np.array(an.sw)
            err = np.max(np.abs(d["T"][0] - sw)) / np.max(np.abs(sw))
            assert err < 1e-5

    def test_diagonal_frame_derivative(self):
        # d log f_k / d lambda_k = sb_k/12 + f_{k,2}/(2 f_k), with the
        # quadratic frame coefficient from the Taylor data of p' at the
        # critical point: f_{k,2}/(2 f_k) = 5 beta^2/(6 alpha^3) - 3 gamma/(4 alpha^2)
        from hurwitztau.cover0 import eval_p_derivs as ev0
        from hurwitztau.cover1 import eval_p_derivs as ev1

        for cov, ev in (
            (random_covering0((2, 2), seed=21), ev0),
            (random_covering1((1, 1), seed=22), ev1),
        ):
            an = isomon.analyze(cov)
            _, d = isomon.lambda_derivatives(cov, isomon.check_bundle(an))
            for k in range(len(an.lam)):
                dlogf = d["fsq"][k, k] / (2 * an.fsq[k])
                der = ev(cov, an.pts[k], 4)
                al, be, ga = der[2], der[3] / 2, der[4] / 6
                rhs = an.sb[k] / 12 + 5 * be * be / (6 * al**3) - 3 * ga / (4 * al**2)
                assert abs(dlogf - rhs) / max(1.0, abs(rhs)) < 1e-5

    def test_richardson_convergence_ratio(self):
        # central-difference convergence of a Hamiltonian along one parameter
        # (the residue; the constant coefficient only shifts all lambda)
        cov = random_covering0((2, 1), seed=14)
        an = isomon.analyze(cov)
        path = "poles.0.c.0"
        from hurwitztau.cover0 import get_param, set_param

        v0 = get_param(cov, path)

        def h1(value):
            c2 = set_param(cov, path, value)
            return isomon.build_isomonodromy(c2, isomon.analyze(c2, base=an)).hamiltonians[0]

        def central(h):
            return (h1(v0 + h) - h1(v0 - h)) / (2 * h)

        h = 2e-3 * max(1.0, abs(v0))
        d1, d2, d4 = central(h), central(h / 2), central(h / 4)
        ratio = abs(d1 - d2) / abs(d2 - d4)
        assert 3.5 < ratio < 4.5

    def test_hamiltonian_blowup_towards_caustic(self, quiet_caustic):
        # two critical values collide like sqrt(c); the Hamiltonians grow
        # monotonically through four decades of the tail coefficient
        b = 0.3 + 0.2j
        values = []
        for c in np.geomspace(1e-1, 1e-8, 8):
            cov = Covering0((1, 1), (), (Pole(b, (complex(-c),)),))
            iso = isomon.build_isomonodromy(cov)
            values.append(float(np.max(np.abs(iso.hamiltonians))))
        assert all(a < b2 for a, b2 in zip(values, values[1:]))
        assert values[-1] / values[0] > 1e3

    def test_caustic_guard_flags_partial_data(self, quiet_caustic):
        # near-coincident critical values: data still produced, flagged
        cov = Covering0((1, 1), (), (Pole(0.3 + 0.2j, (-1e-14,)),))
        cd = critical_data0(cov)
        assert cd.caustic
        iso = isomon.build_isomonodromy(cov)
        assert iso.caustic


class TestEulerChecks:
    def test_sum_and_degree_both_genera(self):
        for cov in (random_covering0((2, 2), seed=15), random_covering1((1, 1), seed=16)):
            rep = isomon.euler_unit_checks(cov)
            assert rep.sum_h_rel < 1e-10
            assert abs(rep.euler_log_tau - rep.euler_log_tau_expected) < 1e-8
            assert abs(rep.euler_g - rep.gamma) < 1e-5

    def test_scaling_degree_closed_form_cubic(self, a2):
        # for the cubic family: sum lambda_m H_m = -1/72
        assert abs(isomon.euler_scaling_expected(a2) - (-1.0 / 72.0)) < 1e-15


class TestIdentityReport:
    def test_all_pass_genus0(self):
        cov = random_covering0((2, 1, 1), seed=17)
        checks = isomon.identity_report(cov)
        assert {c.name for c in checks} >= {
            "tau-gradient",
            "rauch-ramification",
            "rauch-puncture",
            "schwarzian-gradient",
            "hamiltonian-two-route",
            "hamiltonian-sum",
            "euler-anomaly",
            "tau-route-ratio",
            "resultant-factorization",
        }
        for c in checks:
            assert c.passed, f"{c.name}: {c.error} >= {c.tol}"

    def test_all_pass_genus1(self):
        cov = random_covering1((2, 1), seed=18)
        checks = isomon.identity_report(cov)
        assert "modulus-flow" in {c.name for c in checks}
        for c in checks:
            assert c.passed, f"{c.name}: {c.error} >= {c.tol}"

    def test_tolerance_override(self):
        cov = random_covering0((2, 1), seed=19)
        checks = isomon.identity_report(cov, tol=1e-15)
        assert any(not c.passed for c in checks)
        assert all(c.tol == 1e-15 for c in checks)
