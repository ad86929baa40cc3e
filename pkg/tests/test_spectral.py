"""Discrete eigenproblems, the collocation oracle, and the proof chain."""

import numpy as np
import pytest

from affconn.charts import WeightParams, height_weight, sphere_chart
from affconn.errors import (MeshNotTwoDim, NonpositiveK, NotDMinimal)
from affconn.meshes import build_mesh, disk_mesh, hemisphere_mesh
from affconn.operators import Hypersurface
from affconn.spectral import (assemble, choi_wang_certificate,
                              circle_collocation_eigenvalues, eigenvalues,
                              harmonic_extension_2d, proof_chain_inequality,
                              recover_normal_flux,
                              smallest_nonzero_eigenvalue)

P0 = WeightParams(0.0, 0.0)
PW = WeightParams(1.0, 0.0)


class TestAssembly:
    @pytest.mark.parametrize("kind,level", [("circle", 4), ("icosphere", 2)])
    def test_constants_in_kernel_and_symmetry(self, kind, level):
        prob = assemble(build_mesh(kind, level), WeightParams(0.7, -0.3))
        a = prob.stiffness
        assert np.max(np.abs(a @ np.ones(prob.size))) <= 1e-12
        assert abs(a - a.T).max() <= 1e-12
        b = prob.mass.toarray()
        assert np.allclose(b, b.T, atol=1e-14)
        assert np.linalg.eigvalsh(b)[0] > 0

    def test_weight_constant_on_surface_matches_unweighted(self):
        # The ambient weight restricts to a constant on the equator.
        mesh = build_mesh("circle", 4)
        plain = assemble(mesh, P0)
        weighted = assemble(mesh, PW)
        assert abs(plain.stiffness - weighted.stiffness).max() <= 1e-14
        assert abs(plain.mass - weighted.mass).max() <= 1e-14

    def test_scaling_both_matrices_leaves_spectrum(self):
        prob = assemble(build_mesh("circle", 4), P0)
        lam = smallest_nonzero_eigenvalue(prob)
        prob.stiffness *= 2.0
        prob.mass *= 2.0
        assert smallest_nonzero_eigenvalue(prob) == pytest.approx(lam)


class TestEigenvalues:
    def test_circle_spectrum(self):
        vals = eigenvalues(assemble(build_mesh("circle", 5), P0), count=6)
        expected = [0.0, 1.0, 1.0, 4.0, 4.0, 9.0]
        assert np.allclose(vals, expected, atol=2e-3)

    def test_circle_first_eigenvalue_level_6(self):
        lam = smallest_nonzero_eigenvalue(assemble(build_mesh("circle", 6), P0))
        assert abs(lam - 1.0) <= 1e-4

    def test_sphere_level_4_within_one_percent(self):
        lam = smallest_nonzero_eigenvalue(
            assemble(build_mesh("icosphere", 4), P0))
        assert abs(lam - 2.0) / 2.0 <= 1e-2

    def test_dense_vs_iterative(self):
        prob = assemble(build_mesh("icosphere", 3), P0)
        assert prob.size < 2000
        dense = smallest_nonzero_eigenvalue(prob, method="dense")
        iterative = smallest_nonzero_eigenvalue(prob, method="iterative")
        assert abs(dense - iterative) / dense <= 1e-8

    def test_weight_shift_scales_first_eigenvalue(self):
        params = WeightParams(1.0, 0.0)
        base = build_mesh("circle", 5).with_weight(lambda v: 0.3 * v[0])
        shifted = build_mesh("circle", 5).with_weight(lambda v: 0.3 * v[0] + 0.9)
        lam0 = smallest_nonzero_eigenvalue(assemble(base, params))
        lam1 = smallest_nonzero_eigenvalue(assemble(shifted, params))
        assert lam1 / lam0 == pytest.approx(
            np.exp((params.beta - params.alpha) * 0.9), rel=1e-10)

    def test_mesh_convergence_order(self):
        errors = []
        for level in (4, 5, 6):
            lam = smallest_nonzero_eigenvalue(
                assemble(build_mesh("circle", level), P0))
            errors.append(abs(lam - 1.0))
        orders = [np.log2(a / b) for a, b in zip(errors, errors[1:])]
        assert min(orders) >= 1.9


class TestCollocationOracle:
    def test_weighted_circle_cross_check(self):
        params = WeightParams(1.0, 0.0)

        def u_arc(s):
            return 0.3 * np.cos(s)

        coll = circle_collocation_eigenvalues(2 * np.pi, u_arc, params,
                                              count=128)[1]
        fem = []
        for level in (6, 7, 8):
            mesh = build_mesh("circle", level).with_weight(
                lambda v: 0.3 * v[0])
            fem.append(smallest_nonzero_eigenvalue(assemble(mesh, params)))
        richardson = fem[-1] + (fem[-1] - fem[-2]) / 3.0
        assert abs(richardson - coll) <= 1e-6

    def test_unweighted_reduces_to_integers(self):
        vals = circle_collocation_eigenvalues(2 * np.pi, lambda s: 0.0, P0,
                                              count=64)
        assert np.allclose(vals[:4], [0.0, 1.0, 1.0, 4.0], atol=1e-10)


class TestHarmonicExtension:
    def test_flat_disk_linear(self):
        mesh = disk_mesh(5)
        psi = mesh.vertices[mesh.boundary_loop, 0]
        phi, _ = harmonic_extension_2d(mesh, P0, psi)
        assert np.max(np.abs(phi - mesh.vertices[:, 0])) <= 1e-6

    def test_hemisphere_exact_solution(self):
        mesh = hemisphere_mesh(5)
        loop = mesh.boundary_loop
        angle = np.arctan2(mesh.vertices[loop, 1], mesh.vertices[loop, 0])
        phi, _ = harmonic_extension_2d(mesh, P0, np.sin(angle))
        theta = np.arccos(np.clip(mesh.vertices[:, 2], -1.0, 1.0))
        ang = np.arctan2(mesh.vertices[:, 1], mesh.vertices[:, 0])
        exact = np.tan(theta / 2.0) * np.sin(ang)
        assert np.max(np.abs(phi - exact)) <= 5e-6

    def test_flux_recovery_on_hemisphere(self):
        # Exact solution has phi_nu = sin(angle) on the equator.
        mesh = hemisphere_mesh(5)
        loop = mesh.boundary_loop
        angle = np.arctan2(mesh.vertices[loop, 1], mesh.vertices[loop, 0])
        phi, a = harmonic_extension_2d(mesh, P0, np.sin(angle))
        flux = recover_normal_flux(mesh, a, phi)
        assert np.max(np.abs(flux - np.sin(angle))) <= 5e-3

    def test_segment_mesh_rejected(self):
        with pytest.raises(MeshNotTwoDim):
            harmonic_extension_2d(build_mesh("circle", 2), P0, None)


class TestProofChain:
    def test_classical_hemisphere_quantity(self):
        mesh = hemisphere_mesh(5)
        loop = mesh.boundary_loop
        angle = np.arctan2(mesh.vertices[loop, 1], mesh.vertices[loop, 0])
        result = proof_chain_inequality(mesh, P0, np.sin(angle), 1.0)
        # Analytically Q = K E - 2 T = pi - 2 pi = -pi.
        assert result["quantity"] == pytest.approx(-np.pi, abs=1e-4)
        assert result["energy"] == pytest.approx(np.pi, abs=1e-4)
        assert result["quantity"] <= 1e-4 * result["positive_scale"]

    def test_weighted_hemisphere_quantity(self):
        mesh = hemisphere_mesh(5).with_weight(lambda v: 0.2 * v[2] ** 2)
        loop = mesh.boundary_loop
        angle = np.arctan2(mesh.vertices[loop, 1], mesh.vertices[loop, 0])
        result = proof_chain_inequality(mesh, PW, np.sin(angle), 0.5)
        assert result["quantity"] <= 1e-4 * result["positive_scale"]


class TestCertificate:
    def equator(self, man):
        return Hypersurface(ambient=man, lower=(0.0,), upper=(2 * np.pi,),
                            periodic=(True,),
                            embedding=lambda s: [np.pi / 2 + 0.0 * s[0], s[0]])

    def test_classical_sphere(self):
        man = sphere_chart()
        cert = choi_wang_certificate(man, P0, self.equator(man),
                                     build_mesh("circle", 6))
        assert cert.passed
        assert cert.k_best == pytest.approx(1.0, abs=1e-10)
        assert cert.margin == pytest.approx(0.5, abs=1e-4)

    def test_not_d_minimal_rejected(self):
        man = sphere_chart(weight=height_weight(0.3))
        with pytest.raises(NotDMinimal):
            choi_wang_certificate(man, PW, self.equator(man),
                                  build_mesh("circle", 4))

    def test_nonpositive_k_rejected(self):
        from affconn.charts import euclidean_chart
        man = euclidean_chart(2)
        flat_line = Hypersurface(ambient=man, lower=(-0.5,), upper=(0.5,),
                                 periodic=(False,),
                                 embedding=lambda s: [s[0], 0.0 * s[0]])
        with pytest.raises(NonpositiveK):
            choi_wang_certificate(man, P0, flat_line, build_mesh("circle", 4))
