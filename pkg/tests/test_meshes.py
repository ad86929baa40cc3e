"""Mesh generators: combinatorics, geometry, and export format."""

import io

import numpy as np
import pytest

from affconn.errors import DegenerateCell, UnsupportedKind
from affconn.meshes import (build_mesh, cell_measures, check_closed,
                            check_nondegenerate, circle_mesh, disk_mesh,
                            export_mesh, hemisphere_mesh, icosphere)


class TestClosedMeshes:
    def test_circle_level_0(self):
        mesh = build_mesh("circle", 0)
        assert len(mesh.cells) == 16
        assert check_closed(mesh)

    @pytest.mark.parametrize("level,verts,cells", [(0, 12, 20), (2, 162, 320)])
    def test_icosphere_counts(self, level, verts, cells):
        mesh = build_mesh("icosphere", level)
        assert len(mesh.vertices) == verts
        assert len(mesh.cells) == cells
        assert check_closed(mesh)

    def test_icosphere_vertices_on_sphere(self):
        mesh = icosphere(3, radius=2.0)
        radii = np.linalg.norm(mesh.vertices, axis=1)
        assert np.allclose(radii, 2.0, atol=1e-12)

    def test_sphere_area_converges(self):
        area = np.sum(cell_measures(icosphere(4)))
        assert area == pytest.approx(4 * np.pi, rel=2e-3)

    def test_circle_length(self):
        length = np.sum(cell_measures(circle_mesh(5)))
        assert length == pytest.approx(2 * np.pi, rel=1e-4)

    def test_unknown_kind(self):
        with pytest.raises(UnsupportedKind):
            build_mesh("torus", 1)


class TestOpenMeshes:
    def test_disk_boundary_loop(self):
        mesh = disk_mesh(2)
        # Boundary edges appear once, interior edges twice.
        counts = {}
        for a, b, c in mesh.cells:
            for e in ((a, b), (b, c), (c, a)):
                key = tuple(sorted(e))
                counts[key] = counts.get(key, 0) + 1
        boundary_edges = [e for e, k in counts.items() if k == 1]
        assert len(boundary_edges) == len(mesh.boundary_loop)
        assert set(v for e in boundary_edges for v in e) == set(mesh.boundary_loop)

    def test_disk_area(self):
        assert np.sum(cell_measures(disk_mesh(3))) == pytest.approx(
            np.pi, rel=2e-3)

    def test_disk_positive_orientation(self):
        mesh = disk_mesh(2)
        v = mesh.vertices
        e1 = v[mesh.cells[:, 1]] - v[mesh.cells[:, 0]]
        e2 = v[mesh.cells[:, 2]] - v[mesh.cells[:, 0]]
        signed = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
        assert np.min(signed) > 0

    def test_hemisphere_area(self):
        assert np.sum(cell_measures(hemisphere_mesh(4))) == pytest.approx(
            2 * np.pi, rel=2e-3)

    def test_hemisphere_boundary_on_equator(self):
        mesh = hemisphere_mesh(3)
        z = mesh.vertices[mesh.boundary_loop, 2]
        assert np.max(np.abs(z)) <= 1e-12


class TestQuality:
    def test_nondegenerate(self):
        for mesh in (circle_mesh(2), icosphere(2), disk_mesh(2)):
            assert check_nondegenerate(mesh)

    def test_degenerate_detected(self):
        mesh = disk_mesh(1)
        mesh.vertices[1] = mesh.vertices[2]
        with pytest.raises(DegenerateCell):
            check_nondegenerate(mesh)

    def test_with_weight_samples_vertices(self):
        mesh = icosphere(1).with_weight(lambda v: 0.2 * v[2] ** 2)
        assert mesh.u == pytest.approx(0.2 * mesh.vertices[:, 2] ** 2)


class TestExport:
    def test_roundtrippable_text_dump(self):
        mesh = circle_mesh(0).with_weight(lambda v: v[0])
        buf = io.StringIO()
        export_mesh(mesh, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "vertices 16 2"
        assert lines[17] == "cells 16 2"
        assert lines[34] == "weights 16"
        # 17 significant digits reproduce the float64 values exactly.
        x0 = float(lines[1].split()[0])
        assert x0 == mesh.vertices[0, 0]
