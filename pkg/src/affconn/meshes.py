"""Simplicial meshes of closed curves, spheres, disks, and hemispheres.

Vertices live in Euclidean embedding space (R^2 or R^3); segment lengths
and triangle areas of the embedded simplices supply the induced metric to
the finite element assembly.  All generators are deterministic.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateCell, UnsupportedKind

_PHI = (1.0 + np.sqrt(5.0)) / 2.0

_ICO_VERTS = np.array([
    [-1.0, _PHI, 0.0], [1.0, _PHI, 0.0], [-1.0, -_PHI, 0.0], [1.0, -_PHI, 0.0],
    [0.0, -1.0, _PHI], [0.0, 1.0, _PHI], [0.0, -1.0, -_PHI], [0.0, 1.0, -_PHI],
    [_PHI, 0.0, -1.0], [_PHI, 0.0, 1.0], [-_PHI, 0.0, -1.0], [-_PHI, 0.0, 1.0],
])

_ICO_FACES = np.array([
    [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
    [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
    [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
    [5, 4, 9], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
])


@dataclass
class SurfaceMesh:
    """Simplicial mesh with optional per-vertex weight samples."""

    vertices: np.ndarray              # (V, 2) or (V, 3) embedded coordinates
    cells: np.ndarray                 # (C, 2) segments or (C, 3) triangles
    u: np.ndarray = None              # weight u at vertices
    boundary_loop: np.ndarray = None  # ordered boundary vertex ids (open meshes)
    name: str = ""

    @property
    def cell_dim(self):
        return self.cells.shape[1] - 1

    def with_weight(self, u_fn):
        """Copy with u sampled at the vertices by ``u_fn(vertex) -> float``."""
        u = np.array([float(u_fn(v)) for v in self.vertices])
        return SurfaceMesh(vertices=self.vertices, cells=self.cells, u=u,
                           boundary_loop=self.boundary_loop, name=self.name)


def build_mesh(kind, level, radius=1.0):
    """Closed mesh generator: ``circle`` (segments) or ``icosphere`` (triangles)."""
    if kind == "circle":
        return circle_mesh(level, radius=radius)
    if kind == "icosphere":
        return icosphere(level, radius=radius)
    raise UnsupportedKind(f"unknown mesh kind {kind!r}")


def circle_mesh(level, radius=1.0):
    """Uniform closed polygon with 2^(level+4) segments."""
    if level < 0:
        raise ValueError("level must be >= 0")
    count = 2 ** (level + 4)
    angles = 2.0 * np.pi * np.arange(count) / count
    vertices = radius * np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    cells = np.stack([np.arange(count), (np.arange(count) + 1) % count], axis=-1)
    return SurfaceMesh(vertices=vertices, cells=cells,
                       u=np.zeros(count), name=f"circle-{level}")


def icosphere(level, radius=1.0):
    """Icosahedron subdivided ``level`` times, vertices projected to the sphere."""
    if level < 0:
        raise ValueError("level must be >= 0")
    verts = [v / np.linalg.norm(v) for v in _ICO_VERTS]
    faces = [tuple(f) for f in _ICO_FACES]
    for _ in range(level):
        midpoint = {}
        new_faces = []

        def mid(a, b):
            key = (a, b) if a < b else (b, a)
            if key not in midpoint:
                m = verts[a] + verts[b]
                verts.append(m / np.linalg.norm(m))
                midpoint[key] = len(verts) - 1
            return midpoint[key]

        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    vertices = radius * np.array(verts)
    cells = np.array(faces, dtype=int)
    return SurfaceMesh(vertices=vertices, cells=cells,
                       u=np.zeros(len(verts)), name=f"icosphere-{level}")


def disk_mesh(level, radius=1.0):
    """Shape-regular triangulation of the disk: ring j carries 6j vertices.

    Returns a mesh whose ``boundary_loop`` lists the outer ring in order.
    """
    rings = 2 ** level * 4
    verts = [(0.0, 0.0)]
    ring_start = [0]
    for j in range(1, rings + 1):
        ring_start.append(len(verts))
        r = radius * j / rings
        for k in range(6 * j):
            a = 2.0 * np.pi * k / (6 * j)
            verts.append((r * np.cos(a), r * np.sin(a)))
    cells = []
    # Innermost fan around the center.
    for k in range(6):
        cells.append((0, 1 + k, 1 + (k + 1) % 6))
    # Between ring j (inner, 6j verts) and ring j+1 (outer, 6(j+1) verts):
    # walk each of the 6 sectors, zig-zagging j inner and j+1 outer nodes.
    for j in range(1, rings):
        inner0, outer0 = ring_start[j], ring_start[j + 1]
        ni, no = 6 * j, 6 * (j + 1)
        for sector in range(6):
            ii = sector * j          # index within inner ring
            oo = sector * (j + 1)    # index within outer ring
            for step in range(j):
                cells.append((inner0 + (ii + step) % ni,
                              outer0 + (oo + step) % no,
                              outer0 + (oo + step + 1) % no))
                cells.append((inner0 + (ii + step) % ni,
                              outer0 + (oo + step + 1) % no,
                              inner0 + (ii + step + 1) % ni))
            cells.append((inner0 + (ii + j) % ni,
                          outer0 + (oo + j) % no,
                          outer0 + (oo + j + 1) % no))
    vertices = np.array(verts)
    boundary = np.arange(ring_start[rings], len(verts))
    return SurfaceMesh(vertices=vertices, cells=np.array(cells, dtype=int),
                       u=np.zeros(len(verts)), boundary_loop=boundary,
                       name=f"disk-{level}")


def hemisphere_mesh(level, radius=1.0):
    """Disk mesh mapped onto the upper unit hemisphere (polar-linear map)."""
    disk = disk_mesh(level, radius=1.0)
    xy = disk.vertices
    r = np.linalg.norm(xy, axis=1)
    theta = r * (np.pi / 2.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        direction = np.where(r[:, None] > 0, xy / np.maximum(r, 1e-300)[:, None], 0.0)
    s, z = np.sin(theta), np.cos(theta)
    vertices = radius * np.stack([s * direction[:, 0], s * direction[:, 1], z], axis=-1)
    return SurfaceMesh(vertices=vertices, cells=disk.cells,
                       u=np.zeros(len(vertices)), boundary_loop=disk.boundary_loop,
                       name=f"hemisphere-{level}")


def cell_measures(mesh):
    """Lengths (segments) or areas (triangles) of all cells."""
    v = mesh.vertices
    c = mesh.cells
    if mesh.cell_dim == 1:
        return np.linalg.norm(v[c[:, 1]] - v[c[:, 0]], axis=1)
    e1 = v[c[:, 1]] - v[c[:, 0]]
    e2 = v[c[:, 2]] - v[c[:, 0]]
    if v.shape[1] == 2:
        return 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    return 0.5 * np.linalg.norm(np.cross(e1, e2), axis=1)


def check_closed(mesh):
    """True iff every facet is shared by exactly two cells."""
    facets = {}
    for cell in mesh.cells:
        if mesh.cell_dim == 1:
            keys = [(cell[0],), (cell[1],)]
        else:
            keys = [tuple(sorted((cell[i], cell[(i + 1) % 3]))) for i in range(3)]
        for k in keys:
            facets[k] = facets.get(k, 0) + 1
    return all(count == 2 for count in facets.values())


def check_nondegenerate(mesh, tol=1e-14):
    measures = cell_measures(mesh)
    if np.min(measures) <= tol:
        raise DegenerateCell(f"smallest cell measure {np.min(measures)}")
    return True


def export_mesh(mesh, stream):
    """Plain-text dump: vertex table then cell table, 17 significant digits."""
    stream.write(f"vertices {len(mesh.vertices)} {mesh.vertices.shape[1]}\n")
    for v in mesh.vertices:
        stream.write(" ".join(f"{c:.17g}" for c in v) + "\n")
    stream.write(f"cells {len(mesh.cells)} {mesh.cells.shape[1]}\n")
    for c in mesh.cells:
        stream.write(" ".join(str(int(i)) for i in c) + "\n")
    if mesh.u is not None:
        stream.write(f"weights {len(mesh.u)}\n")
        for w in mesh.u:
            stream.write(f"{w:.17g}\n")
