"""Small dense linear algebra over generic scalars.

Matrices are nested lists whose entries may be floats, numpy arrays, or
:class:`~affconn.dual.Dual` values, so the same code path serves plain
evaluation, vectorized quadrature, and dual-number differentiation.
Dimensions here never exceed 4, so cofactor expansion is fine.
"""

from .dual import sqrt


def dot(u, v):
    out = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        out = out + a * b
    return out


def matvec(m, v):
    return [dot(row, v) for row in m]


def quadratic_form(m, u, v):
    return dot(u, matvec(m, v))


def det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    total = 0.0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def inv(m):
    """Matrix inverse via the adjugate; safe for SPD metrics (det > 0)."""
    n = len(m)
    d = det(m)
    if n == 1:
        return [[1.0 / d]]
    cof = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[m[r][c] for c in range(n) if c != j]
                     for r in range(n) if r != i]
            s = det(minor)
            cof[j][i] = s / d if (i + j) % 2 == 0 else -s / d
    return cof


def norm(g, v):
    """g-norm of a vector."""
    return sqrt(quadratic_form(g, v, v))


def cross(u, v):
    return [u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0]]


def identity(n):
    return [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]


def zeros(*shape):
    if len(shape) == 1:
        return [0.0] * shape[0]
    return [zeros(*shape[1:]) for _ in range(shape[0])]
