"""Connection coefficients: Levi-Civita, the weighted affine family, its dual.

The weighted family perturbs the Levi-Civita connection by the weight u and
two real parameters (alpha, beta):

    Gamma^D_k(i,j) = Gamma_k(i,j) + alpha (du_i d^k_j + du_j d^k_i)
                     + beta g_ij (grad u)^k

and the dual connection (with respect to e^{(alpha-beta)u} g) swaps the
roles of the two perturbation terms with opposite signs.
"""

from dataclasses import dataclass

import numpy as np

from . import algebra
from .charts import WeightParams  # noqa: F401  (re-exported for convenience)
from .dual import epsilon_part, exp, seed_axis, sqrt, value
from .errors import UnsupportedKind
from .tensors import LOWER, TensorValue

LEVI_CIVITA = "levi_civita"
WEIGHTED = "weighted"
DUAL = "dual"


@dataclass(frozen=True)
class ConnectionCoeffs:
    """Coefficients Gamma[k, i, j] of a torsion-free connection at a point."""

    point: tuple
    gamma: np.ndarray
    kind: str


def metric_derivatives(man, x):
    """dg[l][i][j] = d_l g_ij at ``x`` (generic scalars allowed)."""
    n = man.dim
    dg = []
    for axis in range(n):
        z, lvl = seed_axis(x, axis)
        gl = man.metric(z)
        dg.append([[epsilon_part(e, lvl) for e in row] for row in gl])
    return dg


def weight_gradient(man, x):
    """du_i at ``x`` (generic scalars allowed)."""
    out = []
    for axis in range(man.dim):
        z, lvl = seed_axis(x, axis)
        out.append(epsilon_part(man.weight(z), lvl))
    return out


def christoffel_generic(man, x):
    """Levi-Civita coefficients as a nested list, evaluable on dual points."""
    n = man.dim
    g = man.metric(x)
    gi = algebra.inv(g)
    dg = metric_derivatives(man, x)
    gamma = algebra.zeros(n, n, n)
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                acc = 0.0
                for l in range(n):
                    acc = acc + gi[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j])
                acc = 0.5 * acc
                gamma[k][i][j] = acc
                gamma[k][j][i] = acc
    return gamma


def affine_gamma_generic(man, params, x, kind=WEIGHTED):
    """Weighted or dual connection coefficients as a nested list."""
    n = man.dim
    gamma = christoffel_generic(man, x)
    if kind == LEVI_CIVITA or (params.alpha == 0.0 and params.beta == 0.0):
        return gamma
    g = man.metric(x)
    gi = algebra.inv(g)
    du = weight_gradient(man, x)
    grad_u = algebra.matvec(gi, du)
    if kind == WEIGHTED:
        c_sym, c_grad = params.alpha, params.beta
    elif kind == DUAL:
        c_sym, c_grad = -params.beta, -params.alpha
    else:
        raise UnsupportedKind(f"unknown connection kind {kind!r}")
    for k in range(n):
        for i in range(n):
            for j in range(n):
                term = c_grad * g[i][j] * grad_u[k]
                if k == j:
                    term = term + c_sym * du[i]
                if k == i:
                    term = term + c_sym * du[j]
                gamma[k][i][j] = gamma[k][i][j] + term
    return gamma


def gamma_field(man, params=None, kind=LEVI_CIVITA):
    """Callable point -> coefficients, for curvature differentiation."""
    if kind == LEVI_CIVITA:
        return lambda x: christoffel_generic(man, x)
    if params is None:
        raise ValueError("weighted/dual coefficients need connection parameters")
    return lambda x: affine_gamma_generic(man, params, x, kind)


def _as_coeffs(man, x, gamma, kind):
    man.require_admissible(x)
    arr = np.array([[[value(gamma[k][i][j]) for j in range(man.dim)]
                     for i in range(man.dim)] for k in range(man.dim)], dtype=float)
    return ConnectionCoeffs(point=tuple(float(c) for c in x), gamma=arr, kind=kind)


def christoffel_lc(man, x):
    """Levi-Civita connection coefficients at ``x``."""
    return _as_coeffs(man, x, christoffel_generic(man, list(x)), LEVI_CIVITA)


def affine_coeffs(man, params, x):
    """Weighted affine connection coefficients at ``x``."""
    return _as_coeffs(man, x, affine_gamma_generic(man, params, list(x), WEIGHTED), WEIGHTED)


def dual_coeffs(man, params, x):
    """Dual connection coefficients at ``x``."""
    return _as_coeffs(man, x, affine_gamma_generic(man, params, list(x), DUAL), DUAL)


def _field_jacobian(field, x, n):
    """dY[i][k] = d_i Y^k for a vector field given by coefficient functions."""
    jac = []
    for axis in range(n):
        z, lvl = seed_axis(x, axis)
        jac.append([epsilon_part(c, lvl) for c in field(z)])
    return jac


def covariant_derivative(man, gamma, X, Y, x):
    """(D_X Y)^k at ``x`` for connection coefficients ``gamma`` (nested list)."""
    n = man.dim
    xv = X(list(x))
    yv = Y(list(x))
    dY = _field_jacobian(Y, x, n)
    out = []
    for k in range(n):
        acc = 0.0
        for i in range(n):
            term = dY[i][k]
            for j in range(n):
                term = term + gamma[k][i][j] * yv[j]
            acc = acc + xv[i] * term
        out.append(acc)
    return out


def duality_residual(man, params, x, X, Y, Z, perturb=0.0):
    """Defect of the dual-pairing identity for the conformal metric.

    Checks X(gbar(Y,Z)) = gbar(D_X Y, Z) + gbar(Y, D*_X Z) with
    gbar = e^{(alpha-beta)u} g.  ``perturb`` adds an offset to one dual
    coefficient entry so tests can confirm the residual is sensitive.
    """
    man.require_admissible(x)
    n = man.dim
    e = params.conformal_exponent

    def pairing(z):
        g = man.metric(z)
        return exp(e * man.weight(z)) * algebra.quadratic_form(g, Y(z), Z(z))

    lhs = 0.0
    xv = X(list(x))
    for axis in range(n):
        z, lvl = seed_axis(x, axis)
        lhs = lhs + xv[axis] * epsilon_part(pairing(z), lvl)

    gamma_w = affine_gamma_generic(man, params, list(x), WEIGHTED)
    gamma_d = affine_gamma_generic(man, params, list(x), DUAL)
    if perturb:
        gamma_d[0][0][0] = gamma_d[0][0][0] + perturb
    dxy = covariant_derivative(man, gamma_w, X, Y, x)
    dxz = covariant_derivative(man, gamma_d, X, Z, x)
    g = man.metric(list(x))
    conf = exp(e * man.weight(list(x)))
    rhs = conf * (algebra.quadratic_form(g, dxy, Z(list(x)))
                  + algebra.quadratic_form(g, Y(list(x)), dxz))
    return abs(value(lhs) - value(rhs))


def _conformal_metric(man, params, z):
    g = man.metric(z)
    c = exp(params.conformal_exponent * man.weight(z))
    return [[c * e for e in row] for row in g]


def amari_chentsov(man, params, x):
    """Cubic tensor C(X,Y,Z) = (D_X gbar)(Y,Z), computed from coefficients."""
    man.require_admissible(x)
    n = man.dim
    gamma = affine_gamma_generic(man, params, list(x), WEIGHTED)
    gbar = _conformal_metric(man, params, list(x))
    dgbar = []
    for axis in range(n):
        z, lvl = seed_axis(x, axis)
        gl = _conformal_metric(man, params, z)
        dgbar.append([[epsilon_part(e, lvl) for e in row] for row in gl])
    c = np.empty((n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                acc = dgbar[i][j][k]
                for m in range(n):
                    acc = acc - gbar[m][k] * gamma[m][i][j] - gbar[j][m] * gamma[m][i][k]
                c[i, j, k] = value(acc)
    return TensorValue(c, (LOWER, LOWER, LOWER))


def amari_chentsov_closed_form(man, params, x):
    """Fully symmetric closed form -(alpha+beta) * sym(du (x) gbar)."""
    man.require_admissible(x)
    n = man.dim
    du = [value(d) for d in weight_gradient(man, list(x))]
    gbar = [[value(e) for e in row] for row in _conformal_metric(man, params, list(x))]
    s = -(params.alpha + params.beta)
    c = np.empty((n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c[i, j, k] = s * (du[i] * gbar[j][k]
                                  + du[k] * gbar[i][j]
                                  + du[j] * gbar[i][k])
    return TensorValue(c, (LOWER, LOWER, LOWER))


def equiaffine_residual(man, params, x, X, tau_shift=0.0):
    """Defect of parallelism of the volume form V^tau sqrt(det g) dx.

    Computed in the coordinate frame: (D_X mu)(e_1,...,e_n) =
    X(mu(e_1..e_n)) - sum_i mu(e_1,...,D_X e_i,...,e_n).  ``tau_shift``
    offsets the exponent for sensitivity tests.
    """
    man.require_admissible(x)
    n = man.dim
    tau = params.tau(n) + tau_shift

    def density(z):
        return exp(tau * man.weight(z)) * sqrt(algebra.det(man.metric(z)))

    xv = X(list(x))
    deriv = 0.0
    for axis in range(n):
        z, lvl = seed_axis(x, axis)
        deriv = deriv + xv[axis] * epsilon_part(density(z), lvl)

    gamma = affine_gamma_generic(man, params, list(x), WEIGHTED)
    trace = 0.0
    for j in range(n):
        for i in range(n):
            trace = trace + xv[j] * gamma[i][j][i]
    return abs(value(deriv) - value(density(list(x)) * trace))
