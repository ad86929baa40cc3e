"""Affine differential operators and hypersurface extrinsic geometry.

Scalar operators follow the weighted definitions (V = e^u):

    grad^D f = V^{beta-alpha} grad f
    Hess^D f = V^{beta-alpha} (Hess f + beta du (x) df + beta df (x) du
                               + alpha g(grad u, grad f) g)
    Lap^D f  = V^{beta-alpha} (Lap f + (m alpha + 2 beta) g(grad u, grad f))

with m the dimension the operator acts on (the ambient dimension, or the
hypersurface dimension for induced operators).  The boundary integral
identity relating bulk Bochner-type terms to second-fundamental-form
terms is verified by tensor-product Gauss quadrature.
"""

from dataclasses import dataclass, field

import numpy as np

from . import algebra
from .charts import eval_metric
from .connections import (WEIGHTED, affine_gamma_generic, christoffel_generic,
                          weight_gradient)
from .curvature import ricci_generic, scalar_hessian_lc
from .dual import epsilon_part, exp, seed_axis, sqrt, value
from .errors import DegenerateJacobian, QuadratureUnderResolved
from .tensors import LOWER, TensorValue


def _scalar_gradient(man, f, x):
    out = []
    for axis in range(man.dim):
        z, lvl = seed_axis(x, axis)
        out.append(epsilon_part(f(z), lvl))
    return out


def grad_D(man, params, phi, x):
    """Affine gradient V^{beta-alpha} g^{ij} d_j phi (contravariant)."""
    man.require_admissible(x)
    gi = algebra.inv(man.metric(list(x)))
    dphi = _scalar_gradient(man, phi, list(x))
    scale = exp((params.beta - params.alpha) * man.weight(list(x)))
    return np.array([value(scale * c) for c in algebra.matvec(gi, dphi)])


def hess_D_generic(man, params, phi, x):
    """Affine Hessian as a nested list; evaluable on dual/array points."""
    n = man.dim
    g = man.metric(list(x))
    gi = algebra.inv(g)
    hess = scalar_hessian_lc(man, phi, list(x))
    du = weight_gradient(man, list(x))
    dphi = _scalar_gradient(man, phi, list(x))
    cross = algebra.quadratic_form(gi, du, dphi)
    scale = exp((params.beta - params.alpha) * man.weight(list(x)))
    a, b = params.alpha, params.beta
    out = algebra.zeros(n, n)
    for i in range(n):
        for j in range(n):
            out[i][j] = scale * (hess[i][j]
                                 + b * (du[i] * dphi[j] + dphi[i] * du[j])
                                 + a * cross * g[i][j])
    return out


def hess_D(man, params, phi, x):
    """Affine Hessian at ``x`` as a symmetric (0,2) tensor."""
    man.require_admissible(x)
    h = hess_D_generic(man, params, phi, x)
    n = man.dim
    return TensorValue([[value(h[i][j]) for j in range(n)] for i in range(n)],
                       (LOWER, LOWER))


def lap_D_generic(man, params, phi, x, m=None):
    """Affine Laplacian; ``m`` overrides the dimension coefficient."""
    n = man.dim
    if m is None:
        m = n
    g = man.metric(list(x))
    gi = algebra.inv(g)
    hess = scalar_hessian_lc(man, phi, list(x))
    du = weight_gradient(man, list(x))
    dphi = _scalar_gradient(man, phi, list(x))
    lap = 0.0
    for i in range(n):
        for j in range(n):
            lap = lap + gi[i][j] * hess[i][j]
    drift = algebra.quadratic_form(gi, du, dphi)
    scale = exp((params.beta - params.alpha) * man.weight(list(x)))
    return scale * (lap + (m * params.alpha + 2.0 * params.beta) * drift)


def lap_D(man, params, phi, x, m=None):
    man.require_admissible(x)
    return value(lap_D_generic(man, params, phi, x, m=m))


# ---------------------------------------------------------------------------
# Hypersurfaces.


@dataclass(frozen=True)
class Hypersurface:
    """Parametrized codimension-1 submanifold of a chart.

    ``embedding`` maps a parameter point (length ``ambient.dim - 1``) to
    ambient chart coordinates and must be evaluable on lifted parameters.
    ``orientation`` flips the unit normal; scenario builders pick the sign
    that makes it outward for the region they bound.
    """

    ambient: object
    lower: tuple
    upper: tuple
    periodic: tuple
    embedding: object
    orientation: float = 1.0
    name: str = ""

    @property
    def pdim(self):
        return self.ambient.dim - 1


def _tangent_frame(hyp, s):
    """Ambient components of d(embedding)/d(parameter_a), generic scalars."""
    n = hyp.ambient.dim
    tangents = []
    for a in range(hyp.pdim):
        z, lvl = seed_axis(list(s), a)
        emb = hyp.embedding(z)
        tangents.append([epsilon_part(emb[k], lvl) for k in range(n)])
    return tangents


def _normal_generic(hyp, s):
    """Unit normal in ambient components at parameter point ``s``."""
    n = hyp.ambient.dim
    x = hyp.embedding(list(s))
    g = hyp.ambient.metric(x)
    tangents = _tangent_frame(hyp, s)
    if n == 2:
        t = tangents[0]
        w = [t[1], -t[0]]
    elif n == 3:
        w = algebra.cross(tangents[0], tangents[1])
    else:
        raise DegenerateJacobian(f"normal computation unsupported for dim {n}")
    nu = algebra.matvec(algebra.inv(g), w)
    norm = algebra.norm(g, nu)
    return [hyp.orientation * c / norm for c in nu]


@dataclass(frozen=True)
class ExtrinsicData:
    """Second fundamental form and mean curvature, plain and affine."""

    induced_metric: np.ndarray
    second_fundamental: np.ndarray   # II(X_a, X_b) = g(nabla_{X_a} nu, X_b)
    mean_curvature: float
    second_fundamental_affine: np.ndarray
    mean_curvature_affine: float
    normal_weight_derivative: float  # du(nu)


def _extrinsic_generic(hyp, params, s):
    n = hyp.ambient.dim
    m = hyp.pdim
    man = hyp.ambient
    x = hyp.embedding(list(s))
    g = man.metric(x)
    tangents = _tangent_frame(hyp, s)
    # Gram matrix of the pushforward = induced metric on parameters.
    gs = [[algebra.quadratic_form(g, tangents[a], tangents[b])
           for b in range(m)] for a in range(m)]
    # Ambient covariant derivative of the unit normal along each tangent.
    dnu = []
    for a in range(m):
        z, lvl = seed_axis(list(s), a)
        nu_l = _normal_generic(hyp, z)
        dnu.append([epsilon_part(c, lvl) for c in nu_l])
    nu = _normal_generic(hyp, s)
    gamma = christoffel_generic(man, x)
    two_ff = algebra.zeros(m, m)
    for a in range(m):
        cov = []
        for k in range(n):
            acc = dnu[a][k]
            for i in range(n):
                for j in range(n):
                    acc = acc + gamma[k][i][j] * tangents[a][i] * nu[j]
            cov.append(acc)
        for b in range(m):
            two_ff[a][b] = algebra.dot(algebra.matvec(g, cov), tangents[b])
    gs_inv = algebra.inv(gs)
    h = 0.0
    for a in range(m):
        for b in range(m):
            h = h + gs_inv[a][b] * two_ff[a][b]
    du = weight_gradient(man, x)
    u_nu = algebra.dot(du, nu)
    return gs, two_ff, h, u_nu


def second_fundamental(hyp, params, s):
    """Extrinsic data of the hypersurface at parameter point ``s``."""
    m = hyp.pdim
    # A rank-deficient Jacobian surfaces as inf/nan here; the rank check
    # below converts that into the dedicated error.
    with np.errstate(divide="ignore", invalid="ignore"):
        gs, two_ff, h, u_nu = _extrinsic_generic(hyp, params, list(s))
    gs_v = np.array([[value(gs[a][b]) for b in range(m)] for a in range(m)])
    if np.linalg.matrix_rank(gs_v, tol=1e-10) < m:
        raise DegenerateJacobian(f"embedding Jacobian rank deficient at {tuple(s)}")
    ii = np.array([[value(two_ff[a][b]) for b in range(m)] for a in range(m)])
    h = float(value(h))
    u_nu = float(value(u_nu))
    n = hyp.ambient.dim
    ii_aff = ii - params.beta * u_nu * gs_v
    h_aff = h + (n - 1) * params.alpha * u_nu
    return ExtrinsicData(induced_metric=gs_v, second_fundamental=ii,
                         mean_curvature=h, second_fundamental_affine=ii_aff,
                         mean_curvature_affine=h_aff,
                         normal_weight_derivative=u_nu)


def _param_grid(hyp, per_axis=32):
    axes = []
    for a in range(hyp.pdim):
        lo, hi = hyp.lower[a], hyp.upper[a]
        if hyp.periodic[a]:
            pts = np.linspace(lo, hi, per_axis, endpoint=False)
        else:
            pts = np.linspace(lo, hi, per_axis + 2)[1:-1]
        axes.append(pts)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def d_minimal_residual(hyp, params, per_axis=32):
    """max |H^D| over a parameter grid; ~0 certifies D-minimality."""
    worst = 0.0
    for s in _param_grid(hyp, per_axis):
        data = second_fundamental(hyp, params, s)
        worst = max(worst, abs(data.mean_curvature_affine))
    return worst


# ---------------------------------------------------------------------------
# Regions and the integral identity.


@dataclass(frozen=True)
class DomainRegion:
    """Coordinate sub-box of a chart, with its boundary hypersurface."""

    ambient: object
    lower: tuple
    upper: tuple
    boundary: Hypersurface
    grid: int = 64           # quadrature cells per axis (bulk)
    order: int = 8           # Gauss points per cell per axis
    boundary_grid: int = 64
    name: str = ""

    def validate_orientation(self, eps=1e-4):
        """Inward-offset test: x - eps*nu must stay inside the box."""
        mid = [0.5 * (lo + hi) for lo, hi in
               zip(self.boundary.lower, self.boundary.upper)]
        x = [value(c) for c in self.boundary.embedding(mid)]
        nu = [value(c) for c in _normal_generic(self.boundary, mid)]
        for i in range(self.ambient.dim):
            xi = x[i] - eps * nu[i]
            if not self.ambient.periodic[i] and not (self.lower[i] - 1e-12 <= xi <= self.upper[i] + 1e-12):
                return False
        return True


def _gauss_axis(lo, hi, cells, order):
    """Composite Gauss-Legendre nodes/weights on [lo, hi]."""
    xg, wg = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, cells + 1)
    h = np.diff(edges)
    nodes = (edges[:-1, None] + 0.5 * h[:, None] * (xg[None, :] + 1.0)).ravel()
    weights = (0.5 * h[:, None] * wg[None, :]).ravel()
    return nodes, weights


def bulk_quadrature(region, grid=None, order=None):
    """Tensor-product nodes (list of coord arrays) and combined weights."""
    grid = region.grid if grid is None else grid
    order = region.order if order is None else order
    axes, wts = [], []
    for i in range(region.ambient.dim):
        nodes, weights = _gauss_axis(region.lower[i], region.upper[i], grid, order)
        axes.append(nodes)
        wts.append(weights)
    mesh = np.meshgrid(*axes, indexing="ij")
    wmesh = np.meshgrid(*wts, indexing="ij")
    coords = [m.ravel() for m in mesh]
    weights = np.ones_like(coords[0])
    for w in wmesh:
        weights = weights * w.ravel()
    return coords, weights


def boundary_quadrature(region, grid=None, order=None):
    grid = region.boundary_grid if grid is None else grid
    order = region.order if order is None else order
    hyp = region.boundary
    axes, wts = [], []
    for a in range(hyp.pdim):
        nodes, weights = _gauss_axis(hyp.lower[a], hyp.upper[a], grid, order)
        axes.append(nodes)
        wts.append(weights)
    mesh = np.meshgrid(*axes, indexing="ij")
    wmesh = np.meshgrid(*wts, indexing="ij")
    coords = [m.ravel() for m in mesh]
    weights = np.ones_like(coords[0])
    for w in wmesh:
        weights = weights * w.ravel()
    return coords, weights


@dataclass(frozen=True)
class IntegralIdentityResult:
    lhs: float
    rhs: float
    residual: float
    detail: dict = field(default_factory=dict)


def _bulk_integrand(region, params, phi, coords):
    """V^tau ((Lap^D phi)^2 - |Hess^D phi|^2_g - Ric^D(grad^D, grad^D))."""
    man = region.ambient
    n = man.dim
    x = list(coords)
    g = man.metric(x)
    gi = algebra.inv(g)
    tau = params.tau(n)
    u = man.weight(x)
    vtau = exp(tau * u)
    scale = exp((params.beta - params.alpha) * u)

    lap = lap_D_generic(man, params, phi, x)
    hess = hess_D_generic(man, params, phi, x)
    # g-Frobenius norm squared of the affine Hessian.
    hess_up = [[sum(gi[i][a] * hess[a][b] * gi[b][j] for a in range(n) for b in range(n))
                for j in range(n)] for i in range(n)]
    hess_sq = 0.0
    for i in range(n):
        for j in range(n):
            hess_sq = hess_sq + hess[i][j] * hess_up[i][j]

    dphi = _scalar_gradient(man, phi, x)
    grad_d = [scale * c for c in algebra.matvec(gi, dphi)]
    ric = ricci_generic(man, lambda z: affine_gamma_generic(man, params, z, WEIGHTED), x)
    ric_term = algebra.quadratic_form(ric, grad_d, grad_d)

    dens = sqrt(algebra.det(g))
    return value(vtau * (lap * lap - hess_sq - ric_term) * dens)


def _boundary_integrand(region, params, phi, svals):
    """Boundary terms of the identity, with the induced area density."""
    hyp = region.boundary
    man = region.ambient
    n = man.dim
    m = hyp.pdim
    tau = params.tau(n)
    s = list(svals)

    def at(sq):
        return hyp.embedding(sq)

    def u_of(sq):
        return man.weight(at(sq))

    def phi_of(sq):
        return phi(at(sq))

    def phi_nu_of(sq):
        x = at(sq)
        g = man.metric(x)
        gi = algebra.inv(g)
        dphi = _scalar_gradient(man, phi, x)
        nu = _normal_generic(hyp, sq)
        # g(grad phi, nu) = dphi_k nu^k since dphi is already covariant.
        return algebra.dot(dphi, nu)

    def vb_phi_nu_of(sq):
        return exp(params.beta * u_of(sq)) * phi_nu_of(sq)

    x = at(s)
    u = u_of(s)
    vtau = exp(tau * u)
    scale = exp((params.beta - params.alpha) * u)  # V^{beta-alpha}

    data_gs, two_ff, h_plain, u_nu = _extrinsic_generic(hyp, params, s)
    gs_inv = algebra.inv(data_gs)
    ii_aff = [[two_ff[a][b] - params.beta * u_nu * data_gs[a][b]
               for b in range(m)] for a in range(m)]
    h_aff = 0.0
    for a in range(m):
        for b in range(m):
            h_aff = h_aff + gs_inv[a][b] * two_ff[a][b]
    h_aff = h_aff + (n - 1) * params.alpha * u_nu

    # Tangential derivatives of boundary scalars, in parameter components.
    def param_grad(fn):
        out = []
        for a in range(m):
            z, lvl = seed_axis(s, a)
            out.append(epsilon_part(fn(z), lvl))
        return out

    dpsi = param_grad(phi_of)
    dflux = param_grad(vb_phi_nu_of)
    phi_nu = phi_nu_of(s)

    # Raise one slot with the induced metric for the pairings below.
    dpsi_up = algebra.matvec(gs_inv, dpsi)

    term_h = h_aff * (scale * phi_nu) ** 2
    term_ii = 0.0
    for a in range(m):
        for b in range(m):
            term_ii = term_ii + ii_aff[a][b] * (scale * dpsi_up[a]) * (scale * dpsi_up[b])
    pairing = 0.0
    for a in range(m):
        pairing = pairing + dpsi_up[a] * dflux[a]
    term_mixed = 2.0 * exp(-params.beta * u) * scale * scale * pairing

    dens = sqrt(algebra.det(data_gs))
    return value(vtau * (term_h + term_ii - term_mixed) * dens)


def reilly_residual(region, params, phi, grid=None, order=None,
                    boundary_grid=None):
    """Both sides of the weighted integral identity and their mismatch."""
    coords, wts = bulk_quadrature(region, grid, order)
    lhs = float(np.sum(wts * _bulk_integrand(region, params, phi, coords)))
    bcoords, bwts = boundary_quadrature(region, boundary_grid, order)
    rhs = float(np.sum(bwts * _boundary_integrand(region, params, phi, bcoords)))
    residual = abs(lhs - rhs) / (1.0 + abs(lhs) + abs(rhs))
    return IntegralIdentityResult(lhs=lhs, rhs=rhs, residual=residual)


def reilly_refinement(region, params, phi, grids, order=1):
    """Residuals across bulk/boundary grid refinements, plus observed orders.

    Raises :class:`QuadratureUnderResolved` if the residual fails to
    decrease across the supplied grids.
    """
    residuals = []
    for grid in grids:
        res = reilly_residual(region, params, phi, grid=grid, order=order,
                              boundary_grid=grid)
        residuals.append(res.residual)
    orders = []
    for a, b in zip(residuals, residuals[1:]):
        if b <= 0 or a <= 0:
            orders.append(np.inf)
        else:
            orders.append(np.log2(a / b))
    if residuals[-1] > residuals[0]:
        raise QuadratureUnderResolved(
            f"residuals {residuals} not decreasing under refinement")
    return residuals, orders
