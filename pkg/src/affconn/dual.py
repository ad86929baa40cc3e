"""Forward-mode automatic differentiation via level-tagged dual numbers.

A :class:`Dual` carries a value, a derivative seed, and a level tag.  Each
lift allocates a fresh level, so simultaneous lifts of different (or the
same) coordinates never confuse their infinitesimals; mixed and repeated
partials up to third order are exact.  Components may be floats, numpy
arrays (for vectorized evaluation over many points at once), or further
``Dual`` instances.  All chart, weight, and field functions in this
library are written against the generic math functions below (``sin``,
``exp``, ...) so they evaluate transparently on lifted coordinates.
"""

import itertools

import numpy as np

from .errors import OrderUnsupported

MAX_ORDER = 3

_levels = itertools.count(1)


class Dual:
    """Number a + b*eps_lvl with eps**2 = 0; levels keep lifts independent."""

    __slots__ = ("a", "b", "lvl")
    # Keep numpy from broadcasting elementwise over Dual operands.
    __array_ufunc__ = None

    def __init__(self, a, b, lvl):
        self.a = a
        self.b = b
        self.lvl = lvl

    def __add__(self, other):
        if isinstance(other, Dual):
            if other.lvl == self.lvl:
                return Dual(self.a + other.a, self.b + other.b, self.lvl)
            if other.lvl > self.lvl:
                return Dual(other.a + self, other.b, other.lvl)
        return Dual(self.a + other, self.b, self.lvl)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Dual):
            if other.lvl == self.lvl:
                return Dual(self.a * other.a,
                            self.a * other.b + self.b * other.a, self.lvl)
            if other.lvl > self.lvl:
                return Dual(other.a * self, other.b * self, other.lvl)
        return Dual(self.a * other, self.b * other, self.lvl)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            if other.lvl == self.lvl:
                return Dual(self.a / other.a,
                            (self.b * other.a - self.a * other.b)
                            / (other.a * other.a), self.lvl)
            if other.lvl > self.lvl:
                return Dual(self / other.a,
                            -self * other.b / (other.a * other.a), other.lvl)
        return Dual(self.a / other, self.b / other, self.lvl)

    def __rtruediv__(self, other):
        return Dual(other / self.a, -other * self.b / (self.a * self.a), self.lvl)

    def __neg__(self):
        return Dual(-self.a, -self.b, self.lvl)

    def __pos__(self):
        return self

    def __pow__(self, p):
        # Small integer powers via repeated multiplication (exact at zeros).
        if isinstance(p, int) and 0 <= p <= 4:
            out = 1.0
            for _ in range(p):
                out = out * self
            return out
        return Dual(self.a ** p, p * self.a ** (p - 1.0) * self.b, self.lvl)

    def __repr__(self):
        return f"Dual({self.a!r}, {self.b!r}, lvl={self.lvl})"


def value(x):
    """Strip all dual layers, returning the underlying float/array."""
    while isinstance(x, Dual):
        x = x.a
    return x


def seed_axis(x, axis):
    """Lift coordinate ``axis`` of point ``x`` at a fresh level.

    Returns the lifted point (a new list) and the level tag used to
    extract the matching derivative with :func:`epsilon_part`.
    """
    lvl = next(_levels)
    z = list(x)
    z[axis] = Dual(z[axis], 1.0, lvl)
    return z, lvl


def epsilon_part(v, lvl):
    """Coefficient of eps_lvl inside ``v`` (0.0 if absent)."""
    if not isinstance(v, Dual):
        return 0.0
    if v.lvl == lvl:
        return v.b
    if v.lvl > lvl:
        # Higher levels wrap lower ones; recurse into both components.
        return Dual(epsilon_part(v.a, lvl), epsilon_part(v.b, lvl), v.lvl)
    return 0.0


def partial(f, x, axis):
    """d f / d x_axis at ``x``; composes with outer lifts safely."""
    z, lvl = seed_axis(x, axis)
    return epsilon_part(f(z), lvl)


def lift(f, axis):
    """Wrap a scalar field into its partial derivative along one axis."""
    def df(x):
        return partial(f, x, axis)
    return df


def sin(x):
    if isinstance(x, Dual):
        return Dual(sin(x.a), cos(x.a) * x.b, x.lvl)
    return np.sin(x)


def cos(x):
    if isinstance(x, Dual):
        return Dual(cos(x.a), -sin(x.a) * x.b, x.lvl)
    return np.cos(x)


def tan(x):
    return sin(x) / cos(x)


def exp(x):
    if isinstance(x, Dual):
        e = exp(x.a)
        return Dual(e, e * x.b, x.lvl)
    return np.exp(x)


def log(x):
    if isinstance(x, Dual):
        return Dual(log(x.a), x.b / x.a, x.lvl)
    return np.log(x)


def sqrt(x):
    if isinstance(x, Dual):
        s = sqrt(x.a)
        return Dual(s, x.b / (2.0 * s), x.lvl)
    return np.sqrt(x)


def cosh(x):
    if isinstance(x, Dual):
        return Dual(cosh(x.a), sinh(x.a) * x.b, x.lvl)
    return np.cosh(x)


def sinh(x):
    if isinstance(x, Dual):
        return Dual(sinh(x.a), cosh(x.a) * x.b, x.lvl)
    return np.sinh(x)


def derivative(field, x, multi_index, mode="dual", step=1e-3):
    """Partial derivative of ``field`` at ``x`` for the given multi-index.

    ``multi_index`` lists coordinate axes, one per differentiation, e.g.
    ``(0, 0)`` for the second derivative along axis 0.  ``mode="dual"``
    nests dual-number lifts (exact); ``mode="fd"`` uses 4th-order central
    differences with step ``step`` as an independent cross-check.
    """
    multi_index = tuple(multi_index)
    if len(multi_index) > MAX_ORDER:
        raise OrderUnsupported(
            f"derivative order {len(multi_index)} exceeds {MAX_ORDER}")
    f = field
    if mode == "dual":
        for axis in reversed(multi_index):
            f = lift(f, axis)
    elif mode == "fd":
        for axis in reversed(multi_index):
            f = _fd_lift(f, axis, step)
    else:
        raise ValueError(f"unknown differentiation mode {mode!r}")
    return f(list(x))


def _fd_lift(f, axis, h):
    def df(x):
        vals = []
        for k in (-2, -1, 1, 2):
            z = list(x)
            z[axis] = z[axis] + k * h
            vals.append(f(z))
        fm2, fm1, fp1, fp2 = vals
        return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)
    return df


def gradient(field, x):
    """All first partials of a scalar field, as a list."""
    return [partial(field, list(x), i) for i in range(len(x))]
