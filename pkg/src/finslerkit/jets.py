"""Truncated multivariate jet arithmetic over the 2n chart variables.

A Jet holds the raw partial derivatives (not Taylor coefficients) of a
smooth function at one point, for every multi-index of total degree up to
`order`. The multi-index table is graded by degree, so the table of a
lower order is always a prefix of a higher one; truncation is a slice and
mixed-partial symmetry is structural (one slot per sorted multi-index).

Products use the Leibniz rule in raw-derivative form,

    d^g (u v) = sum_{a <= g} C(g, a) d^a u d^{g-a} v,

with the binomial weights precomputed per (nvars, order). Transcendental
functions go through Taylor composition in the jet ring, so everything is
exact to round-off for the smooth closed-form fields used here.

The module also carries the finite-difference oracle (`fd_partial`) the
test suite uses to certify jet output against an independent scheme.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np

from .chart import ChartPoint
from .errors import CapabilityError, DomainError, NumericalError

MAX_ORDER = 4


@lru_cache(maxsize=None)
def _index_table(nvars: int, order: int):
    """(multi-index tuple list, position dict) graded by total degree."""
    idx = []
    for deg in range(order + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), deg):
            mi = [0] * nvars
            for v in combo:
                mi[v] += 1
            idx.append(tuple(mi))
    pos = {mi: i for i, mi in enumerate(idx)}
    return tuple(idx), pos


@lru_cache(maxsize=None)
def _mul_program(nvars: int, order: int):
    table, pos = _index_table(nvars, order)
    io, ia, ib, w = [], [], [], []
    for gi, gamma in enumerate(table):
        for alpha in itertools.product(*[range(g + 1) for g in gamma]):
            beta = tuple(g - a for g, a in zip(gamma, alpha))
            weight = 1.0
            for g, a in zip(gamma, alpha):
                weight *= math.comb(g, a)
            io.append(gi)
            ia.append(pos[alpha])
            ib.append(pos[beta])
            w.append(weight)
    return (
        np.asarray(io, dtype=np.intp),
        np.asarray(ia, dtype=np.intp),
        np.asarray(ib, dtype=np.intp),
        np.asarray(w, dtype=np.float64),
        len(table),
    )


@lru_cache(maxsize=None)
def _shift_map(nvars: int, order: int, slot: int):
    """Positions in the order-`order` table of alpha + e_slot, alpha over the (order-1) table."""
    lo, _ = _index_table(nvars, order - 1)
    _, pos_hi = _index_table(nvars, order)
    out = []
    for alpha in lo:
        shifted = list(alpha)
        shifted[slot] += 1
        out.append(pos_hi[tuple(shifted)])
    return np.asarray(out, dtype=np.intp)


def _table_size(nvars: int, order: int) -> int:
    return math.comb(nvars + order, order)


class Jet:
    """Raw-derivative jet of a scalar function at a point."""

    __slots__ = ("nvars", "order", "coeffs")
    __array_ufunc__ = None  # keep numpy scalars from absorbing us

    def __init__(self, nvars, order, coeffs):
        self.nvars = nvars
        self.order = order
        self.coeffs = np.asarray(coeffs, dtype=np.float64)
        if self.coeffs.shape != (_table_size(nvars, order),):
            raise ValueError("coefficient array does not match the index table")

    @classmethod
    def constant(cls, nvars, order, value):
        c = np.zeros(_table_size(nvars, order))
        c[0] = float(value)
        return cls(nvars, order, c)

    @classmethod
    def variable(cls, nvars, order, slot, value):
        """Jet of the coordinate function z_slot at z_slot = value."""
        if order < 1:
            raise ValueError("coordinate jets need order >= 1")
        c = np.zeros(_table_size(nvars, order))
        c[0] = float(value)
        c[1 + slot] = 1.0
        return cls(nvars, order, c)

    # -- readout ---------------------------------------------------------

    @property
    def value(self) -> float:
        return float(self.coeffs[0])

    def partial1(self, slot: int) -> float:
        return float(self.coeffs[1 + slot])

    def partial(self, multi) -> float:
        """Raw partial derivative for a full multi-index (length nvars)."""
        multi = tuple(int(m) for m in multi)
        if len(multi) != self.nvars:
            raise ValueError("multi-index length must equal nvars")
        if sum(multi) > self.order:
            raise CapabilityError(
                f"degree {sum(multi)} exceeds stored jet order {self.order}"
            )
        _, pos = _index_table(self.nvars, self.order)
        return float(self.coeffs[pos[multi]])

    def truncated(self, order: int) -> "Jet":
        if order > self.order:
            raise CapabilityError("cannot extend a jet to higher order")
        if order == self.order:
            return self
        return Jet(self.nvars, order, self.coeffs[: _table_size(self.nvars, order)])

    def partial_jet(self, slot: int) -> "Jet":
        """Jet of the partial derivative w.r.t. variable `slot`, one order lower."""
        if self.order < 1:
            raise CapabilityError("order-0 jet has no derivatives")
        sm = _shift_map(self.nvars, self.order, slot)
        return Jet(self.nvars, self.order - 1, self.coeffs[sm])

    # -- ring operations -------------------------------------------------

    def _mat(self, other):
        if isinstance(other, Jet):
            if other.nvars != self.nvars:
                raise ValueError("jets live over different variable sets")
            k = min(self.order, other.order)
            s = _table_size(self.nvars, k)
            return k, self.coeffs[:s], other.coeffs[:s]
        return None

    def __add__(self, other):
        m = self._mat(other)
        if m is not None:
            k, a, b = m
            return Jet(self.nvars, k, a + b)
        c = self.coeffs.copy()
        c[0] += float(other)
        return Jet(self.nvars, self.order, c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.nvars, self.order, -self.coeffs)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet) else -float(other))

    def __rsub__(self, other):
        return (-self) + float(other)

    def __mul__(self, other):
        m = self._mat(other)
        if m is not None:
            k, a, b = m
            io, ia, ib, w, size = _mul_program(self.nvars, k)
            prod = np.bincount(io, weights=w * a[ia] * b[ib], minlength=size)
            return Jet(self.nvars, k, prod)
        return Jet(self.nvars, self.order, self.coeffs * float(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other._reciprocal()
        return Jet(self.nvars, self.order, self.coeffs / float(other))

    def __rtruediv__(self, other):
        return self._reciprocal() * float(other)

    def __pow__(self, p):
        if isinstance(p, int) or (isinstance(p, float) and p.is_integer() and p >= 0):
            p = int(p)
            if p < 0:
                return self._reciprocal() ** (-p)
            out = Jet.constant(self.nvars, self.order, 1.0)
            for _ in range(p):
                out = out * self
            return out
        return powr(self, float(p))

    # -- composition with smooth univariate functions ---------------------

    def compose(self, taylor_coeffs) -> "Jet":
        """Evaluate sum_m c_m (self - self.value)^m in the jet ring."""
        v = self - self.value
        out = Jet.constant(self.nvars, self.order, taylor_coeffs[-1])
        for c in reversed(taylor_coeffs[:-1]):
            out = out * v + c
        return out

    def _reciprocal(self):
        u0 = self.value
        if u0 == 0.0:
            raise NumericalError("division by a jet with zero value part")
        cs = [(-1.0) ** m / u0 ** (m + 1) for m in range(self.order + 1)]
        return self.compose(cs)

    def __repr__(self):
        return f"Jet(nvars={self.nvars}, order={self.order}, value={self.value!r})"


def _binom_real(r: float, m: int) -> float:
    out = 1.0
    for i in range(m):
        out *= (r - i) / (i + 1)
    return out


def powr(u, r: float):
    """u**r for real r; u must be a positive number or a jet with positive value."""
    if not isinstance(u, Jet):
        return float(u) ** r
    u0 = u.value
    if u0 <= 0.0:
        raise NumericalError(f"fractional power needs a positive value part, got {u0}")
    cs = [_binom_real(r, m) * u0 ** (r - m) for m in range(u.order + 1)]
    return u.compose(cs)


def sqrt(u):
    if not isinstance(u, Jet):
        return math.sqrt(u)
    return powr(u, 0.5)


def exp(u):
    if not isinstance(u, Jet):
        return math.exp(u)
    e0 = math.exp(u.value)
    cs = [e0 / math.factorial(m) for m in range(u.order + 1)]
    return u.compose(cs)


def log(u):
    if not isinstance(u, Jet):
        return math.log(u)
    u0 = u.value
    if u0 <= 0.0:
        raise NumericalError("log needs a positive value part")
    cs = [math.log(u0)]
    for m in range(1, u.order + 1):
        cs.append((-1.0) ** (m + 1) / (m * u0 ** m))
    return u.compose(cs)


def sin(u):
    if not isinstance(u, Jet):
        return math.sin(u)
    cycle = [math.sin(u.value), math.cos(u.value), -math.sin(u.value), -math.cos(u.value)]
    cs = [cycle[m % 4] / math.factorial(m) for m in range(u.order + 1)]
    return u.compose(cs)


def cos(u):
    if not isinstance(u, Jet):
        return math.cos(u)
    cycle = [math.cos(u.value), -math.sin(u.value), -math.cos(u.value), math.sin(u.value)]
    cs = [cycle[m % 4] / math.factorial(m) for m in range(u.order + 1)]
    return u.compose(cs)


# -- evaluation of scalar fields ------------------------------------------


def coordinate_jets(point: ChartPoint, order: int):
    """Coordinate jets (x-list, y-list) seeding jet evaluation at `point`."""
    n = point.n
    nvars = 2 * n
    xj = [Jet.variable(nvars, order, i, point.x[i]) for i in range(n)]
    yj = [Jet.variable(nvars, order, n + i, point.y[i]) for i in range(n)]
    return xj, yj


def jet_eval(field, point: ChartPoint, order: int, domain=None) -> Jet:
    """Evaluate `field(x, y)` in jet arithmetic at a chart point.

    `field` must be written against the generic math functions of this
    module so the same callable also works on plain floats.
    """
    if order > MAX_ORDER:
        raise CapabilityError(f"jet order {order} exceeds the supported maximum {MAX_ORDER}")
    if order < 0:
        raise ValueError("order must be nonnegative")
    if domain is not None and not domain(point.x, point.y):
        raise DomainError(f"point outside the admissible chart domain: {point}")
    xj, yj = coordinate_jets(point, max(order, 1))
    out = field(xj, yj)
    if not isinstance(out, Jet):
        out = Jet.constant(2 * point.n, max(order, 1), float(out))
    if not np.all(np.isfinite(out.coeffs)):
        raise NumericalError(f"field produced non-finite jet coefficients at {point}")
    return out.truncated(order) if out.order > order else out


def field_value(field, point: ChartPoint) -> float:
    """Plain float evaluation, shared by the finite-difference oracle."""
    v = float(field(point.x, point.y))
    if not math.isfinite(v):
        raise NumericalError(f"field produced a non-finite value at {point}")
    return v


# -- finite-difference oracle ----------------------------------------------


def fd_partial(field, point: ChartPoint, multi, step: float = None,
               richardson: bool = None) -> float:
    """Central-difference estimate of a raw partial derivative.

    `multi` is a full multi-index over the 2n coordinates (x-block first),
    total degree at most 3. Degree-3 estimates use one Richardson
    extrapolation step by default. This is the independent oracle used to
    certify jet arithmetic; it never feeds production code paths.
    """
    multi = tuple(int(m) for m in multi)
    if len(multi) != 2 * point.n:
        raise ValueError("multi-index must cover all 2n coordinates")
    if any(m < 0 for m in multi):
        raise ValueError("multi-index entries must be nonnegative")
    deg = sum(multi)
    if deg == 0:
        return field_value(field, point)
    if deg > 3:
        raise CapabilityError("finite-difference oracle supports degree <= 3")
    if step is None:
        step = 1e-4 if deg <= 2 else 1e-3
    if step <= 0.0:
        raise ValueError("step must be positive")
    coords = point.coords()
    for d, m in enumerate(multi):
        if m > 0 and coords[d] + step == coords[d]:
            raise NumericalError("finite-difference step underflows at this point")
    if richardson is None:
        richardson = deg == 3

    def central(pt, mi, h):
        d = next(i for i, m in enumerate(mi) if m > 0)
        rest = list(mi)
        rest[d] -= 1
        rest = tuple(rest)
        if sum(rest) == 0:
            hi = field_value(field, pt.shifted(d, +h))
            lo = field_value(field, pt.shifted(d, -h))
        else:
            hi = central(pt.shifted(d, +h), rest, h)
            lo = central(pt.shifted(d, -h), rest, h)
        return (hi - lo) / (2.0 * h)

    est = central(point, multi, step)
    if richardson:
        est_half = central(point, multi, step / 2.0)
        est = (4.0 * est_half - est) / 3.0
    return est
