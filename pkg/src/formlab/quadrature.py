"""Exact integration over spheres and balls centred at the origin.

Integrands are *radial densities*: finite sums ``sum_j r^j P_j(x)`` with
integer exponents ``j >= -3`` and polynomial ``P_j``.  This class is
closed under products and partial derivatives and covers every
integrand produced by the identity checks.

All integrals are returned as exact rational multiples of the measure
of the unit sphere ``|S^{m-1}(1)|``, which is carried as an uncancelled
symbolic unit.  Identity residuals therefore reduce to rational
comparisons with no transcendental arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .polynomials import Polynomial

MIN_RADIAL_EXPONENT = -3


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def sphere_average(expo, m: int | None = None) -> Fraction:
    """Average of the monomial x^expo over the unit sphere S^{m-1}(1).

    Zero when any exponent is odd, else
    ``prod (a_i - 1)!! / prod_{k<|a|/2} (m + 2k)``.
    """
    expo = tuple(expo)
    if m is None:
        m = len(expo)
    if len(expo) != m:
        raise ValueError("exponent tuple length mismatch")
    if m < 2:
        raise ValueError("need ambient dimension >= 2")
    if any(e % 2 for e in expo):
        return Fraction(0)
    num = 1
    for e in expo:
        num *= double_factorial(e - 1)
    den = 1
    for k in range(sum(expo) // 2):
        den *= m + 2 * k
    return Fraction(num, den)


def unit_sphere_measure(m: int) -> float:
    return 2.0 * math.pi ** (m / 2.0) / math.gamma(m / 2.0)


@dataclass(frozen=True)
class ExactScalar:
    """A rational multiple of |S^{m-1}(1)|."""

    coeff: Fraction
    m: int

    def _mate(self, other: "ExactScalar"):
        if self.m != other.m:
            raise ValueError("cannot combine scalars of different ambient dimension")

    def __add__(self, other: "ExactScalar") -> "ExactScalar":
        self._mate(other)
        return ExactScalar(self.coeff + other.coeff, self.m)

    def __sub__(self, other: "ExactScalar") -> "ExactScalar":
        self._mate(other)
        return ExactScalar(self.coeff - other.coeff, self.m)

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.coeff, self.m)

    def __mul__(self, s) -> "ExactScalar":
        return ExactScalar(self.coeff * s, self.m)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.coeff == 0

    def __float__(self) -> float:
        return float(self.coeff) * unit_sphere_measure(self.m)

    @classmethod
    def zero(cls, m: int) -> "ExactScalar":
        return cls(Fraction(0), m)


class RadialDensity:
    """``sum_j r^j P_j(x)`` with integer j >= -3 and polynomial P_j.

    Even non-negative radial exponents are folded into the polynomial
    part on construction, so stored exponents are in {-3,-2,-1,0,1}.
    """

    __slots__ = ("m", "parts")

    def __init__(self, m: int, parts=None):
        self.m = m
        folded: dict[int, Polynomial] = {}
        if parts:
            r2 = Polynomial.radius_squared(m)
            for j, poly in parts.items():
                if not isinstance(poly, Polynomial):
                    poly = Polynomial.constant(m, poly)
                if poly.m != m:
                    raise ValueError("polynomial variable count mismatch")
                if not poly:
                    continue
                while j >= 2:
                    poly = poly * r2
                    j -= 2
                if j < MIN_RADIAL_EXPONENT:
                    raise ValueError(f"radial exponent {j} below {MIN_RADIAL_EXPONENT}")
                if j in folded:
                    folded[j] = folded[j] + poly
                    if not folded[j]:
                        del folded[j]
                else:
                    folded[j] = poly
        self.parts = folded

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, m: int) -> "RadialDensity":
        return cls(m)

    @classmethod
    def from_polynomial(cls, poly: Polynomial) -> "RadialDensity":
        return cls(poly.m, {0: poly})

    @classmethod
    def constant(cls, m: int, c) -> "RadialDensity":
        return cls(m, {0: Polynomial.constant(m, c)})

    # -- algebra -----------------------------------------------------------
    def _coerce(self, other) -> "RadialDensity":
        if isinstance(other, RadialDensity):
            if other.m != self.m:
                raise ValueError("dimension mismatch")
            return other
        if isinstance(other, Polynomial):
            return RadialDensity.from_polynomial(other)
        return RadialDensity.constant(self.m, other)

    def __add__(self, other) -> "RadialDensity":
        other = self._coerce(other)
        parts = dict(self.parts)
        for j, poly in other.parts.items():
            parts[j] = parts.get(j, Polynomial.zero(self.m)) + poly
        return RadialDensity(self.m, parts)

    __radd__ = __add__

    def __neg__(self) -> "RadialDensity":
        return RadialDensity(self.m, {j: -p for j, p in self.parts.items()})

    def __sub__(self, other) -> "RadialDensity":
        return self + (-self._coerce(other))

    def __mul__(self, other) -> "RadialDensity":
        if not isinstance(other, RadialDensity):
            if isinstance(other, Polynomial):
                other = RadialDensity.from_polynomial(other)
            else:
                return RadialDensity(self.m, {j: p * other for j, p in self.parts.items()})
        if other.m != self.m:
            raise ValueError("dimension mismatch")
        parts: dict[int, Polynomial] = {}
        for j1, p1 in self.parts.items():
            for j2, p2 in other.parts.items():
                j = j1 + j2
                prod = p1 * p2
                parts[j] = parts.get(j, Polynomial.zero(self.m)) + prod
        return RadialDensity(self.m, parts)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.parts

    def partial(self, k: int) -> "RadialDensity":
        """d/dx_k, using d(r^j)/dx_k = j r^{j-2} x_k."""
        parts: dict[int, Polynomial] = {}
        xk = Polynomial.variable(self.m, k)
        for j, poly in self.parts.items():
            dp = poly.partial(k)
            if dp:
                parts[j] = parts.get(j, Polynomial.zero(self.m)) + dp
            if j:
                shifted = poly * xk * j
                parts[j - 2] = parts.get(j - 2, Polynomial.zero(self.m)) + shifted
        return RadialDensity(self.m, parts)

    # -- evaluation --------------------------------------------------------
    def evaluate_float(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at an (N, m) array of points."""
        n = points.shape[0]
        out = np.zeros(n)
        r = np.sqrt(np.sum(points * points, axis=1))
        for j, poly in sorted(self.parts.items()):
            vals = np.zeros(n)
            for expo, c in poly.sorted_terms():
                mono = np.full(n, float(c))
                for i, e in enumerate(expo):
                    if e:
                        mono = mono * points[:, i] ** e
                vals += mono
            if j:
                vals = vals * r ** j
            out += vals
        return out


def integrate_sphere(density: RadialDensity, radius) -> ExactScalar:
    """Exact integral over the sphere of the given radius."""
    R = Fraction(radius)
    m = density.m
    total = Fraction(0)
    for j, poly in density.parts.items():
        for d, part in poly.homogeneous_parts().items():
            for expo, c in part.terms.items():
                avg = sphere_average(expo, m)
                if avg:
                    total += c * avg * R ** (j + d + m - 1)
    return ExactScalar(total, m)


def integrate_ball(density: RadialDensity, radius) -> ExactScalar:
    """Exact integral over the solid ball of the given radius."""
    R = Fraction(radius)
    m = density.m
    total = Fraction(0)
    for j, poly in density.parts.items():
        for d, part in poly.homogeneous_parts().items():
            power = j + d + m
            if power <= 0:
                raise ValueError(
                    f"non-integrable radial exponent: r^{j} with degree-{d} part in dim {m}")
            for expo, c in part.terms.items():
                avg = sphere_average(expo, m)
                if avg:
                    total += c * avg * R ** power / power
    return ExactScalar(total, m)


def mc_oracle(density: RadialDensity, radius, samples: int, seed: int,
              region: str = "ball") -> tuple[float, float]:
    """Monte Carlo estimate (value, standard error) of the integral.

    Counter-based Philox generator keyed by the seed, so estimates are
    reproducible across platforms and independent of call order.
    """
    if samples < 10 ** 4:
        raise ValueError("need at least 1e4 samples")
    if region not in ("ball", "sphere"):
        raise ValueError(f"unknown region {region!r}")
    m = density.m
    R = float(radius)
    rng = np.random.Generator(np.random.Philox(key=seed))
    out = np.empty(samples)
    done = 0
    chunk = 200_000
    while done < samples:
        n = min(chunk, samples - done)
        g = rng.standard_normal((n, m))
        norms = np.linalg.norm(g, axis=1)
        dirs = g / norms[:, None]
        if region == "sphere":
            pts = R * dirs
        else:
            u = rng.random(n)
            pts = R * u[:, None] ** (1.0 / m) * dirs
        out[done:done + n] = density.evaluate_float(pts)
        done += n
    measure = unit_sphere_measure(m) * R ** (m - 1)
    if region == "ball":
        measure = unit_sphere_measure(m) * R ** m / m
    mean = float(np.mean(out))
    std = float(np.std(out, ddof=1)) / math.sqrt(samples)
    return measure * mean, measure * std
