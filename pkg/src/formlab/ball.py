"""Boundary calculus on the sphere bounding a Euclidean ball.

The boundary Sigma = S^{m-1}(R) carries the inner unit normal
N = -x/R, so the shape operator is (1/R) Id, every principal curvature
equals c = 1/R and the mean curvature is H = c.

Boundary forms are represented by ambient polynomial forms; the
pullback inner product is computed through the pointwise splitting

    <J* a, J* b> = <a, b> - <i_N a, i_N b>   on Sigma,

which keeps every boundary computation inside polynomial arithmetic.
The tangential codifferential is assembled from ambient data through

    delta^S (J* w) = J*(delta w) + i_N(grad_N w) + S^[p-1](i_N w) - nH i_N w,

whose correctness is certified independently by an adjointness test
against the tangential differential.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polynomials import Polynomial
from .polyform import PolyForm, PolyVectorField
from .quadrature import ExactScalar, RadialDensity, integrate_sphere


@dataclass(frozen=True)
class BallDomain:
    """The solid ball of radius R in R^m with its boundary sphere."""

    m: int
    radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, "radius", Fraction(self.radius))
        if self.m < 2:
            raise ValueError("need ambient dimension >= 2")
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def curvature(self) -> Fraction:
        """c = 1/R, the common principal curvature of the boundary."""
        return 1 / self.radius

    @property
    def boundary_dim(self) -> int:
        return self.m - 1

    def normal_field(self) -> PolyVectorField:
        """Ambient extension of the inner unit normal, -x/R."""
        return PolyVectorField.position(self.m) * Fraction(-1, 1) * (1 / self.radius)

    def integrate_boundary(self, density) -> ExactScalar:
        if isinstance(density, Polynomial):
            density = RadialDensity.from_polynomial(density)
        return integrate_sphere(density, self.radius)


def normal_part(omega: PolyForm, domain: BallDomain) -> PolyForm:
    """Ambient representative of i_N omega (degree drops by one)."""
    if omega.p == 0:
        raise ValueError("normal contraction needs degree >= 1")
    return omega.interior(domain.normal_field())


def jstar_inner(a: PolyForm, b: PolyForm, domain: BallDomain) -> Polynomial:
    """Pointwise <J*a, J*b> on Sigma as a polynomial density."""
    if a.p != b.p:
        raise ValueError("degree mismatch")
    density = a.inner(b)
    if a.p >= 1:
        density = density - normal_part(a, domain).inner(normal_part(b, domain))
    return density


def shape_lift(p: int, domain: BallDomain):
    """The degree-p lift of the shape operator; on the sphere it is
    multiplication by p*c (zero on 0-forms by convention)."""
    factor = p * domain.curvature

    def apply(phi: "BoundaryForm") -> "BoundaryForm":
        return BoundaryForm(phi.domain, phi.rep * factor)

    apply.factor = factor
    return apply


class BoundaryForm:
    """A form on the boundary sphere given by an ambient representative.

    Two boundary forms are equal when the pullback of the difference of
    their representatives has exactly zero L^2-norm on Sigma.
    """

    __slots__ = ("domain", "rep")

    def __init__(self, domain: BallDomain, rep: PolyForm):
        if rep.m != domain.m:
            raise ValueError("representative dimension mismatch")
        self.domain = domain
        self.rep = rep

    @property
    def p(self) -> int:
        return self.rep.p

    def __add__(self, other: "BoundaryForm") -> "BoundaryForm":
        return BoundaryForm(self.domain, self.rep + other.rep)

    def __sub__(self, other: "BoundaryForm") -> "BoundaryForm":
        return BoundaryForm(self.domain, self.rep - other.rep)

    def __neg__(self) -> "BoundaryForm":
        return BoundaryForm(self.domain, -self.rep)

    def __mul__(self, s) -> "BoundaryForm":
        return BoundaryForm(self.domain, self.rep * s)

    __rmul__ = __mul__

    def inner(self, other: "BoundaryForm") -> ExactScalar:
        """Integrated pullback inner product over Sigma."""
        if self.p != other.p:
            raise ValueError("degree mismatch")
        return self.domain.integrate_boundary(
            jstar_inner(self.rep, other.rep, self.domain))

    def norm_sq(self) -> ExactScalar:
        return self.inner(self)

    def is_zero(self) -> bool:
        return self.norm_sq().is_zero()

    def __eq__(self, other):
        return isinstance(other, BoundaryForm) and (self - other).is_zero()

    __hash__ = None

    def d(self) -> "BoundaryForm":
        """Tangential differential: J* commutes with d."""
        if self.p > self.domain.m - 2:
            raise ValueError("top boundary degree has no differential")
        return BoundaryForm(self.domain, self.rep.d())

    def delta(self) -> "BoundaryForm":
        """Tangential codifferential assembled from ambient data."""
        if self.p == 0:
            raise ValueError("codifferential of a boundary 0-form")
        return BoundaryForm(self.domain,
                            boundary_delta_rep(self.rep, self.domain))


def boundary_delta_rep(omega: PolyForm, domain: BallDomain) -> PolyForm:
    """Ambient representative of delta^Sigma(J* omega)."""
    if omega.p == 0:
        raise ValueError("codifferential of a boundary 0-form")
    n = domain.boundary_dim
    c = domain.curvature
    normal = domain.normal_field()
    i_n = normal_part(omega, domain)
    rep = omega.delta() if omega.p >= 1 else PolyForm.zero(domain.m, 0)
    rep = rep + omega.deriv_along(normal).interior(normal)
    rep = rep + i_n * ((omega.p - 1) * c) - i_n * (n * c)
    return rep


def normal_split_residual(omega: PolyForm, domain: BallDomain) -> ExactScalar:
    """Exact L^2(Sigma) residual of the splitting identity

    d^S(i_N w) + i_N dw - J*(grad_N w) + S^[p](J* w) = 0.
    """
    if omega.p == 0:
        raise ValueError("needs degree >= 1")
    normal = domain.normal_field()
    rep = normal_part(omega, domain).d()
    if omega.p <= domain.m - 1:
        rep = rep + omega.d().interior(normal)
    rep = rep - omega.deriv_along(normal)
    rep = rep + omega * (omega.p * domain.curvature)
    return domain.integrate_boundary(jstar_inner(rep, rep, domain))


def b_term(omega: PolyForm, domain: BallDomain) -> Polynomial:
    """Boundary quadratic form

    B(w,w) = <S^[p] J*w, J*w> + nH |i_N w|^2 - <S^[p-1] i_N w, i_N w>

    as a pointwise polynomial density on Sigma.
    """
    if omega.p < 1:
        raise ValueError("needs degree >= 1")
    p = omega.p
    n = domain.boundary_dim
    c = domain.curvature
    i_n = normal_part(omega, domain)
    i_n_sq = i_n.inner(i_n)
    tang_sq = omega.inner(omega) - i_n_sq
    return (p * c) * tang_sq + (n * c) * i_n_sq - ((p - 1) * c) * i_n_sq


def b_term_alternate(omega: PolyForm, domain: BallDomain) -> Polynomial:
    """Two-term shape-operator expression for B, valid for exact forms:

    <S^[q] J*w, J*w> + <S^[m-q] J*(star w), J*(star w)>,  q = deg w.
    """
    if omega.p < 1:
        raise ValueError("needs degree >= 1")
    q = omega.p
    c = domain.curvature
    dual = omega.star()
    return (q * c) * jstar_inner(omega, omega, domain) \
        + ((domain.m - q) * c) * jstar_inner(dual, dual, domain)


@dataclass(frozen=True)
class WeightFunction:
    """A scalar weight with precomputed first and second derivatives.

    ``lap`` stores the non-negative-convention Laplacian, i.e. minus the
    trace of the Hessian.
    """

    kind: str
    f: RadialDensity
    grad: tuple[RadialDensity, ...]
    hess: tuple[tuple[RadialDensity, ...], ...]
    lap: RadialDensity

    @property
    def m(self) -> int:
        return self.f.m

    @classmethod
    def from_density(cls, kind: str, f: RadialDensity) -> "WeightFunction":
        m = f.m
        grad = tuple(f.partial(k) for k in range(1, m + 1))
        hess = tuple(tuple(grad[a].partial(l + 1) for l in range(m))
                     for a in range(m))
        lap = RadialDensity.zero(m)
        for k in range(m):
            lap = lap - hess[k][k]
        return cls(kind, f, grad, hess, lap)

    @classmethod
    def polynomial(cls, poly: Polynomial) -> "WeightFunction":
        return cls.from_density("polynomial", RadialDensity.from_polynomial(poly))

    @classmethod
    def one(cls, m: int) -> "WeightFunction":
        return cls.from_density("polynomial",
                                RadialDensity.constant(m, Fraction(1)))

    def normal_derivative(self, domain: BallDomain) -> RadialDensity:
        """f_N = <grad f, N> with the inner normal, as a density on Sigma."""
        normal = domain.normal_field()
        out = RadialDensity.zero(self.m)
        for k in range(self.m):
            out = out + self.grad[k] * normal.components[k]
        return out

    def hessian_quadratic(self, a: PolyForm, b: PolyForm) -> RadialDensity:
        """<a, Hess-lift b> as a density, assembled entry by entry."""
        out = RadialDensity.zero(self.m)
        for i in range(self.m):
            for j in range(self.m):
                entry = self.hess[i][j]
                if entry.is_zero():
                    continue
                unit = [[Polynomial.zero(self.m)] * self.m for _ in range(self.m)]
                unit[i][j] = Polynomial.one(self.m)
                lifted = b.lift_by(unit)
                density = a.inner(lifted)
                if density:
                    out = out + entry * density
        return out


def canonical_weight(domain: BallDomain) -> WeightFunction:
    """The distance-based concave weight on the ball.

    On a ball of radius R the weight rho - (c/2) rho^2 built from the
    boundary distance rho = R - r collapses to the polynomial
    (R^2 - r^2)/(2R): it vanishes on Sigma, has unit inner-normal
    derivative there, and its Hessian is exactly -(1/R) Id.
    """
    m = domain.m
    R = domain.radius
    poly = (Polynomial.constant(m, R * R) - Polynomial.radius_squared(m)) * Fraction(1, 2) * (1 / R)
    wf = WeightFunction.from_density("canonical-distance",
                                     RadialDensity.from_polynomial(poly))
    return wf
