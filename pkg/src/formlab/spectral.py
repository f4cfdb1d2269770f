"""Boundary operator spectra on the ball, assembled from first principles.

Three operators on boundary forms are assembled over exact polynomial
trial spaces:

  * ``dtn``: the harmonic-and-co-closed Dirichlet-to-Neumann map,
    phi -> -i_N d(ext phi) with the extension satisfying
    Delta ext = 0, delta ext = 0, J* ext = phi (restricted to co-closed
    boundary data);
  * ``dtn-neumann``: the variant whose extension satisfies
    Delta ext = 0 with J* ext = phi and i_N ext = 0 on the boundary;
  * ``hodge-boundary``: the boundary Hodge Laplacian through its
    Dirichlet form |d^S phi|^2 + |delta^S phi|^2.

Trial spaces are the pullbacks of the normal-null harmonic blocks
(co-exact on the sphere) and, where the operator acts on them, the
closed blocks.  Stiffness and Gram matrices are exact rationals; the
floating eigensolve uses LAPACK via scipy and every rational target
eigenvalue can be certified exactly through the nullity of A - theta G.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg

from . import linalg
from .ball import BallDomain, boundary_delta_rep, jstar_inner, normal_part
from .harmonic import BasisCache
from .polynomials import Polynomial
from .polyform import PolyForm
from .quadrature import RadialDensity, integrate_ball, integrate_sphere

OPERATORS = ("dtn", "dtn-neumann", "hodge-boundary")

MULTIPLICITY_GROUP_TOL = 1e-7


# ---------------------------------------------------------------------------
# Harmonic extension problems.
# ---------------------------------------------------------------------------

@dataclass
class ExtensionProblem:
    """Boundary datum plus the interior system the extension satisfies.

    kind "harmonic-coclosed": Delta ext = 0, delta ext = 0, J* ext = datum.
    kind "harmonic-neumann":  Delta ext = 0, J* ext = datum, i_N ext = 0.
    """

    kind: str
    domain: BallDomain
    datum_rep: PolyForm
    ansatz_degree: int

    def __post_init__(self):
        if self.kind not in ("harmonic-coclosed", "harmonic-neumann"):
            raise ValueError(f"unknown extension kind {self.kind!r}")


def _interior_trial_space(kind: str, m: int, p: int, degree: int,
                          cache: BasisCache) -> list[PolyForm]:
    """Polynomial p-forms of coefficient degree <= degree satisfying the
    interior constraints exactly (homogeneous blocks stack)."""
    basis: list[PolyForm] = []
    for l in range(degree + 1):
        if kind == "harmonic-neumann":
            # componentwise harmonic forms: harmonic scalars times dx_I
            scalars = cache.get(m, l, 0, "H")
            from .exterior import multi_indices
            for I in multi_indices(m, p):
                for s in scalars.basis:
                    basis.append(PolyForm(m, p, {I: s.coeffs[()]}))
        else:
            basis.extend(cache.get(m, l, p, "H").basis)
    return basis


def extend(problem: ExtensionProblem, cache: BasisCache | None = None,
           max_degree: int | None = None) -> tuple[PolyForm, Fraction]:
    """Least-squares harmonic extension with exact rational arithmetic.

    Interior constraints are imposed exactly through the trial space;
    the boundary misfit (pullback mismatch plus, for the Neumann kind,
    the normal-part energy) is minimised.  Returns the extension and
    the exact misfit, escalating the ansatz degree by 2 when the misfit
    fails to vanish, up to ``max_degree`` (default: start + 4).
    """
    cache = cache or BasisCache()
    domain = problem.domain
    m, p = domain.m, problem.datum_rep.p
    degree = problem.ansatz_degree
    if max_degree is None:
        max_degree = degree + 4
    best: tuple[PolyForm, Fraction] | None = None
    while True:
        kind = problem.kind
        trial = _interior_trial_space(kind, m, p, degree, cache)
        R = domain.radius
        size = len(trial)
        datum = problem.datum_rep
        # Quadratic misfit Q(v) = v^T M v - 2 b.v + const
        M = [[Fraction(0)] * size for _ in range(size)]
        b = [Fraction(0)] * size
        for i in range(size):
            for j in range(i, size):
                if kind == "harmonic-neumann":
                    density = trial[i].inner(trial[j])
                else:
                    density = jstar_inner(trial[i], trial[j], domain)
                val = integrate_sphere(RadialDensity.from_polynomial(density), R).coeff
                M[i][j] = M[j][i] = val
            b[i] = integrate_sphere(RadialDensity.from_polynomial(
                jstar_inner(trial[i], datum, domain)), R).coeff
        const = integrate_sphere(RadialDensity.from_polynomial(
            jstar_inner(datum, datum, domain)), R).coeff
        sol = linalg.solve(M, b)
        if sol is None:
            raise RuntimeError("normal equations inconsistent (should not happen)")
        ext = PolyForm.zero(m, p)
        for c, t in zip(sol, trial):
            if c:
                ext = ext + t * c
        misfit = const - sum(ci * bi for ci, bi in zip(sol, b))
        if misfit == 0:
            return ext, misfit
        if best is None or misfit < best[1]:
            best = (ext, misfit)
        if degree + 2 > max_degree:
            raise ValueError(
                f"ansatz degree insufficient: misfit {best[1]} at degree {degree}")
        degree += 2


def rayleigh_quotient(ext: PolyForm, domain: BallDomain,
                      include_codifferential: bool) -> Fraction:
    """(int |d ext|^2 [+ |delta ext|^2]) / int_S |J* ext|^2."""
    m, R = domain.m, domain.radius
    num = Polynomial.zero(m)
    if ext.p <= m - 1:
        num = num + ext.d().norm_sq()
    if include_codifferential and ext.p >= 1:
        num = num + ext.delta().norm_sq()
    num_val = integrate_ball(RadialDensity.from_polynomial(num), R).coeff
    den = integrate_sphere(RadialDensity.from_polynomial(
        jstar_inner(ext, ext, domain)), R).coeff
    if den == 0:
        raise ZeroDivisionError("trial form has zero boundary trace")
    return num_val / den


# ---------------------------------------------------------------------------
# Operator assembly.
# ---------------------------------------------------------------------------

@dataclass
class Block:
    kind: str          # "coexact" (normal-null pullback) or "exact" (closed pullback)
    l: int             # spectral label: coexact blocks use degree l, exact blocks degree l-1
    basis: list[PolyForm]
    extensions: list[PolyForm]

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass
class OperatorAssembly:
    operator: str
    domain: BallDomain
    p: int
    l_max: int
    blocks: list[Block]
    A: list[list[Fraction]]
    G: list[list[Fraction]]

    @property
    def dim(self) -> int:
        return len(self.A)

    def block_slices(self):
        out = []
        start = 0
        for blk in self.blocks:
            out.append((blk, slice(start, start + blk.dim)))
            start += blk.dim
        return out


@dataclass
class EigenvalueGroup:
    value: float
    multiplicity: int


@dataclass
class SpectrumReport:
    operator: str
    m: int
    p: int
    radius: Fraction
    l_max: int
    eigenvalues: list[EigenvalueGroup]
    blocks: list[dict]
    gram_condition: float
    certified: dict[str, int] = field(default_factory=dict)

    def first_positive(self, tol: float = 1e-9) -> float:
        for g in self.eigenvalues:
            if g.value > tol:
                return g.value
        raise ValueError("no positive eigenvalue found")

    def to_dict(self) -> dict:
        return {
            "operator": self.operator,
            "m": self.m, "p": self.p, "radius": str(self.radius),
            "l_max": self.l_max,
            "eigenvalues": [{"value": g.value, "multiplicity": g.multiplicity}
                            for g in self.eigenvalues],
            "blocks": self.blocks,
            "gram_condition": self.gram_condition,
            "certified": dict(self.certified),
        }


def ball_reference_eigenvalue(operator: str, block_kind: str, m: int, p: int,
                              l: int, radius) -> Fraction:
    """Closed-form ball spectra from the classical literature.

    Coexact blocks carry label l >= 1 (pullbacks of degree-l normal-null
    harmonic fields); exact blocks with label l are pullbacks of
    degree-(l-1) closed harmonic fields.  Eigenvalues scale like 1/R
    for the order-one operators and 1/R^2 for the boundary Laplacian.
    """
    R = Fraction(radius)
    n = m - 1
    if operator == "dtn":
        if block_kind == "coexact":
            return Fraction(p + l) / R
        return Fraction(0)
    if operator == "dtn-neumann":
        if block_kind == "coexact":
            return Fraction(p + l) / R
        return Fraction((l + p - 1) * (n + 2 * l + 1), n + 2 * l - 1) / R
    if operator == "hodge-boundary":
        if block_kind == "coexact":
            return Fraction((l + p) * (n + l - p - 1)) / R ** 2
        return Fraction((l + p - 1) * (n + l - p)) / R ** 2
    raise ValueError(f"unknown operator {operator!r}")


def _check_self_extension(form: PolyForm, domain: BallDomain, kind: str) -> None:
    if not form.laplacian().is_zero():
        raise AssertionError("trial form is not componentwise harmonic")
    if kind == "harmonic-coclosed" and not form.delta().is_zero():
        raise AssertionError("trial form is not co-closed")
    if kind == "harmonic-neumann":
        from .polyform import PolyVectorField
        if not form.interior(PolyVectorField.position(domain.m)).is_zero():
            raise AssertionError("trial form has a normal part on the boundary")


def _build_blocks(operator: str, m: int, p: int, l_max: int,
                  domain: BallDomain, cache: BasisCache) -> list[Block]:
    blocks: list[Block] = []
    include_exact = operator in ("dtn-neumann", "hodge-boundary")
    for l in range(1, l_max + 1):
        if include_exact:
            closed = cache.get(m, l - 1, p, "H-closed")
            if closed.dim:
                if operator == "dtn-neumann":
                    exts = []
                    for w in closed.basis:
                        prob = ExtensionProblem("harmonic-neumann", domain, w,
                                                max(w.max_coeff_degree(), 0) + 2)
                        ext, misfit = extend(prob, cache)
                        if misfit != 0:
                            raise AssertionError("nonzero extension misfit on ball data")
                        exts.append(ext)
                else:
                    exts = list(closed.basis)
                blocks.append(Block("exact", l, list(closed.basis), exts))
        coexact = cache.get(m, l, p, "H-normal-null")
        if coexact.dim:
            kind = ("harmonic-neumann" if operator == "dtn-neumann"
                    else "harmonic-coclosed")
            for w in coexact.basis:
                _check_self_extension(w, domain, kind)
            blocks.append(Block("coexact", l, list(coexact.basis),
                                list(coexact.basis)))
    return blocks


def assemble_operator(operator: str, m: int, p: int, l_max: int, radius,
                      cache: BasisCache | None = None) -> tuple[OperatorAssembly, SpectrumReport]:
    """Assemble the exact stiffness and Gram matrices, then solve the
    generalized symmetric eigenproblem in floating point."""
    if operator not in OPERATORS:
        raise ValueError(f"unknown operator {operator!r}")
    if not 1 <= p <= m - 1:
        raise ValueError("form degree out of range for boundary spectra")
    cache = cache or BasisCache()
    domain = BallDomain(m, Fraction(radius))
    blocks = _build_blocks(operator, m, p, l_max, domain, cache)
    reps = [w for blk in blocks for w in blk.basis]
    exts = [w for blk in blocks for w in blk.extensions]
    size = len(reps)
    R = domain.radius

    G = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            val = integrate_sphere(RadialDensity.from_polynomial(
                jstar_inner(reps[i], reps[j], domain)), R).coeff
            G[i][j] = G[j][i] = val

    A = [[Fraction(0)] * size for _ in range(size)]
    if operator in ("dtn", "dtn-neumann"):
        for i in range(size):
            traced = -normal_part(exts[i].d(), domain)
            for j in range(size):
                A[i][j] = integrate_sphere(RadialDensity.from_polynomial(
                    jstar_inner(traced, reps[j], domain)), R).coeff
        for i in range(size):
            for j in range(i + 1, size):
                if A[i][j] != A[j][i]:
                    raise AssertionError(
                        "stiffness matrix not symmetric: self-adjointness violated")
    else:
        d_reps = [w.d() if w.p <= m - 2 else None for w in reps]
        delta_reps = [boundary_delta_rep(w, domain) for w in reps]
        for i in range(size):
            for j in range(i, size):
                total = Fraction(0)
                if d_reps[i] is not None and d_reps[j] is not None:
                    total += integrate_sphere(RadialDensity.from_polynomial(
                        jstar_inner(d_reps[i], d_reps[j], domain)), R).coeff
                total += integrate_sphere(RadialDensity.from_polynomial(
                    jstar_inner(delta_reps[i], delta_reps[j], domain)), R).coeff
                A[i][j] = A[j][i] = total

    assembly = OperatorAssembly(operator, domain, p, l_max, blocks, A, G)
    report = _solve_assembly(assembly)
    return assembly, report


def _solve_assembly(assembly: OperatorAssembly) -> SpectrumReport:
    size = assembly.dim
    Af = np.array([[float(v) for v in row] for row in assembly.A])
    Gf = np.array([[float(v) for v in row] for row in assembly.G])
    if size and linalg.rank([list(r) for r in assembly.G]) < size:
        raise ValueError("rank-deficient Gram matrix: trial basis is degenerate")
    if size:
        vals = scipy.linalg.eigh(Af, Gf, eigvals_only=True)
        cond = float(np.linalg.cond(Gf))
    else:
        vals = np.array([])
        cond = 1.0
    groups: list[EigenvalueGroup] = []
    for v in vals:
        v = float(v)
        if groups and abs(v - groups[-1].value) <= MULTIPLICITY_GROUP_TOL * max(1.0, abs(v)):
            g = groups[-1]
            g.value = (g.value * g.multiplicity + v) / (g.multiplicity + 1)
            g.multiplicity += 1
        else:
            groups.append(EigenvalueGroup(v, 1))

    block_rows = []
    for blk, sl in assembly.block_slices():
        Ab = Af[sl, sl]
        Gb = Gf[sl, sl]
        bvals = scipy.linalg.eigh(Ab, Gb, eigvals_only=True)
        ref = ball_reference_eigenvalue(assembly.operator, blk.kind,
                                        assembly.domain.m, assembly.p, blk.l,
                                        assembly.domain.radius)
        block_rows.append({
            "kind": blk.kind, "l": blk.l, "dim": blk.dim,
            "eigenvalues": [float(v) for v in bvals],
            "reference": str(ref),
            "max_reference_deviation": max(
                (abs(float(v) - float(ref)) for v in bvals), default=0.0),
        })
    return SpectrumReport(assembly.operator, assembly.domain.m, assembly.p,
                          assembly.domain.radius, assembly.l_max, groups,
                          block_rows, cond)


def certify_eigenvalue(assembly: OperatorAssembly, theta: Fraction,
                       expected_multiplicity: int | None = None) -> int:
    """Exact multiplicity of theta: nullity of A - theta G over Q."""
    theta = Fraction(theta)
    shifted = linalg.mat_sub(assembly.A, linalg.scalar_mul(theta, assembly.G))
    nullity = linalg.nullity(shifted, assembly.dim)
    if expected_multiplicity is not None and nullity != expected_multiplicity:
        raise AssertionError(
            f"eigenvalue {theta} has exact multiplicity {nullity}, "
            f"expected {expected_multiplicity}")
    return nullity


# ---------------------------------------------------------------------------
# Bound checks and scaling.
# ---------------------------------------------------------------------------

@dataclass
class BoundCheck:
    name: str
    statement: str
    passed: bool
    details: dict

    def to_dict(self) -> dict:
        return {"name": self.name, "statement": self.statement,
                "pass": self.passed,
                "details": {k: str(v) for k, v in self.details.items()}}


def check_bounds(dtn: SpectrumReport, dtn_neumann: SpectrumReport,
                 hodge: SpectrumReport, tol: float = 1e-8) -> list[BoundCheck]:
    """The eigenvalue inequalities, checked on computed spectra.

    * sharp lower bound  sigma_1 >= (p+1) c, equality on the ball;
    * comparison         sigma_k <= lambda_k / ((n-p) c) for every
      computed k, with equality for k up to the first coexact block;
    * strict half bound  sigma_1 > (p+1) c / 2;
    * operator ordering  nu_1 <= sigma_1.
    """
    m, p = dtn.m, dtn.p
    n = m - 1
    c = 1 / Fraction(dtn.radius)
    out = []

    sigma1 = dtn.first_positive()
    target = float((p + 1) * c)
    out.append(BoundCheck(
        "first-eigenvalue-lower-bound",
        "sigma_1 >= (p+1)c with equality on the ball",
        abs(sigma1 - target) <= tol,
        {"sigma_1": sigma1, "(p+1)c": target}))

    sigmas = [g.value for g in dtn.eigenvalues for _ in range(g.multiplicity)
              if g.value > 1e-9]
    lambdas = sorted(ev for row in hodge.blocks if row["kind"] == "coexact"
                     for ev in row["eigenvalues"])
    factor = float((n - p) * c) if p <= n - 1 else None
    if factor:
        k_upper = min(len(sigmas), len(lambdas))
        comparisons = [sigmas[k] <= lambdas[k] / factor + tol for k in range(k_upper)]
        first_block = next(row["dim"] for row in dtn.blocks
                           if row["kind"] == "coexact" and row["l"] == 1)
        equalities = [abs(sigmas[k] - lambdas[k] / factor) <= tol
                      for k in range(min(first_block, k_upper))]
        out.append(BoundCheck(
            "hodge-comparison",
            "sigma_k <= lambda_k / ((n-p)c), equality on the first coexact block",
            all(comparisons) and all(equalities),
            {"checked_k": k_upper, "equality_k": len(equalities)}))

    out.append(BoundCheck(
        "strict-half-bound",
        "sigma_1 > (p+1)c/2 strictly",
        sigma1 > float((p + 1) * c / 2) + tol,
        {"sigma_1": sigma1, "(p+1)c/2": float((p + 1) * c / 2)}))

    nu1 = dtn_neumann.first_positive()
    out.append(BoundCheck(
        "operator-ordering",
        "nu_1 <= sigma_1",
        nu1 <= sigma1 + tol,
        {"nu_1": nu1, "sigma_1": sigma1}))
    return out


def scaling_check(report_unit: SpectrumReport, report_scaled: SpectrumReport,
                  rel_tol: float = 1e-10) -> BoundCheck:
    """Eigenvalues scale like 1/R (order-one operators) or 1/R^2
    (boundary Laplacian) when the ball is rescaled from radius one."""
    if (report_unit.operator != report_scaled.operator
            or report_unit.m != report_scaled.m
            or report_unit.p != report_scaled.p
            or report_unit.l_max != report_scaled.l_max):
        raise ValueError("reports are not comparable")
    power = 2 if report_unit.operator == "hodge-boundary" else 1
    ratio = float(Fraction(report_scaled.radius) ** power)
    ok = True
    worst = 0.0
    for gu, gs in zip(report_unit.eigenvalues, report_scaled.eigenvalues):
        if gu.multiplicity != gs.multiplicity:
            ok = False
            break
        expected = gu.value / ratio
        err = abs(gs.value - expected) / max(1.0, abs(expected))
        worst = max(worst, err)
        if err > rel_tol:
            ok = False
    return BoundCheck("radius-scaling",
                      f"eigenvalues scale like 1/R^{power}",
                      ok, {"worst_relative_error": worst})
