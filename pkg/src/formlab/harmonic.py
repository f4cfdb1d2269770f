"""Homogeneous polynomial form spaces by exact linear algebra.

For each ambient dimension m, coefficient degree l and form degree p we
build:

  * the full monomial space of homogeneous polynomial p-forms,
  * its subspace of harmonic fields (componentwise harmonic and
    co-closed),
  * the closed subspace (additionally d w = 0), and
  * the normal-null subspace (additionally i_x w = 0 identically).

The normal-null condition i_x w = 0 as a polynomial form is equivalent
to the vanishing of the normal contraction on any origin-centred
sphere: a homogeneous polynomial cannot be divisible by the
inhomogeneous factor |x|^2 - R^2, so vanishing on the sphere forces
identical vanishing.  This turns a boundary condition into finitely
many exact linear constraints.

Bases are computed by rational Gaussian elimination with a fixed
pivoting rule, so repeated runs produce identical bases.  A small disk
cache stores the results; rationals are encoded portably as decimal
strings (sign carried by the numerator).
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .exterior import multi_indices
from .polynomials import Polynomial, monomial_exponents
from .polyform import PolyForm, PolyVectorField
from .quadrature import sphere_average

KINDS = ("P", "H", "H-closed", "H-normal-null")


@dataclass
class FormSpaceBasis:
    m: int
    l: int
    p: int
    kind: str
    basis: list[PolyForm]
    gram: list[list[Fraction]]

    @property
    def dim(self) -> int:
        return len(self.basis)


def _monomial_frame(m: int, l: int, p: int):
    """Coordinates for P_{l,p}: pairs (multi-index, exponent tuple)."""
    return [(I, e) for I in multi_indices(m, p) for e in monomial_exponents(m, l)]


def _vector_to_form(m: int, p: int, frame, vec) -> PolyForm:
    coeffs: dict = {}
    for (I, e), c in zip(frame, vec):
        if not c:
            continue
        poly = coeffs.get(I)
        add = Polynomial(m, {e: c})
        coeffs[I] = add if poly is None else poly + add
    return PolyForm(m, p, coeffs)


def _form_rows(images: list[PolyForm]) -> list[list[Fraction]]:
    """Stack form-valued images of basis vectors into constraint rows.

    Row order is fixed by sorting the occurring (multi-index, exponent)
    coordinates, so elimination is deterministic.
    """
    coords: set = set()
    for form in images:
        for I, poly in form.coeffs.items():
            for e in poly.terms:
                coords.add((I, e))
    coord_list = sorted(coords)
    rows = []
    for I, e in coord_list:
        row = []
        for img in images:
            poly = img.coeffs.get(I)
            row.append(Fraction(poly.coefficient(e)) if poly is not None else Fraction(0))
        rows.append(row)
    return rows


def _restrict(basis: list[PolyForm], operator) -> list[PolyForm]:
    """Sub-basis of ker(operator) within span(basis), deterministic."""
    if not basis:
        return []
    images = [operator(b) for b in basis]
    rows = _form_rows(images)
    null = linalg.nullspace(rows, len(basis))
    out = []
    for vec in null:
        form = PolyForm.zero(basis[0].m, basis[0].p)
        for c, b in zip(vec, basis):
            if c:
                form = form + b * c
        out.append(form)
    return out


def _pullback_gram(basis: list[PolyForm], m: int) -> list[list[Fraction]]:
    """Gram matrix of the pullbacks to the unit sphere.

    Entry (i, j) is the unit-sphere average (not the integral) of
    <J* b_i, J* b_j>; the |S^{m-1}(1)| factor is common to all entries.
    """
    from .ball import BallDomain, jstar_inner
    dom = BallDomain(m, Fraction(1))
    size = len(basis)
    gram = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            density = jstar_inner(basis[i], basis[j], dom)
            val = Fraction(0)
            for e, c in density.terms.items():
                avg = sphere_average(e, m)
                if avg:
                    val += c * avg
            gram[i][j] = gram[j][i] = val
    return gram


def monomial_form_basis(m: int, l: int, p: int) -> FormSpaceBasis:
    """The full space of homogeneous polynomial p-forms of degree l."""
    if l < 0 or not 0 <= p <= m:
        raise ValueError("bad (l, p) range")
    frame = _monomial_frame(m, l, p)
    basis = []
    for I, e in frame:
        basis.append(PolyForm(m, p, {I: Polynomial(m, {e: Fraction(1)})}))
    return FormSpaceBasis(m, l, p, "P", basis, _pullback_gram(basis, m))


def harmonic_field_basis(m: int, l: int, p: int) -> FormSpaceBasis:
    """Harmonic fields: componentwise harmonic and co-closed."""
    mono = monomial_form_basis(m, l, p)
    basis = _restrict(mono.basis, lambda w: w.laplacian())
    if p >= 1:
        basis = _restrict(basis, lambda w: w.delta())
    return FormSpaceBasis(m, l, p, "H", basis, _pullback_gram(basis, m))


def split_closed_normal_null(hbasis: FormSpaceBasis) -> tuple[FormSpaceBasis, FormSpaceBasis]:
    """Split a harmonic-field basis into (closed, normal-null) parts."""
    if hbasis.kind != "H":
        raise ValueError("expected a harmonic-field basis")
    m, l, p = hbasis.m, hbasis.l, hbasis.p
    if p <= m - 1:
        closed = _restrict(hbasis.basis, lambda w: w.d())
    else:
        closed = list(hbasis.basis)
    if p >= 1:
        position = PolyVectorField.position(m)
        normal_null = _restrict(hbasis.basis, lambda w: w.interior(position))
    else:
        # the normal contraction of a boundary function vanishes
        # identically, so the condition is vacuous on 0-forms
        normal_null = list(hbasis.basis)
    return (FormSpaceBasis(m, l, p, "H-closed", closed, _pullback_gram(closed, m)),
            FormSpaceBasis(m, l, p, "H-normal-null", normal_null,
                           _pullback_gram(normal_null, m)))


def sphere_reduce(q: Polynomial, radius) -> Polynomial:
    """Canonical representative of q modulo |x|^2 - R^2.

    Eliminates the last variable's square: monomials keep exponent of
    x_m at most one.  Linear and idempotent.
    """
    R2 = Fraction(radius) ** 2
    m = q.m
    out = Polynomial.zero(m)
    work = q
    while work:
        keep = {}
        carry = Polynomial.zero(m)
        for e, c in work.terms.items():
            if e[m - 1] >= 2:
                base = e[:m - 1] + (e[m - 1] - 2,)
                # x_m^2 = R^2 - sum_{i<m} x_i^2
                rest = Polynomial(m, {base: c * R2})
                for i in range(m - 1):
                    e2 = tuple(b + 2 * int(j == i) for j, b in enumerate(base))
                    rest = rest - Polynomial(m, {e2: c})
                carry = carry + rest
            else:
                keep[e] = c
        out = out + Polynomial(m, keep)
        work = carry
    return out


# ---------------------------------------------------------------------------
# Disk cache.
# ---------------------------------------------------------------------------

def _encode_fraction(x: Fraction) -> list[str]:
    return [str(x.numerator), str(x.denominator)]


def _decode_fraction(pair) -> Fraction:
    return Fraction(int(pair[0]), int(pair[1]))


def _encode_basis(fsb: FormSpaceBasis) -> dict:
    frame = _monomial_frame(fsb.m, fsb.l, fsb.p)
    vectors = []
    for form in fsb.basis:
        vec = []
        for I, e in frame:
            c = form.coeffs.get(I, Polynomial.zero(fsb.m)).coefficient(e) \
                if I in form.coeffs else Fraction(0)
            vec.append(_encode_fraction(Fraction(c)))
        vectors.append(vec)
    return {
        "schema": 1,
        "m": fsb.m, "l": fsb.l, "p": fsb.p, "kind": fsb.kind,
        "dim": fsb.dim,
        "frame": [[list(I), list(e)] for I, e in frame],
        "vectors": vectors,
        "gram": [[_encode_fraction(v) for v in row] for row in fsb.gram],
    }


def _decode_basis(doc: dict) -> FormSpaceBasis:
    m, l, p = doc["m"], doc["l"], doc["p"]
    frame = [(tuple(I), tuple(e)) for I, e in doc["frame"]]
    basis = [_vector_to_form(m, p, frame, [_decode_fraction(v) for v in vec])
             for vec in doc["vectors"]]
    gram = [[_decode_fraction(v) for v in row] for row in doc["gram"]]
    return FormSpaceBasis(m, l, p, doc["kind"], basis, gram)


class BasisCache:
    """Memoising store for form-space bases, optionally disk-backed.

    Disk writes go through a temporary file and an atomic rename, which
    keeps the single-writer contract safe under concurrent readers.
    """

    def __init__(self, directory: str | None = None):
        self.directory = directory
        if directory:
            os.makedirs(directory, exist_ok=True)
        self._memo: dict[tuple, FormSpaceBasis] = {}

    def _path(self, m, l, p, kind) -> str | None:
        if not self.directory:
            return None
        return os.path.join(self.directory, f"basis_m{m}_l{l}_p{p}_{kind}.json")

    def get(self, m: int, l: int, p: int, kind: str) -> FormSpaceBasis:
        if kind not in KINDS:
            raise ValueError(f"unknown basis kind {kind!r}")
        key = (m, l, p, kind)
        if key in self._memo:
            return self._memo[key]
        path = self._path(m, l, p, kind)
        if path and os.path.exists(path):
            with open(path) as fh:
                fsb = _decode_basis(json.load(fh))
            self._memo[key] = fsb
            return fsb
        fsb = self._compute(m, l, p, kind)
        self._memo[key] = fsb
        if path:
            fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                json.dump(_encode_basis(fsb), fh)
            os.replace(tmp, path)
        return fsb

    def _compute(self, m, l, p, kind) -> FormSpaceBasis:
        if kind == "P":
            return monomial_form_basis(m, l, p)
        if kind == "H":
            return harmonic_field_basis(m, l, p)
        h = self.get(m, l, p, "H")
        closed, normal_null = split_closed_normal_null(h)
        other = normal_null if kind == "H-closed" else closed
        self._memo[(m, l, p, other.kind)] = other
        path = self._path(m, l, p, other.kind)
        if path and not os.path.exists(path):
            fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                json.dump(_encode_basis(other), fh)
            os.replace(tmp, path)
        return closed if kind == "H-closed" else normal_null
