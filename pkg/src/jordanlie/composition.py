"""Composition algebras over the rationals via Cayley-Dickson doubling.

An algebra of dimension 1, 2, 4 or 8 is built by doubling the base field,
one nonzero parameter gamma per doubling step:

    (a, b) * (c, d) = (a c + gamma * conj(d) b,  d a + b conj(c))
    conj((a, b))    = (conj(a), -b)
    N((a, b))       = N(a) - gamma * N(b)

The unit is basis element 0.  With all gammas equal to 1 each dimension
comes out in its split form (the norm has isotropic vectors).  The doubling
rule above is one of several equivalent sign conventions; the norm
composition law N(uv) = N(u) N(v) is verified on all basis 4-tuples at
construction time, so the convention is load-bearing only through that check.

Algebras can also be assembled from an explicit multiplication table plus a
norm Gram matrix (used when a composition algebra is carved out of a larger
structure); the same build-time checks apply.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import AlgebraMismatch, InvalidParameter
from .rationals import Q, fmt, parse

Coeffs = tuple[Fraction, ...]


@dataclass(frozen=True)
class CompositionAlgebra:
    """Immutable multiplication-table presentation of a composition algebra."""

    dim: int
    gammas: tuple[Fraction, ...] | None
    basis_labels: tuple[str, ...]
    mul_table: tuple[tuple[Coeffs, ...], ...]
    norm_gram: tuple[Coeffs, ...]
    descriptor: str

    def __repr__(self):
        return f"CompositionAlgebra({self.descriptor})"

    # -- elements -----------------------------------------------------------

    def element(self, coeffs: Sequence) -> "CAElement":
        c = tuple(Q(x) for x in coeffs)
        if len(c) != self.dim:
            raise InvalidParameter(f"expected {self.dim} coefficients, got {len(c)}")
        return CAElement(self, c)

    def zero(self) -> "CAElement":
        return CAElement(self, (Q(0),) * self.dim)

    def one(self) -> "CAElement":
        return self.basis_element(0)

    def basis_element(self, i: int) -> "CAElement":
        c = [Q(0)] * self.dim
        c[i] = Q(1)
        return CAElement(self, tuple(c))

    def basis(self) -> list["CAElement"]:
        return [self.basis_element(i) for i in range(self.dim)]

    # -- bilinear data ------------------------------------------------------

    def mul_coeffs(self, u: Coeffs, v: Coeffs) -> Coeffs:
        out = [Q(0)] * self.dim
        for i, ci in enumerate(u):
            if not ci:
                continue
            row = self.mul_table[i]
            for j, cj in enumerate(v):
                if not cj:
                    continue
                c = ci * cj
                for k, t in enumerate(row[j]):
                    if t:
                        out[k] += c * t
        return tuple(out)

    def norm_coeffs(self, u: Coeffs) -> Fraction:
        total = Q(0)
        g = self.norm_gram
        for i, ci in enumerate(u):
            if not ci:
                continue
            for j, cj in enumerate(u):
                if cj and g[i][j]:
                    total += ci * cj * g[i][j]
        return total

    def norm_bilinear(self, u: Coeffs, v: Coeffs) -> Fraction:
        """Polarization B(u, v) = N(u+v) - N(u) - N(v) = 2 u^T G v."""
        total = Q(0)
        g = self.norm_gram
        for i, ci in enumerate(u):
            if not ci:
                continue
            for j, cj in enumerate(v):
                if cj and g[i][j]:
                    total += ci * cj * g[i][j]
        return 2 * total


@dataclass(frozen=True)
class CAElement:
    algebra: CompositionAlgebra
    coeffs: Coeffs

    def __post_init__(self):
        if len(self.coeffs) != self.algebra.dim:
            raise InvalidParameter("coefficient vector length != algebra dimension")

    def _check(self, other: "CAElement"):
        if self.algebra is not other.algebra:
            raise AlgebraMismatch("elements belong to different composition algebras")

    def __add__(self, other):
        self._check(other)
        return CAElement(self.algebra, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return CAElement(self.algebra, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return CAElement(self.algebra, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, CAElement):
            self._check(other)
            return CAElement(self.algebra, self.algebra.mul_coeffs(self.coeffs, other.coeffs))
        return CAElement(self.algebra, tuple(Q(other) * a for a in self.coeffs))

    def __rmul__(self, scalar):
        return CAElement(self.algebra, tuple(Q(scalar) * a for a in self.coeffs))

    def __eq__(self, other):
        return (
            isinstance(other, CAElement)
            and self.algebra is other.algebra
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.algebra), self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def conj(self) -> "CAElement":
        t = self.trace()
        c = list(-a for a in self.coeffs)
        c[0] += t
        return CAElement(self.algebra, tuple(c))

    def trace(self) -> Fraction:
        """Scalar t with u + conj(u) = t * 1."""
        one = (Q(1),) + (Q(0),) * (self.algebra.dim - 1)
        return self.algebra.norm_bilinear(self.coeffs, one)

    def norm(self) -> Fraction:
        return self.algebra.norm_coeffs(self.coeffs)

    def __repr__(self):
        parts = [
            f"{fmt(c)}*{lbl}"
            for c, lbl in zip(self.coeffs, self.algebra.basis_labels)
            if c
        ]
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

_DIM_NAMES = {1: "field", 2: "complex", 4: "quaternion", 8: "octonion"}


def _double(table, norms, gamma: Fraction):
    """One Cayley-Dickson step on (mul table, basis norm list)."""
    n = len(norms)
    m = 2 * n

    def conj_vec(v):
        return tuple(v[0] if k == 0 else -v[k] for k in range(n))

    def mul(u, v):
        out = [Q(0)] * n
        for i, ci in enumerate(u):
            if not ci:
                continue
            for j, cj in enumerate(v):
                if cj:
                    c = ci * cj
                    for k, t in enumerate(table[i][j]):
                        if t:
                            out[k] += c * t
        return tuple(out)

    def pair(a, b):
        return tuple(a) + tuple(b)

    zero = (Q(0),) * n
    new_table = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            a = tuple(Q(1) if k == i else Q(0) for k in range(n)) if i < n else zero
            b = tuple(Q(1) if k == i - n else Q(0) for k in range(n)) if i >= n else zero
            c = tuple(Q(1) if k == j else Q(0) for k in range(n)) if j < n else zero
            d = tuple(Q(1) if k == j - n else Q(0) for k in range(n)) if j >= n else zero
            first = tuple(
                x + gamma * y for x, y in zip(mul(a, c), mul(conj_vec(d), b))
            )
            second = tuple(x + y for x, y in zip(mul(d, a), mul(b, conj_vec(c))))
            new_table[i][j] = pair(first, second)
    new_norms = list(norms) + [-gamma * x for x in norms]
    return [tuple(row) for row in new_table], new_norms


def _verify_composition_law(alg: CompositionAlgebra):
    """N(uv) = N(u)N(v) holds identically iff its full polarization holds on
    basis 4-tuples:  B(ei*ej, ek*el) + B(ek*ej, ei*el) = B(ei,ek) B(ej,el)."""
    n = alg.dim
    basis = [tuple(Q(1) if k == i else Q(0) for k in range(n)) for i in range(n)]
    prod = [[alg.mul_coeffs(basis[i], basis[j]) for j in range(n)] for i in range(n)]
    B = alg.norm_bilinear
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    lhs = B(prod[i][j], prod[k][l]) + B(prod[k][j], prod[i][l])
                    rhs = B(basis[i], basis[k]) * B(basis[j], basis[l])
                    if lhs != rhs:
                        raise InvalidParameter(
                            f"norm is not multiplicative at basis tuple {(i, j, k, l)}"
                        )


def _verify_unit_and_conj(alg: CompositionAlgebra):
    n = alg.dim
    basis = [tuple(Q(1) if k == i else Q(0) for k in range(n)) for i in range(n)]
    for j in range(n):
        if alg.mul_coeffs(basis[0], basis[j]) != basis[j]:
            raise InvalidParameter(f"basis element 0 is not a left unit at {j}")
        if alg.mul_coeffs(basis[j], basis[0]) != basis[j]:
            raise InvalidParameter(f"basis element 0 is not a right unit at {j}")
    # u * conj(u) = N(u) * 1, checked via its polarization on basis pairs
    for i in range(n):
        for j in range(n):
            ei, ej = alg.element(basis[i]), alg.element(basis[j])
            lhs = ei * ej.conj() + ej * ei.conj()
            want = [Q(0)] * n
            want[0] = alg.norm_bilinear(basis[i], basis[j])
            if list(lhs.coeffs) != want:
                raise InvalidParameter(f"u*conj(u) != N(u)*1 at basis pair {(i, j)}")


def _gram_det(gram) -> Fraction:
    from .linalg import det

    return det([list(row) for row in gram])


def build_composition(dim: int, gammas: Sequence) -> CompositionAlgebra:
    """Cayley-Dickson algebra of the given dimension and doubling parameters."""
    if dim not in (1, 2, 4, 8):
        raise InvalidParameter(f"dimension must be 1, 2, 4 or 8, not {dim}")
    gs = tuple(Q(g) for g in gammas)
    need = dim.bit_length() - 1
    if len(gs) != need:
        raise InvalidParameter(f"dimension {dim} needs {need} doubling parameters, got {len(gs)}")
    if any(g == 0 for g in gs):
        raise InvalidParameter("doubling parameters must be nonzero")

    table = [[(Q(1),)]]
    norms = [Q(1)]
    for g in gs:
        table, norms = _double(table, norms, g)

    labels = _basis_labels(dim)
    gram = tuple(
        tuple(norms[i] if i == j else Q(0) for j in range(dim)) for i in range(dim)
    )
    alg = CompositionAlgebra(
        dim=dim,
        gammas=gs,
        basis_labels=labels,
        mul_table=tuple(tuple(row) for row in table),
        norm_gram=gram,
        descriptor=_descriptor(dim, gs),
    )
    _verify_unit_and_conj(alg)
    _verify_composition_law(alg)
    if _gram_det(alg.norm_gram) == 0:
        raise InvalidParameter("norm form is degenerate")
    return alg


def algebra_from_table(mul_table, norm_gram, labels=None) -> CompositionAlgebra:
    """Wrap an explicit multiplication table as a composition algebra.

    The unit must sit at basis index 0.  All build-time checks of
    ``build_composition`` are applied; the result has no doubling parameters
    and its descriptor is not part of the serializable grammar.
    """
    dim = len(mul_table)
    if dim not in (1, 2, 4, 8):
        raise InvalidParameter(f"dimension must be 1, 2, 4 or 8, not {dim}")
    table = tuple(
        tuple(tuple(Q(x) for x in cell) for cell in row) for row in mul_table
    )
    gram = tuple(tuple(Q(x) for x in row) for row in norm_gram)
    if labels is None:
        labels = tuple(f"b{i}" for i in range(dim))
    alg = CompositionAlgebra(
        dim=dim,
        gammas=None,
        basis_labels=tuple(labels),
        mul_table=table,
        norm_gram=gram,
        descriptor=f"table:{dim}",
    )
    _verify_unit_and_conj(alg)
    _verify_composition_law(alg)
    if _gram_det(alg.norm_gram) == 0:
        raise InvalidParameter("norm form is degenerate")
    return alg


def _basis_labels(dim: int) -> tuple[str, ...]:
    if dim == 1:
        return ("1",)
    if dim == 2:
        return ("1", "i")
    if dim == 4:
        return ("1", "i", "j", "k")
    return ("1",) + tuple(f"e{i}" for i in range(1, 8))


def _descriptor(dim: int, gs: tuple[Fraction, ...]) -> str:
    if dim == 1:
        return "field"
    if dim == 2:
        return "split-complex" if gs == (Q(1),) else f"complex:{fmt(gs[0])}"
    name = _DIM_NAMES[dim]
    if all(g == 1 for g in gs):
        return f"{name}:split"
    return name + ":" + ",".join(fmt(g) for g in gs)


def parse_descriptor(text: str) -> CompositionAlgebra:
    """Build the algebra named by a descriptor string.

    Grammar: "field" | "split-complex" | "complex:g" | "quaternion:g1,g2"
    | "octonion:g1,g2,g3" | "quaternion:split" | "octonion:split".
    """
    t = text.strip()
    if t == "field":
        return build_composition(1, [])
    if t == "split-complex":
        return build_composition(2, [1])
    head, _, rest = t.partition(":")
    dims = {"complex": 2, "quaternion": 4, "octonion": 8}
    if head not in dims:
        raise InvalidParameter(f"unknown composition algebra descriptor {text!r}")
    dim = dims[head]
    need = dim.bit_length() - 1
    if rest == "split":
        return build_composition(dim, [1] * need)
    if not rest:
        raise InvalidParameter(f"descriptor {text!r} is missing doubling parameters")
    gs = [parse(p) for p in rest.split(",")]
    return build_composition(dim, gs)


# ---------------------------------------------------------------------------
# free-function aliases (thin wrappers over the element methods)
# ---------------------------------------------------------------------------


def ca_mul(u: CAElement, v: CAElement) -> CAElement:
    return u * v


def conj(u: CAElement) -> CAElement:
    return u.conj()


def trace(u: CAElement) -> Fraction:
    return u.trace()


def norm(u: CAElement) -> Fraction:
    return u.norm()


# ---------------------------------------------------------------------------
# JSON encoding
# ---------------------------------------------------------------------------


def element_to_json(u: CAElement) -> dict:
    return {
        "algebra": u.algebra.descriptor,
        "coeffs": [fmt(c) for c in u.coeffs],
    }


def element_from_json(obj: dict, algebra: CompositionAlgebra | None = None) -> CAElement:
    if algebra is None:
        algebra = parse_descriptor(obj["algebra"])
    return algebra.element([parse(c) for c in obj["coeffs"]])
