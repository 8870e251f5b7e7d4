"""Simple Jordan algebras over the rationals.

Two families are supported:

* ``hermitian(r, D)`` -- r x r matrices over a composition algebra D that
  equal their conjugate transpose, under x o y = (xy + yx)/2.  D must be
  associative unless r = 3, where the 8-dimensional (octonion) case is
  admitted as well.
* ``quadratic(gram)`` -- triples (a, b, v) with v in a quadratic space
  (V, Q), where the square is (a^2 + Q(v), b^2 + Q(v), (a+b) v) and the
  product is obtained by polarization.

Every element satisfies a monic polynomial of degree <= r (r the degree of
the algebra: r for hermitian, 2 for quadratic).  The degree-r characteristic
coefficients are computed by a uniform linear-dependency algorithm; its
extreme coefficients are the trace and the determinant-like norm.  Sign
convention for the quadratic family: N(a, b, v) = ab - Q(v), which is the
unique constant term making x^2 - T(x) x + N(x) e = 0 hold with the square
rule above.

Elements are stored as coefficient vectors over a fixed basis: the r
diagonal matrix units first, then for each pair i < j (in lexicographic
order) the d elements {b E_ij + conj(b) E_ji} for b running over the basis
of D; the quadratic family uses (e1, e2, V-basis).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .composition import CAElement, CompositionAlgebra
from .composition import element_from_json as ca_element_from_json
from .composition import element_to_json as ca_element_to_json
from .errors import AlgebraMismatch, ConstructionError, InvalidParameter, SingularElement
from .rationals import HALF, Q, fmt, parse

Vec = tuple[Fraction, ...]


class JordanAlgebra:
    """Shared machinery for both families; construct via the factory
    functions :func:`hermitian` and :func:`quadratic`."""

    variant: str  # "hermitian" | "quadratic"
    dim: int
    degree: int

    def __init__(self):
        raise TypeError("use jordan.hermitian(...) or jordan.quadratic(...)")

    # -- common setup, called by the factories ------------------------------

    def _finish_init(self):
        self.mul_table: list[list[dict]] = self._build_mul_table()
        self.identity = self.element(self._identity_vec())
        self.frames = [self.element(v) for v in self._frame_vecs()]
        # fixed element with r distinct "eigenvalues"; used to steer the
        # characteristic-coefficient interpolation off the degenerate locus
        g0 = [Q(0)] * self.dim
        for i, f in enumerate(self._frame_vecs()):
            for k, c in enumerate(f):
                g0[k] += (i + 1) * c
        self._generic_probe = tuple(g0)
        self._trace_covector: Optional[list[Fraction]] = None

    # -- elements ------------------------------------------------------------

    def element(self, vec: Sequence) -> "JordanElement":
        v = tuple(Q(x) for x in vec)
        if len(v) != self.dim:
            raise InvalidParameter(f"expected {self.dim} coefficients, got {len(v)}")
        return JordanElement(self, v)

    def zero(self) -> "JordanElement":
        return self.element([0] * self.dim)

    def basis_element(self, k: int) -> "JordanElement":
        v = [Q(0)] * self.dim
        v[k] = Q(1)
        return self.element(v)

    def basis(self) -> list["JordanElement"]:
        return [self.basis_element(k) for k in range(self.dim)]

    def frame(self, i: int) -> "JordanElement":
        """i-th frame idempotent (1-based)."""
        return self.frames[i - 1]

    # -- product -------------------------------------------------------------

    def mul_vec(self, x: Vec, y: Vec) -> Vec:
        out = [Q(0)] * self.dim
        table = self.mul_table
        for i, ci in enumerate(x):
            if not ci:
                continue
            row = table[i]
            for j, cj in enumerate(y):
                if not cj:
                    continue
                c = ci * cj
                for k, t in row[j].items():
                    out[k] += c * t
        return tuple(out)

    def lmul_matrix(self, x: Vec) -> list[list[Fraction]]:
        """Matrix of z -> x o z in the algebra basis (columns are x o b_j)."""
        cols = [self.mul_vec(x, tuple(b.vec)) for b in self.basis()]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def trace_covector(self) -> list[Fraction]:
        if self._trace_covector is None:
            self._trace_covector = [jordan_trace(b) for b in self.basis()]
        return self._trace_covector

    def trace_form_gram(self) -> list[list[Fraction]]:
        """Gram matrix of the associative bilinear form (x, y) -> T(x o y)."""
        tau = self.trace_covector()
        g = [[Q(0)] * self.dim for _ in range(self.dim)]
        for i in range(self.dim):
            for j in range(i, self.dim):
                val = sum(
                    (c * tau[k] for k, c in self.mul_table[i][j].items()), Q(0)
                )
                g[i][j] = g[j][i] = val
        return g


class HermitianJordan(JordanAlgebra):
    def __init__(self, r: int, coeff_algebra: CompositionAlgebra):
        if r < 2:
            raise InvalidParameter("hermitian family needs degree r >= 2")
        if coeff_algebra.dim == 8 and r != 3:
            raise InvalidParameter(
                "8-dimensional coefficient algebras only form a Jordan algebra at r = 3"
            )
        self.variant = "hermitian"
        self.r = r
        self.coeff_algebra = coeff_algebra
        self.degree = r
        d = coeff_algebra.dim
        self.pairs = [(i, j) for i in range(r) for j in range(i + 1, r)]
        self.dim = r + len(self.pairs) * d
        self._pair_offset = {p: r + n * d for n, p in enumerate(self.pairs)}
        self._finish_init()

    def __repr__(self):
        return f"JordanAlgebra(H{self.r}({self.coeff_algebra.descriptor}))"

    # -- structured <-> vector ------------------------------------------------

    def matrix_of(self, vec: Vec) -> list[list[CAElement]]:
        """Full r x r matrix over D (lower triangle by conjugation)."""
        D = self.coeff_algebra
        d = D.dim
        mat = [[D.zero() for _ in range(self.r)] for _ in range(self.r)]
        for i in range(self.r):
            mat[i][i] = vec[i] * D.one()
        for (i, j), off in self._pair_offset.items():
            entry = D.element(vec[off : off + d])
            mat[i][j] = entry
            mat[j][i] = entry.conj()
        return mat

    def vector_of(self, mat: list[list[CAElement]]) -> Vec:
        """Inverse of matrix_of; asserts the matrix is hermitian."""
        D = self.coeff_algebra
        d = D.dim
        out = [Q(0)] * self.dim
        for i in range(self.r):
            entry = mat[i][i]
            if any(entry.coeffs[1:]):
                raise ConstructionError("diagonal entry is not scalar")
            out[i] = entry.coeffs[0]
        for (i, j), off in self._pair_offset.items():
            if mat[j][i] != mat[i][j].conj():
                raise ConstructionError("matrix is not hermitian")
            for k, c in enumerate(mat[i][j].coeffs):
                out[off + k] = c
        return tuple(out)

    def matrix_product(self, a, b) -> list[list[CAElement]]:
        """Plain matrix product over D, fixed summation order."""
        D = self.coeff_algebra
        r = self.r
        out = [[D.zero() for _ in range(r)] for _ in range(r)]
        for i in range(r):
            for k in range(r):
                acc = D.zero()
                for j in range(r):
                    acc = acc + a[i][j] * b[j][k]
                out[i][k] = acc
        return out

    def symmetrized_product(self, x: Vec, y: Vec) -> Vec:
        """(xy + yx)/2 through genuine matrix multiplication over D."""
        a, b = self.matrix_of(x), self.matrix_of(y)
        ab, ba = self.matrix_product(a, b), self.matrix_product(b, a)
        sym = [
            [HALF * (ab[i][j] + ba[i][j]) for j in range(self.r)]
            for i in range(self.r)
        ]
        return self.vector_of(sym)

    def _build_mul_table(self):
        table = [[None] * self.dim for _ in range(self.dim)]
        basis_vecs = []
        for k in range(self.dim):
            v = [Q(0)] * self.dim
            v[k] = Q(1)
            basis_vecs.append(tuple(v))
        for i in range(self.dim):
            for j in range(i, self.dim):
                prod = self.symmetrized_product(basis_vecs[i], basis_vecs[j])
                entry = {k: c for k, c in enumerate(prod) if c}
                table[i][j] = entry
                table[j][i] = entry
        return table

    def _identity_vec(self) -> Vec:
        return tuple(Q(1) if k < self.r else Q(0) for k in range(self.dim))

    def _frame_vecs(self) -> list[Vec]:
        return [
            tuple(Q(1) if k == i else Q(0) for k in range(self.dim))
            for i in range(self.r)
        ]

    def diag_entries(self, vec: Vec) -> list[Fraction]:
        return list(vec[: self.r])

    def upper_entry(self, vec: Vec, i: int, j: int) -> CAElement:
        """Entry at 0-based (i, j), i < j."""
        off = self._pair_offset[(i, j)]
        return self.coeff_algebra.element(vec[off : off + self.coeff_algebra.dim])

    def from_entries(self, diag: Sequence, upper: dict) -> "JordanElement":
        """diag: r scalars; upper: {(i, j) 0-based: CAElement}."""
        out = [Q(0)] * self.dim
        for i, a in enumerate(diag):
            out[i] = Q(a)
        for (i, j), entry in upper.items():
            off = self._pair_offset[(i, j)]
            for k, c in enumerate(entry.coeffs):
                out[off + k] = c
        return self.element(out)


class QuadraticJordan(JordanAlgebra):
    def __init__(self, gram: Sequence[Sequence]):
        g = [[Q(x) for x in row] for row in gram]
        n = len(g)
        if n < 1 or any(len(row) != n for row in g):
            raise InvalidParameter("Gram matrix must be square and nonempty")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise InvalidParameter("Gram matrix must be symmetric")
        if linalg.det(g) == 0:
            raise InvalidParameter("quadratic form must be nondegenerate")
        self.variant = "quadratic"
        self.v_dim = n
        self.gram = tuple(tuple(row) for row in g)
        self.degree = 2
        self.r = 2
        self.dim = 2 + n
        self._finish_init()

    def __repr__(self):
        return f"JordanAlgebra(J2(V{self.v_dim}))"

    def qform(self, v: Sequence[Fraction]) -> Fraction:
        total = Q(0)
        for i, ci in enumerate(v):
            if not ci:
                continue
            for j, cj in enumerate(v):
                if cj and self.gram[i][j]:
                    total += ci * cj * self.gram[i][j]
        return total

    def bform(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
        """B(u, v) = Q(u+v) - Q(u) - Q(v)."""
        total = Q(0)
        for i, ci in enumerate(u):
            if not ci:
                continue
            for j, cj in enumerate(v):
                if cj and self.gram[i][j]:
                    total += ci * cj * self.gram[i][j]
        return 2 * total

    def parts(self, vec: Vec):
        return vec[0], vec[1], vec[2:]

    def from_parts(self, a, b, v: Sequence) -> "JordanElement":
        if len(v) != self.v_dim:
            raise InvalidParameter("wrong vector-part length")
        return self.element([Q(a), Q(b), *[Q(x) for x in v]])

    def _mul_parts(self, x: Vec, y: Vec) -> Vec:
        a1, b1, v1 = self.parts(x)
        a2, b2, v2 = self.parts(y)
        cross = sum(
            (
                v1[i] * v2[j] * self.gram[i][j]
                for i in range(self.v_dim)
                for j in range(self.v_dim)
                if v1[i] and v2[j] and self.gram[i][j]
            ),
            Q(0),
        )
        s1, s2 = a1 + b1, a2 + b2
        vv = tuple(HALF * (s1 * v2[k] + s2 * v1[k]) for k in range(self.v_dim))
        return (a1 * a2 + cross, b1 * b2 + cross) + vv

    def _build_mul_table(self):
        table = [[None] * self.dim for _ in range(self.dim)]
        for i in range(self.dim):
            vi = tuple(Q(1) if k == i else Q(0) for k in range(self.dim))
            for j in range(i, self.dim):
                vj = tuple(Q(1) if k == j else Q(0) for k in range(self.dim))
                prod = self._mul_parts(vi, vj)
                entry = {k: c for k, c in enumerate(prod) if c}
                table[i][j] = entry
                table[j][i] = entry
        return table

    def _identity_vec(self) -> Vec:
        return (Q(1), Q(1)) + (Q(0),) * self.v_dim

    def _frame_vecs(self) -> list[Vec]:
        z = (Q(0),) * self.v_dim
        return [(Q(1), Q(0)) + z, (Q(0), Q(1)) + z]


def hermitian(r: int, coeff_algebra: CompositionAlgebra) -> HermitianJordan:
    return HermitianJordan(r, coeff_algebra)


def quadratic(gram: Sequence[Sequence]) -> QuadraticJordan:
    return QuadraticJordan(gram)


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JordanElement:
    algebra: JordanAlgebra
    vec: Vec

    def _check(self, other: "JordanElement"):
        if self.algebra is not other.algebra:
            raise AlgebraMismatch("elements belong to different Jordan algebras")

    def __add__(self, other):
        self._check(other)
        return JordanElement(self.algebra, tuple(a + b for a, b in zip(self.vec, other.vec)))

    def __sub__(self, other):
        self._check(other)
        return JordanElement(self.algebra, tuple(a - b for a, b in zip(self.vec, other.vec)))

    def __neg__(self):
        return JordanElement(self.algebra, tuple(-a for a in self.vec))

    def __mul__(self, other):
        if isinstance(other, JordanElement):
            self._check(other)
            return JordanElement(self.algebra, self.algebra.mul_vec(self.vec, other.vec))
        return JordanElement(self.algebra, tuple(Q(other) * a for a in self.vec))

    def __rmul__(self, scalar):
        return JordanElement(self.algebra, tuple(Q(scalar) * a for a in self.vec))

    def __eq__(self, other):
        return (
            isinstance(other, JordanElement)
            and self.algebra is other.algebra
            and self.vec == other.vec
        )

    def __hash__(self):
        return hash((id(self.algebra), self.vec))

    def is_zero(self) -> bool:
        return not any(self.vec)

    def power(self, k: int) -> "JordanElement":
        """Jordan power; unambiguous by power-associativity."""
        if k == 0:
            return self.algebra.identity
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def __repr__(self):
        return f"JordanElement({[fmt(c) for c in self.vec]})"


def jordan_mul(x: JordanElement, y: JordanElement) -> JordanElement:
    return x * y


# ---------------------------------------------------------------------------
# generic minimal polynomial, trace, norm, inverse
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MinPoly:
    """Monic minimal polynomial plus degree-r characteristic coefficients.

    Both polynomials are stored as ascending coefficient tuples (constant
    term first, leading 1 last).  The characteristic polynomial is
    t^r - a_{r-1} t^{r-1} + a_{r-2} t^{r-2} - ... + (-1)^r a_0, whose extreme
    coefficients a_{r-1} and a_0 are the trace and the norm.
    """

    min_coeffs: tuple[Fraction, ...]
    char_coeffs: tuple[Fraction, ...]

    @property
    def min_degree(self) -> int:
        return len(self.min_coeffs) - 1

    @property
    def a_coeffs(self) -> tuple[Fraction, ...]:
        """(a_0, ..., a_{r-1}) with char(t) = t^r - a_{r-1} t^{r-1} + ... + (-1)^r a_0."""
        r = len(self.char_coeffs) - 1
        return tuple(
            (-1) ** (r - k) * self.char_coeffs[k] for k in range(r)
        )

    @property
    def trace(self) -> Fraction:
        return -self.char_coeffs[-2]

    @property
    def norm(self) -> Fraction:
        r = len(self.char_coeffs) - 1
        return (-1) ** r * self.char_coeffs[0]


def _power_vectors(x: JordanElement, m: int) -> list[Vec]:
    out = [x.algebra.identity.vec]
    cur = x.algebra.identity
    for _ in range(m):
        cur = cur * x
        out.append(cur.vec)
    return out


def _monic_dependency(powers: list[Vec]) -> Optional[tuple[Fraction, ...]]:
    """Coefficients (c_0..c_{m-1}, 1) with sum c_k x^k + x^m = 0, if the
    first m vectors are independent and x^m lies in their span."""
    m = len(powers) - 1
    mat = [list(p) for p in powers[:m]]
    if linalg.rank(mat) != m:
        return None
    sol = linalg.solve(linalg.transpose(mat), [-c for c in powers[m]])
    if sol is None:
        return None
    return tuple(sol) + (Q(1),)


def _min_poly(x: JordanElement) -> tuple[Fraction, ...]:
    r = x.algebra.degree
    powers = _power_vectors(x, r)
    for m in range(1, r + 1):
        dep = _monic_dependency(powers[: m + 1])
        if dep is not None:
            return dep
    raise ConstructionError("element satisfies no monic polynomial of degree <= r")


def _char_poly(x: JordanElement) -> tuple[Fraction, ...]:
    """Ascending monic degree-r characteristic coefficients.

    Generic elements (powers e..x^{r-1} independent) are solved directly.
    Otherwise the element is moved along the line x + t*g through a fixed
    generic element g; the characteristic coefficients are polynomials of
    degree <= r in t, so r+1 generic sample points determine them, and the
    value at t = 0 is read off by Lagrange interpolation.
    """
    alg = x.algebra
    r = alg.degree
    direct = _monic_dependency(_power_vectors(x, r))
    if direct is not None:
        return direct
    probe = alg.element(alg._generic_probe)
    nodes: list[Fraction] = []
    samples: list[tuple[Fraction, ...]] = []
    t = 0
    while len(nodes) < r + 1:
        t += 1
        if t > 20 * (r + 1):
            raise ConstructionError("could not find enough generic sample points")
        y = x + t * probe
        dep = _monic_dependency(_power_vectors(y, r))
        if dep is None:
            continue
        nodes.append(Q(t))
        samples.append(dep)
    coeffs = []
    for k in range(r):
        val = Q(0)
        for i in range(r + 1):
            w = samples[i][k]
            for j in range(r + 1):
                if j != i:
                    w *= nodes[j] / (nodes[j] - nodes[i])
            val += w
        coeffs.append(val)
    return tuple(coeffs) + (Q(1),)


def generic_min_poly(x: JordanElement) -> MinPoly:
    return MinPoly(min_coeffs=_min_poly(x), char_coeffs=_char_poly(x))


def jordan_trace(x: JordanElement) -> Fraction:
    return -_char_poly(x)[-2]


def jordan_norm(x: JordanElement) -> Fraction:
    c = _char_poly(x)
    r = len(c) - 1
    return (-1) ** r * c[0]


def jordan_inverse(x: JordanElement) -> JordanElement:
    """Inverse inside the (associative) subalgebra generated by x and e."""
    c = _char_poly(x)
    if c[0] == 0:
        raise SingularElement("element has norm 0")
    acc = x.algebra.zero()
    for k in range(1, len(c)):
        if c[k]:
            acc = acc + c[k] * x.power(k - 1)
    inv = (-1 / c[0]) * acc
    if not (x * inv == x.algebra.identity and (x * x) * inv == x):
        raise ConstructionError("inverse postcondition failed")
    return inv


# ---------------------------------------------------------------------------
# Pierce decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PierceDecomposition:
    """Joint eigenspace decomposition for the frame multiplication operators.

    components maps (i, i) 1-based to the line spanned by the i-th frame
    idempotent and (i, j), i < j, to the off-diagonal space where both
    L_{e_i} and L_{e_j} act by 1/2.
    """

    algebra: JordanAlgebra
    components: dict[tuple[int, int], tuple[JordanElement, ...]]

    @property
    def off_diagonal_dim(self) -> int:
        dims = {
            len(v) for (i, j), v in self.components.items() if i != j
        }
        if len(dims) != 1:
            raise ConstructionError(f"off-diagonal components have unequal dims {dims}")
        return dims.pop()


def pierce(alg: JordanAlgebra) -> PierceDecomposition:
    r = alg.degree
    ops = [alg.lmul_matrix(alg.frame(i).vec) for i in range(1, r + 1)]
    n = alg.dim
    comps: dict[tuple[int, int], tuple[JordanElement, ...]] = {}

    def shifted(mat, lam):
        return [
            [mat[a][b] - (lam if a == b else 0) for b in range(n)] for a in range(n)
        ]

    for i in range(1, r + 1):
        basis = linalg.nullspace(shifted(ops[i - 1], Q(1)))
        comps[(i, i)] = tuple(alg.element(v) for v in basis)
    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            stacked = shifted(ops[i - 1], HALF) + shifted(ops[j - 1], HALF)
            basis = linalg.nullspace(stacked)
            comps[(i, j)] = tuple(alg.element(v) for v in basis)
    dec = PierceDecomposition(alg, comps)
    total = sum(len(v) for v in comps.values())
    if total != alg.dim or any(len(comps[(i, i)]) != 1 for i in range(1, r + 1)):
        raise ConstructionError("Pierce components do not add up to the algebra")
    return dec


# ---------------------------------------------------------------------------
# JSON encoding
# ---------------------------------------------------------------------------


def element_to_json(x: JordanElement) -> dict:
    alg = x.algebra
    if alg.variant == "hermitian":
        upper = {}
        for (i, j) in alg.pairs:
            entry = alg.upper_entry(x.vec, i, j)
            if not entry.is_zero():
                upper[f"{i + 1},{j + 1}"] = ca_element_to_json(entry)
        return {
            "diag": [fmt(c) for c in alg.diag_entries(x.vec)],
            "upper": upper,
        }
    a, b, v = alg.parts(x.vec)
    return {"a": fmt(a), "b": fmt(b), "v": [fmt(c) for c in v]}


def element_from_json(obj: dict, alg: JordanAlgebra) -> JordanElement:
    if alg.variant == "hermitian":
        diag = [parse(c) for c in obj["diag"]]
        if len(diag) != alg.r:
            raise InvalidParameter("wrong diagonal length")
        upper = {}
        for key, entry in obj.get("upper", {}).items():
            i, j = (int(p) for p in key.split(","))
            upper[(i - 1, j - 1)] = ca_element_from_json(entry, alg.coeff_algebra)
        return alg.from_entries(diag, upper)
    v = [parse(c) for c in obj["v"]]
    return alg.from_parts(parse(obj["a"]), parse(obj["b"]), v)
