"""Exact dense linear algebra over any coefficient field in :mod:`ssr.fields`.

Matrices store raw field values row-major; vectors are plain lists of raw
values.  Subspaces are canonicalised to reduced row echelon form, which is
the equality witness: two bases of the same subspace always produce the
same ``Subspace`` value.  Everything here is pure and exact.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

from .errors import DimensionMismatch, InconsistentSystem
from .fields import Field, FieldElement

Vector = List  # list of raw field values


def coerce_vector(field: Field, entries: Sequence) -> Vector:
    return [field.coerce(e) for e in entries]


class Matrix:
    """Dense exact matrix; ``data`` is a list of rows of raw field values."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data: Sequence[Sequence], *, coerce: bool = False):
        self.field = field
        if coerce:
            data = [[field.coerce(x) for x in row] for row in data]
        else:
            data = [list(row) for row in data]
        self.data = data
        self.rows = len(data)
        self.cols = len(data[0]) if data else 0
        if any(len(row) != self.cols for row in data):
            raise DimensionMismatch("ragged matrix data")

    # -- constructors ---------------------------------------------------
    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.data[i][i] = field.one
        return m

    @classmethod
    def from_columns(cls, field: Field, cols: Sequence[Vector]) -> "Matrix":
        return cls(field, [list(r) for r in zip(*cols)]) if cols else cls(field, [])

    def copy(self) -> "Matrix":
        return Matrix(self.field, self.data)

    # -- basics ---------------------------------------------------------
    def __getitem__(self, ij) -> FieldElement:
        i, j = ij
        return FieldElement(self.field, self.data[i][j])

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.data == self.data
        )

    def __hash__(self):
        return hash((self.field, tuple(tuple(r) for r in self.data)))

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.rows}x{self.cols})"

    def is_zero(self) -> bool:
        f = self.field
        return all(f.is_zero(x) for row in self.data for x in row)

    def _check(self, other: "Matrix", same_shape: bool):
        if other.field != self.field:
            raise DimensionMismatch("mixed coefficient fields")
        if same_shape and (other.rows, other.cols) != (self.rows, self.cols):
            raise DimensionMismatch("shape mismatch")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other, True)
        f = self.field
        return Matrix(
            f,
            [
                [f.add(a, b) for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.data, other.data)
            ],
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other, True)
        f = self.field
        return Matrix(
            f,
            [
                [f.sub(a, b) for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.data, other.data)
            ],
        )

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix(f, [[f.neg(a) for a in row] for row in self.data])

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f.coerce(c)
        return Matrix(f, [[f.mul(c, a) for a in row] for row in self.data])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other, False)
        if self.cols != other.rows:
            raise DimensionMismatch("inner dimension mismatch")
        f = self.field
        ot = list(zip(*other.data))
        out = []
        for row in self.data:
            out_row = []
            for col in ot:
                acc = f.zero
                for a, b in zip(row, col):
                    if not f.is_zero(a) and not f.is_zero(b):
                        acc = f.add(acc, f.mul(a, b))
                out_row.append(acc)
            out.append(out_row)
        return Matrix(f, out)

    def mat_vec(self, v: Vector) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatch("vector length mismatch")
        f = self.field
        out = []
        for row in self.data:
            acc = f.zero
            for a, b in zip(row, v):
                if not f.is_zero(a) and not f.is_zero(b):
                    acc = f.add(acc, f.mul(a, b))
            out.append(acc)
        return out

    def transpose(self) -> "Matrix":
        return Matrix(self.field, list(zip(*self.data)))

    def trace(self):
        f = self.field
        acc = f.zero
        for i in range(min(self.rows, self.cols)):
            acc = f.add(acc, self.data[i][i])
        return acc

    def power(self, n: int) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionMismatch("power of a non-square matrix")
        result = Matrix.identity(self.field, self.rows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def to_json(self):
        f = self.field
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [f.to_json(x) for row in self.data for x in row],
        }

    @classmethod
    def from_json(cls, field: Field, obj) -> "Matrix":
        r, c = obj["rows"], obj["cols"]
        flat = [field.from_json(e) for e in obj["entries"]]
        if len(flat) != r * c:
            raise DimensionMismatch("entry count does not match shape")
        return cls(field, [flat[i * c : (i + 1) * c] for i in range(r)])


# ---------------------------------------------------------------------------
# Gaussian elimination
# ---------------------------------------------------------------------------

def _rref_rows(field: Field, rows: List[List]) -> tuple:
    """In-place reduced row echelon form; returns (pivot column list, rows).

    Plain exact elimination.  Rational raws (Fraction) normalise on every
    operation, which keeps entry growth under control at the sizes used
    here, so no fraction-free variant is needed.
    """
    f = field
    if not rows:
        return [], rows
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if not f.is_zero(rows[i][c]):
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = f.inv(rows[r][c])
        if inv != f.one:
            rows[r] = [f.mul(inv, x) for x in rows[r]]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r and not f.is_zero(rows[i][c]):
                m = rows[i][c]
                rows[i] = [f.sub(x, f.mul(m, y)) for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    # drop zero rows
    rows[:] = rows[:r] + [row for row in rows[r:] if any(not f.is_zero(x) for x in row)]
    return pivots, rows


def rref(m: Matrix) -> Matrix:
    rows = [list(r) for r in m.data]
    _rref_rows(m.field, rows)
    while len(rows) < m.rows:
        rows.append([m.field.zero] * m.cols)
    return Matrix(m.field, rows)


def rank(m: Matrix) -> int:
    rows = [list(r) for r in m.data]
    pivots, _ = _rref_rows(m.field, rows)
    return len(pivots)


def kernel(m: Matrix) -> "Subspace":
    """Null space {v : m v = 0} with canonical echelon basis."""
    f = m.field
    rows = [list(r) for r in m.data]
    pivots, rows = _rref_rows(f, rows)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [f.zero] * m.cols
        v[fc] = f.one
        for r, pc in enumerate(pivots):
            v[pc] = f.neg(rows[r][fc])
        basis.append(v)
    return Subspace(f, m.cols, basis)


def solve(m: Matrix, b: Vector) -> Vector:
    """One exact solution of m x = b; raises InconsistentSystem if none."""
    f = m.field
    if len(b) != m.rows:
        raise DimensionMismatch("rhs length mismatch")
    rows = [list(r) + [bv] for r, bv in zip(m.data, b)]
    pivots, rows = _rref_rows(f, rows)
    x = [f.zero] * m.cols
    for r, pc in enumerate(pivots):
        if pc == m.cols:
            raise InconsistentSystem("no solution")
        x[pc] = rows[r][m.cols]
    # rows beyond pivots are zero rows by construction of _rref_rows
    return x


def eigenspace(m: Matrix, c) -> "Subspace":
    if m.rows != m.cols:
        raise DimensionMismatch("eigenspace of a non-square matrix")
    f = m.field
    c = f.coerce(c)
    shifted = Matrix(
        f,
        [
            [f.sub(x, c) if i == j else x for j, x in enumerate(row)]
            for i, row in enumerate(m.data)
        ],
    )
    return kernel(shifted)


def minimal_polynomial(m: Matrix) -> List:
    """Monic minimal polynomial of m, as raw coefficients [c0, ..., 1].

    Found as the first linear dependence among I, m, m^2, ... in the
    n^2-dimensional space of matrices, tracked through an incremental
    elimination.
    """
    if m.rows != m.cols:
        raise DimensionMismatch("minimal polynomial of a non-square matrix")
    f = m.field
    n = m.rows
    # echelon rows together with the power-combination that produced them
    ech: List[tuple] = []  # (pivot index, row, combo)
    power = Matrix.identity(f, n)
    k = 0
    while True:
        vec = [x for row in power.data for x in row]
        combo = [f.zero] * (k + 1)
        combo[k] = f.one
        # reduce against existing echelon rows
        for piv, row, cmb in ech:
            c = vec[piv]
            if not f.is_zero(c):
                vec = [f.sub(a, f.mul(c, b)) for a, b in zip(vec, row)]
                cmb2 = cmb + [f.zero] * (len(combo) - len(cmb))
                combo = [f.sub(a, f.mul(c, b)) for a, b in zip(combo, cmb2)]
        piv = next((i for i, x in enumerate(vec) if not f.is_zero(x)), None)
        if piv is None:
            # dependence found: combo gives the annihilating polynomial
            lead = combo[k]
            inv = f.inv(lead)
            return [f.mul(inv, c) for c in combo]
        inv = f.inv(vec[piv])
        vec = [f.mul(inv, x) for x in vec]
        combo = [f.mul(inv, c) for c in combo]
        ech.append((piv, vec, combo))
        power = power @ m
        k += 1


def poly_eval_matrix(coeffs: Sequence, m: Matrix) -> Matrix:
    """Evaluate a polynomial (raw coefficients, ascending) at a matrix."""
    f = m.field
    out = Matrix.zeros(f, m.rows, m.cols)
    power = Matrix.identity(f, m.rows)
    for c in coeffs:
        if not f.is_zero(c):
            out = out + power.scale(c)
        power = power @ m
    return out


def poly_mul(field: Field, a: Sequence, b: Sequence) -> List:
    f = field
    out = [f.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if f.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = f.add(out[i + j], f.mul(x, y))
    return out


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------

class Subspace:
    """A linear subspace with canonical reduced-echelon basis rows."""

    __slots__ = ("field", "ambient_dim", "basis")

    def __init__(self, field: Field, ambient_dim: int, vectors: Sequence[Vector]):
        self.field = field
        self.ambient_dim = ambient_dim
        rows = [list(v) for v in vectors]
        for v in rows:
            if len(v) != ambient_dim:
                raise DimensionMismatch("vector length != ambient dimension")
        _rref_rows(field, rows)
        self.basis = rows

    @classmethod
    def span(cls, field: Field, ambient_dim: int, vectors: Sequence[Vector]) -> "Subspace":
        return cls(field, ambient_dim, vectors)

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, [])

    @classmethod
    def whole(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, Matrix.identity(field, ambient_dim).data)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and other.field == self.field
            and other.ambient_dim == self.ambient_dim
            and other.basis == self.basis
        )

    def __hash__(self):
        return hash((self.field, self.ambient_dim, tuple(tuple(r) for r in self.basis)))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient_dim} over {self.field!r})"

    def contains(self, v: Vector) -> bool:
        f = self.field
        v = list(v)
        for row in self.basis:
            piv = next(i for i, x in enumerate(row) if not f.is_zero(x))
            c = v[piv]
            if not f.is_zero(c):
                v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, row)]
        return all(f.is_zero(x) for x in v)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.field, self.ambient_dim, self.basis + other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        """U cap W via the kernel of the stacked coefficient system."""
        self._check(other)
        f = self.field
        if not self.basis or not other.basis:
            return Subspace.zero(f, self.ambient_dim)
        # columns: coefficients (a, b) with sum a_i u_i - sum b_j w_j = 0
        cols = [list(u) for u in self.basis] + [
            [f.neg(x) for x in w] for w in other.basis
        ]
        m = Matrix.from_columns(f, cols)
        ker = kernel(m)
        du = len(self.basis)
        vecs = []
        for coeffs in ker.basis:
            v = [f.zero] * self.ambient_dim
            for a, u in zip(coeffs[:du], self.basis):
                if not f.is_zero(a):
                    v = [f.add(x, f.mul(a, y)) for x, y in zip(v, u)]
            vecs.append(v)
        return Subspace(f, self.ambient_dim, vecs)

    def _check(self, other: "Subspace"):
        if other.field != self.field or other.ambient_dim != self.ambient_dim:
            raise DimensionMismatch("subspaces in different ambients")

    def basis_matrix(self) -> Matrix:
        if not self.basis:
            return Matrix.zeros(self.field, 0, self.ambient_dim)
        return Matrix(self.field, self.basis)


# ---------------------------------------------------------------------------
# Symplectic structure
# ---------------------------------------------------------------------------

class SymplecticForm:
    """A nondegenerate antisymmetric bilinear form given by its Gram matrix."""

    __slots__ = ("field", "dim", "gram")

    def __init__(self, gram: Matrix):
        f = gram.field
        if gram.rows != gram.cols:
            raise DimensionMismatch("Gram matrix must be square")
        if gram.transpose() != -gram:
            raise ValueError("Gram matrix must be antisymmetric")
        if rank(gram) != gram.rows:
            raise ValueError("Gram matrix must be invertible")
        self.field = f
        self.dim = gram.rows
        self.gram = gram

    @classmethod
    def standard(cls, field: Field, n: int) -> "SymplecticForm":
        """omega(e_i, e_{n+i}) = 1 on a 2n-dimensional space."""
        g = Matrix.zeros(field, 2 * n, 2 * n)
        for i in range(n):
            g.data[i][n + i] = field.one
            g.data[n + i][i] = field.neg(field.one)
        return cls(g)

    def apply(self, u: Vector, v: Vector):
        """Raw value omega(u, v) = u^T G v."""
        f = self.field
        gv = self.gram.mat_vec(v)
        acc = f.zero
        for a, b in zip(u, gv):
            if not f.is_zero(a) and not f.is_zero(b):
                acc = f.add(acc, f.mul(a, b))
        return acc

    def is_compatible(self, x: Matrix) -> bool:
        """True iff x is in sp(V, omega): x^T G + G x = 0."""
        return (x.transpose() @ self.gram + self.gram @ x).is_zero()

    def base_change(self, new_field: Field) -> "SymplecticForm":
        return SymplecticForm(change_matrix_field(self.gram, new_field))


def symplectic_perp(w: Subspace, omega: SymplecticForm) -> Subspace:
    """{v : omega(v, u) = 0 for all u in w}."""
    if w.ambient_dim != omega.dim:
        raise DimensionMismatch("subspace ambient does not match the form")
    if not w.basis:
        return Subspace.whole(w.field, w.ambient_dim)
    m = w.basis_matrix() @ omega.gram.transpose()
    return kernel(m)


def is_coisotropic(w: Subspace, omega: SymplecticForm) -> bool:
    return w.contains_subspace(symplectic_perp(w, omega))


def is_isotropic(w: Subspace, omega: SymplecticForm) -> bool:
    return symplectic_perp(w, omega).contains_subspace(w)


def is_lagrangian(w: Subspace, omega: SymplecticForm) -> bool:
    return symplectic_perp(w, omega) == w


# ---------------------------------------------------------------------------
# field-change helpers (used for base extension to quadratic algebras)
# ---------------------------------------------------------------------------

def change_matrix_field(m: Matrix, new_field: Field) -> Matrix:
    old = m.field
    return Matrix(
        new_field,
        [[new_field.coerce(FieldElement(old, x)) for x in row] for row in m.data],
    )


def express_in_span(field: Field, generators: Sequence[Vector], target: Vector,
                    ) -> Optional[Vector]:
    """Coefficients c with sum c_i g_i = target, or None if not in the span."""
    m = Matrix.from_columns(field, [list(g) for g in generators])
    try:
        return solve(m, list(target))
    except InconsistentSystem:
        return None
