"""Symplectic representations with a compatible symmetric bilinear map.

The central object is :class:`SSRData`: a linear Lie algebra ``m`` inside
``sp(V, omega)`` together with a symmetric bilinear map ``B`` from V x V
to m satisfying the compatibility identity

    2 B(A,B).C - 2 B(A,C).B  =  2 w(B,C) A - w(A,B) C + w(A,C) B.

From this single identity the whole theory flows: the quadratic map
``mu(A) = B(A,A)``, the cubic ``psi(A) = mu(A).A``, the quartic scalar
``Q(A) = 3/2 w(A, psi(A))``, their polar forms, the coisotropy of the
orbit tangent spaces ``m.A``, a cascade of closed-form identities for the
covariants of combinations ``a A + b psi(A)``, and a cubic matrix syzygy
generalising the classical one for binary cubics.

All arithmetic is exact.  Vectors are lists of raw field values (as in
:mod:`ssr.linalg`); scalars returned to callers are ``FieldElement``.
Heavy whole-structure verification dispatches to integer numpy kernels
(:mod:`ssr._fast`) over Q and F_p, with the generic exact path as both
fallback and cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import _fast
from .errors import (
    DimensionMismatch,
    DisagreementError,
    WrongConstruction,
    ZeroVector,
)
from .fields import Field, FieldElement, PrimeField, RationalField, field_from_json, field_to_json
from .linalg import (
    Matrix,
    Subspace,
    SymplecticForm,
    coerce_vector,
    is_coisotropic,
    is_lagrangian,
    kernel,
    minimal_polynomial,
    poly_eval_matrix,
    poly_mul,
    symplectic_perp,
)

Vector = List


# ---------------------------------------------------------------------------
# expressing matrices through a fixed spanning family
# ---------------------------------------------------------------------------

class MatrixExpressionSolver:
    """Writes matrices as combinations of a fixed list of matrices.

    Echelonises the flattened family once, tracking the combination that
    produced each echelon row, so each later query is a single reduction.
    """

    def __init__(self, field: Field, matrices: Sequence[Matrix]):
        self.field = field
        self.count = len(matrices)
        f = field
        ech = []  # (pivot, normalized row, combination)
        for a, m in enumerate(matrices):
            vec = [x for row in m.data for x in row]
            combo = [f.zero] * self.count
            combo[a] = f.one
            for piv, row, cmb in ech:
                c = vec[piv]
                if not f.is_zero(c):
                    vec = [f.sub(x, f.mul(c, y)) for x, y in zip(vec, row)]
                    combo = [f.sub(x, f.mul(c, y)) for x, y in zip(combo, cmb)]
            piv = next((i for i, x in enumerate(vec) if not f.is_zero(x)), None)
            if piv is None:
                continue  # dependent family member
            inv = f.inv(vec[piv])
            vec = [f.mul(inv, x) for x in vec]
            combo = [f.mul(inv, x) for x in combo]
            ech.append((piv, vec, combo))
        self._ech = ech

    @property
    def rank(self) -> int:
        return len(self._ech)

    def coords(self, x: Matrix) -> Optional[Vector]:
        """Coefficients expressing x, or None if x is outside the span."""
        f = self.field
        vec = [v for row in x.data for v in row]
        out = [f.zero] * self.count
        for piv, row, cmb in self._ech:
            c = vec[piv]
            if not f.is_zero(c):
                vec = [f.sub(a, f.mul(c, b)) for a, b in zip(vec, row)]
                out = [f.add(a, f.mul(c, b)) for a, b in zip(out, cmb)]
        if any(not f.is_zero(v) for v in vec):
            return None
        return out


# ---------------------------------------------------------------------------
# data model
# ---------------------------------------------------------------------------

class SSRData:
    """A symplectic representation (m, V, omega, B) with its structure tensor.

    ``bmu[i][j]`` is the coordinate vector of B(e_i, e_j) in ``m_basis``.
    Instances are immutable in intent: nothing mutates them after
    construction, and all operations are pure functions of their inputs.
    """

    def __init__(
        self,
        field: Field,
        omega: SymplecticForm,
        m_basis: Sequence[Matrix],
        bmu: Sequence[Sequence[Sequence]],
        *,
        name: str = "",
        meta: Optional[dict] = None,
        structure_constants: Optional[Sequence[Sequence[Sequence]]] = None,
    ):
        self.field = field
        self.omega = omega
        self.m_basis = list(m_basis)
        self.name = name
        self.meta = dict(meta or {})
        n2 = omega.dim
        d = len(self.m_basis)
        for m in self.m_basis:
            if m.rows != n2 or m.cols != n2 or m.field != field:
                raise DimensionMismatch("m_basis entries must be square of dim V")
        if len(bmu) != n2 or any(len(row) != n2 for row in bmu):
            raise DimensionMismatch("bmu must be (dim V) x (dim V)")
        for row in bmu:
            for cell in row:
                if len(cell) != d:
                    raise DimensionMismatch("bmu coordinates must match m_basis")
        self.bmu = [[list(cell) for cell in row] for row in bmu]
        self._structure_constants = (
            [[list(r) for r in mat] for mat in structure_constants]
            if structure_constants is not None
            else None
        )
        self._expr_cache = None
        self._fast_cache = None

    # -- dimensions -----------------------------------------------------
    @property
    def dim_v(self) -> int:
        return self.omega.dim

    @property
    def dim_m(self) -> int:
        return len(self.m_basis)

    # -- basic algebra --------------------------------------------------
    def _modp(self) -> Optional[_fast.FastSSR]:
        """Exact mod-p numpy kernels; None outside prime fields."""
        if isinstance(self.field, PrimeField):
            return self.fast()
        return None

    def m_matrix(self, coords: Vector) -> Matrix:
        """The element of m with the given coordinates, as a matrix."""
        f = self.field
        fs = self._modp()
        if fs is not None:
            arr = fs.m_matrix_num(np.array(coords, dtype=np.int64) % fs.p)
            return Matrix(f, [[int(x) for x in row] for row in arr])
        out = [[f.zero] * self.dim_v for _ in range(self.dim_v)]
        for c, m in zip(coords, self.m_basis):
            if f.is_zero(c):
                continue
            for i, row in enumerate(m.data):
                orow = out[i]
                for j, x in enumerate(row):
                    if not f.is_zero(x):
                        orow[j] = f.add(orow[j], f.mul(c, x))
        return Matrix(f, out)

    def act(self, coords: Vector, v: Vector) -> Vector:
        """(element of m with these coordinates) . v"""
        f = self.field
        fs = self._modp()
        if fs is not None:
            mat = fs.m_matrix_num(np.array(coords, dtype=np.int64) % fs.p)
            out = (mat @ (np.array(v, dtype=np.int64) % fs.p)) % fs.p
            return [int(x) for x in out]
        out = [f.zero] * self.dim_v
        for c, m in zip(coords, self.m_basis):
            if f.is_zero(c):
                continue
            for i, row in enumerate(m.data):
                acc = f.zero
                for a, b in zip(row, v):
                    if not f.is_zero(a) and not f.is_zero(b):
                        acc = f.add(acc, f.mul(a, b))
                if not f.is_zero(acc):
                    out[i] = f.add(out[i], f.mul(c, acc))
        return out

    def bmu_coords(self, v: Vector, w: Vector) -> Vector:
        """Coordinates of B(v, w) in m_basis."""
        f = self.field
        fs = self._modp()
        if fs is not None:
            out = fs.bmu_num(
                np.array(v, dtype=np.int64) % fs.p,
                np.array(w, dtype=np.int64) % fs.p,
            )
            return [int(x) for x in out]
        out = [f.zero] * self.dim_m
        for i, vi in enumerate(v):
            if f.is_zero(vi):
                continue
            row = self.bmu[i]
            for j, wj in enumerate(w):
                if f.is_zero(wj):
                    continue
                c = f.mul(vi, wj)
                cell = row[j]
                for a, x in enumerate(cell):
                    if not f.is_zero(x):
                        out[a] = f.add(out[a], f.mul(c, x))
        return out

    def bmu_matrix(self, v: Vector, w: Vector) -> Matrix:
        return self.m_matrix(self.bmu_coords(v, w))

    # -- expressing matrices in the m basis ------------------------------
    def _expr(self) -> MatrixExpressionSolver:
        if self._expr_cache is None:
            self._expr_cache = MatrixExpressionSolver(self.field, self.m_basis)
        return self._expr_cache

    def m_coords(self, x: Matrix) -> Optional[Vector]:
        """Coordinates of a matrix in m_basis, or None if outside the span."""
        return self._expr().coords(x)

    def structure_constants(self) -> List[List[List]]:
        """Adjoint matrices R_a with [M_a, M_b] = sum_c R_a[c][b] M_c."""
        if self._structure_constants is None:
            f = self.field
            d = self.dim_m
            mats = self.m_basis
            out = [[[f.zero] * d for _ in range(d)] for _ in range(d)]
            for a in range(d):
                for b in range(d):
                    if a == b:
                        continue
                    com = mats[a] @ mats[b] - mats[b] @ mats[a]
                    coords = self.m_coords(com)
                    if coords is None:
                        raise DisagreementError(
                            "m_basis is not closed under commutators"
                        )
                    for c in range(d):
                        out[a][c][b] = coords[c]
            self._structure_constants = out
        return self._structure_constants

    def fast(self) -> _fast.FastSSR:
        if self._fast_cache is None:
            self._fast_cache = _fast.FastSSR(self)
        return self._fast_cache

    # -- field change -----------------------------------------------------
    def base_extend(self, new_field: Field) -> "SSRData":
        """The same structure with scalars coerced into a larger field."""
        old = self.field

        def cv(x):
            if new_field == old:
                return x
            try:
                return new_field.coerce(FieldElement(old, x))
            except TypeError:
                # raw values of the base fields embed directly
                return new_field.coerce(x)

        gram = Matrix(new_field, [[cv(x) for x in r] for r in self.omega.gram.data])
        mb = [Matrix(new_field, [[cv(x) for x in r] for r in m.data]) for m in self.m_basis]
        bmu = [[[cv(x) for x in cell] for cell in row] for row in self.bmu]
        sc = self._structure_constants
        if sc is not None:
            sc = [[[cv(x) for x in r] for r in mat] for mat in sc]
        return SSRData(
            new_field, SymplecticForm(gram), mb, bmu,
            name=self.name, meta=self.meta, structure_constants=sc,
        )

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        f = self.field
        return {
            "format": "ssr-data/1",
            "field": field_to_json(f),
            "name": self.name,
            "meta": self.meta,
            "omega": self.omega.gram.to_json(),
            "m_basis": [m.to_json() for m in self.m_basis],
            "bmu": [
                [[f.to_json(x) for x in cell] for cell in row] for row in self.bmu
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SSRData":
        f = field_from_json(obj["field"])
        omega = SymplecticForm(Matrix.from_json(f, obj["omega"]))
        mb = [Matrix.from_json(f, m) for m in obj["m_basis"]]
        bmu = [
            [[f.from_json(x) for x in cell] for cell in row] for row in obj["bmu"]
        ]
        return cls(f, omega, mb, bmu, name=obj.get("name", ""), meta=obj.get("meta"))

    def __repr__(self):
        return (
            f"SSRData({self.name or 'anonymous'}: dim V={self.dim_v}, "
            f"dim m={self.dim_m} over {self.field!r})"
        )


# ---------------------------------------------------------------------------
# the rank-one symplectic map and its polar form
# ---------------------------------------------------------------------------

def tau_matrix(omega: SymplecticForm, v: Vector) -> Matrix:
    """The map w -> w(v, w) v, as a matrix (an element of sp(V, omega))."""
    f = omega.field
    # row functional w(v, .) = (v^T G)
    row = omega.gram.transpose().mat_vec(v)  # (G^T v)_j = (v^T G)_j
    return Matrix(
        f, [[f.mul(vi, rj) for rj in row] for vi in v]
    )


def b_tau_apply(omega: SymplecticForm, a: Vector, b: Vector, c: Vector) -> Vector:
    """The polar action (1/2)(w(a,c) b + w(b,c) a)."""
    f = omega.field
    half = f.coerce(Fraction(1, 2))
    x = f.mul(half, omega.apply(a, c))
    y = f.mul(half, omega.apply(b, c))
    return [f.add(f.mul(x, bi), f.mul(y, ai)) for ai, bi in zip(a, b)]


# ---------------------------------------------------------------------------
# covariants
# ---------------------------------------------------------------------------

def mu(ssr: SSRData, a: Vector) -> Vector:
    """Coordinates of mu(a) = B(a, a) in m_basis."""
    return ssr.bmu_coords(a, a)


def mu_matrix(ssr: SSRData, a: Vector) -> Matrix:
    return ssr.m_matrix(mu(ssr, a))


def psi(ssr: SSRData, a: Vector) -> Vector:
    """psi(a) = mu(a) . a"""
    return ssr.act(mu(ssr, a), a)


def bigQ(ssr: SSRData, a: Vector) -> FieldElement:
    """Q(a) = 3/2 w(a, psi(a))."""
    f = ssr.field
    val = f.mul(f.coerce(Fraction(3, 2)), ssr.omega.apply(a, psi(ssr, a)))
    return FieldElement(f, val)


def b_psi(ssr: SSRData, a: Vector, b: Vector, c: Vector) -> Vector:
    """Symmetric trilinear polar form of psi."""
    f = ssr.field
    third = f.coerce(Fraction(1, 3))
    s1 = ssr.act(ssr.bmu_coords(a, b), c)
    s2 = ssr.act(ssr.bmu_coords(b, c), a)
    s3 = ssr.act(ssr.bmu_coords(c, a), b)
    return [f.mul(third, f.add(f.add(x, y), z)) for x, y, z in zip(s1, s2, s3)]


def b_q(ssr: SSRData, a: Vector, b: Vector, c: Vector, d: Vector) -> FieldElement:
    """Symmetric quadrilinear polar form of Q."""
    f = ssr.field
    om = ssr.omega
    acc = f.zero
    for x, rest in ((a, (b, c, d)), (b, (c, d, a)), (c, (d, a, b)), (d, (a, b, c))):
        acc = f.add(acc, om.apply(x, b_psi(ssr, *rest)))
    return FieldElement(f, f.mul(f.coerce(Fraction(3, 8)), acc))


def polar_forms(ssr: SSRData, a: Vector, b: Vector, c: Vector, d: Vector):
    """(B_psi(a,b,c), B_Q(a,b,c,d))."""
    return b_psi(ssr, a, b, c), b_q(ssr, a, b, c, d)


@dataclass
class CovariantReport:
    """All pointwise covariant data of a single vector."""

    mu_coords: Vector
    mu_matrix: Matrix
    psi: Vector
    q: FieldElement
    dmu: Matrix  # (dim m) x (dim V): column j is the coords of dmu_A(e_j)
    ker_dmu: Subspace
    tangent: Subspace

    def to_json(self) -> dict:
        f = self.q.field
        return {
            "mu_coords": [f.to_json(x) for x in self.mu_coords],
            "mu_matrix": self.mu_matrix.to_json(),
            "psi": [f.to_json(x) for x in self.psi],
            "q": f.to_json(self.q.raw),
            "dmu": self.dmu.to_json(),
            "ker_dmu": [[f.to_json(x) for x in row] for row in self.ker_dmu.basis],
            "tangent": [[f.to_json(x) for x in row] for row in self.tangent.basis],
            "ker_dmu_dim": self.ker_dmu.dim,
            "tangent_dim": self.tangent.dim,
        }


def dmu(ssr: SSRData, a: Vector) -> Matrix:
    """The differential of mu at a: the map b -> 2 B(a, b), as a matrix
    from V to m-coordinates (dim m rows, dim V columns)."""
    f = ssr.field
    two = f.add(f.one, f.one)
    cols = []
    for j in range(ssr.dim_v):
        e = [f.zero] * ssr.dim_v
        e[j] = f.one
        cols.append([f.mul(two, x) for x in ssr.bmu_coords(a, e)])
    return Matrix.from_columns(f, cols)


def ker_dmu(ssr: SSRData, a: Vector) -> Subspace:
    return kernel(dmu(ssr, a))


def tangent(ssr: SSRData, a: Vector) -> Subspace:
    """The orbit tangent space m . a."""
    return Subspace(ssr.field, ssr.dim_v, [m.mat_vec(a) for m in ssr.m_basis])


def covariant_report(ssr: SSRData, a: Vector) -> CovariantReport:
    mc = mu(ssr, a)
    mm = ssr.m_matrix(mc)
    ps = ssr.act(mc, a)
    f = ssr.field
    q = FieldElement(f, f.mul(f.coerce(Fraction(3, 2)), ssr.omega.apply(a, ps)))
    dm = dmu(ssr, a)
    return CovariantReport(
        mu_coords=mc,
        mu_matrix=mm,
        psi=ps,
        q=q,
        dmu=dm,
        ker_dmu=kernel(dm),
        tangent=tangent(ssr, a),
    )


def dq_row(ssr: SSRData, a: Vector) -> Vector:
    """The differential of Q at a as a row functional: b -> 4 B_Q(b,a,a,a)."""
    f = ssr.field
    four = f.coerce(4)
    # 4 B_Q(b, a, a, a) = 4 * 3/8 [w(b, B_psi(aaa)) + 3 w(a, B_psi(b,a,a))]
    # evaluated per basis vector; the direct polar form keeps it simple.
    out = []
    for j in range(ssr.dim_v):
        e = [f.zero] * ssr.dim_v
        e[j] = f.one
        out.append(f.mul(four, b_q(ssr, e, a, a, a).raw))
    return out


def moment_tilde(ssr: SSRData, v: Vector) -> Vector:
    """The moment functional m -> w(m.v, v), as coordinates on m_basis.

    Also asserts that the kernel of its differential at v is the
    symplectic perp of the orbit tangent space m.v.
    """
    f = ssr.field
    om = ssr.omega
    out = [om.apply(m.mat_vec(v), v) for m in ssr.m_basis]
    # d(moment)_v(b)(m) = w(m.b, v) + w(m.v, b); kernel must equal (m.v)^perp
    rows = []
    for m in ssr.m_basis:
        mv = m.mat_vec(v)
        row = []
        for j in range(ssr.dim_v):
            e = [f.zero] * ssr.dim_v
            e[j] = f.one
            row.append(f.add(om.apply(m.mat_vec(e), v), om.apply(mv, e)))
        rows.append(row)
    ker_d = kernel(Matrix(f, rows))
    perp = symplectic_perp(tangent(ssr, v), om)
    if ker_d != perp:
        raise DisagreementError(
            "kernel of the moment differential is not the orbit perp"
        )
    return out


# ---------------------------------------------------------------------------
# verification of the defining identities
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    """Outcome of checking the structural axioms of an SSRData."""

    compatibility_ok: bool  # every m_basis matrix lies in sp(V, omega)
    symmetric_ok: bool  # B(v, w) = B(w, v)
    defining_identity_ok: bool  # the bilinear compatibility identity
    equivariance_ok: bool  # [a, B(v,w)] = B(a.v, w) + B(v, a.w)
    faithful_ok: bool  # m_basis linearly independent
    m_mu_dim: int  # dim span{B(e_i, e_j)}
    m_mu_equals_m: bool
    normalizer_dim: Optional[int] = None
    m_mu_ideal_in_normalizer: Optional[bool] = None
    counterexample: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return (
            self.compatibility_ok
            and self.symmetric_ok
            and self.defining_identity_ok
            and self.equivariance_ok
            and self.faithful_ok
        )

    def to_json(self) -> dict:
        return {
            "compatibility_ok": self.compatibility_ok,
            "symmetric_ok": self.symmetric_ok,
            "defining_identity_ok": self.defining_identity_ok,
            "equivariance_ok": self.equivariance_ok,
            "faithful_ok": self.faithful_ok,
            "m_mu_dim": self.m_mu_dim,
            "m_mu_equals_m": self.m_mu_equals_m,
            "normalizer_dim": self.normalizer_dim,
            "m_mu_ideal_in_normalizer": self.m_mu_ideal_in_normalizer,
            "passed": self.passed,
        }


def _fast_usable(ssr: SSRData) -> bool:
    return isinstance(ssr.field, (RationalField, PrimeField))


def verify_ssr(
    ssr: SSRData,
    *,
    compute_normalizer: Optional[bool] = None,
    use_fast: Optional[bool] = None,
) -> VerificationReport:
    """Check all structural axioms; multilinearity reduces everything to
    basis tuples, so the checks below are complete, not sampled."""
    if use_fast is None:
        use_fast = _fast_usable(ssr)
    if use_fast and not _fast_usable(ssr):
        raise TypeError("fast verification requires scalars in Q or F_p")
    if use_fast:
        if ssr._structure_constants is None:
            try:
                ssr.structure_constants()
            except DisagreementError:
                # basis not bracket closed: the fast path cannot express
                # equivariance, but the generic one compares matrices directly
                use_fast = False
    if use_fast:
        rep = _verify_fast(ssr)
    else:
        rep = _verify_generic(ssr)
    if compute_normalizer is None:
        compute_normalizer = ssr.dim_v <= 6
    if compute_normalizer:
        norm = normalizer_algebra(ssr)
        rep.normalizer_dim = norm.dim
        m_mu = m_mu_subalgebra(ssr)
        rep.m_mu_ideal_in_normalizer = _is_ideal_in(ssr, m_mu, norm)
    return rep


def _verify_generic(ssr: SSRData) -> VerificationReport:
    f = ssr.field
    n2, d = ssr.dim_v, ssr.dim_m
    om = ssr.omega
    compat = all(om.is_compatible(m) for m in ssr.m_basis)
    symmetric = all(
        ssr.bmu[i][j] == ssr.bmu[j][i] for i in range(n2) for j in range(i)
    )
    counter = None
    # matrices of B(e_i, e_j)
    nmat = [[ssr.m_matrix(ssr.bmu[i][j]) for j in range(n2)] for i in range(n2)]
    ident = True
    two = f.add(f.one, f.one)
    g = om.gram.data
    for i in range(n2):
        for j in range(n2):
            for k in range(n2):
                for l in range(n2):
                    lhs = f.mul(
                        two, f.sub(nmat[i][j].data[l][k], nmat[i][k].data[l][j])
                    )
                    rhs = f.zero
                    if l == i:
                        rhs = f.add(rhs, f.mul(two, g[j][k]))
                    if l == k:
                        rhs = f.sub(rhs, g[i][j])
                    if l == j:
                        rhs = f.add(rhs, g[i][k])
                    if lhs != rhs:
                        ident = False
                        counter = counter or {
                            "axiom": "defining_identity", "indices": [i, j, k, l]
                        }
    equiv = True
    for a, ma in enumerate(ssr.m_basis):
        for i in range(n2):
            for j in range(n2):
                com = ma @ nmat[i][j] - nmat[i][j] @ ma
                # a . e_i is column i of the matrix of a
                aei = [row[i] for row in ma.data]
                aej = [row[j] for row in ma.data]
                e_i = [f.one if t == i else f.zero for t in range(n2)]
                e_j = [f.one if t == j else f.zero for t in range(n2)]
                rhs = ssr.bmu_matrix(aei, e_j) + ssr.bmu_matrix(e_i, aej)
                if com != rhs:
                    equiv = False
                    counter = counter or {
                        "axiom": "equivariance", "indices": [a, i, j]
                    }
    flat = [[x for row in m.data for x in row] for m in ssr.m_basis]
    faithful = Subspace(f, n2 * n2, flat).dim == d
    m_mu_dim = m_mu_subalgebra(ssr).dim
    return VerificationReport(
        compatibility_ok=compat,
        symmetric_ok=symmetric,
        defining_identity_ok=ident,
        equivariance_ok=equiv,
        faithful_ok=faithful,
        m_mu_dim=m_mu_dim,
        m_mu_equals_m=(m_mu_dim == d),
        counterexample=counter,
    )


def _verify_fast(ssr: SSRData) -> VerificationReport:
    fs = ssr.fast()
    p = fs.p
    n2, d = ssr.dim_v, ssr.dim_m

    def red(x):
        return x % p if p is not None else x

    counter = None
    # compatibility: M_a^T G + G M_a = 0, scaled by the common denominators
    _fast.guard(fs.M, fs.omega, n2)
    compat_t = red(
        np.einsum("aji,jk->aik", fs.M, fs.omega)
        + np.einsum("ij,ajk->aik", fs.omega, fs.M)
    )
    compat = not np.any(compat_t)
    symmetric = not np.any(red(fs.bmu - fs.bmu.transpose(1, 0, 2)))
    # defining identity on basis quadruples
    _fast.guard(fs.bmu, fs.M, d)
    w = np.einsum("ija,alk->ijkl", fs.bmu, fs.M)
    lhs = 2 * fs.omega_den * (w - w.transpose(0, 2, 1, 3))
    eye = np.eye(n2, dtype=np.int64)
    rhs = fs.bmu_den * fs.m_den * (
        2 * np.einsum("jk,il->ijkl", fs.omega, eye)
        - np.einsum("ij,kl->ijkl", fs.omega, eye)
        + np.einsum("ik,jl->ijkl", fs.omega, eye)
    )
    diff = red(lhs - rhs)
    ident = not np.any(diff)
    if not ident:
        idx = np.argwhere(diff)[0]
        counter = {"axiom": "defining_identity", "indices": [int(x) for x in idx]}
    # equivariance via verified structure constants
    r_arr, r_den = _fast.to_int_array(ssr.field, ssr.structure_constants())
    if p is not None:
        r_arr = r_arr % p
    # first confirm the structure constants: m_den*(M_a M_b - M_b M_a)
    # must equal r_den * sum_c R[a,c,b] M_c (after clearing denominators)
    _fast.guard(fs.M, fs.M, n2)
    com = np.einsum("aij,bjk->abik", fs.M, fs.M)
    com = com - com.transpose(1, 0, 2, 3)
    _fast.guard(r_arr, fs.M, d)
    rterm = np.einsum("acb,cik->abik", r_arr, fs.M)
    if np.any(red(r_den * com - fs.m_den * rterm)):
        raise DisagreementError("structure constants do not match commutators")
    # LHS coords of [M_a, B(e_i,e_j)]: R_a @ bmu[i,j]
    _fast.guard(r_arr, fs.bmu, d)
    lhs_e = np.einsum("acb,ijb->aijc", r_arr, fs.bmu)
    _fast.guard(fs.M, fs.bmu, n2)
    rhs_e = np.einsum("aki,kjc->aijc", fs.M, fs.bmu) + np.einsum(
        "akj,ikc->aijc", fs.M, fs.bmu
    )
    equiv_diff = red(fs.m_den * lhs_e - r_den * rhs_e)
    equiv = not np.any(equiv_diff)
    if not equiv and counter is None:
        idx = np.argwhere(equiv_diff)[0]
        counter = {"axiom": "equivariance", "indices": [int(x) for x in idx]}

    faithful = _certified_rank(ssr.field, fs.M.reshape(d, n2 * n2)) == d
    m_mu_dim = _certified_rank(ssr.field, fs.bmu.reshape(n2 * n2, d))
    return VerificationReport(
        compatibility_ok=compat,
        symmetric_ok=symmetric,
        defining_identity_ok=ident,
        equivariance_ok=equiv,
        faithful_ok=faithful,
        m_mu_dim=m_mu_dim,
        m_mu_equals_m=(m_mu_dim == d),
        counterexample=counter,
    )


def _certified_rank(field: Field, rows: np.ndarray) -> int:
    """Exact rank of an integer matrix interpreted over the field.

    Over F_p: direct mod-p elimination.  Over Q: ranks mod several primes
    are lower bounds for the rational rank, so a full-rank witness mod p
    is a certificate; only deficient cases fall back to exact integer
    elimination.
    """
    if isinstance(field, PrimeField):
        return _fast.modp_rank(rows, field.p)
    full = min(rows.shape)
    for p in (1000003, 999983):
        r = _fast.modp_rank(rows % p, p)
        if r == full:
            return r
    return _fast.int_rank([[int(x) for x in row] for row in rows])


def m_mu_subalgebra(ssr: SSRData) -> Subspace:
    """span{B(e_i, e_j)} as a subspace of m-coordinates."""
    vecs = [cell for row in ssr.bmu for cell in row]
    return Subspace(ssr.field, ssr.dim_m, vecs)


def sp_basis(omega: SymplecticForm) -> List[Matrix]:
    """A basis of sp(V, omega) = {x : x^T G + G x = 0}."""
    f = omega.field
    n2 = omega.dim
    g = omega.gram
    rows = []
    for i in range(n2):
        for j in range(n2):
            row = [f.zero] * (n2 * n2)
            for k in range(n2):
                # (x^T G)_{ij} = sum_k x_{ki} G_{kj}
                row[k * n2 + i] = f.add(row[k * n2 + i], g.data[k][j])
                # (G x)_{ij} = sum_k G_{ik} x_{kj}
                row[k * n2 + j] = f.add(row[k * n2 + j], g.data[i][k])
            rows.append(row)
    ker = kernel(Matrix(f, rows))
    return [
        Matrix(f, [v[i * n2 : (i + 1) * n2] for i in range(n2)])
        for v in ker.basis
    ]


def normalizer_algebra(ssr: SSRData) -> Subspace:
    """{a in sp(V,w) : [a, B(v,w)] = B(a.v, w) + B(v, a.w)} as a subspace
    of sp(V, omega) coordinates (with respect to sp_basis(omega))."""
    f = ssr.field
    n2 = ssr.dim_v
    basis = sp_basis(ssr.omega)
    nmat = [
        [ssr.m_matrix(ssr.bmu[i][j]) for j in range(n2)] for i in range(n2)
    ]
    rows = []  # equations indexed by (i, j, entry); unknowns = sp coords
    for i in range(n2):
        for j in range(i, n2):
            cols = []
            for s in basis:
                sei = [row[i] for row in s.data]
                sej = [row[j] for row in s.data]
                e_i = [f.one if t == i else f.zero for t in range(n2)]
                e_j = [f.one if t == j else f.zero for t in range(n2)]
                val = (
                    s @ nmat[i][j]
                    - nmat[i][j] @ s
                    - ssr.bmu_matrix(sei, e_j)
                    - ssr.bmu_matrix(e_i, sej)
                )
                cols.append([x for row in val.data for x in row])
            for r in zip(*cols):
                rows.append(list(r))
    if not rows:
        return Subspace.whole(f, len(basis))
    return kernel(Matrix(f, rows))


def _is_ideal_in(ssr: SSRData, m_mu: Subspace, norm_sp: Subspace) -> bool:
    """Is span{B(e_i,e_j)} an ideal of the normalizer algebra?

    m_mu lives in m-coordinates; the normalizer in sp coordinates.  The
    bracket of a normalizer element with a generator B(e_i,e_j) must land
    back in m_mu (expressed through the ambient matrices)."""
    f = ssr.field
    basis = sp_basis(ssr.omega)
    gen_mats = [ssr.m_matrix(v) for v in m_mu.basis]
    # matrices of m_mu generators, flattened span for membership tests
    span = Subspace(
        f, ssr.dim_v**2, [[x for row in m.data for x in row] for m in gen_mats]
    )
    for coords in norm_sp.basis:
        nmatx = Matrix.zeros(f, ssr.dim_v, ssr.dim_v)
        for c, s in zip(coords, basis):
            if not f.is_zero(c):
                nmatx = nmatx + s.scale(c)
        for gm in gen_mats:
            com = nmatx @ gm - gm @ nmatx
            if not span.contains([x for row in com.data for x in row]):
                return False
    return True


# ---------------------------------------------------------------------------
# orbit geometry
# ---------------------------------------------------------------------------

def coisotropy_check(ssr: SSRData, a: Vector):
    """(is (m.a)^perp contained in m.a, witness vector if not)."""
    f = ssr.field
    if all(f.is_zero(x) for x in a):
        raise ZeroVector("coisotropy is only asked of nonzero vectors")
    t = tangent(ssr, a)
    perp = symplectic_perp(t, ssr.omega)
    for v in perp.basis:
        if not t.contains(v):
            return False, v
    return True, None


def q_vanishing_test(ssr: SSRData, a: Vector) -> bool:
    """Whether Q(a) = 0, computed two independent ways.

    Route one evaluates the quartic scalar; route two tests membership of
    a in its own orbit tangent space, which is equivalent.  Disagreement
    means corrupted input or an implementation bug, never a quiet answer.
    """
    f = ssr.field
    by_value = f.is_zero(bigQ(ssr, a).raw)
    by_membership = tangent(ssr, a).contains(a)
    if by_value != by_membership:
        raise DisagreementError(
            "Q(a)=0 test: scalar route and membership route disagree"
        )
    return by_value


# ---------------------------------------------------------------------------
# covariant identities on the plane spanned by a and psi(a)
# ---------------------------------------------------------------------------

def covariant_identities(
    ssr: SSRData, a: Vector, s, t, s2=None, t2=None
) -> Dict[str, bool]:
    """Closed-form identities for covariants of x = s*a + t*psi(a).

    Returns a dict of named booleans; all must be true for valid data.
    """
    f = ssr.field
    s, t = f.coerce(s), f.coerce(t)
    s2 = s if s2 is None else f.coerce(s2)
    t2 = t if t2 is None else f.coerce(t2)
    ps = psi(ssr, a)
    q = bigQ(ssr, a).raw
    mc = mu(ssr, a)
    mm = ssr.m_matrix(mc)

    def comb(x, y):
        return [f.add(f.mul(x, u), f.mul(y, v)) for u, v in zip(a, ps)]

    x1 = comb(s, t)
    x2 = comb(s2, t2)

    out = {}
    # mu(psi(a)) = -Q mu(a)
    out["mu_of_psi"] = mu(ssr, ps) == [f.neg(f.mul(q, c)) for c in mc]
    # psi(psi(a)) = -Q^2 a
    q2 = f.mul(q, q)
    out["psi_of_psi"] = psi(ssr, ps) == [f.neg(f.mul(q2, u)) for u in a]
    # Q(psi(a)) = Q^3
    out["q_of_psi"] = bigQ(ssr, ps).raw == f.mul(q2, q)
    # B(x1, x2) = (s s2 - Q t t2) mu(a)
    c = f.sub(f.mul(s, s2), f.mul(q, f.mul(t, t2)))
    out["bmu_combination"] = ssr.bmu_coords(x1, x2) == [f.mul(c, u) for u in mc]
    # psi(x1) = (s^2 - Q t^2)(Q t a + s psi(a))
    e = f.sub(f.mul(s, s), f.mul(q, f.mul(t, t)))
    expect = [
        f.mul(e, f.add(f.mul(f.mul(q, t), u), f.mul(s, v)))
        for u, v in zip(a, ps)
    ]
    out["psi_combination"] = psi(ssr, x1) == expect
    # Q(x1) = (s^2 - Q t^2)^2 Q
    out["q_combination"] = bigQ(ssr, x1).raw == f.mul(f.mul(e, e), q)
    # mu(a).x1 = s psi(a) + Q t a
    out["mu_action"] = ssr.act(mc, x1) == [
        f.add(f.mul(s, v), f.mul(f.mul(q, t), u)) for u, v in zip(a, ps)
    ]
    # mu(a)^2 = Q Id on span(a, psi(a))
    mm2 = mm @ mm
    out["mu_square_on_plane"] = (
        mm2.mat_vec(a) == [f.mul(q, u) for u in a]
        and mm2.mat_vec(ps) == [f.mul(q, u) for u in ps]
    )
    return out


# ---------------------------------------------------------------------------
# minimal polynomial of mu(a) and the quartic syzygy
# ---------------------------------------------------------------------------

@dataclass
class MuMinimalPolynomial:
    """Minimal polynomial of mu(a) with its structural classification."""

    coefficients: Vector  # ascending raw coefficients, monic
    q: FieldElement
    nilpotent: bool
    cube_zero: Optional[bool] = None  # only meaningful when nilpotent
    psi_zero: Optional[bool] = None


def minimal_polynomial_mu(ssr: SSRData, a: Vector) -> MuMinimalPolynomial:
    """Classify mu(a) through its minimal polynomial.

    When Q(a) is nonzero the minimal polynomial must be exactly
    (x^2 - Q)(x^2 - Q/9); when Q(a) = 0 the matrix is nilpotent of order
    at most 4, and its cube vanishes precisely when psi(a) does.
    """
    f = ssr.field
    if ssr.dim_v <= 2:
        raise DimensionMismatch("the classification needs dim V > 2")
    mm = mu_matrix(ssr, a)
    coeffs = minimal_polynomial(mm)
    q = bigQ(ssr, a)
    if not f.is_zero(q.raw):
        nine_inv = f.inv(f.coerce(9))
        expected = poly_mul(
            f,
            [f.neg(q.raw), f.zero, f.one],
            [f.neg(f.mul(q.raw, nine_inv)), f.zero, f.one],
        )
        if coeffs != expected:
            raise DisagreementError(
                "minimal polynomial does not match the quartic classification"
            )
        return MuMinimalPolynomial(coeffs, q, nilpotent=False)
    if not mm.power(4).is_zero():
        raise DisagreementError("mu(a) is not nilpotent of order <= 4 at Q=0")
    cube_zero = mm.power(3).is_zero()
    ps = psi(ssr, a)
    p_zero = all(f.is_zero(x) for x in ps)
    if cube_zero != p_zero:
        raise DisagreementError("mu^3 = 0 must coincide with psi = 0")
    return MuMinimalPolynomial(
        coeffs, q, nilpotent=True, cube_zero=cube_zero, psi_zero=p_zero
    )


def eisenstein_syzygy(ssr: SSRData, p_vec: Vector) -> bool:
    """The cubic matrix syzygy, as an exact identity in sp(V, omega):

        tau(psi(P)) - Q(P) tau(P)  =  -(3/4) mu(P)^3 + (1/12) Q(P) mu(P)
    """
    f = ssr.field
    om = ssr.omega
    ps = psi(ssr, p_vec)
    q = bigQ(ssr, p_vec).raw
    mm = mu_matrix(ssr, p_vec)
    lhs = tau_matrix(om, ps) - tau_matrix(om, p_vec).scale(q)
    rhs = mm.power(3).scale(f.neg(f.coerce(Fraction(3, 4)))) + mm.scale(
        f.mul(f.coerce(Fraction(1, 12)), q)
    )
    return lhs == rhs


def classical_eisenstein(ssr: SSRData, p_vec: Vector, v: Vector):
    """The scalar syzygy x^2 - D y^2 = 4 z^3 for binary cubics.

    Given a cubic P (coordinates against x^3, 3x^2y, 3xy^2, y^3) and a
    point v of the plane, returns (x, y, z, D) with y = P(v),
    x = 1/3 psi(P)(v), z = -1/2 times the quadratic attached to mu(P)
    evaluated at v, and D = Q(P)/9, and asserts the identity.
    """
    if ssr.name != "binary_cubics":
        raise WrongConstruction(
            "the scalar syzygy needs the binary-cubics structure"
        )
    f = ssr.field

    def cubic_eval(coeffs, pt):
        a, b, c, d = coeffs
        s, t = pt
        s2, t2 = f.mul(s, s), f.mul(t, t)
        val = f.mul(a, f.mul(s2, s))
        val = f.add(val, f.mul(f.coerce(3), f.mul(b, f.mul(s2, t))))
        val = f.add(val, f.mul(f.coerce(3), f.mul(c, f.mul(s, t2))))
        return f.add(val, f.mul(d, f.mul(t2, t)))

    y = cubic_eval(p_vec, v)
    x = f.mul(f.coerce(Fraction(1, 3)), cubic_eval(psi(ssr, p_vec), v))
    alpha, beta, gamma = mu(ssr, p_vec)
    # the quadratic attached to [[alpha, beta], [gamma, -alpha]] lives on
    # the dual plane, so it is evaluated with the coordinates exchanged
    t, s = v
    quad = f.add(
        f.mul(beta, f.mul(s, s)),
        f.sub(
            f.mul(f.coerce(2), f.mul(alpha, f.mul(s, t))),
            f.mul(gamma, f.mul(t, t)),
        ),
    )
    z = f.neg(f.mul(f.coerce(Fraction(1, 2)), quad))
    delta = f.mul(f.coerce(Fraction(1, 9)), bigQ(ssr, p_vec).raw)
    lhs = f.sub(f.mul(x, x), f.mul(delta, f.mul(y, y)))
    rhs = f.mul(f.coerce(4), f.mul(z, f.mul(z, z)))
    if lhs != rhs:
        raise DisagreementError("scalar syzygy failed")
    return (
        FieldElement(f, x),
        FieldElement(f, y),
        FieldElement(f, z),
        FieldElement(f, delta),
    )
