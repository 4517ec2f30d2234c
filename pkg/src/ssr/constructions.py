"""Factory functions for every implemented symplectic structure.

Seven families are provided:

* ``binary_cubics`` — cubic forms in two variables under sl(2);
* ``tautological`` — sp(2n) on its defining representation, where the
  cubic and quartic covariants vanish identically;
* ``j_commutant`` — the commutant in sp(V) of an anti-symplectic square
  root J of a scalar;
* ``hom_ef`` — Hom(E, F) for a symplectic plane E and a quadratic space
  F, under sl(E) + so(F);
* ``three_forms6`` — alternating 3-forms on a 6-dimensional space under
  sl(6);
* ``primitive_three_forms6`` — the 14-dimensional space of primitive
  3-forms under sp(6);
* ``half_spinor12`` — the 32-dimensional half-spinor representation of
  hyperbolic so(12).

Each factory returns a fully populated :class:`~ssr.core.SSRData`.  The
heavy combinatorial builds (3-forms, spinors) are carried out once over
the rationals with integer tensors and then mapped into the requested
field, so repeated construction is cheap and every field sees literally
the same structure constants.

``zero_set_oracle`` provides, for each family, an independent predicate
for the vanishing locus of the quadratic covariant (triple roots,
decomposable forms, pure spinors, ...), used to cross-check the generic
computation.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import MatrixExpressionSolver, SSRData, sp_basis
from .errors import (
    CalibrationFailure,
    DegenerateForm,
    DimensionMismatch,
    DisagreementError,
    InvalidJ,
    WrongConstruction,
)
from .fields import QQ, Field, PrimeField, RationalField
from .linalg import Matrix, SymplecticForm, Subspace, kernel, rank

Vector = List

HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# small shared helpers
# ---------------------------------------------------------------------------

def _outer(field: Field, col: Vector, row: Vector) -> Matrix:
    f = field
    return Matrix(f, [[f.mul(c, r) for r in row] for c in col])


def _omega_row(field: Field, gram: Matrix, v: Vector) -> Vector:
    """The row functional w(v, .) as a vector: (v^T G)."""
    return gram.transpose().mat_vec(v)


def _coerce_rational_ssr(ssr_q: SSRData, field: Field) -> SSRData:
    """Map an SSR built over Q into another field (denominators must be
    invertible there; they only involve 2 and 3 in practice)."""
    if isinstance(field, RationalField):
        return ssr_q
    return ssr_q.base_extend(field)


def _invariance_basis(field: Field, gram: Matrix) -> List[Matrix]:
    """Basis of {x : x^T G + G x = 0} for an arbitrary Gram matrix G."""
    f = field
    n = gram.rows
    rows = []
    for i in range(n):
        for j in range(n):
            row = [f.zero] * (n * n)
            for k in range(n):
                row[k * n + i] = f.add(row[k * n + i], gram.data[k][j])
                row[k * n + j] = f.add(row[k * n + j], gram.data[i][k])
            rows.append(row)
    ker = kernel(Matrix(f, rows))
    return [Matrix(f, [v[i * n : (i + 1) * n] for i in range(n)]) for v in ker.basis]


# ---------------------------------------------------------------------------
# binary cubics: V = cubic forms in x, y with coordinates against
# {x^3, 3x^2y, 3xy^2, y^3}; m = sl(2) acting through the dual action.
# ---------------------------------------------------------------------------

def binary_cubics(field: Field) -> SSRData:
    f = field

    def m(rows):
        return Matrix(f, rows, coerce=True)

    # action matrices of the sl(2) basis {h, e, f} on the coefficient space
    mh = m([[-3, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 3]])
    me = m([[0, 0, 0, 0], [-1, 0, 0, 0], [0, -2, 0, 0], [0, 0, -3, 0]])
    mf = m([[0, -3, 0, 0], [0, 0, -2, 0], [0, 0, 0, -1], [0, 0, 0, 0]])
    gram = m([[0, 0, 0, 1], [0, 0, -3, 0], [0, 3, 0, 0], [-1, 0, 0, 0]])

    # polarised coefficients of mu(P) = (ad-bc) h + 2(bd-c^2) e + 2(b^2-ac) f
    half = f.coerce(HALF)
    z = f.zero
    one, two = f.one, f.coerce(2)
    bmu = [[[z] * 3 for _ in range(4)] for _ in range(4)]
    # h-coefficient: (a d' + a' d - b c' - b' c)/2
    bmu[0][3][0] = half
    bmu[3][0][0] = half
    bmu[1][2][0] = f.neg(half)
    bmu[2][1][0] = f.neg(half)
    # e-coefficient: b d' + b' d - 2 c c'
    bmu[1][3][1] = one
    bmu[3][1][1] = one
    bmu[2][2][1] = f.neg(two)
    # f-coefficient: 2 b b' - a c' - a' c
    bmu[1][1][2] = two
    bmu[0][2][2] = f.neg(one)
    bmu[2][0][2] = f.neg(one)
    return SSRData(
        f, SymplecticForm(gram), [mh, me, mf], bmu, name="binary_cubics"
    )


# ---------------------------------------------------------------------------
# the tautological structure on sp(2n)
# ---------------------------------------------------------------------------

def tautological(field: Field, n: int) -> SSRData:
    if n < 1:
        raise DimensionMismatch("n must be at least 1")
    f = field
    omega = SymplecticForm.standard(f, n)
    basis = sp_basis(omega)
    solver = MatrixExpressionSolver(f, basis)
    n2 = 2 * n
    half = f.coerce(HALF)
    bmu = [[None] * n2 for _ in range(n2)]
    for i in range(n2):
        ei = [f.one if t == i else f.zero for t in range(n2)]
        ri = _omega_row(f, omega.gram, ei)
        for j in range(i, n2):
            ej = [f.one if t == j else f.zero for t in range(n2)]
            rj = _omega_row(f, omega.gram, ej)
            t = (_outer(f, ej, ri) + _outer(f, ei, rj)).scale(half)
            coords = solver.coords(t)
            if coords is None:
                raise DisagreementError("pairing does not land in sp")
            bmu[i][j] = coords
            bmu[j][i] = coords
    return SSRData(
        f, omega, basis, bmu, name="tautological", meta={"n": n}
    )


# ---------------------------------------------------------------------------
# the commutant of an anti-symplectic square root of a scalar
# ---------------------------------------------------------------------------

def j_commutant(
    field: Field, n: int, lam_j, j: Optional[Matrix] = None
) -> SSRData:
    f = field
    lam = f.coerce(lam_j)
    if f.is_zero(lam):
        raise InvalidJ("the square of J must be nonzero")
    omega = SymplecticForm.standard(f, n)
    n2 = 2 * n
    if j is None:
        data = [[f.zero] * n2 for _ in range(n2)]
        for i in range(n):
            data[i][n + i] = lam
            data[n + i][i] = f.one
        j = Matrix(f, data)
    else:
        j = Matrix(f, j.data, coerce=True) if j.field != f else j
    if j.power(2) != Matrix.identity(f, n2).scale(lam):
        raise InvalidJ("J squared must be the prescribed scalar")
    if not omega.is_compatible(j):
        raise InvalidJ("J must be anti-compatible with the symplectic form")

    # m = {x in sp : xJ = Jx}
    rows = []
    for s in sp_basis(omega):
        com = s @ j - j @ s
        rows.append([x for r in com.data for x in r])
    coeffs = kernel(Matrix(f, [list(c) for c in zip(*rows)]))
    basis = []
    sp_mats = sp_basis(omega)
    for cvec in coeffs.basis:
        m = Matrix.zeros(f, n2, n2)
        for c, s in zip(cvec, sp_mats):
            if not f.is_zero(c):
                m = m + s.scale(c)
        basis.append(m)
    solver = MatrixExpressionSolver(f, basis)

    half = f.coerce(HALF)
    inv2lam = f.inv(f.mul(f.coerce(2), lam))
    inv4lam = f.inv(f.mul(f.coerce(4), lam))
    bmu = [[None] * n2 for _ in range(n2)]
    for a in range(n2):
        va = [f.one if t == a else f.zero for t in range(n2)]
        for b in range(a, n2):
            vb = [f.one if t == b else f.zero for t in range(n2)]
            jva, jvb = j.mat_vec(va), j.mat_vec(vb)
            t1 = (_outer(f, vb, _omega_row(f, omega.gram, va))
                  + _outer(f, va, _omega_row(f, omega.gram, vb))).scale(half)
            t2 = (_outer(f, jvb, _omega_row(f, omega.gram, jva))
                  + _outer(f, jva, _omega_row(f, omega.gram, jvb))).scale(inv2lam)
            c3 = f.mul(
                inv4lam,
                f.add(omega.apply(va, jvb), omega.apply(vb, jva)),
            )
            mat = t1 - t2 + j.scale(c3)
            coords = solver.coords(mat)
            if coords is None:
                raise DisagreementError("bilinear map leaves the commutant")
            bmu[a][b] = coords
            bmu[b][a] = coords
    return SSRData(
        f, omega, basis, bmu, name="j_commutant",
        meta={"n": n, "lam_j": f.to_json(lam), "J": j.to_json()},
    )


# ---------------------------------------------------------------------------
# Hom(E, F): maps from a symplectic plane to a quadratic space
# ---------------------------------------------------------------------------

def hom_ef(field: Field, g: Optional[Matrix] = None, size: int = 2) -> SSRData:
    f = field
    if g is None:
        g = Matrix.identity(f, size)
    else:
        g = Matrix(f, g.data, coerce=True) if g.field != f else g
    m = g.rows
    if g != g.transpose() or rank(g) != m:
        raise DegenerateForm("the quadratic form must be symmetric invertible")
    n2 = 2 * m

    def stack(a1, a2):
        return list(a1) + list(a2)

    # omega(A, B) = g(a1, b2) - g(a2, b1)
    gram = Matrix.zeros(f, n2, n2)
    for i in range(m):
        for jj in range(m):
            gram.data[i][m + jj] = g.data[i][jj]
            gram.data[m + i][jj] = f.neg(g.data[i][jj])
    omega = SymplecticForm(gram)

    # m = sl(E) + so(F, g); sl(E) acts by A -> -A s, so(F) by A -> y A
    zero_m = Matrix.zeros(f, m, m)
    eye_m = Matrix.identity(f, m)

    def block(tl, tr, bl, br):
        rows = []
        for i in range(m):
            rows.append(list(tl.data[i]) + list(tr.data[i]))
        for i in range(m):
            rows.append(list(bl.data[i]) + list(br.data[i]))
        return Matrix(f, rows)

    act_h = block(-eye_m, zero_m, zero_m, eye_m)
    act_e = block(zero_m, zero_m, -eye_m, zero_m)
    act_f = block(zero_m, -eye_m, zero_m, zero_m)
    so_basis = _invariance_basis(f, g)
    m_basis = [act_h, act_e, act_f] + [block(y, zero_m, zero_m, y) for y in so_basis]
    so_solver = MatrixExpressionSolver(f, so_basis)

    def g_pair(u, v):
        gv = g.mat_vec(v)
        acc = f.zero
        for x, y in zip(u, gv):
            acc = f.add(acc, f.mul(x, y))
        return acc

    half = f.coerce(HALF)
    bmu = [[None] * n2 for _ in range(n2)]
    units = Matrix.identity(f, m).data
    zvec = [f.zero] * m
    for i in range(n2):
        a1 = list(units[i]) if i < m else list(zvec)
        a2 = list(units[i - m]) if i >= m else list(zvec)
        for jj in range(i, n2):
            b1 = list(units[jj]) if jj < m else list(zvec)
            b2 = list(units[jj - m]) if jj >= m else list(zvec)
            # sl(E) component: -1/2 (A*B + B*A) with
            # A*B = [[-g(a2,b1), -g(a2,b2)], [g(a1,b1), g(a1,b2)]]
            alpha = f.mul(half, f.add(g_pair(a2, b1), g_pair(b2, a1)))
            beta = f.neg(f.mul(half, f.add(f.neg(g_pair(a2, b2)), f.neg(g_pair(b2, a2)))))
            gam = f.neg(f.mul(half, f.add(g_pair(a1, b1), g_pair(b1, a1))))
            # so(F) component: A B* + B A*
            # A B* = -a1 (G b2)^T + a2 (G b1)^T acting on F
            def gr(v):
                return g.mat_vec(v)

            so_mat = (
                _outer(f, a1, gr(b2)).scale(f.neg(f.one))
                + _outer(f, a2, gr(b1))
                + _outer(f, b1, gr(a2)).scale(f.neg(f.one))
                + _outer(f, b2, gr(a1))
            )
            so_coords = so_solver.coords(so_mat)
            if so_coords is None:
                raise DisagreementError("pairing leaves so(F, g)")
            coords = [alpha, beta, gam] + so_coords
            bmu[i][jj] = coords
            bmu[jj][i] = coords
    return SSRData(
        f, omega, m_basis, bmu, name="hom_ef",
        meta={"g": g.to_json()},
    )


# ---------------------------------------------------------------------------
# exterior algebra combinatorics on six symbols
# ---------------------------------------------------------------------------

TRIPLES: List[Tuple[int, ...]] = list(itertools.combinations(range(6), 3))
TRIPLE_IDX = {t: i for i, t in enumerate(TRIPLES)}
PAIRS6: List[Tuple[int, ...]] = list(itertools.combinations(range(6), 2))
PAIR_IDX6 = {t: i for i, t in enumerate(PAIRS6)}
QUADS6: List[Tuple[int, ...]] = list(itertools.combinations(range(6), 4))
QUAD_IDX6 = {t: i for i, t in enumerate(QUADS6)}


def _perm_sign(seq: Sequence[int]) -> int:
    s = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def _merge(a: Tuple[int, ...], b: Tuple[int, ...]):
    """Wedge of two sorted index tuples: (sign, sorted union) or None."""
    if set(a) & set(b):
        return None
    cat = list(a) + list(b)
    return _perm_sign(cat), tuple(sorted(cat))


def _drop(j: int, s: Tuple[int, ...]):
    """Contraction of e_j into the basis form e^s: (sign, rest) or None."""
    if j not in s:
        return None
    pos = s.index(j)
    return (-1) ** pos, tuple(x for x in s if x != j)


def _contract_once(field: Field, j: int, coeffs_by_set: Dict[tuple, object]):
    out: Dict[tuple, object] = {}
    f = field
    for s, c in coeffs_by_set.items():
        d = _drop(j, s)
        if d is None:
            continue
        sign, rest = d
        val = c if sign == 1 else f.neg(c)
        out[rest] = f.add(out.get(rest, f.zero), val)
    return out


def _mu1_matrix(field: Field, alpha: Vector) -> Matrix:
    """The trace-free matrix characterised by
    alpha ^ i_e(alpha) = i_{M e} vol for all e."""
    f = field
    comp = {tuple(sorted(set(range(6)) - set(s))): s for s in TRIPLES}
    coeffs = {TRIPLES[i]: alpha[i] for i in range(20) if not f.is_zero(alpha[i])}
    cols = []
    for j in range(6):
        two = _contract_once(f, j, coeffs)
        five: Dict[tuple, object] = {}
        for s, cs in coeffs.items():
            for p, cp in two.items():
                mg = _merge(s, p)
                if mg is None:
                    continue
                sign, u = mg
                val = f.mul(cs, cp)
                if sign == -1:
                    val = f.neg(val)
                five[u] = f.add(five.get(u, f.zero), val)
        col = []
        for mrow in range(6):
            rest = tuple(x for x in range(6) if x != mrow)
            val = five.get(rest, f.zero)
            if mrow % 2 == 1:
                val = f.neg(val)
            col.append(val)
        cols.append(col)
    mat = Matrix.from_columns(f, cols)
    tr = mat.trace()
    if not f.is_zero(tr):
        raise DisagreementError("characteristic matrix is not trace free")
    return mat


_SL6_OFFDIAG = [(i, j) for i in range(6) for j in range(6) if i != j]


def _sl6_abstract_basis(field: Field) -> List[Matrix]:
    f = field
    out = []
    for i, j in _SL6_OFFDIAG:
        m = Matrix.zeros(f, 6, 6)
        m.data[i][j] = f.one
        out.append(m)
    for k in range(5):
        m = Matrix.zeros(f, 6, 6)
        m.data[k][k] = f.one
        m.data[k + 1][k + 1] = f.neg(f.one)
        out.append(m)
    return out


def _sl6_coords(field: Field, x: Matrix) -> Vector:
    f = field
    coords = [x.data[i][j] for i, j in _SL6_OFFDIAG]
    acc = f.zero
    for k in range(5):
        acc = f.add(acc, x.data[k][k])
        coords.append(acc)
    return coords


def _rep_on_three_forms(field: Field, x: Matrix) -> Matrix:
    """Derivation action on 3-forms induced by x . e^k = -sum_m x[k][m] e^m."""
    f = field
    out = Matrix.zeros(f, 20, 20)
    for si, s in enumerate(TRIPLES):
        for pos in range(3):
            k = s[pos]
            for mcol in range(6):
                c = x.data[k][mcol]
                if f.is_zero(c):
                    continue
                rest = tuple(t for idx, t in enumerate(s) if idx != pos)
                if mcol in rest:
                    continue
                cat = [mcol] + list(rest)
                sign = _perm_sign(cat) * (-1) ** pos
                target = tuple(sorted(cat))
                val = f.neg(c) if sign == 1 else c
                ti = TRIPLE_IDX[target]
                out.data[ti][si] = f.add(out.data[ti][si], val)
    return out


def _three_forms6_rational() -> SSRData:
    f = QQ
    # Gram of the wedge pairing against the volume form
    gram = Matrix.zeros(f, 20, 20)
    for i, s in enumerate(TRIPLES):
        t = tuple(sorted(set(range(6)) - set(s)))
        gram.data[i][TRIPLE_IDX[t]] = Fraction(_perm_sign(list(s) + list(t)))
    omega = SymplecticForm(gram)
    abstract = _sl6_abstract_basis(f)
    m_basis = [_rep_on_three_forms(f, x) for x in abstract]
    # structure constants from the abstract 6x6 matrices
    d = len(abstract)
    sc = [[[f.zero] * d for _ in range(d)] for _ in range(d)]
    for a in range(d):
        for b in range(d):
            if a == b:
                continue
            coords = _sl6_coords(f, abstract[a] @ abstract[b] - abstract[b] @ abstract[a])
            for c in range(d):
                sc[a][c][b] = coords[c]
    # polarised structure tensor from the characteristic matrices
    mu_cache = [
        _mu1_matrix(f, [f.one if t == i else f.zero for t in range(20)])
        for i in range(20)
    ]
    bmu = [[None] * 20 for _ in range(20)]
    for i in range(20):
        ei = [f.one if t == i else f.zero for t in range(20)]
        for j in range(i, 20):
            ej = [f.one if t == j else f.zero for t in range(20)]
            s = [f.add(a, b) for a, b in zip(ei, ej)]
            pol = (_mu1_matrix(f, s) - mu_cache[i] - mu_cache[j]).scale(HALF)
            coords = _sl6_coords(f, pol)
            bmu[i][j] = coords
            bmu[j][i] = coords
    return SSRData(
        f, omega, m_basis, bmu, name="three_forms6", structure_constants=sc
    )


_THREE_FORMS_CACHE: Dict[str, SSRData] = {}


def three_forms6(field: Field) -> SSRData:
    if "q" not in _THREE_FORMS_CACHE:
        _THREE_FORMS_CACHE["q"] = _three_forms6_rational()
    return _coerce_rational_ssr(_THREE_FORMS_CACHE["q"], field)


# ---------------------------------------------------------------------------
# primitive 3-forms under sp(6)
# ---------------------------------------------------------------------------

def _default_gram6(field: Field) -> Matrix:
    f = field
    g = Matrix.zeros(f, 6, 6)
    for i in range(3):
        g.data[i][i + 3] = f.one
        g.data[i + 3][i] = f.neg(f.one)
    return g


def primitive_three_forms6(field: Field, gram6: Optional[Matrix] = None) -> SSRData:
    f = field
    if gram6 is None:
        gram6 = _default_gram6(f)
    else:
        gram6 = Matrix(f, gram6.data, coerce=True) if gram6.field != f else gram6
    try:
        omega6 = SymplecticForm(gram6)
    except ValueError as exc:
        raise DegenerateForm(str(exc)) from exc
    parent = three_forms6(f)

    # the Poisson bivector pi = inverse of the form; the primitive space
    # is the kernel of the contraction alpha -> i_pi alpha
    ginv_cols = []
    eye = Matrix.identity(f, 6)
    from .linalg import solve

    for j in range(6):
        ginv_cols.append(solve(gram6, [eye.data[t][j] for t in range(6)]))
    ginv = Matrix.from_columns(f, ginv_cols)
    contraction = Matrix.zeros(f, 6, 20)
    for si, s in enumerate(TRIPLES):
        for i in range(6):
            for j in range(6):
                pij = ginv.data[i][j]
                if f.is_zero(pij):
                    continue
                di = _drop(i, s)
                if di is None:
                    continue
                s1, rest1 = di
                dj = _drop(j, rest1)
                if dj is None:
                    continue
                s2, rest2 = dj
                val = f.mul(pij, f.coerce(s1 * s2))
                val = f.mul(f.coerce(HALF), val)
                k = rest2[0]
                contraction.data[k][si] = f.add(contraction.data[k][si], val)
    v0 = kernel(contraction)
    if v0.dim != 14:
        raise DisagreementError("primitive subspace does not have dimension 14")
    vbasis = v0.basis

    sp6 = sp_basis(omega6)
    sp6_solver = MatrixExpressionSolver(f, sp6)
    # restricted representation
    vec_solver_cols = Matrix.from_columns(f, [list(v) for v in vbasis])
    rep_mats = []
    for x in sp6:
        big = _rep_on_three_forms(f, x)
        cols = [solve(vec_solver_cols, big.mat_vec(list(v))) for v in vbasis]
        rep_mats.append(Matrix.from_columns(f, cols))
    # restricted symplectic form
    g20 = parent.omega.gram
    gram14 = Matrix(
        f,
        [
            [parent.omega.apply(list(u), list(w)) for w in vbasis]
            for u in vbasis
        ],
    )
    # restricted structure tensor, expressed through sp(6)
    bmu = [[None] * 14 for _ in range(14)]
    for i in range(14):
        for j in range(i, 14):
            coords20 = parent.bmu_coords(list(vbasis[i]), list(vbasis[j]))
            mat6 = Matrix.zeros(f, 6, 6)
            for c, x in zip(coords20, _sl6_abstract_basis(f)):
                if not f.is_zero(c):
                    mat6 = mat6 + x.scale(c)
            coords = sp6_solver.coords(mat6)
            if coords is None:
                raise DisagreementError(
                    "restricted pairing leaves the symplectic subalgebra"
                )
            bmu[i][j] = coords
            bmu[j][i] = coords
    # structure constants from the abstract 6x6 sp matrices
    d = len(sp6)
    sc = [[[f.zero] * d for _ in range(d)] for _ in range(d)]
    for a in range(d):
        for b in range(d):
            if a == b:
                continue
            coords = sp6_solver.coords(sp6[a] @ sp6[b] - sp6[b] @ sp6[a])
            if coords is None:
                raise DisagreementError("sp(6) is not bracket closed")
            for c in range(d):
                sc[a][c][b] = coords[c]
    return SSRData(
        f, SymplecticForm(gram14), rep_mats, bmu,
        name="primitive_three_forms6",
        meta={
            "gram6": gram6.to_json(),
            "v0_basis": [[f.to_json(x) for x in v] for v in vbasis],
        },
        structure_constants=sc,
    )


# ---------------------------------------------------------------------------
# half-spinors of hyperbolic so(12)
# ---------------------------------------------------------------------------

_SUBSETS12 = sorted(
    (tuple(s) for r in range(7) for s in itertools.combinations(range(6), r)),
    key=lambda s: (len(s), s),
)
_SUB_IDX = {s: i for i, s in enumerate(_SUBSETS12)}
_EVEN_SUBSETS = [s for s in _SUBSETS12 if len(s) % 2 == 0]
_EVEN_IDX = [_SUB_IDX[s] for s in _EVEN_SUBSETS]

_GENS = [("e", i) for i in range(6)] + [("f", i) for i in range(6)]


def _metric(u, v) -> int:
    return 1 if u[0] != v[0] and u[1] == v[1] else 0


def _clifford_int() -> Dict[tuple, np.ndarray]:
    """Integer 64x64 matrices with c(x)c(y) + c(y)c(x) = 2 g(x, y)."""
    out = {}
    n = len(_SUBSETS12)
    for i in range(6):
        ce = np.zeros((n, n), dtype=np.int64)
        cf = np.zeros((n, n), dtype=np.int64)
        for col, s in enumerate(_SUBSETS12):
            if i not in s:
                sign = (-1) ** sum(1 for x in s if x < i)
                ce[_SUB_IDX[tuple(sorted(s + (i,)))], col] = sign
            else:
                pos = s.index(i)
                cf[_SUB_IDX[tuple(x for x in s if x != i)], col] = 2 * (-1) ** pos
        out[("e", i)] = ce
        out[("f", i)] = cf
    return out


def _spin_pairs() -> List[tuple]:
    return (
        [(("e", i), ("e", j)) for i in range(6) for j in range(i + 1, 6)]
        + [(("f", i), ("f", j)) for i in range(6) for j in range(i + 1, 6)]
        + [(("e", i), ("f", j)) for i in range(6) for j in range(6)]
    )


def _spin_structure_constants() -> List[List[List[Fraction]]]:
    pairs = _spin_pairs()
    idx = {}
    for t, (u, v) in enumerate(pairs):
        idx[(u, v)] = (t, 1)
        idx[(v, u)] = (t, -1)
    d = len(pairs)
    sc = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    for a, (u, v) in enumerate(pairs):
        for b, (x, y) in enumerate(pairs):
            terms = [
                (_metric(v, x), (u, y)),
                (-_metric(u, x), (v, y)),
                (-_metric(v, y), (u, x)),
                (_metric(u, y), (v, x)),
            ]
            for coef, key in terms:
                if coef == 0 or key[0] == key[1]:
                    continue
                hit = idx.get(key)
                if hit is None:
                    continue
                c, sgn = hit
                sc[a][c][b] += Fraction(coef * sgn)
    return sc


def _invert_rational_matrix(m: Matrix) -> Matrix:
    f = m.field
    n = m.rows
    aug = Matrix(
        f,
        [list(m.data[i]) + list(Matrix.identity(f, n).data[i]) for i in range(n)],
    )
    from .linalg import _rref_rows

    rows = [list(r) for r in aug.data]
    pivots, rows = _rref_rows(f, rows)
    if pivots != list(range(n)):
        raise DegenerateForm("matrix is singular")
    return Matrix(f, [r[n:] for r in rows])


def _half_spinor12_rational() -> SSRData:
    f = QQ
    cliff = _clifford_int()
    pairs = _spin_pairs()
    ev = np.array(_EVEN_IDX)
    # twice the spin generators, restricted to the even half
    s2 = []
    for u, v in pairs:
        m = cliff[u] @ cliff[v] - _metric(u, v) * np.eye(64, dtype=np.int64)
        s2.append(m[np.ix_(ev, ev)])
    s2 = np.array(s2)
    d = len(pairs)

    # the invariant symplectic pairing: reversal then top wedge coefficient
    w = np.zeros((32, 32), dtype=np.int64)
    for a, s in enumerate(_EVEN_SUBSETS):
        t = tuple(sorted(set(range(6)) - set(s)))
        k = len(s)
        w[a, _EVEN_SUBSETS.index(t)] = (
            (-1) ** (k * (k - 1) // 2) * _perm_sign(list(s) + list(t))
        )
    if np.any(w + w.T):
        raise CalibrationFailure("candidate pairing is not antisymmetric")
    for mat in s2:
        if np.any(mat.T @ w + w @ mat):
            raise CalibrationFailure("candidate pairing is not invariant")

    # structure tensor by duality against the trace form
    k4 = np.einsum("aij,bji->ab", s2, s2)
    k4_q = Matrix(f, [[Fraction(int(x)) for x in row] for row in k4])
    k4_inv = _invert_rational_matrix(k4_q)
    sparse_inv = [
        [(c, val) for c, val in enumerate(row) if val != 0]
        for row in k4_inv.data
    ]
    t2 = np.einsum("ali,lj->aij", s2, w)
    t2sym = t2 + t2.transpose(0, 2, 1)
    b0 = [[None] * 32 for _ in range(32)]
    for i in range(32):
        for j in range(i, 32):
            rhs = t2sym[:, i, j]
            coords = [
                sum(val * int(rhs[c]) for c, val in row_nz)
                for row_nz in sparse_inv
            ]
            b0[i][j] = coords
            b0[j][i] = coords

    # calibrate the overall scalar on deterministic generic triples
    rng = random.Random(20240601)

    def bmu0(vv, ww):
        out = [Fraction(0)] * d
        for i, vi in enumerate(vv):
            if not vi:
                continue
            for j, wj in enumerate(ww):
                if not wj:
                    continue
                cell = b0[i][j]
                c = vi * wj
                for a in range(d):
                    if cell[a]:
                        out[a] += c * cell[a]
        return out

    def act0(coords, vv):
        acc = np.zeros(32, dtype=object)
        vv_arr = np.array(vv, dtype=object)
        for a in range(d):
            if coords[a]:
                acc = acc + coords[a] * (s2[a].astype(object) @ vv_arr)
        return [x / 2 for x in acc]

    def omega0(u, v):
        return sum(int(w[i, j]) * u[i] * v[j] for i in range(32) for j in range(32) if w[i, j])

    gamma = None
    for _ in range(10):
        v1 = [Fraction(rng.randint(-2, 2)) for _ in range(32)]
        v2 = [Fraction(rng.randint(-2, 2)) for _ in range(32)]
        v3 = [Fraction(rng.randint(-2, 2)) for _ in range(32)]
        lhs = [
            2 * (x - y)
            for x, y in zip(act0(bmu0(v1, v2), v3), act0(bmu0(v1, v3), v2))
        ]
        o23, o12, o13 = omega0(v2, v3), omega0(v1, v2), omega0(v1, v3)
        rhs = [
            2 * o23 * a - o12 * c + o13 * b
            for a, b, c in zip(v1, v2, v3)
        ]
        nz = next((t for t, x in enumerate(lhs) if x != 0), None)
        if nz is None:
            continue
        cand = rhs[nz] / lhs[nz]
        if all(cand * x == y for x, y in zip(lhs, rhs)):
            gamma = cand
            break
        raise CalibrationFailure("no scalar multiple satisfies the identity")
    if gamma is None:
        raise CalibrationFailure("could not find a generic calibration triple")

    bmu = [
        [[gamma * x for x in b0[i][j]] for j in range(32)] for i in range(32)
    ]
    m_basis = [
        Matrix(f, [[Fraction(int(x), 2) for x in row] for row in mat])
        for mat in s2
    ]
    gram = Matrix(f, [[Fraction(int(x)) for x in row] for row in w])
    return SSRData(
        f, SymplecticForm(gram), m_basis, bmu, name="half_spinor12",
        meta={"calibration": str(gamma)},
        structure_constants=_spin_structure_constants(),
    )


_SPINOR_CACHE: Dict[str, SSRData] = {}


def half_spinor12(field: Field) -> SSRData:
    if "q" not in _SPINOR_CACHE:
        _SPINOR_CACHE["q"] = _half_spinor12_rational()
    return _coerce_rational_ssr(_SPINOR_CACHE["q"], field)


# ---------------------------------------------------------------------------
# vanishing-locus oracles
# ---------------------------------------------------------------------------

def _is_zero_vec(field: Field, v: Vector) -> bool:
    return all(field.is_zero(x) for x in v)


def _oracle_binary_cubics(field: Field, v: Vector) -> bool:
    """Triple-root test: second partial derivatives proportional, i.e. the
    quadratic (ac-b^2, ad-bc, bd-c^2) attached to the cubic vanishes."""
    f = field
    a, b, c, d = v
    return (
        f.mul(a, c) == f.mul(b, b)
        and f.mul(a, d) == f.mul(b, c)
        and f.mul(b, d) == f.mul(c, c)
    )


def _oracle_j_commutant(ssr: SSRData, v: Vector) -> bool:
    f = ssr.field
    j = Matrix.from_json(f, ssr.meta["J"])
    jv = j.mat_vec(v)
    return Subspace(f, len(v), [v, jv]).dim <= 1


def _oracle_hom_ef(ssr: SSRData, v: Vector) -> bool:
    f = ssr.field
    g = Matrix.from_json(f, ssr.meta["g"])
    m = g.rows
    a1, a2 = v[:m], v[m:]

    def pair(u, w):
        gv = g.mat_vec(w)
        acc = f.zero
        for x, y in zip(u, gv):
            acc = f.add(acc, f.mul(x, y))
        return acc

    gram_zero = (
        f.is_zero(pair(a1, a1))
        and f.is_zero(pair(a1, a2))
        and f.is_zero(pair(a2, a2))
    )
    return gram_zero and Subspace(f, m, [a1, a2]).dim <= 1


def _three_form_decomposable(field: Field, alpha: Vector) -> bool:
    """(i_xi alpha) ^ alpha = 0 for every basis bivector xi."""
    f = field
    coeffs = {TRIPLES[i]: alpha[i] for i in range(20) if not f.is_zero(alpha[i])}
    for i, j in PAIRS6:
        one_form = _contract_once(f, j, _contract_once(f, i, coeffs))
        four: Dict[tuple, object] = {}
        for kset, c1 in one_form.items():
            for s, cs in coeffs.items():
                mg = _merge(kset, s)
                if mg is None:
                    continue
                sign, u = mg
                val = f.mul(c1, cs)
                if sign == -1:
                    val = f.neg(val)
                four[u] = f.add(four.get(u, f.zero), val)
        if any(not f.is_zero(x) for x in four.values()):
            return False
    return True


def _oracle_three_forms(field: Field, v: Vector) -> bool:
    return _three_form_decomposable(field, v)


def _oracle_primitive(ssr: SSRData, v: Vector) -> bool:
    f = ssr.field
    vbasis = [
        [f.from_json(x) for x in row] for row in ssr.meta["v0_basis"]
    ]
    gram6 = Matrix.from_json(f, ssr.meta["gram6"])
    alpha = [f.zero] * 20
    for c, basis_vec in zip(v, vbasis):
        if f.is_zero(c):
            continue
        alpha = [f.add(x, f.mul(c, y)) for x, y in zip(alpha, basis_vec)]
    if not _three_form_decomposable(f, alpha):
        return False
    # support {x : i_x alpha = 0} must be a Lagrangian 3-space
    coeffs = {TRIPLES[i]: alpha[i] for i in range(20) if not f.is_zero(alpha[i])}
    rows = []
    for i in range(6):
        two = _contract_once(f, i, coeffs)
        rows.append([two.get(p, f.zero) for p in PAIRS6])
    support = kernel(Matrix.from_columns(f, rows))
    if support.dim != 3:
        return False
    om6 = SymplecticForm(gram6)
    for x in support.basis:
        for y in support.basis:
            if not f.is_zero(om6.apply(list(x), list(y))):
                return False
    return True


def _oracle_half_spinor(ssr: SSRData, v: Vector) -> bool:
    """Pure-spinor test: the annihilator {x in k^12 : c(x) s = 0} must be
    six dimensional."""
    f = ssr.field
    cliff = _clifford_int()
    s64 = [f.zero] * 64
    for c, pos in zip(v, _EVEN_IDX):
        s64[pos] = c
    cols = []
    for gen in _GENS:
        mat = cliff[gen]
        col = []
        for i in range(64):
            acc = f.zero
            row = mat[i]
            nz = np.nonzero(row)[0]
            for j in nz:
                acc = f.add(acc, f.mul(f.coerce(int(row[j])), s64[j]))
            col.append(acc)
        cols.append(col)
    ann = kernel(Matrix.from_columns(f, cols))
    return ann.dim == 6


def zero_set_oracle(ssr: SSRData, v: Vector) -> bool:
    """Construction-specific membership test for {A != 0 : mu(A) = 0},
    computed without the structure tensor."""
    f = ssr.field
    if _is_zero_vec(f, v):
        return False
    if ssr.name == "binary_cubics":
        return _oracle_binary_cubics(f, v)
    if ssr.name == "tautological":
        return False  # mu(v) is the rank-one map attached to v: never 0
    if ssr.name == "j_commutant":
        return _oracle_j_commutant(ssr, v)
    if ssr.name == "hom_ef":
        return _oracle_hom_ef(ssr, v)
    if ssr.name == "three_forms6":
        return _oracle_three_forms(f, v)
    if ssr.name == "primitive_three_forms6":
        return _oracle_primitive(ssr, v)
    if ssr.name == "half_spinor12":
        return _oracle_half_spinor(ssr, v)
    raise WrongConstruction(f"no vanishing-locus oracle for {ssr.name!r}")


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

def construct(name: str, field: Field, **params) -> SSRData:
    """Build a named construction; params mirror the factory keywords."""
    if name == "binary_cubics":
        return binary_cubics(field)
    if name == "tautological":
        return tautological(field, int(params.get("n", 1)))
    if name == "j_commutant":
        return j_commutant(
            field, int(params.get("n", 1)), params.get("lam_j", 1),
            params.get("j"),
        )
    if name == "hom_ef":
        return hom_ef(field, params.get("g"), int(params.get("size", 2)))
    if name == "three_forms6":
        return three_forms6(field)
    if name == "primitive_three_forms6":
        return primitive_three_forms6(field, params.get("gram6"))
    if name == "half_spinor12":
        return half_spinor12(field)
    raise WrongConstruction(f"unknown construction {name!r}")


CONSTRUCTION_NAMES = [
    "binary_cubics",
    "tautological",
    "j_commutant",
    "hom_ef",
    "three_forms6",
    "primitive_three_forms6",
    "half_spinor12",
]
