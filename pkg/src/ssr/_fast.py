"""Internal exact fast paths.

Bulk verification loops (axiom checks on all basis triples, randomized
orbit sampling, Jacobi checks) would be too slow entry-by-entry, so this
module mirrors the generic exact operations with integer numpy kernels:

* over F_p everything is int64 arithmetic reduced mod p;
* over Q every tensor is scaled to integers by its lowest common
  denominator and identities are compared after clearing denominators,
  so all results remain exact.

Nothing here is part of the public surface; the generic routines in
:mod:`ssr.core` and :mod:`ssr.linalg` stay the reference implementation
and the two are cross-checked in the test suite.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Optional

import numpy as np

from .fields import Field, PrimeField, RationalField

_INT64_GUARD = 2**59


def lcm_denominator(values) -> int:
    d = 1
    for v in values:
        d = d * v.denominator // math.gcd(d, v.denominator)
    return d


def to_int_array(field: Field, nested, shape=None):
    """(int64 ndarray, denominator) with array/den == nested exactly.

    For F_p the denominator is always 1 and entries are reduced mod p.
    """
    if isinstance(field, PrimeField):
        arr = np.array(nested, dtype=np.int64) % field.p
        return arr, 1
    if not isinstance(field, RationalField):
        raise TypeError("fast paths support Q and F_p only")
    flat = np.array(nested, dtype=object).reshape(-1)
    den = lcm_denominator(flat)
    ints = [int(v * den) for v in flat]
    arr = np.array(ints, dtype=np.int64)
    if nested is not None:
        arr = arr.reshape(np.array(nested, dtype=object).shape)
    return arr, den


def guard(*arrays_and_bounds):
    """Assert intermediate products stay well inside int64."""
    m = 1
    for a in arrays_and_bounds:
        if isinstance(a, np.ndarray):
            m *= max(1, int(np.abs(a).max()) if a.size else 1)
        else:
            m *= int(a)
    if m >= _INT64_GUARD:
        raise OverflowError("integer fast path would overflow int64")


# ---------------------------------------------------------------------------
# exact elimination over the integers (rank / kernel over Q)
# ---------------------------------------------------------------------------

def int_echelon(rows: List[List[int]]):
    """Integer-preserving row echelon form.

    Returns (pivot column list, echelon rows).  Rows are primitive
    integer vectors; ranks and spans agree with elimination over Q.
    """
    rows = [list(r) for r in rows if any(r)]
    pivots: List[int] = []
    ech: List[List[int]] = []
    for row in rows:
        row = _int_reduce(row, pivots, ech)
        piv = next((i for i, x in enumerate(row) if x), None)
        if piv is None:
            continue
        row = _primitive(row)
        # keep echelon sorted by pivot and fully reduced
        pos = 0
        while pos < len(pivots) and pivots[pos] < piv:
            pos += 1
        pivots.insert(pos, piv)
        ech.insert(pos, row)
        for i in range(len(ech)):
            if i != pos and ech[i][piv]:
                ech[i] = _primitive(_combine(ech[i], ech[pos], piv))
    return pivots, ech


def _combine(target: List[int], prow: List[int], piv: int) -> List[int]:
    a = prow[piv]
    b = target[piv]
    g = math.gcd(a, b)
    ca, cb = a // g, b // g
    return [ca * t - cb * p for t, p in zip(target, prow)]


def _int_reduce(v: List[int], pivots, ech) -> List[int]:
    v = list(v)
    for piv, row in zip(pivots, ech):
        if v[piv]:
            v = _combine(v, row, piv)
    return v


def _primitive(row: List[int]) -> List[int]:
    g = 0
    for x in row:
        g = math.gcd(g, x)
        if g == 1:
            break
    if g > 1:
        row = [x // g for x in row]
    lead = next((x for x in row if x), 1)
    if lead < 0:
        row = [-x for x in row]
    return row


def int_rank(rows: List[List[int]]) -> int:
    pivots, _ = int_echelon(rows)
    return len(pivots)


def int_kernel(rows: List[List[int]], ncols: int) -> List[List[int]]:
    """Primitive integer basis of the rational null space of the rows."""
    pivots, ech = int_echelon(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for piv, row in zip(pivots, ech):
            v[piv] = Fraction(-row[fc], row[piv])
        den = lcm_denominator(v)
        basis.append([int(x * den) for x in v])
    return basis


class IntEchelon:
    """Incremental integer echelon with membership tests."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: List[int] = []
        self.rows: List[List[int]] = []

    def add(self, row: List[int]) -> bool:
        """Insert the row; returns True if it enlarged the span."""
        row = _int_reduce(row, self.pivots, self.rows)
        piv = next((i for i, x in enumerate(row) if x), None)
        if piv is None:
            return False
        row = _primitive(row)
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < piv:
            pos += 1
        self.pivots.insert(pos, piv)
        self.rows.insert(pos, row)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def contains(self, v: List[int]) -> bool:
        return not any(_int_reduce(v, self.pivots, self.rows))


# ---------------------------------------------------------------------------
# elimination mod p (vectorized)
# ---------------------------------------------------------------------------

def modp_echelon(mat: np.ndarray, p: int):
    """Row echelon of an int64 matrix mod p; returns (pivots, reduced)."""
    a = np.array(mat, dtype=np.int64) % p
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        a[r] = (a[r] * pow(int(a[r, c]), p - 2, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return pivots, a[:r]


def modp_rank(mat: np.ndarray, p: int) -> int:
    pivots, _ = modp_echelon(mat, p)
    return len(pivots)


def modp_kernel(mat: np.ndarray, p: int) -> np.ndarray:
    pivots, red = modp_echelon(mat, p)
    ncols = mat.shape[1]
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-red[r, fc]) % p
    return basis


class ModpEchelon:
    """Incremental echelon mod p with membership tests."""

    def __init__(self, ncols: int, p: int):
        self.ncols = ncols
        self.p = p
        self.pivots: List[int] = []
        self.rows: List[np.ndarray] = []

    def _reduce(self, v: np.ndarray) -> np.ndarray:
        p = self.p
        v = v % p
        for piv, row in zip(self.pivots, self.rows):
            if v[piv]:
                v = (v - v[piv] * row) % p
        return v

    def add(self, row) -> bool:
        p = self.p
        v = self._reduce(np.asarray(row, dtype=np.int64))
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        v = (v * pow(int(v[piv]), p - 2, p)) % p
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < piv:
            pos += 1
        for i in range(len(self.rows)):
            if self.rows[i][piv]:
                self.rows[i] = (self.rows[i] - self.rows[i][piv] * v) % p
        self.pivots.insert(pos, piv)
        self.rows.insert(pos, v)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def contains(self, v) -> bool:
        return not np.any(self._reduce(np.asarray(v, dtype=np.int64)))


# ---------------------------------------------------------------------------
# fast wrapper around SSRData
# ---------------------------------------------------------------------------

class FastSSR:
    """Integer numpy view of an SSRData over Q or F_p.

    Vectors handed to the methods are integer coordinate arrays; over Q
    they are interpreted literally (sampling uses integer vectors, and
    rational inputs can be cleared to integers first).  All outputs are
    exact: numerators plus a recorded denominator.
    """

    def __init__(self, ssr):
        field = ssr.field
        if isinstance(field, PrimeField):
            self.p: Optional[int] = field.p
        elif isinstance(field, RationalField):
            self.p = None
        else:
            raise TypeError("FastSSR supports Q and F_p scalars only")
        self.field = field
        self.dim_v = ssr.dim_v
        self.dim_m = ssr.dim_m
        self.omega, self.omega_den = to_int_array(field, ssr.omega.gram.data)
        self.M, self.m_den = to_int_array(
            field, [m.data for m in ssr.m_basis]
        )
        self.bmu, self.bmu_den = to_int_array(field, ssr.bmu)
        if self.p is not None:
            self.omega %= self.p
            self.M %= self.p
            self.bmu %= self.p

    def _red(self, a: np.ndarray) -> np.ndarray:
        return a % self.p if self.p is not None else a

    # denominators: mu_num/(bmu_den), psi_num/(bmu_den*m_den)
    def mu_num(self, v: np.ndarray) -> np.ndarray:
        guard(self.bmu, int(np.abs(v).max(initial=1)) ** 2, self.dim_v**2)
        return self._red(np.einsum("ija,i,j->a", self.bmu, v, v))

    def bmu_num(self, v: np.ndarray, w: np.ndarray) -> np.ndarray:
        guard(self.bmu, int(np.abs(v).max(initial=1)),
              int(np.abs(w).max(initial=1)), self.dim_v**2)
        return self._red(np.einsum("ija,i,j->a", self.bmu, v, w))

    def m_matrix_num(self, coords: np.ndarray) -> np.ndarray:
        guard(self.M, int(np.abs(coords).max(initial=1)), self.dim_m)
        return self._red(np.einsum("a,aij->ij", coords, self.M))

    def psi_num(self, v: np.ndarray) -> np.ndarray:
        mu = self.mu_num(v)
        mat = self.m_matrix_num(mu)  # den bmu_den * m_den
        guard(mat, int(np.abs(v).max(initial=1)), self.dim_v)
        return self._red(mat @ v)

    def omega_num(self, u: np.ndarray, w: np.ndarray) -> int:
        guard(self.omega, int(np.abs(u).max(initial=1)),
              int(np.abs(w).max(initial=1)), self.dim_v)
        return int(self._red(np.array(u @ self.omega @ w)))

    def q_raw(self, v: np.ndarray):
        """Q(v) as an exact raw scalar of the underlying field."""
        num = self.omega_num(v, self.psi_num(v))
        if self.p is not None:
            return (3 * num * pow(2, self.p - 2, self.p)) % self.p
        return Fraction(3 * num, 2 * self.omega_den * self.bmu_den * self.m_den)

    def tangent_rows(self, v: np.ndarray) -> np.ndarray:
        """(dim_m, dim_v) integer rows spanning m . v."""
        guard(self.M, int(np.abs(v).max(initial=1)), self.dim_v)
        return self._red(np.einsum("aij,j->ai", self.M, v))

    def dmu_cols(self, v: np.ndarray) -> np.ndarray:
        """(dim_m, dim_v) array: column j is dmu_v(e_j) = 2 B(v, e_j)."""
        guard(self.bmu, int(np.abs(v).max(initial=1)), 2 * self.dim_v)
        return self._red(2 * np.einsum("ija,i->aj", self.bmu, v))

    # -- span/kernels dispatching on the field kind ---------------------
    def echelon(self, ncols: int):
        if self.p is not None:
            return ModpEchelon(ncols, self.p)
        return IntEchelon(ncols)

    def span_of_rows(self, rows: np.ndarray):
        e = self.echelon(rows.shape[1])
        for r in rows:
            e.add([int(x) for x in r] if self.p is None else r)
        return e

    def kernel_rows(self, rows: np.ndarray) -> List[np.ndarray]:
        if self.p is not None:
            return list(modp_kernel(rows, self.p))
        return [np.array(v, dtype=np.int64)
                for v in int_kernel([[int(x) for x in r] for r in rows],
                                    rows.shape[1])]

    def rank_rows(self, rows: np.ndarray) -> int:
        if self.p is not None:
            return modp_rank(rows, self.p)
        return int_rank([[int(x) for x in r] for r in rows])

    def perp_rows(self, rows: np.ndarray) -> List[np.ndarray]:
        """Kernel of (rows @ omega^T): the symplectic perp of the row span."""
        guard(rows, self.omega, self.dim_v)
        return self.kernel_rows(self._red(rows @ self.omega.T))

    def random_vector(self, rng) -> np.ndarray:
        if self.p is not None:
            return np.array([rng.randrange(self.p) for _ in range(self.dim_v)],
                            dtype=np.int64)
        return np.array([rng.randint(-9, 9) for _ in range(self.dim_v)],
                        dtype=np.int64)

    def to_field_vector(self, v: np.ndarray) -> list:
        return [self.field.coerce(int(x)) for x in v]
