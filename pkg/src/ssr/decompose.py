"""Lagrangian decomposition and the fiber geometry of the quadratic map.

A vector A with nonzero square quartic invariant splits uniquely (up to
swap) as A = B + C with both summands in the vanishing locus of mu and
omega(B, C) != 0.  When the invariant is a nonsquare, the same split
exists over the quadratic algebra of its square class, with the two
summands exchanged by conjugation.  The level set of mu through A is a
conic in the plane spanned by A and its cubic covariant, and the
operator mu(A) decomposes V into four eigenblocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

from .core import SSRData, bigQ, dmu, ker_dmu, mu, mu_matrix, psi
from .errors import (
    DisagreementError,
    NotASquare,
    WrongSquareClass,
    ZeroQuartic,
    ZeroVector,
)
from .fields import (
    Field,
    FieldElement,
    PrimeField,
    QuadraticAlgebra,
    RationalField,
    quadratic_algebra,
    square_class_representative,
)
from .linalg import (
    Matrix,
    Subspace,
    eigenspace,
    express_in_span,
    symplectic_perp,
)

Vector = List


def _scaled_sum(field, a, b, ca, cb):
    return [field.add(field.mul(ca, x), field.mul(cb, y)) for x, y in zip(a, b)]


def _is_zero_vec(field, v) -> bool:
    return all(field.is_zero(x) for x in v)


@dataclass(frozen=True)
class Decomposition:
    """A = B + C with mu(B) = mu(C) = 0 and omega(B, C) != 0."""

    summand_b: Vector
    summand_c: Vector
    q: FieldElement  # q^2 = Q(A), q = -3 omega(B, C)
    lambda_class: FieldElement  # square class of Q(A) in the base field

    def to_json(self) -> dict:
        f = self.q.field
        return {
            "summand_b": [f.to_json(x) for x in self.summand_b],
            "summand_c": [f.to_json(x) for x in self.summand_c],
            "q": f.to_json(self.q.raw),
            "lambda_class": self.lambda_class.field.to_json(self.lambda_class.raw),
        }


def _split_at_root(ssr: SSRData, a: Vector, ps: Vector, q_root):
    f = ssr.field
    half = f.inv(f.coerce(2))
    qinv = f.inv(q_root)
    b = [f.mul(half, f.add(x, f.mul(qinv, y))) for x, y in zip(a, ps)]
    c = [f.mul(half, f.sub(x, f.mul(qinv, y))) for x, y in zip(a, ps)]
    return b, c


def lagrangian_decompose(ssr: SSRData, a: Vector) -> Decomposition:
    """Split A = B + C with both summands mu-null; needs Q(A) a nonzero
    square.  The canonical square root orders the (mathematically
    unordered) pair deterministically."""
    f = ssr.field
    q_raw = bigQ(ssr, a).raw
    if f.is_zero(q_raw):
        raise ZeroQuartic("the quartic invariant vanishes; no split exists")
    root = f.sqrt(q_raw)
    if root is None:
        raise NotASquare(
            "the quartic invariant is not a square; extend the scalars"
        )
    ps = psi(ssr, a)
    b, c = _split_at_root(ssr, a, ps, root)
    # postconditions
    if not _is_zero_vec(f, mu(ssr, b)) or not _is_zero_vec(f, mu(ssr, c)):
        raise DisagreementError("summands are not mu-null")
    w = ssr.omega.apply(b, c)
    if f.neg(f.mul(f.coerce(3), w)) != root:
        raise DisagreementError("pairing of the summands does not match the root")
    # uniqueness up to swap: the opposite root exchanges the summands
    b2, c2 = _split_at_root(ssr, a, ps, f.neg(root))
    if b2 != c or c2 != b:
        raise DisagreementError("opposite root does not swap the summands")
    return Decomposition(
        summand_b=b,
        summand_c=c,
        q=FieldElement(f, root),
        lambda_class=FieldElement(f, f.one),
    )


def quad_ext_decompose(ssr: SSRData, a: Vector, lam) -> Decomposition:
    """Split A = B + conj(B) over the quadratic algebra attached to lam;
    needs Q(A) in the square class of lam."""
    f = ssr.field
    if isinstance(f, QuadraticAlgebra):
        raise WrongSquareClass("scalars are already a quadratic algebra")
    lam = f.coerce(lam)
    if f.is_zero(lam):
        raise WrongSquareClass("lambda must be nonzero")
    q_raw = bigQ(ssr, a).raw
    if f.is_zero(q_raw):
        raise ZeroQuartic("the quartic invariant vanishes; no split exists")
    z = f.sqrt(f.div(q_raw, lam))
    if z is None:
        raise WrongSquareClass(
            "the quartic invariant is not in the square class of lambda"
        )
    ext = quadratic_algebra(f, lam)
    ssr_ext = ssr.base_extend(ext)
    a_ext = [ext.coerce(FieldElement(f, x)) for x in a]
    ps = psi(ssr_ext, a_ext)
    root = (f.zero, z)  # z * sqrt(lambda), a purely imaginary square root
    b, c = _split_at_root(ssr_ext, a_ext, ps, root)
    if c != [ext.conj(x) for x in b]:
        raise DisagreementError("second summand is not the conjugate")
    if not _is_zero_vec(ext, mu(ssr_ext, b)):
        raise DisagreementError("summand is not mu-null")
    w = ssr_ext.omega.apply(b, c)
    if ext.is_zero(w):
        raise DisagreementError("summands pair to zero")
    three_w = ext.mul(ext.coerce(3), w)
    if ext.mul(three_w, three_w) != ext.coerce(FieldElement(f, q_raw)):
        raise DisagreementError("pairing square does not recover the invariant")
    return Decomposition(
        summand_b=b,
        summand_c=c,
        q=FieldElement(ext, root),
        lambda_class=square_class_representative(FieldElement(f, lam)),
    )


# ---------------------------------------------------------------------------
# the level set of mu through a point
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MuFiber:
    """The set {x A + y Psi(A) : x^2 - Q(A) y^2 = 1}, which is exactly
    the level set of mu through A when Q(A) != 0."""

    ssr: SSRData
    base_point: Vector
    psi_point: Vector
    q: FieldElement

    def point(self, x, y) -> Vector:
        f = self.ssr.field
        return _scaled_sum(f, self.base_point, self.psi_point, x, y)

    def on_conic(self, x, y) -> bool:
        f = self.ssr.field
        lhs = f.sub(f.mul(x, x), f.mul(self.q.raw, f.mul(y, y)))
        return lhs == f.one

    def contains(self, v: Vector) -> bool:
        f = self.ssr.field
        coords = express_in_span(f, [self.base_point, self.psi_point], v)
        in_plane = coords is not None and self.on_conic(coords[0], coords[1])
        direct = mu(self.ssr, v) == mu(self.ssr, self.base_point)
        if in_plane != direct:
            raise DisagreementError(
                "conic membership disagrees with direct comparison"
            )
        return in_plane

    def sample(self, count: int = 10) -> Iterator[Vector]:
        """Deterministic fiber points: exhaustive over a prime field,
        rational parametrization of the conic through (1, 0) otherwise."""
        f = self.ssr.field
        q = self.q.raw
        if isinstance(f, PrimeField):
            for xi in range(f.p):
                for yi in range(f.p):
                    x, y = f.coerce(xi), f.coerce(yi)
                    if self.on_conic(x, y):
                        yield self.point(x, y)
            return
        yield self.point(f.one, f.zero)
        yield self.point(f.neg(f.one), f.zero)
        emitted = 2
        t_int = 0
        while emitted < count:
            t_int += 1
            t = f.coerce(t_int)
            den = f.sub(f.one, f.mul(q, f.mul(t, t)))
            if f.is_zero(den):
                continue
            x = f.div(f.add(f.one, f.mul(q, f.mul(t, t))), den)
            y = f.div(f.mul(f.coerce(2), t), den)
            yield self.point(x, y)
            emitted += 1


def mu_fiber(ssr: SSRData, a: Vector) -> MuFiber:
    f = ssr.field
    q_raw = bigQ(ssr, a).raw
    if f.is_zero(q_raw):
        raise ZeroQuartic("the level set is only a conic when Q(A) != 0")
    return MuFiber(
        ssr=ssr,
        base_point=list(a),
        psi_point=psi(ssr, a),
        q=FieldElement(f, q_raw),
    )


# ---------------------------------------------------------------------------
# eigenblocks of the operator mu(A)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MuEigenDecomposition:
    """V as a direct sum of four mu(A)-eigenblocks.

    blocks[i] = (subspace, eigenvalue); dimensions 1, n-1, n-1, 1."""

    blocks: Tuple[Tuple[Subspace, FieldElement], ...]
    decomposition: Decomposition

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(s.dim for s, _ in self.blocks)


def mu_eigendecomposition(ssr: SSRData, a: Vector) -> MuEigenDecomposition:
    f = ssr.field
    dec = lagrangian_decompose(ssr, a)
    b, c = dec.summand_b, dec.summand_c
    w = ssr.omega.apply(b, c)  # = -q/3
    n2 = ssr.dim_v
    span_b = Subspace(f, n2, [b])
    span_c = Subspace(f, n2, [c])
    mid_b = symplectic_perp(span_c, ssr.omega).intersect(ker_dmu(ssr, b))
    mid_c = symplectic_perp(span_b, ssr.omega).intersect(ker_dmu(ssr, c))
    three = f.coerce(3)
    blocks = (
        (span_b, FieldElement(f, f.neg(f.mul(three, w)))),
        (mid_b, FieldElement(f, f.neg(w))),
        (mid_c, FieldElement(f, w)),
        (span_c, FieldElement(f, f.mul(three, w))),
    )
    # verify: each block sits in the right eigenspace, dims and totality
    mm = mu_matrix(ssr, a)
    n = n2 // 2
    expected = (1, n - 1, n - 1, 1)
    total = Subspace.zero(f, n2)
    for (sub, ev), dim in zip(blocks, expected):
        if sub.dim != dim:
            raise DisagreementError("eigenblock has unexpected dimension")
        eig = eigenspace(mm, ev.raw)
        if not all(eig.contains(list(v)) for v in sub.basis):
            raise DisagreementError("block is not an eigenblock")
        total = total + sub
    if total.dim != n2:
        raise DisagreementError("blocks do not fill the space")
    # outer pair spans <A, Psi(A)>; middle pair spans its perp
    plane = Subspace(f, n2, [a, psi(ssr, a)])
    if (span_b + span_c) != plane:
        raise DisagreementError("extreme blocks do not span the plane")
    if (mid_b + mid_c) != symplectic_perp(plane, ssr.omega):
        raise DisagreementError("middle blocks do not span the plane's perp")
    return MuEigenDecomposition(blocks=blocks, decomposition=dec)
