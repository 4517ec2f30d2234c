"""Charts between the double cover of the invertible locus and the
vanishing locus of mu over a quadratic scalar extension.

A hat point is a pair (P, z) with Q(P) = lam z^2 != 0, living over the
square class of lam.  A generic zero point is a vector v over the
quadratic algebra A_lam with mu(v) = 0 whose hermitian square
h(v) = omega(conj v, v)/sqrt(lam) does not vanish.  The two charts

    alpha(P, z) = 1/2 (P + Psi(P)/(z sqrt(lam)))
    beta(v)     = (v + conj v, 3 h(v))

are mutually inverse, intertwine (P, z) -> (P, -z) with conjugation,
and transport the multiplicative action of A_lam^* on hat points; the
pair (mu(P), z) is a complete invariant of the norm-one orbits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .core import SSRData, bigQ, mu, psi
from .errors import (
    DisagreementError,
    InvalidHatPoint,
    InvalidZGenPoint,
    NonInvertibleScalar,
)
from .fields import (
    FieldElement,
    QuadraticAlgebra,
    quadratic_algebra,
    square_class_representative,
)
from .linalg import express_in_span

Vector = List


def canonical_lambda(field, lam) -> FieldElement:
    """The canonical square-class representative; quadratic algebras for
    the same class are isomorphic, so charts only depend on it."""
    lam_raw = field.coerce(lam)
    if field.is_zero(lam_raw):
        raise InvalidHatPoint("lambda must be nonzero")
    return square_class_representative(FieldElement(field, lam_raw))


_EXT_CACHE: dict = {}


def _extension(ssr: SSRData, lam_raw):
    """The structure over A_lam; cached, since extending scalars of a
    large structure costs far more than evaluating one chart."""
    key = (id(ssr), lam_raw)
    hit = _EXT_CACHE.get(key)
    if hit is not None and hit[0] is ssr:
        return hit[1], hit[2]
    ext = quadratic_algebra(ssr.field, lam_raw)
    ssr_ext = ssr.base_extend(ext)
    _EXT_CACHE[key] = (ssr, ext, ssr_ext)
    return ext, ssr_ext


@dataclass(frozen=True)
class HatPoint:
    """(P, z) with Q(P) = lam z^2 != 0."""

    p: Vector
    z: object  # raw base-field value
    lam: object  # raw canonical square-class representative


@dataclass(frozen=True)
class ZGenPoint:
    """v over A_lam with mu(v) = 0 and h(v) != 0."""

    v: Vector
    lam: object
    h: object  # raw base-field value of the hermitian square


def hat_point(ssr: SSRData, lam, p: Vector, z) -> HatPoint:
    f = ssr.field
    lam_raw = canonical_lambda(f, lam).raw
    z_raw = f.coerce(z)
    if f.is_zero(z_raw):
        raise InvalidHatPoint("the cover coordinate z must be nonzero")
    q_raw = bigQ(ssr, p).raw
    if q_raw != f.mul(lam_raw, f.mul(z_raw, z_raw)):
        raise InvalidHatPoint("Q(P) != lambda z^2")
    return HatPoint(p=list(p), z=z_raw, lam=lam_raw)


def sigma(point: HatPoint, ssr: SSRData) -> HatPoint:
    """The deck transformation of the double cover: (P, z) -> (P, -z)."""
    return HatPoint(p=point.p, z=ssr.field.neg(point.z), lam=point.lam)


def hermitian_square(ssr_ext: SSRData, v: Vector):
    """h(v) = omega(conj v, v)/sqrt(lam), a base-field value."""
    ext = ssr_ext.field
    if not isinstance(ext, QuadraticAlgebra):
        raise InvalidZGenPoint("the point must live over a quadratic algebra")
    vbar = [ext.conj(x) for x in v]
    w = ssr_ext.omega.apply(vbar, v)
    # omega(conj v, v) is purely imaginary, so the quotient is real
    if not ext.base.is_zero(w[0]):
        raise DisagreementError("hermitian square is not real")
    return w[1]


def z_gen_point(ssr: SSRData, lam, v: Vector) -> ZGenPoint:
    f = ssr.field
    lam_raw = canonical_lambda(f, lam).raw
    ext, ssr_ext = _extension(ssr, lam_raw)
    v = [ext.coerce(x) for x in v]
    if any(not ext.is_zero(x) for x in mu(ssr_ext, v)):
        raise InvalidZGenPoint("mu(v) != 0")
    h = hermitian_square(ssr_ext, v)
    if f.is_zero(h):
        raise InvalidZGenPoint("the hermitian square of v vanishes")
    return ZGenPoint(v=v, lam=lam_raw, h=h)


def _alpha_raw(ssr_ext: SSRData, ext, p_ext: Vector, z_raw):
    f = ext.base
    half = ext.inv(ext.coerce(2))
    inv_zs = ext.inv((f.zero, z_raw))  # 1/(z sqrt(lam))
    ps = psi(ssr_ext, p_ext)
    return [
        ext.mul(half, ext.add(x, ext.mul(inv_zs, y)))
        for x, y in zip(p_ext, ps)
    ]


def alpha(ssr: SSRData, lam, point: HatPoint) -> ZGenPoint:
    f = ssr.field
    lam_raw = canonical_lambda(f, lam).raw
    if lam_raw != point.lam:
        raise InvalidHatPoint("point does not live over this lambda class")
    ext, ssr_ext = _extension(ssr, lam_raw)
    p_ext = [ext.coerce(FieldElement(f, x)) for x in point.p]
    v = _alpha_raw(ssr_ext, ext, p_ext, point.z)
    out = z_gen_point(ssr, lam_raw, v)
    # the deck transformation corresponds to conjugation
    flipped = _alpha_raw(ssr_ext, ext, p_ext, f.neg(point.z))
    if flipped != [ext.conj(x) for x in v]:
        raise DisagreementError("deck flip does not conjugate the chart")
    # the weighted scalar action a.(P, z) = (aP, a^2 z) scales the chart
    a = f.coerce(2)
    scaled_p = [ext.coerce((f.mul(a, x), f.zero)) for x in point.p]
    scaled = _alpha_raw(
        ssr_ext, ext, scaled_p, f.mul(f.mul(a, a), point.z)
    )
    a_ext = ext.coerce(a)
    if scaled != [ext.mul(a_ext, x) for x in v]:
        raise DisagreementError("chart is not scalar equivariant")
    # the cover coordinate pulls back to three times the hermitian square
    if out.h != f.div(point.z, f.coerce(3)):
        raise DisagreementError("hermitian square is not z/3")
    return out


def beta(ssr: SSRData, lam, point: ZGenPoint) -> HatPoint:
    f = ssr.field
    lam_raw = canonical_lambda(f, lam).raw
    if lam_raw != point.lam:
        raise InvalidZGenPoint("point does not live over this lambda class")
    ext = quadratic_algebra(f, lam_raw)
    real = []
    for x in point.v:
        s = ext.add(x, ext.conj(x))
        if not f.is_zero(s[1]):
            raise DisagreementError("v + conj v has an imaginary part")
        real.append(s[0])
    z = f.mul(f.coerce(3), point.h)
    # hat_point re-validates Q(v + conj v) = lambda (3h)^2 != 0
    return hat_point(ssr, lam_raw, real, z)


def torus_act(ssr: SSRData, lam, a_b: Tuple, point: HatPoint) -> HatPoint:
    """(a + b sqrt(lam)) . (P, z) = (aP + (b/z) Psi(P), (a^2 - b^2 lam) z)."""
    f = ssr.field
    lam_raw = canonical_lambda(f, lam).raw
    if lam_raw != point.lam:
        raise InvalidHatPoint("point does not live over this lambda class")
    a, b = f.coerce(a_b[0]), f.coerce(a_b[1])
    norm = f.sub(f.mul(a, a), f.mul(f.mul(b, b), lam_raw))
    if f.is_zero(norm):
        raise NonInvertibleScalar("a^2 - b^2 lambda = 0")
    ps = psi(ssr, point.p)
    c = f.div(b, point.z)
    new_p = [f.add(f.mul(a, x), f.mul(c, y)) for x, y in zip(point.p, ps)]
    new_z = f.mul(norm, point.z)
    return hat_point(ssr, lam_raw, new_p, new_z)


def mu_hat(ssr: SSRData, point: HatPoint) -> Tuple[Vector, FieldElement]:
    """The orbit invariant (mu(P), z) of the norm-one action."""
    return mu(ssr, point.p), FieldElement(ssr.field, point.z)


def unit_between(
    ssr: SSRData, p1: HatPoint, p2: HatPoint
) -> Optional[Tuple[FieldElement, FieldElement]]:
    """A norm-one scalar moving p1 to p2, or None when the orbit
    invariants differ.  The invariant criterion and the explicit solve
    must agree, so a discrepancy raises."""
    f = ssr.field
    if p1.lam != p2.lam:
        raise InvalidHatPoint("points live over different lambda classes")
    same_inv = mu_hat(ssr, p1) == mu_hat(ssr, p2)
    # p2 = x P1 + y Psi(P1) with x^2 - Q y^2 = 1 gives the unit
    # u = x + (y z) sqrt(lam), of norm x^2 - y^2 z^2 lam = x^2 - Q y^2
    coords = express_in_span(f, [p1.p, psi(ssr, p1.p)], p2.p)
    unit = None
    if coords is not None and p1.z == p2.z:
        x, y = coords
        q = bigQ(ssr, p1.p).raw
        if f.sub(f.mul(x, x), f.mul(q, f.mul(y, y))) == f.one:
            a, b = x, f.mul(y, p1.z)
            moved = torus_act(ssr, p1.lam, (a, b), p1)
            if moved.p == p2.p and moved.z == p2.z:
                unit = (FieldElement(f, a), FieldElement(f, b))
    if same_inv != (unit is not None):
        raise DisagreementError(
            "orbit invariant disagrees with the explicit unit solve"
        )
    return unit
