import random
from fractions import Fraction

import pytest

from ssr.charts import (
    alpha,
    beta,
    canonical_lambda,
    hat_point,
    mu_hat,
    sigma,
    torus_act,
    unit_between,
    z_gen_point,
)
from ssr.constructions import binary_cubics, hom_ef, j_commutant, three_forms6
from ssr.core import bigQ, mu, psi
from ssr.errors import (
    InvalidHatPoint,
    InvalidZGenPoint,
    NonInvertibleScalar,
)
from ssr.fields import GF, QQ, FieldElement, quadratic_algebra

FIELDS = [QQ, GF(5), GF(7), GF(11), GF(13)]


def random_hat_point(ssr, rng, tries=200):
    """A random (P, z) over the canonical class of Q(P), or None."""
    f = ssr.field
    for _ in range(tries):
        a = [f.random(rng) for _ in range(ssr.dim_v)]
        q = bigQ(ssr, a).raw
        if f.is_zero(q):
            continue
        lam = canonical_lambda(f, q).raw
        z = f.sqrt(f.div(q, lam))
        if z is None:
            continue
        return lam, hat_point(ssr, lam, a, z)
    return None


def test_frozen_chart_values():
    bc = binary_cubics(QQ)
    p0 = [QQ.coerce(x) for x in (1, 0, 0, 1)]
    hp = hat_point(bc, 1, p0, 3)
    v = alpha(bc, 1, hp)
    assert v.h == QQ.one  # = z/3
    back = beta(bc, 1, v)
    assert back.p == hp.p and back.z == hp.z


def test_alpha_matches_split_decomposition():
    """In the split algebra the chart encodes the two mu-null summands."""
    from ssr.decompose import lagrangian_decompose

    bc = binary_cubics(QQ)
    p0 = [QQ.coerce(x) for x in (1, 0, 0, 1)]
    d = lagrangian_decompose(bc, p0)
    hp = hat_point(bc, 1, p0, 3)
    v = alpha(bc, 1, hp)
    ext = quadratic_algebra(QQ, 1)
    pairs = [ext.to_split_pair(x) for x in v.v]
    first = [x for x, _ in pairs]
    second = [y for _, y in pairs]
    assert {tuple(first), tuple(second)} == {
        tuple(d.summand_b),
        tuple(d.summand_c),
    }


def test_validation_errors():
    bc = binary_cubics(QQ)
    p0 = [QQ.coerce(x) for x in (1, 0, 0, 1)]  # Q = 9
    with pytest.raises(InvalidHatPoint):
        hat_point(bc, 1, p0, 2)  # 9 != 4
    with pytest.raises(InvalidHatPoint):
        hat_point(bc, 1, p0, 0)
    with pytest.raises(InvalidHatPoint):
        hat_point(bc, 1, [QQ.coerce(x) for x in (1, 0, 0, 0)], 1)
    with pytest.raises(InvalidZGenPoint):
        # a real point is fixed by conjugation, so h = 0
        z_gen_point(bc, 2, p0)
    with pytest.raises(InvalidZGenPoint):
        # mu does not vanish on a generic real vector over the extension
        z_gen_point(bc, 2, [QQ.coerce(x) for x in (1, 1, 0, 0)])


def test_sigma_flip():
    bc = binary_cubics(QQ)
    hp = hat_point(bc, 1, [QQ.coerce(x) for x in (1, 0, 0, 1)], 3)
    flipped = sigma(hp, bc)
    assert flipped.z == QQ.coerce(-3)
    assert mu_hat(bc, flipped) != mu_hat(bc, hp)


CONSTRUCTIONS = [
    ("binary_cubics", binary_cubics),
    ("j_commutant", lambda f: j_commutant(f, 2, 2)),
    ("hom_ef", hom_ef),
    ("three_forms6", three_forms6),
]


@pytest.mark.parametrize("name,factory", CONSTRUCTIONS, ids=[c[0] for c in CONSTRUCTIONS])
@pytest.mark.parametrize("field", FIELDS, ids=[str(f) for f in FIELDS])
def test_round_trips(name, factory, field):
    ssr = factory(field)
    rng = random.Random(hash((name, str(field))) & 0xFFFF)
    done = 0
    for _ in range(12):
        got = random_hat_point(ssr, rng)
        if got is None:
            continue
        lam, hp = got
        v = alpha(ssr, lam, hp)
        back = beta(ssr, lam, v)
        assert back.p == hp.p and back.z == hp.z
        again = alpha(ssr, lam, back)
        assert again.v == v.v
        done += 1
    assert done >= 5


def test_torus_action_law():
    bc = binary_cubics(QQ)
    hp = hat_point(bc, 1, [QQ.coerce(x) for x in (1, 0, 0, 1)], 3)
    rng = random.Random(7)
    for _ in range(20):
        a1, b1 = QQ.random(rng), QQ.random(rng)
        a2, b2 = QQ.random(rng), QQ.random(rng)
        lam = hp.lam
        try:
            one_then_two = torus_act(
                bc, lam, (a2, b2), torus_act(bc, lam, (a1, b1), hp)
            )
        except NonInvertibleScalar:
            continue
        # (a1 + b1 s)(a2 + b2 s) with s^2 = lam
        a3 = QQ.add(QQ.mul(a1, a2), QQ.mul(lam, QQ.mul(b1, b2)))
        b3 = QQ.add(QQ.mul(a1, b2), QQ.mul(b1, a2))
        product = torus_act(bc, lam, (a3, b3), hp)
        assert one_then_two.p == product.p and one_then_two.z == product.z


def test_torus_identity_and_scaling():
    bc = binary_cubics(QQ)
    p0 = [QQ.coerce(x) for x in (1, 0, 0, 1)]
    hp = hat_point(bc, 1, p0, 3)
    same = torus_act(bc, 1, (1, 0), hp)
    assert same.p == hp.p and same.z == hp.z
    doubled = torus_act(bc, 1, (2, 0), hp)
    assert doubled.p == [QQ.mul(QQ.coerce(2), x) for x in p0]
    assert doubled.z == QQ.coerce(12)
    with pytest.raises(NonInvertibleScalar):
        torus_act(bc, 1, (1, 1), hp)  # norm 1 - 1 = 0 over lambda = 1


@pytest.mark.parametrize("field", [QQ, GF(7), GF(13)], ids=str)
def test_unit_orbits(field):
    """Norm-one scalars preserve the orbit invariant and are recovered
    by the solver; non-units change it."""
    bc = binary_cubics(field)
    rng = random.Random(99)
    done = 0
    while done < 25:
        got = random_hat_point(bc, rng)
        if got is None:
            break
        lam, hp = got
        # a unit from the conic x^2 - Q y^2 = 1 via its parametrization
        q = bigQ(bc, hp.p).raw
        t = field.random(rng)
        den = field.sub(field.one, field.mul(q, field.mul(t, t)))
        if field.is_zero(den):
            continue
        x = field.div(field.add(field.one, field.mul(q, field.mul(t, t))), den)
        y = field.div(field.mul(field.coerce(2), t), den)
        u = (x, field.mul(y, hp.z))
        moved = torus_act(bc, lam, u, hp)
        assert mu_hat(bc, moved) == mu_hat(bc, hp)
        solved = unit_between(bc, hp, moved)
        assert solved is not None
        again = torus_act(bc, lam, (solved[0].raw, solved[1].raw), hp)
        assert again.p == moved.p and again.z == moved.z
        # a non-unit scalar changes z, hence the invariant
        scaled = torus_act(bc, lam, (2, 0), hp)
        assert mu_hat(bc, scaled) != mu_hat(bc, hp)
        assert unit_between(bc, hp, scaled) is None
        done += 1
    assert done >= 10


def test_pullback_of_linear_functionals():
    """Evaluating a linear functional through the chart agrees with the
    explicit 1/2 (eta(P) + eta(Psi(P)/sqrt(lam))/z) expression."""
    bc = binary_cubics(QQ)
    rng = random.Random(3)
    ext = quadratic_algebra(QQ, 2)
    for _ in range(10):
        got = random_hat_point(bc, rng)
        if got is None or got[0] != QQ.coerce(2):
            continue
        lam, hp = got
        v = alpha(bc, lam, hp)
        eta = [ext.random(rng) for _ in range(4)]

        def ev(vec):
            acc = ext.zero
            for c, x in enumerate(vec):
                acc = ext.add(acc, ext.mul(eta[c], x))
            return acc

        lhs = ev(v.v)
        ps = psi(bc, hp.p)
        p_ext = [ext.coerce(FieldElement(QQ, x)) for x in hp.p]
        ps_ext = [ext.coerce(FieldElement(QQ, x)) for x in ps]
        half = ext.inv(ext.coerce(2))
        inv_s = ext.inv(ext.sqrt_lam)
        zinv = ext.inv(ext.coerce(hp.z))
        rhs = ext.mul(
            half,
            ext.add(
                ev(p_ext),
                ext.mul(zinv, ev([ext.mul(inv_s, x) for x in ps_ext])),
            ),
        )
        assert lhs == rhs


def test_lambda_canonicalisation():
    assert canonical_lambda(QQ, Fraction(9, 1)).raw == QQ.one
    assert canonical_lambda(QQ, Fraction(8, 1)).raw == QQ.coerce(2)
    f = GF(7)
    # all nonsquares share one representative
    reps = {canonical_lambda(f, x).raw for x in (3, 5, 6)}
    assert len(reps) == 1
    with pytest.raises(InvalidHatPoint):
        canonical_lambda(QQ, 0)


def test_class_mismatch_rejected():
    bc = binary_cubics(QQ)
    p0 = [QQ.coerce(x) for x in (1, 0, 0, 1)]
    hp = hat_point(bc, 1, p0, 3)
    with pytest.raises(InvalidHatPoint):
        alpha(bc, 2, hp)
    with pytest.raises(InvalidHatPoint):
        torus_act(bc, 2, (1, 0), hp)
