import random

import pytest
from hypothesis import given, settings, strategies as st

from ssr.constructions import binary_cubics, tautological, three_forms6
from ssr.core import (
    SSRData,
    b_psi,
    b_q,
    bigQ,
    classical_eisenstein,
    coisotropy_check,
    covariant_identities,
    covariant_report,
    dmu,
    eisenstein_syzygy,
    ker_dmu,
    m_mu_subalgebra,
    minimal_polynomial_mu,
    moment_tilde,
    mu,
    mu_matrix,
    normalizer_algebra,
    psi,
    q_vanishing_test,
    sp_basis,
    tangent,
    tau_matrix,
    verify_ssr,
)
from ssr.errors import (
    DimensionMismatch,
    DisagreementError,
    WrongConstruction,
    ZeroVector,
)
from ssr.fields import GF, QQ
from ssr.linalg import Matrix, SymplecticForm, poly_mul

FIELDS = [QQ, GF(5), GF(7), GF(11), GF(13)]


def cv(field, seq):
    return [field.coerce(x) for x in seq]


@pytest.fixture(scope="module")
def bc():
    return binary_cubics(QQ)


# ---------------------------------------------------------------------------
# covariants against frozen hand-computed values (binary cubics)
# ---------------------------------------------------------------------------

def test_mu_of_sum_of_cubes(bc):
    # P = x^3 + y^3 has mu(P) = diag element h, acting as diag(-3,-1,1,3)
    p = cv(QQ, [1, 0, 0, 1])
    assert mu(bc, p) == cv(QQ, [1, 0, 0])
    assert mu_matrix(bc, p).data == Matrix(
        QQ, [[-3, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 3]],
        coerce=True,
    ).data


def test_psi_and_q_of_sum_of_cubes(bc):
    p = cv(QQ, [1, 0, 0, 1])
    assert psi(bc, p) == cv(QQ, [-3, 0, 0, 3])
    assert bigQ(bc, p).raw == QQ.coerce(9)


def test_triple_root_kills_mu(bc):
    assert mu(bc, cv(QQ, [1, 0, 0, 0])) == cv(QQ, [0, 0, 0])


def test_nilpotent_example(bc):
    # P = 3 x^2 y: mu nonzero but the quartic invariant vanishes
    p = cv(QQ, [0, 1, 0, 0])
    assert mu(bc, p) == cv(QQ, [0, 0, 2])
    assert QQ.is_zero(bigQ(bc, p).raw)
    assert psi(bc, p) == cv(QQ, [-6, 0, 0, 0])


def test_tau_matrix_is_symplectic():
    f = QQ
    om = SymplecticForm.standard(f, 2)
    rng = random.Random(0)
    for _ in range(20):
        v = [f.random(rng) for _ in range(4)]
        t = tau_matrix(om, v)
        assert om.is_compatible(t)
        # tau(v) v = omega(v, v) v = 0
        assert all(f.is_zero(x) for x in t.mat_vec(v))


# ---------------------------------------------------------------------------
# polarisations
# ---------------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 10**9))
def test_polarisations_recover_diagonal(field, seed):
    ssr = binary_cubics(field)
    rng = random.Random(seed)
    a = [field.random(rng) for _ in range(4)]
    assert ssr.bmu_coords(a, a) == mu(ssr, a)
    assert b_psi(ssr, a, a, a) == psi(ssr, a)
    assert b_q(ssr, a, a, a, a).raw == bigQ(ssr, a).raw


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 10**9))
def test_quartic_polar_pairing(field, seed):
    # omega(d, b_psi(a, b, c)) = (2/3) b_q(a, b, c, d)
    ssr = binary_cubics(field)
    f = field
    rng = random.Random(seed)
    a, b, c, d = ([f.random(rng) for _ in range(4)] for _ in range(4))
    lhs = ssr.omega.apply(d, b_psi(ssr, a, b, c))
    rhs = f.mul(f.coerce(2), f.div(b_q(ssr, a, b, c, d).raw, f.coerce(3)))
    assert lhs == rhs


# ---------------------------------------------------------------------------
# verification machinery
# ---------------------------------------------------------------------------

def test_verify_passes_both_paths(bc):
    fast = verify_ssr(bc, use_fast=True)
    slow = verify_ssr(bc, use_fast=False)
    assert fast.passed and slow.passed
    assert fast.m_mu_dim == slow.m_mu_dim == 3


def test_verify_detects_scaled_tensor(bc):
    two = QQ.coerce(2)
    bad_bmu = [
        [[QQ.mul(two, x) for x in cell] for cell in row] for row in bc.bmu
    ]
    bad = SSRData(QQ, bc.omega, bc.m_basis, bad_bmu)
    for use_fast in (True, False):
        rep = verify_ssr(bad, use_fast=use_fast)
        assert not rep.passed
        assert not rep.defining_identity_ok
        assert rep.counterexample is not None


def test_verify_detects_broken_compatibility(bc):
    bad_basis = list(bc.m_basis)
    bad_basis[0] = Matrix.identity(QQ, 4)  # identity is not symplectic-compatible
    bad = SSRData(QQ, bc.omega, bad_basis, bc.bmu)
    for use_fast in (True, False):
        assert not verify_ssr(bad, use_fast=use_fast).compatibility_ok


def test_verify_report_shape(bc):
    rep = verify_ssr(bc, compute_normalizer=True)
    obj = rep.to_json()
    assert obj["passed"] is True
    assert obj["m_mu_dim"] == 3 and obj["m_mu_equals_m"] is True
    assert obj["normalizer_dim"] == 3
    assert obj["m_mu_ideal_in_normalizer"] is True


def test_generated_subalgebra_and_normalizer(bc):
    assert m_mu_subalgebra(bc).dim == 3
    assert normalizer_algebra(bc).dim == 3


def test_sp_basis_dimension():
    for f in (QQ, GF(7)):
        for n in (1, 2, 3):
            om = SymplecticForm.standard(f, n)
            basis = sp_basis(om)
            assert len(basis) == n * (2 * n + 1)
            for m in basis:
                assert om.is_compatible(m)


def test_structure_constants_cached_and_checked(bc):
    sc = bc.structure_constants()
    assert len(sc) == 3
    # supplying wrong constants is rejected by verification
    wrong = [[[QQ.zero] * 3 for _ in range(3)] for _ in range(3)]
    bad = SSRData(
        QQ, bc.omega, bc.m_basis, bc.bmu, structure_constants=wrong
    )
    with pytest.raises(DisagreementError):
        verify_ssr(bad, use_fast=True)


# ---------------------------------------------------------------------------
# orbit geometry
# ---------------------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 10**9))
def test_tangent_space_coisotropic(field, seed):
    ssr = binary_cubics(field)
    rng = random.Random(seed)
    a = [field.random(rng) for _ in range(4)]
    if all(field.is_zero(x) for x in a):
        a[0] = field.one
    ok, witness = coisotropy_check(ssr, a)
    assert ok and witness is None


def test_coisotropy_rejects_zero(bc):
    with pytest.raises(ZeroVector):
        coisotropy_check(bc, [QQ.zero] * 4)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 10**9))
def test_q_vanishing_routes_agree(field, seed):
    ssr = binary_cubics(field)
    rng = random.Random(seed)
    a = [field.random(rng) for _ in range(4)]
    if all(field.is_zero(x) for x in a):
        a[0] = field.one
    res = q_vanishing_test(ssr, a)
    assert res == field.is_zero(bigQ(ssr, a).raw)


def test_generic_point_kernel_and_tangent(bc):
    p = cv(QQ, [1, 0, 0, 1])  # Q = 9 != 0
    k = ker_dmu(bc, p)
    assert k.dim == 1 and k.contains(psi(bc, p))
    t = tangent(bc, p)
    assert t.dim == 3
    assert not t.contains(p)  # V = tangent + <p> when Q != 0


def test_triple_root_tangent_is_lagrangian(bc):
    # mu = 0 exactly on triple roots; there the orbit direction space is
    # spanned by lower-degree translates and is Lagrangian
    from ssr.linalg import is_lagrangian

    p = cv(QQ, [1, 0, 0, 0])
    t = tangent(bc, p)
    assert t.dim == 2 and is_lagrangian(t, bc.omega)


def test_dmu_differential_matches_polarisation(bc):
    rng = random.Random(5)
    a = [QQ.random(rng) for _ in range(4)]
    d = dmu(bc, a)
    for j in range(4):
        e = [QQ.one if t == j else QQ.zero for t in range(4)]
        col = [d.data[i][j] for i in range(d.rows)]
        expected = [QQ.mul(QQ.coerce(2), x) for x in bc.bmu_coords(a, e)]
        assert col == expected


def test_moment_map_consistency(bc):
    rng = random.Random(11)
    for _ in range(10):
        a = [QQ.random(rng) for _ in range(4)]
        if all(QQ.is_zero(x) for x in a):
            continue
        moment_tilde(bc, a)  # raises DisagreementError on failure


# ---------------------------------------------------------------------------
# plane identities and minimal polynomials
# ---------------------------------------------------------------------------

@settings(max_examples=80, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 10**9))
def test_covariant_identities_random(field, seed):
    ssr = binary_cubics(field)
    rng = random.Random(seed)
    a = [field.random(rng) for _ in range(4)]
    s, t = field.random(rng), field.random(rng)
    s2, t2 = field.random(rng), field.random(rng)
    results = covariant_identities(ssr, a, s, t, s2, t2)
    assert all(results.values()), results


def test_minimal_polynomial_generic(bc):
    p = cv(QQ, [1, 0, 0, 1])
    info = minimal_polynomial_mu(bc, p)
    q = QQ.coerce(9)
    expected = poly_mul(
        QQ,
        [QQ.neg(q), QQ.zero, QQ.one],
        [QQ.neg(QQ.coerce(1)), QQ.zero, QQ.one],  # q/9 = 1
    )
    assert info.coefficients == expected
    assert not info.nilpotent


def test_minimal_polynomial_nilpotent(bc):
    p = cv(QQ, [0, 1, 0, 0])  # Q = 0, psi != 0
    info = minimal_polynomial_mu(bc, p)
    assert info.nilpotent and not info.cube_zero and not info.psi_zero
    p2 = cv(QQ, [1, 0, 0, 0])  # mu = 0 entirely
    info2 = minimal_polynomial_mu(bc, p2)
    assert info2.nilpotent and info2.cube_zero and info2.psi_zero


def test_minimal_polynomial_needs_room():
    taut1 = tautological(QQ, 1)  # dim V = 2: the factorisation degenerates
    with pytest.raises(DimensionMismatch):
        minimal_polynomial_mu(taut1, cv(QQ, [1, 0]))


# ---------------------------------------------------------------------------
# syzygies
# ---------------------------------------------------------------------------

@settings(max_examples=80, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 10**9))
def test_matrix_syzygy_random(field, seed):
    ssr = binary_cubics(field)
    rng = random.Random(seed)
    a = [field.random(rng) for _ in range(4)]
    assert eisenstein_syzygy(ssr, a)


def test_matrix_syzygy_other_construction():
    ssr = three_forms6(GF(7))
    rng = random.Random(3)
    for _ in range(5):
        a = [GF(7).random(rng) for _ in range(20)]
        assert eisenstein_syzygy(ssr, a)


def test_classical_syzygy_frozen_values(bc):
    p = cv(QQ, [1, 0, 0, 1])
    vals = [t.raw for t in classical_eisenstein(bc, p, cv(QQ, [1, 0]))]
    assert vals == cv(QQ, [-1, 1, 0, 1])
    vals = [t.raw for t in classical_eisenstein(bc, p, cv(QQ, [1, 1]))]
    assert vals == cv(QQ, [0, 2, -1, 1])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 10**9))
def test_classical_syzygy_random(field, seed):
    ssr = binary_cubics(field)
    rng = random.Random(seed)
    p = [field.random(rng) for _ in range(4)]
    v = [field.random(rng) for _ in range(2)]
    x, y, z, delta = classical_eisenstein(ssr, p, v)
    lhs = x * x - delta * y * y
    zz = z * z * z
    assert lhs.raw == field.mul(field.coerce(4), zz.raw)


def test_classical_syzygy_wrong_construction():
    taut = tautological(QQ, 2)
    with pytest.raises(WrongConstruction):
        classical_eisenstein(taut, cv(QQ, [1, 0, 0, 0]), cv(QQ, [1, 0]))


# ---------------------------------------------------------------------------
# data model
# ---------------------------------------------------------------------------

def test_json_round_trip(bc):
    obj = bc.to_json()
    back = SSRData.from_json(obj)
    assert back.field == bc.field
    assert back.omega.gram == bc.omega.gram
    assert all(a == b for a, b in zip(back.m_basis, bc.m_basis))
    assert back.bmu == bc.bmu
    assert back.name == bc.name


def test_base_extend(bc):
    f7 = GF(7)
    ext = bc.base_extend(f7)
    assert ext.field == f7
    assert verify_ssr(ext).passed


def test_covariant_report_serialises(bc):
    rep = covariant_report(bc, cv(QQ, [1, 0, 0, 1]))
    obj = rep.to_json()
    assert obj["q"] == QQ.to_json(QQ.coerce(9))
    assert obj["ker_dmu_dim"] == 1
    assert obj["tangent_dim"] == 3
