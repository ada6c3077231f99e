from fractions import Fraction

import pytest

from igusadt.forms import (
    c_coeff,
    chi10_tri,
    delta,
    discriminant_scan,
    dt_prediction,
    elliptic_genus_Z,
    eta_pow,
    f_squared,
    f_squared_neg_inv,
    sigma1,
    theta_product,
    tri_recip,
    wp,
    z_precision,
)
from igusadt.series import PLaurent, QSeries, SeriesError, is_integral, qs_equal, qs_mul, qs_recip


@pytest.fixture(scope="module")
def Z():
    return elliptic_genus_Z(4, z_precision(4))


def test_eta_pentagonal():
    e = eta_pow(1, 7)
    assert [e[d][0] for d in range(8)] == [1, -1, -1, 0, 0, 1, 0, 1]
    assert eta_pow(0, 3) == QSeries.one(3)


def test_delta_leading_coefficients():
    D = delta(4)
    assert D.q_offset == 1
    assert [D[q][0] for q in (1, 2, 3, 4)] == [1, -24, 252, -1472]
    assert is_integral(D)


def test_sigma1():
    assert [sigma1(d) for d in (1, 4, 6)] == [1, 7, 12]
    with pytest.raises(ValueError):
        sigma1(0)


def test_f_squared_neg_inv():
    s = f_squared_neg_inv(2, 5)
    assert s[0].coeffs == {1: 1, 2: 2, 3: 3, 4: 4, 5: 5}
    # (2p^-1 - 4 + 2p) p/(1-p)^2 collapses to the constant 2
    assert s[1].coeffs == {0: 2}
    assert s[1][-1] == 0
    one = qs_mul(f_squared(2, 12), f_squared_neg_inv(2, 12)).scale(-1)
    assert qs_equal(one, QSeries.one(2))


def test_wp_display():
    w = wp(4, 4)
    assert w[0][0] == Fraction(1, 12) and w[0][3] == 3
    assert w[1].coeffs == {-1: 1, 0: -2, 1: 1}
    assert w[4].coeffs == {-4: 4, -2: 2, -1: 1, 0: -14, 1: 1, 2: 2, 4: 4}


def test_elliptic_genus_leading_layer(Z):
    assert Z[0].coeffs == {-1: 2, 0: 20, 1: 2}
    assert is_integral(Z)


def test_elliptic_genus_is_p_symmetric(Z):
    for q in Z.degrees():
        t = Z[q]
        for n in range(0, int(t.high) + 1):
            if -n >= t.low or n <= t.high:
                assert t[n] == t[-n]


def test_c_values(Z):
    known = {-1: 2, 0: 20, 3: -128, 4: 216, 7: -1026, 8: 1616, 11: -5504, 12: 8032}
    assert {k: c_coeff(k, Z) for k in known} == known
    assert c_coeff(-4, Z) == 0
    assert c_coeff(1, Z) == 0 and c_coeff(2, Z) == 0


def test_c_outside_truncation(Z):
    with pytest.raises(SeriesError):
        c_coeff(100, Z)


def test_discriminant_consistency(Z):
    assert all(len(v) == 1 for v in discriminant_scan(Z, 12).values())


def test_chi10_leading_layers():
    chi = chi10_tri(3, h_max=1)
    assert chi.tq_offset == 1
    layer = chi[1]
    assert layer.q_offset == 1
    assert layer[1].coeffs == {-1: 1, 0: -2, 1: 1}
    # h=0 product part is prod (1-q^d)^20 (1-pq^d)^2 (1-p^-1 q^d)^2
    expected = theta_product(3, 20, 2).scale(PLaurent({-1: 1, 0: -2, 1: 1})).shift_q(1)
    assert qs_equal(layer, expected)
    assert is_integral(chi[2])


def test_chi10_h0_layer_times_reciprocal_is_one():
    chi = chi10_tri(3, h_max=0)
    inv = tri_recip(chi, 12)
    assert qs_equal(qs_mul(chi[1], inv[-1]), QSeries.one(3))


def test_prediction_leading_terms():
    p0 = dt_prediction(0, 3, 6)
    assert p0.q_offset == -1
    assert p0[-1].coeffs == {k: -k for k in range(1, 7)}
    p1 = dt_prediction(1, 3, 6)
    assert p1[-1].coeffs == {0: -2, **{k: -24 * k for k in range(1, 7)}}
    assert p0[-1].high == p1[-1].high == 6
    assert is_integral(p0) and is_integral(p1)


def test_prediction_rejects_other_h():
    with pytest.raises(ValueError):
        dt_prediction(2, 2, 2)
