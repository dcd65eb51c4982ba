import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import gamma, iv

from radialbc import (Channel, L2Only, OriginCoefficients, U0Strict, admissible,
                      indicial, series_start)
from radialbc.errors import (DomainError, ModeUnavailableError,
                             NonNormalizableError, UnsupportedChannelError)
from radialbc.origin import (CRITICAL, FALL_TO_CENTER, LIMIT_CIRCLE_WINDOW,
                             STANDARD, frobenius, origin_log_slope)

S = OriginCoefficients


def test_channel_validation():
    with pytest.raises(DomainError):
        Channel(-1)
    with pytest.raises(DomainError):
        Channel(0, 0.0)
    with pytest.raises(DomainError):
        Channel(1.5)
    with pytest.raises(DomainError):
        L2Only(1.0, r0=0.0)


def test_indicial_examples():
    rep = indicial(Channel(1), S())
    assert (rep.lambda_eff, rep.s_plus, rep.s_minus) == (2, 2, -1)
    assert rep.classification == STANDARD and not rep.ambiguity

    rep = indicial(Channel(0), S(c2=-3 / 32))
    assert rep.discriminant == pytest.approx(1 / 16)
    assert (rep.s_plus, rep.s_minus) == pytest.approx((0.75, 0.25))
    assert rep.classification == LIMIT_CIRCLE_WINDOW and rep.ambiguity

    rep = indicial(Channel(0), S(c2=-0.25))
    assert rep.discriminant == pytest.approx(-0.25)
    assert rep.classification == FALL_TO_CENTER
    assert rep.s_plus is None and rep.s_minus is None
    assert rep.real_part == 0.5 and rep.imag_part == pytest.approx(0.5)

    rep = indicial(Channel(0, 2.0), S(c2=-1 / 16))
    assert rep.classification == CRITICAL and rep.s_plus == rep.s_minus == 0.5


@given(st.integers(0, 6), st.floats(min_value=0.1, max_value=10),
       st.floats(min_value=-0.12, max_value=20))
def test_indicial_roots_satisfy_quadratic(l, mass, c2):
    rep = indicial(Channel(l, mass), S(c2=c2 / mass))
    if rep.classification in (FALL_TO_CENTER, CRITICAL):
        return
    lam = rep.lambda_eff
    tol = 1e-12 * max(1.0, abs(lam))
    assert abs(rep.s_plus * (rep.s_plus - 1) - lam) <= tol
    assert abs(rep.s_minus * (rep.s_minus - 1) - lam) <= tol
    assert rep.s_plus + rep.s_minus == 1.0
    assert rep.s_plus > rep.s_minus
    expected = LIMIT_CIRCLE_WINDOW if rep.s_minus > 0 else STANDARD
    assert rep.classification == expected
    assert len(admissible(rep, U0Strict())) == 1


def test_admissible_examples():
    std = indicial(Channel(0), S())
    assert admissible(std, U0Strict()) == {1.0}
    rep = indicial(Channel(0), S(c2=0.25))
    assert -0.5 < rep.s_minus < 0
    assert rep.s_minus == pytest.approx(0.5 - math.sqrt(0.75))
    assert admissible(rep, L2Only(1.0)) == {rep.s_plus, rep.s_minus}
    assert admissible(indicial(Channel(1), S()), L2Only(1.0)) == {2.0}
    window = indicial(Channel(0), S(c2=-3 / 32))
    assert admissible(window, U0Strict()) == {window.s_plus}
    with pytest.raises(UnsupportedChannelError):
        admissible(indicial(Channel(0), S(c2=-1)), U0Strict())


def test_coulomb_series_start():
    rep = indicial(Channel(0), S(c1=-1))
    u1, u2 = series_start(rep, S(c1=-1), Channel(0), -0.5, U0Strict(), 0.01, 0.02)
    assert u1 == pytest.approx(0.01 * (1 - 0.01), rel=1e-15)
    assert u1 == pytest.approx(0.0099, rel=1e-3)
    assert u2 == pytest.approx(0.02 * 0.98, rel=1e-15)


def test_leading_power_for_l2():
    rep = indicial(Channel(2), S())
    u1, u2 = series_start(rep, S(), Channel(2), 0.3, U0Strict(), 1e-4, 2e-4)
    assert u1 / u2 == pytest.approx(0.125, rel=1e-6)


def test_theta_zero_matches_strict():
    c = S(c2=0.25, c1=-0.3)
    rep = indicial(Channel(0), c)
    for order in (1, None):
        a = series_start(rep, c, Channel(0), -0.2, U0Strict(), 1e-3, 2e-3, order)
        b = series_start(rep, c, Channel(0), -0.2, L2Only(0.0), 1e-3, 2e-3, order)
        assert a == b


def test_series_start_errors():
    fall = indicial(Channel(0), S(c2=-1))
    with pytest.raises(UnsupportedChannelError, match="fall to the center"):
        series_start(fall, S(c2=-1), Channel(0), -1, U0Strict(), 1e-3, 2e-3)
    l1 = indicial(Channel(1), S())
    with pytest.raises(NonNormalizableError):
        series_start(l1, S(), Channel(1), -1, L2Only(1.0), 1e-3, 2e-3)
    crit = indicial(Channel(0), S(c2=-0.125))
    with pytest.raises(ModeUnavailableError):
        series_start(crit, S(c2=-0.125), Channel(0), -1, L2Only(1.0), 1e-3, 2e-3)
    with pytest.raises(DomainError):
        series_start(l1, S(), Channel(1), -1, U0Strict(), 2e-3, 1e-3)


def test_mixing_sign_convention():
    c = S(c2=0.25)
    rep = indicial(Channel(0), c)
    r1, r2 = 1e-3, 2e-3
    reg = series_start(rep, c, Channel(0), 0.0, U0Strict(), r1, r2, order=0)
    mixed = series_start(rep, c, Channel(0), 0.0, L2Only(2.0, r0=0.5), r1, r2, order=0)
    irr = r1**rep.s_minus
    expected = reg[0] - 2.0 * 0.5 ** (rep.s_plus - rep.s_minus) * irr
    assert mixed[0] == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("l,E,exact", [
    (0, -0.5, lambda r: r * np.exp(-r)),
    (1, -0.125, lambda r: r**2 * np.exp(-r / 2)),
])
def test_full_series_matches_hydrogen(l, E, exact):
    c = S(c1=-1)
    rep = indicial(Channel(l), c)
    r = np.array([1e-3, 0.01, 0.1, 0.3])
    u = frobenius(rep, c, Channel(l), E, "plus", r)
    assert np.allclose(u, exact(r), rtol=1e-13, atol=0)


def test_irregular_branch_matches_bessel():
    # repulsive inverse square: sqrt(r) I_{-nu}(kappa r) is pure r**s_minus series
    c = S(c2=0.25)
    rep = indicial(Channel(0), c)
    nu, kappa = rep.nu, 0.8
    r = np.array([1e-3, 0.05, 0.4, 1.0])
    exact = np.sqrt(r) * iv(-nu, kappa * r) * gamma(1 - nu) * (kappa / 2) ** nu
    u = frobenius(rep, c, Channel(0), -kappa**2 / 2, "minus", r)
    assert np.allclose(u, exact, rtol=1e-12, atol=0)


def test_origin_log_slope():
    r = np.array([1e-6, 2e-6])
    assert origin_log_slope(r, r**1.5) == pytest.approx(1.5)
