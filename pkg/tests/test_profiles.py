import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toriclag import profiles as pr
from toriclag.profiles import AngleParams, MotionProfile, ProfileError

PI = math.pi


def test_shrinker_profile_angle():
    prof = pr.circle_shrinker_profile()
    p = AngleParams(N=4.0)
    for t in prof.sample_points(20):
        assert pr.circ_dist(pr.angle_reeb_case(prof, p, t), 4 * t + PI / 2) < 1e-12


@pytest.mark.parametrize("N", [1.0, 2.0, 3.0, 7.0])
def test_slag_profile_angle_zero(N):
    prof = pr.sine_slag_profile(N)
    p = AngleParams(N=N)
    for t in prof.sample_points(100, margin=0.01):
        assert pr.circ_dist(pr.angle_reeb_case(prof, p, t), 0.0) < 1e-10


def test_constant_rho_angle_n2():
    prof = pr.constant_rho_profile(lambda t: t, lambda t: 1.0, rho=2.5, interval=(0, 3))
    p = AngleParams(N=2.0)
    for t in (0.3, 1.1, 2.9):
        assert pr.circ_dist(pr.angle_reeb_case(prof, p, t), 2 * t + PI / 2) < 1e-12


def test_stationary_profile_rejected():
    prof = MotionProfile(lambda t: t, lambda t: 1.0, lambda t: 1.0, lambda t: 0.0, (0, 1))
    broken = MotionProfile(prof.f, prof.f_dot, prof.rho, prof.rho_dot, (0, 1))
    object.__setattr__(broken, "f_dot", lambda t: 0.0)
    with pytest.raises(ProfileError, match="profile stationary"):
        pr.angle_reeb_case(broken, AngleParams(N=1.0), 0.5)


@pytest.mark.parametrize("f,fd,N,theta,expect", [
    (lambda t: t, lambda t: 1.0, 0.0, -PI / 2, lambda t: 0.0),
    (lambda t: t, lambda t: 1.0, 1.0, 0.0, lambda t: t + PI / 2),
    (lambda t: 2 * t, lambda t: 2.0, 3.0, PI / 4, lambda t: 6 * t + PI / 4 + PI / 2),
])
def test_angle_rho_const(f, fd, N, theta, expect):
    prof = pr.constant_rho_profile(f, fd, interval=(0, 2))
    p = AngleParams(N=N, theta=theta)
    for t in (0.1, 0.7, 1.9):
        assert pr.circ_dist(pr.angle_rho_const_case(prof, p, t), expect(t)) < 1e-12


def test_angle_rho_const_regime_mismatch():
    with pytest.raises(ProfileError, match="regime mismatch"):
        pr.angle_rho_const_case(pr.sine_slag_profile(3.0), AngleParams(N=3.0), 1.0)


def test_check_slag_rho_const():
    p = AngleParams.from_data((1, 0, 0), (0, 1, 1), (3, 1, 1), nu=(0.3, 0, 0), theta0=0.3 + PI / 2)
    assert p.N_is_zero and p.N_exact == 0
    assert pr.check_slag_rho_const(p)
    assert not pr.check_slag_rho_const(AngleParams(N=1.0, theta=0.0, theta0=PI / 2))
    assert not pr.check_slag_rho_const(AngleParams(N=0.0, theta=0.2, theta0=0.2))


def test_slag_conserved_is_one():
    N = 3.0
    prof, p = pr.sine_slag_profile(N), AngleParams(N=N)
    for t in prof.sample_points(100, margin=0.01):
        direct = (cmath.exp(1j * t) / math.sin(t)).imag
        assert abs(pr.slag_conserved(prof, p, t) - 1.0) < 1e-12
        assert abs(direct - 1.0) < 1e-12


def test_constant_f_rejected():
    with pytest.raises(ProfileError, match="f_dot"):
        MotionProfile(lambda t: 1.0, lambda t: 0.0, lambda t: 1.0, lambda t: 0.0, (0, 1))


def test_line_profile_conserved_value():
    p = AngleParams(N=2.0, theta=0.4, theta0=0.4)
    prof = pr.make_slag_profile(p, 5.0, (-3, 3))
    for t in prof.sample_points(50):
        assert abs(pr.slag_conserved(prof, p, t) - 5.0) < 1e-12


def test_line_profile_reparametrization():
    N = 3.0
    p = AngleParams(N=N)
    line = pr.make_slag_profile(p, 1.0, (-50, 50))
    ref = pr.sine_slag_profile(N)
    for s in np.linspace(0.1, PI - 0.1, 30):
        t = 1 / math.tan(s)
        assert abs(line.f(t) - ref.f(s)) < 1e-12
        assert abs(line.rho(t) - ref.rho(s)) < 1e-12


def test_line_profile_n1_formula():
    p = AngleParams(N=1.0)
    prof = pr.make_slag_profile(p, 1.0, (0, 1))
    for t in (0.1, 0.5, 0.9):
        assert abs(prof.kappa(t) - 0.5 * math.log(t * t + 1)) < 1e-15
        assert abs(prof.f(t) - math.atan2(1, t)) < 1e-15


def test_line_profile_zero_c():
    p = AngleParams(N=1.0)
    with pytest.raises(ProfileError, match="curve through origin"):
        pr.make_slag_profile(p, 0.0, (-1, 1))
    with pytest.raises(ProfileError, match="constant f"):
        pr.make_slag_profile(p, 0.0, (1, 2))


@settings(max_examples=60, deadline=None)
@given(st.floats(0.5, 6), st.floats(-2, 2), st.floats(-2, 2), st.floats(0.2, 4).map(lambda c: c))
def test_make_slag_profile_conserves_exactly(N, theta, theta0, C):
    p = AngleParams(N=N, theta=theta, theta0=theta0)
    prof = pr.make_slag_profile(p, C, (-4, 4))
    q = [pr.slag_conserved(prof, p, t) for t in prof.sample_points(1000)]
    assert max(abs(x - C) for x in q) <= 1e-12 * max(1.0, C)


def test_perturbed_profile_not_conserved():
    N = 3.0
    ref = pr.sine_slag_profile(N)
    bumped = MotionProfile(lambda t: ref.f(t) + 0.05 * math.sin(t), lambda t: ref.f_dot(t) + 0.05 * math.cos(t),
                           ref.rho, ref.rho_dot, ref.interval)
    q = [pr.slag_conserved(bumped, AngleParams(N=N), t) for t in bumped.sample_points(100)]
    assert max(q) - min(q) > 1e-2


@settings(max_examples=40, deadline=None)
@given(st.floats(0.3, 5), st.floats(-3, 3), st.floats(0.1, 3), st.floats(0.5, 2))
def test_regimes_agree_for_constant_rho(N, theta, t, rate):
    prof = pr.constant_rho_profile(lambda s: rate * s, lambda s: rate, interval=(0, 4))
    p = AngleParams(N=N, theta=theta)
    assert pr.circ_dist(pr.angle_reeb_case(prof, p, t), pr.angle_rho_const_case(prof, p, t)) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 6), st.floats(0.05, PI - 0.05))
def test_angle_unchanged_by_positive_rescaling(N, t):
    prof, p = pr.sine_slag_profile(N), AngleParams(N=N)
    kd, fd = prof.kappa_dot(t), prof.f_dot(t)
    plain = cmath.phase(complex(kd, fd))
    scaled = cmath.phase(N * math.exp(N * prof.kappa(t)) * complex(kd, fd))
    assert pr.circ_dist(plain, scaled) < 1e-12
    assert pr.circ_dist(pr.angle_reeb_case(prof, p, t), prof.f(t) * N + scaled) < 1e-9


def test_angle_params_from_data():
    p = AngleParams.from_data((1, 0, 0), (4, 2, 1), (4, 2, 1), nu=(0.1, 0.2, 0.3))
    assert p.N_exact == Fraction(4) and p.theta == pytest.approx(0.1)
    assert p.zeta_is_reeb
    q = AngleParams.from_data((1, 0, 0), (4, 2, 0), (4, 2, 1))
    assert not q.zeta_is_reeb
    with pytest.raises(ProfileError):
        pr.angle_reeb_case(pr.sine_slag_profile(4.0), q, 1.0)


def test_mod_helpers():
    assert pr.mod_pi(-0.1) == pytest.approx(PI - 0.1)
    assert pr.mod_2pi(7.0) == pytest.approx(7.0 - 2 * PI)
    assert pr.circ_dist(0.01, PI - 0.01) == pytest.approx(0.02)
