"""Disc machinery: Cauchy derivatives, boundary limits, moduli, conjugates."""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geodisc.disc_analysis import (
    BoundarySamples,
    ModulusFamily,
    boundary_samples,
    conjugate_function,
    constant_map,
    derivative_cauchy,
    identity_map,
    log_dini_test,
    modulus_of_continuity,
    modulus_profile,
    pz_bound,
    radial_limit,
    scalar_function,
    vector_function,
)


def half_exp_blaschke_exponent():
    """The bounded component of the non-extending geodesic: |f| < 1/2 on D."""
    f = lambda z: 0.5 * cmath.exp((1.0 + z) / (z - 1.0))
    df = lambda z: f(z) * (-2.0) / (z - 1.0) ** 2
    return scalar_function(f, df)


# --- derivative via the Cauchy integral -----------------------------------

def test_cauchy_derivative_square():
    f = scalar_function(lambda z: z * z)
    assert abs(derivative_cauchy(f, 0.5, 0.9)[0] - 1.0) < 1e-12


def test_cauchy_derivative_constant():
    f = constant_map([3.0 + 4.0j])
    assert abs(derivative_cauchy(f, 0.2 + 0.1j)[0]) < 1e-13


def test_cauchy_derivative_geometric_series():
    f = scalar_function(lambda z: 1.0 / (1.0 - 0.9 * z))
    assert abs(derivative_cauchy(f, 0.0)[0] - 0.9) < 1e-10


def test_cauchy_matches_analytic_on_polynomials():
    rng = np.random.default_rng(7)
    coeffs = rng.standard_normal(11) + 1j * rng.standard_normal(11)
    f = scalar_function(
        lambda z: sum(c * z**k for k, c in enumerate(coeffs)),
        lambda z: sum(k * c * z ** (k - 1) for k, c in enumerate(coeffs) if k),
    )
    for zeta in (0.0, 0.3 + 0.2j, -0.55j, 0.7):
        exact = f.derivative(zeta)[0]
        assert abs(derivative_cauchy(f, zeta)[0] - exact) <= 1e-8


def test_cauchy_rejects_circle_not_enclosing():
    f = identity_map()
    with pytest.raises(ValueError, match="evaluation circle too small"):
        derivative_cauchy(f, 0.9, 0.5)


# --- radial limits ---------------------------------------------------------

def test_radial_limit_identity():
    value, ok = radial_limit(identity_map(), 0.0)
    assert ok
    assert abs(value[0] - 1.0) < 1e-6


def test_radial_limit_flat_singularity_at_one():
    f = half_exp_blaschke_exponent()
    value, ok = radial_limit(f, 0.0)
    assert ok
    assert abs(value[0]) < 1e-300  # |f(r)| = e^{-(1+r)/(1-r)} / 2 -> 0


def test_radial_limit_flat_function_at_minus_one():
    # (1 + e^{i pi}) / (e^{i pi} - 1) = 0, so the limit is 1/2 e^0
    f = half_exp_blaschke_exponent()
    value, ok = radial_limit(f, math.pi, tol=1e-6)
    assert ok
    assert abs(value[0] - 0.5) < 1e-7


# --- boundary sampling -----------------------------------------------------

def test_boundary_samples_identity_roots_of_unity():
    samples = boundary_samples(identity_map(), 8)
    roots = np.exp(2j * math.pi * np.arange(8) / 8)
    assert np.max(np.abs(samples.values[:, 0] - roots)) < 1e-6
    assert samples.cauchy_fraction == 1.0


def test_boundary_samples_constant():
    samples = boundary_samples(constant_map([2.0 - 1.0j]), 16)
    assert np.max(np.abs(samples.values - (2.0 - 1.0j))) == 0.0


def test_boundary_samples_nonextending_pair_moduli():
    pair = vector_function(
        [lambda z: z, lambda z: 0.5 * cmath.exp((1.0 + z) / (z - 1.0))]
    )
    samples = boundary_samples(pair, 256)
    second = samples.values[:, 1]
    assert abs(second[0]) < 1e-300
    assert np.max(np.abs(np.abs(second[1:]) - 0.5)) < 1e-4

    # boundary phase oracle: f2 on the circle is (1/2) e^{-i cot(theta/2)}
    thetas = samples.thetas
    for k in range(8, 128, 13):
        oracle = 0.5 * cmath.exp(-1j / math.tan(thetas[k] / 2.0))
        assert abs(second[k] - oracle) < 1e-5


# --- modulus of continuity -------------------------------------------------

def _brute_force_modulus(samples: BoundarySamples, delta: float) -> float:
    worst = 0.0
    thetas = samples.thetas
    n = samples.n
    for j in range(n):
        for k in range(j + 1, n):
            gap = abs(thetas[j] - thetas[k])
            gap = min(gap, 2.0 * math.pi - gap)
            if gap <= delta + 1e-12:
                worst = max(worst,
                            float(np.linalg.norm(samples.values[j] - samples.values[k])))
    return worst


def test_modulus_constant_is_zero():
    samples = boundary_samples(constant_map([1.0j]), 32)
    assert modulus_of_continuity(samples, math.pi / 2) == 0.0


def test_modulus_identity_third_of_pi():
    samples = boundary_samples(identity_map(), 96)
    value = modulus_of_continuity(samples, math.pi / 3.0)
    assert abs(value - 1.0) < 1e-6  # 2 sin(pi/6)
    assert abs(value - _brute_force_modulus(samples, math.pi / 3.0)) < 1e-12


def test_modulus_cosine_third_of_pi():
    values = np.cos(2.0 * math.pi * np.arange(96) / 96).astype(complex)
    samples = BoundarySamples(96, values, 1.0)
    value = modulus_of_continuity(samples, math.pi / 3.0)
    assert abs(value - 1.0) < 1e-12
    assert abs(value - _brute_force_modulus(samples, math.pi / 3.0)) < 1e-12


def test_modulus_rejects_bad_delta():
    samples = boundary_samples(identity_map(), 16)
    with pytest.raises(ValueError, match="delta out of range"):
        modulus_of_continuity(samples, -0.1)
    with pytest.raises(ValueError, match="delta out of range"):
        modulus_of_continuity(samples, 3.2)


def test_modulus_profile_monotone_and_standard_inequality():
    rng = np.random.default_rng(3)
    coeffs = rng.standard_normal(6)
    thetas = 2.0 * math.pi * np.arange(256) / 256
    values = sum(c * np.cos((k + 1) * thetas) for k, c in enumerate(coeffs))
    samples = BoundarySamples(256, values.astype(complex), 1.0)
    profile = modulus_profile(samples, np.linspace(0.05, math.pi, 40))
    assert np.all(np.diff(profile.omegas) >= 0.0)
    assert profile.standard_inequality_violation() <= 1e-12


def test_empirical_modulus_tends_to_zero_for_continuous_function():
    samples = boundary_samples(scalar_function(lambda z: z * z + 0.3 * z), 1024)
    deltas = [math.pi * 2.0 ** (-j) for j in range(9, -1, -1)]
    profile = modulus_profile(samples, deltas)
    # |f'| <= 2.3 on the closed disc, so omega(delta) <= 2.3 delta
    assert profile.omegas[0] <= 2.5 * profile.deltas[0]
    assert profile.omegas[0] < profile.omegas[-1]


# --- conjugate function ----------------------------------------------------

def _real_samples(values: np.ndarray) -> BoundarySamples:
    return BoundarySamples(len(values), values.astype(complex), 1.0)


def test_conjugate_of_cosine_is_sine():
    thetas = 2.0 * math.pi * np.arange(512) / 512
    conj = conjugate_function(_real_samples(np.cos(thetas)))
    assert np.max(np.abs(conj.values[:, 0].real - np.sin(thetas))) < 1e-12


def test_conjugate_of_sine_is_minus_cosine():
    thetas = 2.0 * math.pi * np.arange(256) / 256
    conj = conjugate_function(_real_samples(np.sin(thetas)))
    assert np.max(np.abs(conj.values[:, 0].real + np.cos(thetas))) < 1e-12


def test_conjugate_of_constant_vanishes():
    conj = conjugate_function(_real_samples(np.full(64, 2.5)))
    assert np.max(np.abs(conj.values)) < 1e-13


def test_conjugate_requires_real_samples():
    values = np.exp(2j * math.pi * np.arange(64) / 64)
    with pytest.raises(ValueError, match="conjugate requires real samples"):
        conjugate_function(BoundarySamples(64, values, 1.0))


def test_conjugate_requires_power_of_two():
    with pytest.raises(ValueError, match="power of two"):
        conjugate_function(_real_samples(np.zeros(96)))


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_conjugate_twice_negates_mean_zero_input(seed):
    rng = np.random.default_rng(seed)
    values = rng.standard_normal(128)
    values -= values.mean()
    # zero the Nyquist mode, which the multiplier annihilates by design
    coeffs = np.fft.fft(values)
    coeffs[64] = 0.0
    values = np.fft.ifft(coeffs).real
    twice = conjugate_function(conjugate_function(_real_samples(values)))
    assert np.max(np.abs(twice.values[:, 0].real + values)) < 1e-10


# --- Privalov-Zygmund bound ------------------------------------------------

def test_pz_bound_linear_modulus_closed_form():
    omega = ModulusFamily.holder(1.0)
    for delta in (0.01, 0.1):
        expected = delta * (1.0 + math.log(math.pi / delta))
        assert abs(pz_bound(omega, delta, 1.0) - expected) < 1e-8


def test_pz_bound_zero_modulus():
    assert pz_bound(lambda x: 0.0, 0.1, 1.0) == 0.0


def test_pz_bound_stretched_exponential_finite_and_dominated():
    omega = ModulusFamily.stretched_exponential(1.0, 0.5)
    delta = math.exp(-4.0)
    value = pz_bound(omega, delta, 1.0)
    assert math.isfinite(value) and value > 0.0

    # near-integral piece against the dyadic-decomposition upper bound:
    # sum_j exp(-2^-eps C (j log 2)^{1-eps}) * exp(-2^-eps C (log 1/delta)^{1-eps})
    root_half = 2.0**-0.5
    dyadic_sum = sum(
        math.exp(-root_half * (j * math.log(2.0)) ** 0.5) for j in range(4000)
    )
    near = pz_bound(omega, delta, 1.0) - delta * _far_integral_oracle(omega, delta)
    assert near <= dyadic_sum * math.exp(-root_half * 2.0) + 1e-9

    # two-resolution quadrature oracle for the whole bound
    coarse = pz_bound(omega, delta, 1.0, tol=1e-9)
    fine = pz_bound(omega, delta, 1.0, tol=1e-12)
    assert abs(coarse - fine) < 1e-8


def _far_integral_oracle(omega, delta, n=400000):
    xs = np.linspace(delta, math.pi, n)
    ys = np.array([omega(x) / (x * x) for x in xs])
    return float(np.trapezoid(ys, xs))


def test_pz_bound_diverges_for_log_reciprocal():
    assert pz_bound(ModulusFamily.log_reciprocal(), 0.1, 1.0) == math.inf


# --- log-Dini classification -----------------------------------------------

def test_log_dini_linear_modulus():
    report = log_dini_test(ModulusFamily.holder(1.0), n_max=6)
    assert report.log_dini
    # oracle: int_0^1 (log(1/x))^n dx = n!
    for n, res in enumerate(report.results):
        assert abs(res.value - math.factorial(n)) < 1e-6 * math.factorial(n)


def test_log_dini_stretched_exponential():
    report = log_dini_test(
        ModulusFamily.stretched_exponential(1.0, 0.5), n_max=6
    )
    assert report.log_dini
    assert all(v == "converged" for v in report.verdicts)


def test_log_dini_log_reciprocal_diverges_at_zero():
    report = log_dini_test(ModulusFamily.log_reciprocal(), n_max=2)
    assert report.verdicts[0] == "diverged"
    assert not report.log_dini


def test_log_dini_accepts_plain_callable():
    report = log_dini_test(lambda x: x, n_max=3)
    assert report.log_dini


# --- serialization -----------------------------------------------------------

def test_boundary_samples_serialization(tmp_path):
    import json

    samples = boundary_samples(identity_map(), 8)
    payload = json.loads(samples.to_json())
    assert payload["n"] == 8
    assert len(payload["values"]) == 8

    path = tmp_path / "samples.csv"
    samples.write_csv(str(path))
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "theta,re_0,im_0"
    assert len(lines) == 9
    theta, re, im = (float(x) for x in lines[2].split(","))
    assert abs(complex(re, im) - samples.values[1, 0]) < 1e-15


def test_modulus_profile_serialization(tmp_path):
    import json

    samples = boundary_samples(identity_map(), 64)
    profile = modulus_profile(samples, [0.5, 1.0, 2.0])
    payload = json.loads(profile.to_json())
    assert len(payload["deltas"]) == len(payload["omegas"]) == 3

    path = tmp_path / "profile.csv"
    profile.write_csv(str(path))
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "delta,omega"
    assert len(lines) == 4


def test_modulus_families_nondecreasing_and_vanishing_at_zero():
    families = [
        ModulusFamily.holder(0.5),
        ModulusFamily.log_reciprocal(),
        ModulusFamily.stretched_exponential(1.0, 0.5),
    ]
    xs = np.geomspace(1e-12, math.pi, 200)
    for omega in families:
        values = [omega(float(x)) for x in xs]
        assert all(b >= a - 1e-15 for a, b in zip(values, values[1:]))
        # vanishing at 0+ (the 1/log family gets there very slowly: that is
        # its point)
        assert values[0] < 0.05
        assert omega(1e-300) < values[0]
        assert omega(0.0) == 0.0
