"""Acceptance gate: one numbered test per criterion, tolerances pinned.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
criterion.  Criterion 3 carries a companion test for the stronger all-n
integrability claim; that claim contradicts the closed-form divergence of
the log-weighted integrals whenever n + 1 >= 1/alpha, so the companion is
a strict expected failure documenting exactly which part is unattainable.

The qualitative continuous-extension statement itself is not provable
numerically; it is accepted through the integrability threshold (3), the
flatness bound (6), and the probe verdicts (8), as an explicit surrogate.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from geodisc.convex_geometry import (
    Ball,
    FlatModelDomain,
    FlatSupport,
    Polydisc,
    boundary_distance,
    inscribed_disc_radius,
    phi_alpha,
    phi_alpha_inv,
    rest_bound_check,
    rho_triangle,
    x0_cap,
)
from geodisc.disc_analysis import (
    BoundarySamples,
    ModulusFamily,
    boundary_samples,
    conjugate_function,
    identity_map,
    log_dini_test,
    modulus_of_continuity,
    pz_bound,
    scalar_function,
    vector_function,
)
from geodisc.hardy_littlewood import (
    DerivMajorantFamily,
    Majorant,
    kernel_bound_check,
    omega_bound,
    phi_log_l1,
    verify_majorant,
)
from geodisc.kobayashi import (
    GeodesicCandidate,
    boundary_extension_probe,
    geodesic_defect,
    graham_bounds,
    mercer_fit,
    nonextending_geodesic,
)


def _report(number: int, label: str) -> None:
    print(f"ACCEPTANCE {number:>2} {label}: PASS")


def test_acceptance_01_kernel_inequality():
    rs = 0.25 + (np.arange(200) + 0.5) * 0.75 / 200.0
    taus = np.linspace(0.0, math.pi, 200)
    lhs = rs[:, None] ** 2 - 2.0 * rs[:, None] * np.cos(taus[None, :]) + 1.0
    rhs = (1.0 - rs[:, None]) ** 2 + (taus[None, :] / math.pi) ** 2
    violations = int(np.sum(lhs - rhs < -1e-14))
    assert violations == 0
    assert all(
        kernel_bound_check(float(r), float(t))
        for r in rs[::40]
        for t in taus[::40]
    )
    _report(1, "kernel inequality on the 200x200 grid")


def _envelope_majorant(f, r0=0.5, n_x=200, n_theta=128) -> Majorant:
    """Nonincreasing step envelope of max_theta ||f'((1-x) e^{i theta})||."""
    xs = np.geomspace(1e-9, r0 * (1.0 - 1e-4), n_x)
    tops = np.empty(n_x)
    for i, x in enumerate(xs):
        r = 1.0 - float(x)
        tops[i] = max(
            abs(f.derivative(r * cmath.exp(2j * math.pi * k / n_theta))[0])
            for k in range(n_theta)
        )
    # enforce monotonicity from the right; this only raises values, so the
    # step function still majorizes |f'|
    tops = np.maximum.accumulate(tops[::-1])[::-1] * (1.0 + 1e-9)

    def evaluate(x: float) -> float:
        idx = int(np.searchsorted(xs, x, side="right")) - 1
        return float(tops[max(idx, 0)])

    return Majorant(evaluate, r0)


def test_acceptance_02_hardy_littlewood_bound():
    # identity with Phi = 1: measured omega is the chord 2 sin(delta/2)
    n = 4096
    samples = boundary_samples(identity_map(), n)
    for delta in np.linspace(0.5 / 64.0, 0.5, 64):
        measured = modulus_of_continuity(samples, float(delta))
        assert measured <= 3.0 * delta
        assert abs(measured - 2.0 * math.sin(delta / 2.0)) <= 2.0 * math.pi / n

    polynomials = [
        scalar_function(lambda z: z * z, lambda z: 2.0 * z),
        scalar_function(
            lambda z: z**3 + 0.5 * z, lambda z: 3.0 * z**2 + 0.5
        ),
        scalar_function(
            lambda z: 0.5 * (z + z**5), lambda z: 0.5 + 2.5 * z**4
        ),
    ]
    for f in polynomials:
        phi = _envelope_majorant(f)
        assert verify_majorant(f, phi).verified(slack=1e-9)
        fsamples = boundary_samples(f, 512)
        for delta in np.linspace(0.02, 0.4, 16):
            measured = modulus_of_continuity(fsamples, float(delta))
            assert measured <= omega_bound(phi, float(delta)) + 1e-6
    _report(2, "modulus dominated by 3 * integral of the majorant")


def test_acceptance_03_integrability_threshold():
    for alpha in (0.25, 0.5, 0.75, 0.9):
        fam = DerivMajorantFamily(K1=1.0, K2=math.e, alpha=alpha, r0=0.5)
        assert phi_log_l1(fam, 0).converged, f"alpha={alpha} must converge at n=0"
    for alpha in (1.0, 1.5):
        fam = DerivMajorantFamily(K1=1.0, K2=math.e, alpha=alpha, r0=0.5)
        assert not phi_log_l1(fam, 0).converged, f"alpha={alpha} must diverge"

    fam = DerivMajorantFamily(K1=1.0, K2=math.e, alpha=0.5, r0=0.5)
    value = phi_log_l1(fam, 0).value
    assert abs(value - 1.0 / (1.0 + math.log(2.0))) <= 1e-6
    _report(3, "integrability threshold at alpha = 1 (n = 0) and the exact value")


@pytest.mark.xfail(
    strict=True,
    reason="with u = log(K2/x) the integrand is u^n (log K2 + u)^{-1/alpha}, "
    "divergent whenever n + 1 >= 1/alpha (e.g. alpha = 0.5, n = 1 gives "
    "int u (1+u)^{-2} du = inf), so no correct implementation can report "
    "the full alpha-n grid converged",
)
def test_acceptance_03_literal_all_n_reading():
    for alpha in (0.25, 0.5, 0.75, 0.9):
        fam = DerivMajorantFamily(K1=1.0, K2=math.e, alpha=alpha, r0=0.5)
        for n in range(5):
            assert phi_log_l1(fam, n).converged, f"alpha={alpha}, n={n}"


def test_acceptance_04_log_dini_classifications():
    assert log_dini_test(ModulusFamily.holder(1.0), n_max=6).log_dini
    assert log_dini_test(
        ModulusFamily.stretched_exponential(1.0, 0.5), n_max=6
    ).log_dini
    report = log_dini_test(ModulusFamily.log_reciprocal(), n_max=6)
    assert report.verdicts[0] == "diverged"
    assert not report.log_dini
    _report(4, "log-Dini classes: linear and stretched-exponential in, 1/log out")


def test_acceptance_05_graham_sandwich():
    rng = np.random.default_rng(42)
    ball = Ball(np.zeros(2), 1.0)
    square = Polydisc((1.0, 1.0))
    origin = np.zeros(2, dtype=complex)
    for _ in range(100):
        raw = rng.standard_normal(4)
        v = raw[:2] + 1j * raw[2:]
        norm = float(np.linalg.norm(v))

        bounds = graham_bounds(ball, origin, v)
        # closed-form oracle: r = 1 at the center, kappa = ||v||
        assert abs(bounds.lower - 0.5 * norm) <= 1e-9 * norm
        assert abs(bounds.upper - norm) <= 1e-9 * norm
        assert bounds.lower <= norm <= bounds.upper + 1e-9

        bounds = graham_bounds(square, origin, v)
        # product-domain oracle: r = ||v|| / max |v_i| and kappa = max |v_i|,
        # so the sandwich collapses to [kappa / 2, kappa]
        kappa = float(np.max(np.abs(v)))
        assert abs(bounds.lower - 0.5 * kappa) <= 1e-9 * kappa
        assert abs(bounds.upper - kappa) <= 1e-9 * kappa
        assert bounds.lower <= kappa <= bounds.upper + 1e-9
    _report(5, "Graham sandwich against closed-form metric oracles")


def test_acceptance_06_flatness_radius_bound():
    domain = FlatModelDomain(FlatSupport(1.0, 0.5, 1.0 / 9.0, 0.1))
    s = domain.support
    zone = min(s.s0, x0_cap(s.C, s.alpha))
    assert zone == pytest.approx(0.1)
    tangential = np.array([1.0, 0.0], dtype=complex)
    normal = np.array([0.0, 1.0], dtype=complex)
    for d in np.geomspace(1e-6, zone / 2.0, 50):
        z = np.array([0.0, 1j * float(d)])
        assert abs(boundary_distance(domain, z) - d) <= 1e-12

        r_tan = inscribed_disc_radius(domain, z, tangential)
        assert r_tan <= 2.0 * math.log(s.C / d) ** -2.0 + 1e-6

        r_nor = inscribed_disc_radius(domain, z, normal)
        assert abs(r_nor - d) <= 1e-6

        report = rest_bound_check(domain, z, tangential)
        assert report.satisfied
    _report(6, "inscribed radius bound and normal-direction identity")


def test_acceptance_07_root_equations():
    assert x0_cap(1.0, 1.0, scan_n=100_000) == 0.5
    # scan confirms the crossing set is empty for alpha = 1
    xs = np.geomspace(1e-12, 1.0 - 1e-9, 100_000)
    assert not np.any(np.sign(xs - 1.0 / np.log(1.0 / xs)) > 0)

    # independent scan + bisection oracle in the variable t = log(1/x):
    # crossings of e^{-t} = t^{-5} are roots of t - 5 log t
    roots = []
    ts = np.linspace(1.0, 30.0, 200001)
    vals = ts - 5.0 * np.log(ts)
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        lo, hi = float(ts[i]), float(ts[i + 1])
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if (mid - 5.0 * math.log(mid)) * (lo - 5.0 * math.log(lo)) <= 0.0:
                hi = mid
            else:
                lo = mid
        roots.append(0.5 * (lo + hi))
    oracle = min(math.exp(-t) for t in roots)
    value = x0_cap(1.0, 0.2)
    assert abs(value - oracle) / oracle <= 0.05
    assert abs(value - 3.0e-6) <= 0.15e-6

    # rho equation against a raw bisection oracle
    lhs = lambda rho: phi_alpha(rho, 1.0) + rho
    lo, hi = 0.0, 0.2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if lhs(mid) < 0.1:
            lo = mid
        else:
            hi = mid
    assert abs(rho_triangle(0.1, 1.0, 1.0, 1.0) - 0.5 * (lo + hi)) <= 1e-6

    rng = np.random.default_rng(7)
    for _ in range(100):
        C = float(rng.uniform(0.5, 2.0))
        alpha = float(rng.uniform(0.15, 0.95))
        d = float(rng.uniform(1e-6, 0.4 * C))
        slope = float(rng.uniform(0.0, 5.0))
        assert rho_triangle(d, slope, C, alpha) <= phi_alpha_inv(d, C, alpha) + 1e-12
    _report(7, "cap and tilted-disc root equations")


def test_acceptance_08_nonextending_geodesic():
    candidate = nonextending_geodesic()
    rng = np.random.default_rng(12)
    for _ in range(100):
        z1, z2 = (
            complex(0.9 * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random()))
            for _ in range(2)
        )
        assert geodesic_defect(candidate, z1, z2) <= 1e-10

    failing = boundary_extension_probe(candidate, n_theta=8192, tol_ext=1e-3)
    assert failing.verdict == "fails"
    assert float(np.min(failing.profile.omegas[:4])) >= 0.9

    trivial = GeodesicCandidate(
        vector_function([lambda z: z, lambda z: 0.0 * z]),
        Polydisc((1.0, 1.0)),
        "polydisc_explicit",
    )
    extending = boundary_extension_probe(trivial, n_theta=8192, tol_ext=1e-3)
    assert extending.verdict == "extends (numerically)"
    assert extending.omega_min <= 1e-3
    _report(8, "bidisc geodesic: zero defect, failing probe, extending control")


def test_acceptance_09_conjugate_machinery():
    thetas = 2.0 * math.pi * np.arange(512) / 512
    cos_samples = BoundarySamples(512, np.cos(thetas).astype(complex), 1.0)
    conj = conjugate_function(cos_samples)
    assert np.max(np.abs(conj.values[:, 0].real - np.sin(thetas))) <= 1e-10

    rng = np.random.default_rng(3)
    coeffs = rng.standard_normal(100)
    values = sum(
        c * np.cos((k + 1) * thetas + k) for k, c in enumerate(coeffs)
    )
    values = values - values.mean()
    twice = conjugate_function(
        conjugate_function(BoundarySamples(512, values.astype(complex), 1.0))
    )
    assert np.max(np.abs(twice.values[:, 0].real + values)) <= 1e-10

    omega = ModulusFamily.holder(1.0)
    for delta in (0.01, 0.1):
        expected = delta * (1.0 + math.log(math.pi / delta))
        assert abs(pz_bound(omega, delta, 1.0) - expected) <= 1e-8
    _report(9, "conjugate function and the Privalov-Zygmund closed form")


def test_acceptance_10_distance_decay_fit():
    disc = GeodesicCandidate(
        scalar_function(lambda z: z), Polydisc((1.0,))
    )
    fit = mercer_fit(disc)
    assert abs(fit.C1 - 1.0) <= 1e-12
    assert abs(fit.C2 - 1.0) <= 1e-12
    assert abs(fit.beta - 1.0) <= 1e-12
    assert fit.residual <= 1e-12

    fit = mercer_fit(nonextending_geodesic())
    assert fit.residual <= 1e-6
    _report(10, "distance decay fit: exact on the disc, consistent on the bidisc")
