"""Holomorphic-function machinery on the unit disc.

Derivatives through the Cauchy integral on an interior circle, radial
boundary limits, uniform boundary sampling, moduli of continuity, the
discrete conjugate function, and the continuity classes built from
log-weighted Dini integrals.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .numerics import (
    QuadratureResult,
    integrate_endpoint,
    integrate_semiinfinite,
)

# Geometric approach to the boundary resolves exponential behaviour there.
DEFAULT_RADIAL_SCHEDULE = tuple(1.0 - 2.0 ** (-j) for j in range(1, 25))

# Smallest positive double; stands in for exp(-u) once that underflows.
_TINY = 5e-324


@dataclass(frozen=True)
class UnitDiscFunction:
    """Evaluator for a holomorphic map of the unit disc into C^m.

    ``evaluate`` must return a length-``dimension`` complex vector for every
    queried point with |zeta| < 1.  ``derivative``, when supplied, is the
    analytic derivative and is cross-checked against the Cauchy integral in
    the test suite.
    """

    evaluate: Callable[[complex], np.ndarray]
    dimension: int
    derivative: Callable[[complex], np.ndarray] | None = None

    def __call__(self, zeta: complex) -> np.ndarray:
        value = np.atleast_1d(np.asarray(self.evaluate(zeta), dtype=complex))
        if value.shape != (self.dimension,):
            raise ValueError("evaluator returned wrong dimension")
        return value


def scalar_function(
    f: Callable[[complex], complex],
    df: Callable[[complex], complex] | None = None,
) -> UnitDiscFunction:
    deriv = None if df is None else (lambda z: np.array([df(z)], dtype=complex))
    return UnitDiscFunction(lambda z: np.array([f(z)], dtype=complex), 1, deriv)


def vector_function(
    components: Sequence[Callable[[complex], complex]],
    derivatives: Sequence[Callable[[complex], complex]] | None = None,
) -> UnitDiscFunction:
    comps = list(components)
    deriv = None
    if derivatives is not None:
        dcomps = list(derivatives)
        deriv = lambda z: np.array([d(z) for d in dcomps], dtype=complex)
    return UnitDiscFunction(
        lambda z: np.array([c(z) for c in comps], dtype=complex), len(comps), deriv
    )


def identity_map() -> UnitDiscFunction:
    return scalar_function(lambda z: z, lambda z: 1.0 + 0.0j)


def constant_map(values: Sequence[complex]) -> UnitDiscFunction:
    vals = np.asarray(values, dtype=complex)
    zero = np.zeros_like(vals)
    return UnitDiscFunction(lambda z: vals.copy(), len(vals), lambda z: zero.copy())


@dataclass(frozen=True)
class BoundarySamples:
    """Values of a boundary function on the uniform grid theta_k = 2 pi k / n."""

    n: int
    values: np.ndarray  # complex, shape (n, m)
    radius_used: float
    cauchy_fraction: float = 1.0

    def __post_init__(self):
        if self.n < 8:
            raise ValueError("grid size must be at least 8")
        values = np.asarray(self.values, dtype=complex)
        if values.ndim == 1:
            values = values[:, None]
        if values.shape[0] != self.n:
            raise ValueError("values do not match grid size")
        if not np.all(np.isfinite(values)):
            raise ValueError("boundary values must be finite")
        object.__setattr__(self, "values", values)

    @property
    def thetas(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.n) / self.n

    @property
    def dimension(self) -> int:
        return self.values.shape[1]

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "radius_used": self.radius_used,
                "cauchy_fraction": self.cauchy_fraction,
                "values": [
                    [[v.real, v.imag] for v in row] for row in self.values
                ],
            },
            sort_keys=True,
        )

    def write_csv(self, path: str) -> None:
        header = ["theta"]
        for j in range(self.dimension):
            header += [f"re_{j}", f"im_{j}"]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for theta, row in zip(self.thetas, self.values):
                out = [repr(float(theta))]
                for v in row:
                    out += [repr(float(v.real)), repr(float(v.imag))]
                writer.writerow(out)


@dataclass(frozen=True)
class ModulusProfile:
    """Empirical modulus of continuity on an increasing delta grid."""

    deltas: np.ndarray
    omegas: np.ndarray

    def __post_init__(self):
        deltas = np.asarray(self.deltas, dtype=float)
        omegas = np.asarray(self.omegas, dtype=float)
        if deltas.shape != omegas.shape or deltas.ndim != 1:
            raise ValueError("deltas and omegas must be 1-d and match")
        if np.any(np.diff(deltas) <= 0):
            raise ValueError("deltas must be increasing")
        if np.any(omegas < 0):
            raise ValueError("omegas must be nonnegative")
        if np.any(np.diff(omegas) < -1e-12):
            raise ValueError("omegas must be nondecreasing in delta")
        object.__setattr__(self, "deltas", deltas)
        object.__setattr__(self, "omegas", omegas)

    def standard_inequality_violation(self) -> float:
        """Max over grid pairs of omega(lam*x) - (lam+1)*omega(x)."""
        worst = 0.0
        for i, (x, wx) in enumerate(zip(self.deltas, self.omegas)):
            lam = self.deltas / x
            worst = max(worst, float(np.max(self.omegas - (lam + 1.0) * wx)))
        return worst

    def to_json(self) -> str:
        return json.dumps(
            {"deltas": self.deltas.tolist(), "omegas": self.omegas.tolist()},
            sort_keys=True,
        )

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["delta", "omega"])
            for d, w in zip(self.deltas, self.omegas):
                writer.writerow([repr(float(d)), repr(float(w))])


@dataclass(frozen=True)
class ModulusFamily:
    """Parametric modulus-of-continuity models.

    Each evaluator is nondecreasing, tends to 0 at 0+, and is capped at 1
    away from 0 so that integrals against it over (delta, pi] make sense.
    ``log_eval(u)`` evaluates omega(e^-u) without forming e^-u, which keeps
    the log-scale quadratures exact far beyond the double-precision floor.
    """

    kind: str
    a: float = 0.0
    coeff: float = 0.0
    eps: float = 0.0

    @classmethod
    def holder(cls, a: float) -> "ModulusFamily":
        if not 0.0 < a <= 1.0:
            raise ValueError("holder exponent must lie in (0, 1]")
        return cls("holder", a=a)

    @classmethod
    def log_reciprocal(cls) -> "ModulusFamily":
        return cls("log_reciprocal")

    @classmethod
    def stretched_exponential(cls, coeff: float, eps: float) -> "ModulusFamily":
        if coeff <= 0.0 or not 0.0 < eps < 1.0:
            raise ValueError("need coeff > 0 and eps in (0, 1)")
        return cls("stretched_exponential", coeff=coeff, eps=eps)

    def __call__(self, x: float) -> float:
        if x <= 0.0:
            return 0.0
        if self.kind == "holder":
            return x**self.a  # genuinely a power law on all of (0, pi]
        return self.log_eval(math.log(1.0 / x)) if x < 1.0 else self.log_eval(0.0)

    def log_eval(self, u: float) -> float:
        """omega at x = e^-u, for u >= 0."""
        if self.kind == "holder":
            return math.exp(-self.a * u)
        if self.kind == "log_reciprocal":
            return min(1.0 / u, 1.0) if u > 0.0 else 1.0
        if self.kind == "stretched_exponential":
            return math.exp(-self.coeff * u ** (1.0 - self.eps))
        raise ValueError(f"unknown modulus family {self.kind!r}")

    def log_log_eval(self, u: float) -> float:
        """log(omega(e^-u)); stays finite long after log_eval underflows."""
        if self.kind == "holder":
            return -self.a * u
        if self.kind == "log_reciprocal":
            return -math.log(u) if u > 1.0 else 0.0
        if self.kind == "stretched_exponential":
            return -self.coeff * u ** (1.0 - self.eps)
        raise ValueError(f"unknown modulus family {self.kind!r}")


def derivative_cauchy(
    f: UnitDiscFunction,
    zeta: complex,
    circle_radius: float | None = None,
    n_nodes: int = 128,
) -> np.ndarray:
    """f'(zeta) from the Cauchy integral over an interior circle.

    The circle must enclose zeta and stay inside the disc; f need not extend
    to the boundary, which is why the default radius is (1 + |zeta|) / 2.
    Trapezoidal on the circle, hence spectrally accurate for analytic f.
    """
    if circle_radius is None:
        circle_radius = 0.5 * (1.0 + abs(zeta))
    if n_nodes < 16:
        raise ValueError("need at least 16 nodes")
    if abs(zeta) >= circle_radius:
        raise ValueError("evaluation circle too small")
    if circle_radius >= 1.0:
        raise ValueError("evaluation circle must stay inside the disc")
    nodes = circle_radius * np.exp(2j * math.pi * np.arange(n_nodes) / n_nodes)
    acc = np.zeros(f.dimension, dtype=complex)
    for w in nodes:
        acc += f(w) * w / (w - zeta) ** 2
    return acc / n_nodes


def derivative_centered(
    f: UnitDiscFunction,
    zeta: complex,
    n_nodes: int = 64,
) -> np.ndarray:
    """f'(zeta) from the Cauchy integral over a circle centered at zeta.

    The radius is half the distance to the boundary, so the node count
    needed for spectral accuracy does not grow as zeta approaches the
    boundary -- unlike the origin-centered circle of derivative_cauchy.
    """
    if abs(zeta) >= 1.0:
        raise ValueError("point outside unit disc")
    rho = 0.5 * (1.0 - abs(zeta))
    phases = np.exp(2j * math.pi * np.arange(n_nodes) / n_nodes)
    acc = np.zeros(f.dimension, dtype=complex)
    for phase in phases:
        acc += f(zeta + rho * phase) / phase
    return acc / (n_nodes * rho)


def derivative_at(f: UnitDiscFunction, zeta: complex) -> np.ndarray:
    """Analytic derivative when supplied, else the centered Cauchy integral."""
    if f.derivative is not None:
        return np.atleast_1d(np.asarray(f.derivative(zeta), dtype=complex))
    return derivative_centered(f, zeta)


def radial_limit(
    f: UnitDiscFunction,
    theta: float,
    r_schedule: Sequence[float] | None = None,
    tol: float = 1e-6,
) -> tuple[np.ndarray, bool]:
    """Last iterate of f(r e^{i theta}) along the schedule, with a Cauchy flag.

    The flag is true iff the values moved by less than tol over each of the
    final three steps.
    """
    schedule = _validated_schedule(r_schedule)
    direction = complex(math.cos(theta), math.sin(theta))
    tail = [f(r * direction) for r in schedule[-4:]]
    cauchy_ok = all(
        float(np.linalg.norm(b - a)) < tol for a, b in zip(tail, tail[1:])
    )
    return tail[-1], cauchy_ok


def _validated_schedule(r_schedule: Sequence[float] | None) -> tuple[float, ...]:
    if r_schedule is None:
        return DEFAULT_RADIAL_SCHEDULE
    schedule = tuple(float(r) for r in r_schedule)
    if len(schedule) < 4:
        raise ValueError("radial schedule needs at least 4 steps")
    if any(b <= a for a, b in zip(schedule, schedule[1:])) or schedule[-1] >= 1.0:
        raise ValueError("radial schedule must increase strictly below 1")
    return schedule


def boundary_samples(
    f: UnitDiscFunction,
    n: int,
    r_schedule: Sequence[float] | None = None,
    tol: float = 1e-6,
) -> BoundarySamples:
    """Radial limits at every grid node; the Cauchy-flag fraction is the
    uniformity diagnostic."""
    schedule = _validated_schedule(r_schedule)
    values = np.empty((n, f.dimension), dtype=complex)
    ok = 0
    for k in range(n):
        value, flag = radial_limit(f, 2.0 * math.pi * k / n, schedule, tol)
        values[k] = value
        ok += flag
    return BoundarySamples(n, values, schedule[-1], ok / n)


def _lag_maxima(samples: BoundarySamples, max_lag: int) -> np.ndarray:
    """lag_maxima[l] = max_k ||g(theta_{k+l}) - g(theta_k)|| for l = 0..max_lag."""
    values = samples.values
    out = np.zeros(max_lag + 1)
    for lag in range(1, max_lag + 1):
        diff = values - np.roll(values, lag, axis=0)
        out[lag] = math.sqrt(float(np.max(np.sum(np.abs(diff) ** 2, axis=1))))
    return out


def modulus_of_continuity(samples: BoundarySamples, delta: float) -> float:
    """Sup of value differences over grid pairs at circular distance <= delta."""
    if delta < 0.0 or delta > math.pi:
        raise ValueError("delta out of range")
    max_lag = min(int(math.floor(delta * samples.n / (2.0 * math.pi) + 1e-12)),
                  samples.n // 2)
    if max_lag == 0:
        return 0.0
    return float(np.max(_lag_maxima(samples, max_lag)))


def modulus_profile(
    samples: BoundarySamples, deltas: Sequence[float]
) -> ModulusProfile:
    """Empirical modulus on a delta grid, reported at the effective (grid-
    floored) angular separations."""
    req = np.sort(np.asarray(list(deltas), dtype=float))
    if req.size == 0 or req[0] < 0.0 or req[-1] > math.pi:
        raise ValueError("delta out of range")
    lags = np.minimum(
        np.floor(req * samples.n / (2.0 * math.pi) + 1e-12).astype(int),
        samples.n // 2,
    )
    lags = np.unique(lags[lags >= 1])
    if lags.size == 0:
        raise ValueError("all deltas below grid resolution")
    maxima = _lag_maxima(samples, int(lags[-1]))
    running = np.maximum.accumulate(maxima)
    eff_deltas = lags * 2.0 * math.pi / samples.n
    return ModulusProfile(eff_deltas, running[lags])


def conjugate_function(samples: BoundarySamples) -> BoundarySamples:
    """Discrete conjugate function via the Fourier multiplier -i sign(k).

    The grid size must be a power of two; the k = 0 coefficient and the
    unpaired Nyquist coefficient are zeroed (the self-conjugate frequency
    has no consistent sign).
    """
    n = samples.n
    if n & (n - 1) != 0:
        raise ValueError("grid size must be a power of two")
    if samples.dimension != 1:
        raise ValueError("conjugate requires real samples")
    values = samples.values[:, 0]
    if np.max(np.abs(values.imag)) > 1e-9 * max(1.0, np.max(np.abs(values))):
        raise ValueError("conjugate requires real samples")
    coeffs = np.fft.fft(values.real)
    freqs = np.fft.fftfreq(n, d=1.0 / n)
    multiplier = -1j * np.sign(freqs)
    multiplier[0] = 0.0
    multiplier[n // 2] = 0.0  # Nyquist
    out = np.fft.ifft(coeffs * multiplier)
    return BoundarySamples(n, out.real.astype(complex), samples.radius_used,
                           samples.cauchy_fraction)


def _as_log_evaluator(omega) -> Callable[[float], float]:
    """u -> omega(e^-u); families evaluate natively on the log scale."""
    log_eval = getattr(omega, "log_eval", None)
    if log_eval is not None:
        return log_eval
    return lambda u: omega(max(math.exp(-u), _TINY))


def pz_bound(
    omega,
    delta: float,
    K: float,
    tol: float = 1e-11,
    max_levels: int = 400,
) -> float:
    """Conjugate-function modulus bound

        K * [ int_0^delta omega(x)/x dx + delta * int_delta^pi omega(x)/x^2 dx ].

    Returns +inf when the first integral diverges.
    """
    if not 0.0 < delta < math.pi:
        raise ValueError("delta out of range")
    if K <= 0.0:
        raise ValueError("K must be positive")
    log_omega = _as_log_evaluator(omega)
    # first integral in u = log(1/x): int_{log(1/delta)}^inf omega(e^-u) du
    near = integrate_semiinfinite(log_omega, math.log(1.0 / delta), tol, max_levels)
    if not near.converged:
        return math.inf
    far = integrate_endpoint(
        lambda x: omega(x) / (x * x), delta, math.pi, tol, max_levels
    )
    return K * (near.value + delta * far.value)


@dataclass(frozen=True)
class LogDiniReport:
    """Per-n verdicts for the log-weighted Dini integrals.

    ``log_dini`` is the overall verdict over n <= n_max only: a finite
    surrogate for the all-n condition, not a proof.
    """

    n_max: int
    results: tuple[QuadratureResult, ...]
    verdicts: tuple[str, ...] = field(init=False)
    log_dini: bool = field(init=False)

    def __post_init__(self):
        verdicts = tuple(
            "converged" if r.converged else "diverged" for r in self.results
        )
        object.__setattr__(self, "verdicts", verdicts)
        object.__setattr__(self, "log_dini", all(r.converged for r in self.results))


def log_dini_test(
    omega,
    n_max: int = 6,
    tol: float = 1e-9,
    max_levels: int = 400,
) -> LogDiniReport:
    """Classify int_0^1 (log(1/x))^n omega(x)/x dx for n = 0..n_max.

    Computed on the log scale, where the integral is int_0^inf u^n
    omega(e^-u) du and geometric refinement reaches the far tail.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    log_omega = _as_log_evaluator(omega)
    log_log = getattr(omega, "log_log_eval", None)
    results = []
    for n in range(n_max + 1):
        if log_log is not None:
            # u^n omega(e^-u) assembled in log space: immune to intermediate
            # underflow of the tiny modulus factor against the huge power
            integrand = lambda u, n=n: (
                math.exp((n * math.log(u) if n else 0.0) + log_log(u))
                if u > 0.0
                else (log_omega(0.0) if n == 0 else 0.0)
            )
        else:
            integrand = lambda u, n=n: (u**n) * log_omega(u)
        results.append(integrate_semiinfinite(integrand, 0.0, tol, max_levels))
    return LogDiniReport(n_max, tuple(results))
