"""Convex domain models in C^n and their boundary geometry.

Domains are immutable models with a membership predicate; on top of that
sit exit times along real rays, the Euclidean boundary distance, the radius
of the largest complex-affine disc through a point, the flatness functions
e^{-1/x^alpha} with their inverses and root equations, and the normalized
boundary frames of the flat model domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import minimize_on_circle, solve_monotone

MEMBERSHIP_TOL = 1e-12


# --- flatness functions and root equations ----------------------------------

def phi_alpha(x: float, alpha: float) -> float:
    """e^{-1/x^alpha} for x > 0, extended by 0 at x = 0 (flat to all orders)."""
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    if x < 0.0:
        raise ValueError("argument must be nonnegative")
    if x == 0.0:
        return 0.0
    return math.exp(-(x**-alpha))


def phi_alpha_inv(d: float, C: float, alpha: float) -> float:
    """Inverse of x -> C phi_alpha(x): [log(C/d)]^{-1/alpha} for 0 < d < C."""
    if alpha <= 0.0 or C <= 0.0:
        raise ValueError("C and alpha must be positive")
    if not 0.0 < d < C:
        raise ValueError("outside inverse domain")
    return math.log(C / d) ** (-1.0 / alpha)


def _bisect_sign_change(g, lo: float, hi: float, iters: int = 100) -> float:
    glo = g(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if glo * g(mid) <= 0.0:
            hi = mid
        else:
            lo = mid
            glo = g(lo)
    return 0.5 * (lo + hi)


def x0_cap(C: float, alpha: float, scan_n: int = 100_000) -> float:
    """min of {C/2} and the solutions of x = [log(C/x)]^{-1/alpha} in (0, C).

    The crossings can sit many decades below C, so the sign scan runs on a
    log-spaced grid over (1e-12 C, C); each bracket is polished by bisection.
    """
    if C <= 0.0 or alpha <= 0.0:
        raise ValueError("C and alpha must be positive")
    xs = np.geomspace(C * 1e-12, C * (1.0 - 1e-9), scan_n)
    with np.errstate(all="ignore"):
        vals = xs - np.log(C / xs) ** (-1.0 / alpha)
    g = lambda x: x - math.log(C / x) ** (-1.0 / alpha)
    candidates = [C / 2.0]
    signs = np.sign(vals)
    flips = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    for i in flips:
        candidates.append(_bisect_sign_change(g, float(xs[i]), float(xs[i + 1])))
    candidates.extend(float(x) for x in xs[signs == 0.0])
    return min(candidates)


def rho_triangle(d: float, slope: float, C: float, alpha: float) -> float:
    """The unique rho > 0 with C phi_alpha(rho) + rho * slope = d.

    The left side is strictly increasing, so this is a bracketed monotone
    solve; slope is the ratio V_n / ||V'|| of the tilted disc direction.
    """
    if d <= 0.0:
        raise ValueError("d must be positive")
    if slope < 0.0:
        raise ValueError("slope must be nonnegative")
    if C <= 0.0 or alpha <= 0.0:
        raise ValueError("C and alpha must be positive")
    if slope == 0.0:
        if d >= C:
            raise ValueError("no solution: flatness term never reaches d")
        return phi_alpha_inv(d, C, alpha)
    lhs = lambda rho: C * phi_alpha(rho, alpha) + rho * slope
    hi = d / slope
    if d < C:
        hi = min(hi, phi_alpha_inv(d, C, alpha))
    res = solve_monotone(lhs, 0.0, hi * (1.0 + 1e-12), d, 1e-14)
    return res.root


# --- domain models -----------------------------------------------------------

def _as_point(z) -> np.ndarray:
    return np.atleast_1d(np.asarray(z, dtype=complex))


class ConvexDomainModel:
    """Base interface: membership classification plus a bounding radius."""

    kind: str = "abstract"
    dimension: int

    def signed_gap(self, z: np.ndarray) -> float:
        """Negative inside, positive outside; magnitude is a gap proxy."""
        raise NotImplementedError

    def membership(self, z, tol: float = MEMBERSHIP_TOL) -> str:
        gap = self.signed_gap(_as_point(z))
        if gap < -tol:
            return "inside"
        if gap > tol:
            return "outside"
        return "boundary"

    def contains(self, z, tol: float = MEMBERSHIP_TOL) -> bool:
        return self.membership(z, tol) != "outside"

    def bounding_radius(self) -> float:
        raise NotImplementedError

    def reference_interior_point(self) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class Polydisc(ConvexDomainModel):
    radii: tuple[float, ...]
    kind: str = field(default="polydisc", init=False)

    def __post_init__(self):
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        if not self.radii or any(r <= 0.0 for r in self.radii):
            raise ValueError("polydisc radii must be positive")

    @property
    def dimension(self) -> int:
        return len(self.radii)

    def signed_gap(self, z: np.ndarray) -> float:
        return float(np.max(np.abs(z) - np.asarray(self.radii)))

    def bounding_radius(self) -> float:
        return float(np.linalg.norm(self.radii))

    def reference_interior_point(self) -> np.ndarray:
        return np.zeros(self.dimension, dtype=complex)


@dataclass(frozen=True)
class Ball(ConvexDomainModel):
    center: np.ndarray
    radius: float
    kind: str = field(default="ball", init=False)

    def __post_init__(self):
        object.__setattr__(self, "center", _as_point(self.center))
        if self.radius <= 0.0:
            raise ValueError("ball radius must be positive")

    @property
    def dimension(self) -> int:
        return len(self.center)

    def signed_gap(self, z: np.ndarray) -> float:
        return float(np.linalg.norm(z - self.center)) - self.radius

    def bounding_radius(self) -> float:
        return float(np.linalg.norm(self.center)) + self.radius

    def reference_interior_point(self) -> np.ndarray:
        return self.center.copy()


@dataclass(frozen=True)
class HalfspaceIntersection(ConvexDomainModel):
    """Intersection of Re<z, a_j> <= b_j; must contain the interior point and
    be bounded (checked by probing exit rays)."""

    constraints: tuple[tuple[np.ndarray, float], ...]
    interior_point: np.ndarray = None
    kind: str = field(default="halfspace_intersection", init=False)

    def __post_init__(self):
        cons = tuple(
            (_as_point(a), float(b)) for a, b in self.constraints
        )
        if not cons:
            raise ValueError("need at least one halfspace")
        dim = len(cons[0][0])
        if any(len(a) != dim for a, _ in cons):
            raise ValueError("inconsistent constraint dimensions")
        object.__setattr__(self, "constraints", cons)
        anchor = (
            np.zeros(dim, dtype=complex)
            if self.interior_point is None
            else _as_point(self.interior_point)
        )
        object.__setattr__(self, "interior_point", anchor)
        if self.signed_gap(anchor) >= 0.0:
            raise ValueError("interior point is not inside")
        object.__setattr__(self, "_bound", self._probe_bound())

    @property
    def dimension(self) -> int:
        return len(self.constraints[0][0])

    def signed_gap(self, z: np.ndarray) -> float:
        worst = -math.inf
        for a, b in self.constraints:
            norm = float(np.linalg.norm(a))
            worst = max(worst, (float(np.real(np.vdot(a, z))) - b) / norm)
        return worst

    def _probe_bound(self) -> float:
        # exit along all +-real/imag axis rays from the anchor; a bounded
        # convex polytope exits along every coordinate direction
        worst = 0.0
        n = self.dimension
        for k in range(n):
            for u0 in (1.0, -1.0, 1.0j, -1.0j):
                u = np.zeros(n, dtype=complex)
                u[k] = u0
                t = _halfspace_exit(self, self.interior_point, u)
                if not math.isfinite(t):
                    raise ValueError("halfspace intersection is unbounded")
                worst = max(worst, t)
        return float(np.linalg.norm(self.interior_point)) + worst * math.sqrt(n) * 2.0

    def bounding_radius(self) -> float:
        return self._bound

    def reference_interior_point(self) -> np.ndarray:
        return self.interior_point.copy()


def _halfspace_exit(domain: HalfspaceIntersection, z: np.ndarray, u: np.ndarray) -> float:
    t = math.inf
    for a, b in domain.constraints:
        rate = float(np.real(np.vdot(a, u)))
        if rate > 0.0:
            t = min(t, (b - float(np.real(np.vdot(a, z)))) / rate)
    return t


@dataclass(frozen=True)
class FlatSupport:
    """Constants of the outside-supporting flatness graph C phi_alpha(||z'||).

    R0 is capped at (alpha/(alpha+1))^{1/alpha}: the profile is convex up to
    exactly that point, and the flat model needs a convex graph.
    """

    C: float
    alpha: float
    R0: float
    s0: float

    def __post_init__(self):
        if self.C <= 0.0 or self.s0 <= 0.0 or self.R0 <= 0.0:
            raise ValueError("C, R0, s0 must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.R0 > self.convexity_cap(self.alpha) + 1e-12:
            raise ValueError("R0 exceeds the convexity cap of the graph")

    @staticmethod
    def convexity_cap(alpha: float) -> float:
        return (alpha / (alpha + 1.0)) ** (1.0 / alpha)


@dataclass(frozen=True)
class FlatModelDomain(ConvexDomainModel):
    """Local model above an infinitely flat boundary point:

        { z : ||z'|| < R0, |Re z_n| < s0, C phi_alpha(||z'||) < Im z_n < s0 }.

    The boundary is the flatness graph near the origin with box caps added
    for boundedness; it is not C^1 where the caps meet, so boundary frames
    are only defined on the graph zone.
    """

    support: FlatSupport
    dimension: int = 2
    kind: str = field(default="flat_model", init=False)

    def __post_init__(self):
        if self.dimension < 2:
            raise ValueError("flat model needs dimension at least 2")

    def graph_height(self, rho: float) -> float:
        return self.support.C * phi_alpha(rho, self.support.alpha)

    def signed_gap(self, z: np.ndarray) -> float:
        if len(z) != self.dimension:
            raise ValueError("point has wrong dimension")
        s = self.support
        rho = float(np.linalg.norm(z[:-1]))
        x = float(z[-1].real)
        y = float(z[-1].imag)
        return max(
            rho - s.R0,
            abs(x) - s.s0,
            y - s.s0,
            self.graph_height(rho) - y,
        )

    def bounding_radius(self) -> float:
        s = self.support
        return math.hypot(s.R0, math.hypot(s.s0, s.s0)) + 1.0e-9

    def reference_interior_point(self) -> np.ndarray:
        z = np.zeros(self.dimension, dtype=complex)
        z[-1] = 0.5j * self.support.s0
        return z

    def graph_distance(self, z: np.ndarray) -> float:
        """Distance to the boundary piece {Im z_n = C phi_alpha(||z'||)}.

        By rotation invariance this is a 1-d problem in the radial profile;
        the profile is convex on [0, R0], so the squared distance along it
        is unimodal and golden-section is safe after a coarse scan.
        """
        rho = float(np.linalg.norm(z[:-1]))
        y = float(z[-1].imag)
        dist2 = lambda t: (t - rho) ** 2 + (y - self.graph_height(t)) ** 2
        ts = np.linspace(0.0, self.support.R0, 65)
        best = min(range(65), key=lambda i: dist2(float(ts[i])))
        lo = float(ts[max(0, best - 1)])
        hi = float(ts[min(64, best + 1)])
        invphi = (math.sqrt(5.0) - 1.0) / 2.0
        c = hi - invphi * (hi - lo)
        d = lo + invphi * (hi - lo)
        fc, fd = dist2(c), dist2(d)
        for _ in range(120):
            if hi - lo <= 1e-14 * max(1.0, self.support.R0):
                break
            if fc < fd:
                hi, d, fd = d, c, fc
                c = hi - invphi * (hi - lo)
                fc = dist2(c)
            else:
                lo, c, fc = c, d, fd
                d = lo + invphi * (hi - lo)
                fd = dist2(d)
        return math.sqrt(min(fc, fd, dist2(0.5 * (lo + hi))))


def domain_from_json(spec: dict) -> ConvexDomainModel:
    """Build a domain model from {kind, params...} (complex entries as
    [re, im] pairs)."""
    spec = dict(spec)
    kind = spec.pop("kind", None)
    if kind == "polydisc":
        return Polydisc(tuple(spec.pop("radii")))
    if kind == "ball":
        center = [complex(re, im) for re, im in spec.pop("center")]
        return Ball(np.array(center), float(spec.pop("radius")))
    if kind == "halfspace_intersection":
        cons = []
        for item in spec.pop("constraints"):
            a = np.array([complex(re, im) for re, im in item["a"]])
            cons.append((a, float(item["b"])))
        interior = spec.pop("interior_point", None)
        if interior is not None:
            interior = np.array([complex(re, im) for re, im in interior])
        return HalfspaceIntersection(tuple(cons), interior)
    if kind == "flat_model":
        support = FlatSupport(
            C=float(spec.pop("C")),
            alpha=float(spec.pop("alpha")),
            R0=float(spec.pop("R0")),
            s0=float(spec.pop("s0")),
        )
        return FlatModelDomain(support, int(spec.pop("dimension", 2)))
    if kind is None:
        raise ValueError("domain spec needs a 'kind'")
    raise ValueError(f"unknown domain kind {kind!r}")


# --- geometric queries -------------------------------------------------------

def exit_time(domain: ConvexDomainModel, z, u) -> float:
    """sup{ t >= 0 : z + t u in closure of the domain } for a unit real ray.

    Closed forms for the polydisc and ball; half-space intersections are a
    linear program over active constraints; everything else brackets the
    boundary by doubling and bisects membership.
    """
    z = _as_point(z)
    u = _as_point(u)
    norm = float(np.linalg.norm(u))
    if norm == 0.0:
        raise ValueError("direction must be nonzero")
    u = u / norm
    if domain.membership(z) == "outside":
        raise ValueError("base point outside domain")

    if isinstance(domain, Polydisc):
        return min(
            _circle_exit(zi, ui, r)
            for zi, ui, r in zip(z, u, domain.radii)
            if abs(ui) > 0.0
        )
    if isinstance(domain, Ball):
        return _circle_exit(
            complex(0, 0), 1.0 + 0j, domain.radius, offset=z - domain.center, direction=u
        )
    if isinstance(domain, HalfspaceIntersection):
        return _halfspace_exit(domain, z, u)

    t_hi = 1.0
    cap = 4.0 * domain.bounding_radius() + 4.0
    while domain.contains(z + t_hi * u) and t_hi < cap:
        t_hi *= 2.0
    if domain.contains(z + t_hi * u):
        raise ValueError("ray does not exit the domain")
    t_lo = 0.0
    for _ in range(100):
        mid = 0.5 * (t_lo + t_hi)
        if domain.contains(z + mid * u):
            t_lo = mid
        else:
            t_hi = mid
        if t_hi - t_lo <= 1e-13 * max(1.0, t_hi):
            break
    return 0.5 * (t_lo + t_hi)


def _circle_exit(zi, ui, radius, offset=None, direction=None) -> float:
    """Largest t with |p + t v| <= radius along one coordinate (or in full)."""
    if offset is None:
        p, v = zi, ui
        dot = (p.conjugate() * v).real
        vv = abs(v) ** 2
        pp = abs(p) ** 2
    else:
        dot = float(np.real(np.vdot(offset, direction)))
        vv = float(np.real(np.vdot(direction, direction)))
        pp = float(np.real(np.vdot(offset, offset)))
    disc = dot * dot + vv * (radius * radius - pp)
    if disc < 0.0:
        disc = 0.0
    return (-dot + math.sqrt(disc)) / vv


def boundary_distance(domain: ConvexDomainModel, z) -> float:
    """Euclidean distance to the boundary, exactly per constraint family.

    For an intersection of convex constraints the inscribed ball radius is
    the minimum of the distances to the individual constraint boundaries.
    """
    z = _as_point(z)
    if domain.membership(z) == "outside":
        raise ValueError("base point outside domain")
    if isinstance(domain, Polydisc):
        return float(np.min(np.asarray(domain.radii) - np.abs(z)))
    if isinstance(domain, Ball):
        return domain.radius - float(np.linalg.norm(z - domain.center))
    if isinstance(domain, HalfspaceIntersection):
        return -domain.signed_gap(z)
    if isinstance(domain, FlatModelDomain):
        s = domain.support
        rho = float(np.linalg.norm(z[:-1]))
        x = float(z[-1].real)
        y = float(z[-1].imag)
        return min(
            s.R0 - rho,
            s.s0 - abs(x),
            s.s0 - y,
            domain.graph_distance(z),
        )
    return boundary_distance_sampled(domain, z)


def boundary_distance_sampled(
    domain: ConvexDomainModel,
    z,
    n_coarse: int = 512,
    rounds: int = 3,
    seed: int = 0,
) -> float:
    """min over unit directions of the exit time, by coarse sphere sampling
    plus local spherical-cap refinement.  Deterministic for a fixed seed."""
    z = _as_point(z)
    rng = np.random.default_rng(seed)
    n = len(z)

    def sample(center: np.ndarray | None, spread: float, count: int) -> np.ndarray:
        raw = rng.standard_normal((count, 2 * n))
        dirs = raw / np.linalg.norm(raw, axis=1, keepdims=True)
        if center is not None:
            flat = np.concatenate([center.real, center.imag])
            dirs = flat[None, :] + spread * dirs
            dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        return dirs[:, :n] + 1j * dirs[:, n:]

    best_t = math.inf
    best_dir = None
    for u in sample(None, 1.0, n_coarse):
        t = exit_time(domain, z, u)
        if t < best_t:
            best_t, best_dir = t, u
    spread = 0.5
    for _ in range(rounds):
        for u in sample(best_dir, spread, 192):
            t = exit_time(domain, z, u)
            if t < best_t:
                best_t, best_dir = t, u
        spread *= 0.1
    return best_t


def inscribed_disc_radius(domain: ConvexDomainModel, z, v) -> float:
    """Radius of the largest complex-affine closed disc centered at z,
    tangent to v, inside the closure.

    For a convex domain the closed disc lies in the closure iff its boundary
    circle does, so the radius is the minimum over the circle parameter of
    the exit time along e^{i theta} v.
    """
    z = _as_point(z)
    v = _as_point(v)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ValueError("direction must be nonzero")
    v = v / norm
    objective = lambda theta: exit_time(domain, z, v * complex(math.cos(theta), math.sin(theta)))
    _, radius = minimize_on_circle(objective, coarse_n=64, refine_tol=1e-12)
    return radius


def midpoint_convexity_failures(
    domain: ConvexDomainModel, trials: int = 1000, seed: int = 0
) -> int:
    """Random midpoint-convexity check: both endpoints inside must imply the
    midpoint inside (up to membership tolerance)."""
    rng = np.random.default_rng(seed)
    anchor = domain.reference_interior_point()
    n = domain.dimension

    def random_inside() -> np.ndarray:
        raw = rng.standard_normal(2 * n)
        u = raw / np.linalg.norm(raw)
        u = u[:n] + 1j * u[n:]
        t = exit_time(domain, anchor, u)
        return anchor + (0.999 * rng.random() * t) * u

    failures = 0
    for _ in range(trials):
        z1, z2 = random_inside(), random_inside()
        if domain.membership(0.5 * (z1 + z2), 1e-9) == "outside":
            failures += 1
    return failures


# --- boundary frames on the flat model ---------------------------------------

@dataclass(frozen=True)
class BoundaryFrame:
    """Unitary normalization at a graph point: U maps the complex tangent
    space onto {v_n = 0} and the inward normal to (0, ..., 0, i)."""

    w: np.ndarray
    inward_normal: np.ndarray
    matrix: np.ndarray

    def affine(self, v) -> np.ndarray:
        return self.matrix @ (_as_point(v) - self.w)

    def apply(self, v) -> np.ndarray:
        return self.matrix @ _as_point(v)


def boundary_frame(domain: FlatModelDomain, w) -> BoundaryFrame:
    """Frame at a boundary point on the graph part of the flat model.

    The defining function is G = C phi_alpha(||z'||) - Im z_n; its complex
    gradient gives the normal, and the frame completes the normal to a
    unitary by Gram-Schmidt over the standard basis.
    """
    w = _as_point(w)
    s = domain.support
    n = domain.dimension
    rho = float(np.linalg.norm(w[:-1]))
    on_graph = (
        abs(w[-1].imag - domain.graph_height(rho)) <= 1e-10
        and rho < s.R0
        and abs(w[-1].real) < s.s0
    )
    if not on_graph:
        raise ValueError("frame undefined off the graph")

    gradient = np.zeros(n, dtype=complex)
    if rho > 0.0:
        slope = s.C * s.alpha * rho ** (-s.alpha - 1.0) * phi_alpha(rho, s.alpha)
        gradient[:-1] = slope * w[:-1] / rho
    gradient[-1] = -1j
    normal = -gradient / np.linalg.norm(gradient)

    basis = [normal]
    for k in range(n):
        e = np.zeros(n, dtype=complex)
        e[k] = 1.0
        for b in basis:
            e = e - np.vdot(b, e) * b
        norm = float(np.linalg.norm(e))
        if norm > 1e-8:
            basis.append(e / norm)
        if len(basis) == n:
            break
    tangent_basis = basis[1:]
    rows = [np.conj(b) for b in tangent_basis] + [np.conj(-1j * normal)]
    matrix = np.vstack(rows)
    return BoundaryFrame(w, normal, matrix)


# --- the inscribed-radius bound of the flatness lemma ------------------------

@dataclass(frozen=True)
class RestBoundReport:
    d: float
    radius: float
    bound: float
    satisfied: bool
    margin: float


def rest_bound_check(
    domain: FlatModelDomain, z, v, tol: float = 1e-6
) -> RestBoundReport:
    """Check r_Omega(z; v) <= 2 [log(C/d)]^{-1/alpha} in the boundary zone.

    The zone is d < min(s0, x0_cap), exactly the compact-set condition under
    which the flatness estimate applies.
    """
    s = domain.support
    d = boundary_distance(domain, z)
    zone = min(s.s0, x0_cap(s.C, s.alpha))
    if not 0.0 < d < zone:
        raise ValueError("point not in the boundary zone")
    radius = inscribed_disc_radius(domain, z, v)
    bound = 2.0 * phi_alpha_inv(d, s.C, s.alpha)
    return RestBoundReport(
        d=d,
        radius=radius,
        bound=bound,
        satisfied=radius <= bound + tol,
        margin=bound + tol - radius,
    )
