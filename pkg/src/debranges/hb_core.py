"""Hermite-Biehler functions in product form and their phase machinery.

An HBSpec encodes E(z) = scale * e^{i rotation} * e^{-i exp_rate z} * prod_n
(z - z_n) with every z_n strictly below the real axis, so E has no real zeros
and |E#(z)| < |E(z)| in the open upper half-plane.  The inner function
Theta_E = E#/E then has the closed-form unwrapped phase

    phi(x) = C + 2 exp_rate x + 2 sum_n arctan((x - x_n) / yhat_n),

where x_n + i yhat_n are the reflections of the zeros of E.  All operations
are pure functions of immutable inputs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .numerics import golden_max, monotone_solve

__all__ = [
    "SpecError",
    "MembershipError",
    "HBSpec",
    "PhaseProfile",
    "PhaseSup",
    "HBBarReport",
    "eval_E",
    "eval_E_prime",
    "eval_AB",
    "theta",
    "phase",
    "phase_derivative",
    "phase_derivative_sup",
    "phase_limits",
    "level_crossings",
    "hb_bar_check",
    "upper_half_plane_grid",
    "StructuredEntire",
    "RotationRealPart",
    "Kernel",
    "RealPolynomial",
    "Combination",
    "entire_from_dict",
    "spec_from_dict",
    "spec_to_dict",
    "same_de_branges_space",
]

# Beyond this many zeros the plain complex product risks harmless but ugly
# intermediate overflow; switch to log-magnitude accumulation.
_PLAIN_PRODUCT_LIMIT = 64


class SpecError(ValueError):
    """Invalid Hermite-Biehler data."""


class MembershipError(ValueError):
    """A structured function is not certified for the ambient space."""


@dataclass(frozen=True)
class HBSpec:
    """Product-form Hermite-Biehler function without real zeros.

    exp_rate is the a in the factor e^{-iaz} (half the exponential rate of
    Theta_E), zeros are the zeros of E (all with negative imaginary part),
    rotation multiplies by e^{i rotation}, scale by a positive real.
    """

    exp_rate: float = 0.0
    zeros: Tuple[complex, ...] = ()
    rotation: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "zeros", tuple(complex(z) for z in self.zeros))
        if not (math.isfinite(self.exp_rate) and self.exp_rate >= 0.0):
            raise SpecError(f"exp_rate must be finite and >= 0, got {self.exp_rate}")
        if not (math.isfinite(self.scale) and self.scale > 0.0):
            raise SpecError(f"scale must be finite and > 0, got {self.scale}")
        if not math.isfinite(self.rotation):
            raise SpecError("rotation must be finite")
        for z in self.zeros:
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise SpecError(f"non-finite zero {z}")
            if z.imag >= 0.0:
                raise SpecError(
                    f"zero {z} is not in the open lower half-plane; "
                    "E must have no real zeros"
                )
        if self.exp_rate == 0.0 and not self.zeros:
            raise SpecError(
                "degenerate spec: exp_rate = 0 with no zeros makes E constant "
                "and phi' identically zero"
            )

    @property
    def degree(self) -> int:
        return len(self.zeros)

    @property
    def is_paley_wiener(self) -> bool:
        return self.exp_rate > 0.0

    @property
    def is_polynomial(self) -> bool:
        return self.exp_rate == 0.0


@lru_cache(maxsize=512)
def _zero_data(spec: HBSpec):
    """Real parts and (positive) reflected imaginary parts of the zeros."""
    xs = np.array([z.real for z in spec.zeros])
    ys = np.array([-z.imag for z in spec.zeros])
    return xs, ys


def eval_E(spec: HBSpec, z, conjugate: bool = False):
    """Evaluate E(z), or E#(z) = conj(E(conj z)) when conjugate is set.

    Vectorized over z.  Uses the plain complex product up to 64 zeros and
    log-magnitude accumulation beyond, for overflow safety.
    """
    zz = np.asarray(z, dtype=complex)
    sgn = -1.0 if conjugate else 1.0
    roots = np.conj(np.array(spec.zeros)) if conjugate else np.array(spec.zeros)
    head = spec.scale * np.exp(
        1j * sgn * spec.rotation - 1j * sgn * spec.exp_rate * zz
    )
    if spec.degree == 0:
        out = head
    elif spec.degree <= _PLAIN_PRODUCT_LIMIT:
        out = head * np.prod(zz[..., None] - roots, axis=-1)
    else:
        diffs = zz[..., None] - roots
        logmag = (
            math.log(spec.scale)
            + np.sum(np.log(np.abs(diffs)), axis=-1)
            + sgn * spec.exp_rate * zz.imag
        )
        arg = (
            sgn * spec.rotation
            - sgn * spec.exp_rate * zz.real
            + np.sum(np.angle(diffs), axis=-1)
        )
        out = np.exp(logmag) * np.exp(1j * arg)
    if np.ndim(z) == 0:
        return complex(out)
    return out


def eval_E_prime(spec: HBSpec, z, conjugate: bool = False):
    """Analytic derivative E'(z) via the logarithmic derivative.

    E'/E = -i exp_rate + sum_n 1/(z - z_n) away from the zeros; exact for the
    product form.
    """
    zz = np.asarray(z, dtype=complex)
    sgn = -1.0 if conjugate else 1.0
    roots = np.conj(np.array(spec.zeros)) if conjugate else np.array(spec.zeros)
    logd = -1j * sgn * spec.exp_rate * np.ones_like(zz)
    if spec.degree:
        logd = logd + np.sum(1.0 / (zz[..., None] - roots), axis=-1)
    out = eval_E(spec, zz, conjugate=conjugate) * logd
    if np.ndim(z) == 0:
        return complex(out)
    return out


def eval_AB(spec: HBSpec, beta: float, x):
    """(A_beta(x), B_beta(x)): real and imaginary parts of e^{i beta} E(x)."""
    w = np.exp(1j * beta) * eval_E(spec, np.asarray(x, dtype=float))
    if np.ndim(x) == 0:
        w = complex(w)
        return w.real, w.imag
    return w.real, w.imag


def theta(spec: HBSpec, x):
    """The meromorphic inner function Theta_E = E#/E on the real axis."""
    xx = np.asarray(x, dtype=float)
    return eval_E(spec, xx, conjugate=True) / eval_E(spec, xx)


@dataclass(frozen=True)
class PhaseProfile:
    """Closed-form unwrapped phase of Theta_E with an anchored branch.

    The branch is fixed by phi(anchor_point) = anchor_value; when the anchor
    value is omitted it defaults to the principal argument of
    Theta_E(anchor_point) in (-pi, pi].  A supplied value must be consistent
    with Theta_E at the anchor (branches only differ by multiples of 2 pi).
    """

    spec: HBSpec
    anchor_point: float = 0.0
    anchor_value: Optional[float] = None

    def __post_init__(self):
        if not math.isfinite(self.anchor_point):
            raise SpecError("anchor_point must be finite")
        principal = cmath.phase(complex(theta(self.spec, self.anchor_point)))
        if principal <= -math.pi:  # cmath.phase returns (-pi, pi]; guard -pi
            principal += 2 * math.pi
        if self.anchor_value is None:
            object.__setattr__(self, "anchor_value", principal)
        else:
            gap = (self.anchor_value - principal) / (2 * math.pi)
            if abs(gap - round(gap)) > 1e-9:
                raise SpecError(
                    f"anchor_value {self.anchor_value} is not a branch of "
                    f"arg Theta_E({self.anchor_point}) = {principal} mod 2 pi"
                )

    def __call__(self, x):
        return phase(self, x)


def _unanchored_phase(spec: HBSpec, x):
    xx = np.asarray(x, dtype=float)
    acc = 2.0 * spec.exp_rate * xx
    if spec.degree:
        xs, ys = _zero_data(spec)
        acc = acc + 2.0 * np.sum(
            np.arctan((xx[..., None] - xs) / ys), axis=-1
        )
    return acc


def phase(profile: PhaseProfile, x):
    """phi(x): strictly increasing, with e^{i phi(x)} = Theta_E(x)."""
    base = _unanchored_phase(profile.spec, x)
    offset = profile.anchor_value - float(
        _unanchored_phase(profile.spec, profile.anchor_point)
    )
    out = base + offset
    if np.ndim(x) == 0:
        return float(out)
    return out


def phase_derivative(spec: HBSpec, x):
    """phi'(x) = 2 exp_rate + 2 sum_n yhat_n / ((x - x_n)^2 + yhat_n^2) > 0."""
    xx = np.asarray(x, dtype=float)
    acc = 2.0 * spec.exp_rate * np.ones_like(xx)
    if spec.degree:
        xs, ys = _zero_data(spec)
        d = xx[..., None] - xs
        acc = acc + 2.0 * np.sum(ys / (d * d + ys * ys), axis=-1)
    if np.ndim(x) == 0:
        return float(acc)
    return acc


class PhaseSup(NamedTuple):
    """Supremum of phi' and where it is attained.

    location is None when the supremum is only approached as |x| -> infinity
    (possible only for pure-exponential specs, where phi' is constant).
    """

    value: float
    location: Optional[float]


def phase_derivative_sup(spec: HBSpec) -> PhaseSup:
    """sup over the real line of phi', refined around each zero's bump.

    phi' is a finite sum of unimodal bumps over the constant 2*exp_rate, so a
    coarse 64-point grid per bump plus golden-section refinement localizes
    the maximum; the tail value 2*exp_rate is always strictly smaller when
    zeros are present.
    """
    if spec.degree == 0:
        return PhaseSup(2.0 * spec.exp_rate, None)
    xs, ys = _zero_data(spec)

    def h(t):
        return phase_derivative(spec, t)

    best_v, best_x = -math.inf, 0.0
    windows = [(x - 3.0 * y, x + 3.0 * y, y) for x, y in zip(xs, ys)]
    # a hull grid guards against maxima falling between bump windows
    hull = (float(np.min(xs - 3.0 * ys)), float(np.max(xs + 3.0 * ys)))
    grids = [np.linspace(a, b, 64) for a, b, _ in windows]
    grids.append(np.linspace(hull[0], hull[1], 256))
    for g in grids:
        vals = h(g)
        i = int(np.argmax(vals))
        a = g[max(i - 1, 0)]
        b = g[min(i + 1, g.size - 1)]
        v, x = golden_max(lambda t: phase_derivative(spec, t), a, b, tol=1e-14)
        if v > best_v:
            best_v, best_x = v, x
    return PhaseSup(float(best_v), float(best_x))


def phase_limits(profile: PhaseProfile) -> Tuple[float, float]:
    """(phi(-inf), phi(+inf)); infinite for Paley-Wiener specs."""
    spec = profile.spec
    if spec.exp_rate > 0.0:
        return -math.inf, math.inf
    total = math.pi * spec.degree
    offset = profile.anchor_value - float(
        _unanchored_phase(spec, profile.anchor_point)
    )
    return offset - total, offset + total


def level_crossings(
    profile: PhaseProfile,
    target_mod_2pi: float,
    window: Tuple[float, float],
    tol: float = 1e-13,
) -> np.ndarray:
    """All solutions of phi(x) = target (mod 2 pi) inside a finite window.

    With target = 2*beta + pi these are exactly the zeros of A_beta, with
    target = 2*beta the zeros of B_beta.  Monotone bisection/Newton on the
    closed-form phase; returns a sorted array, possibly empty.
    """
    lo, hi = float(window[0]), float(window[1])
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError(f"window must be finite and nonempty, got ({lo}, {hi})")
    philo = phase(profile, lo)
    phihi = phase(profile, hi)
    two_pi = 2 * math.pi
    kmin = math.ceil((philo - target_mod_2pi) / two_pi - 1e-12)
    kmax = math.floor((phihi - target_mod_2pi) / two_pi + 1e-12)
    roots = []
    for k in range(kmin, kmax + 1):
        level = target_mod_2pi + two_pi * k
        if level < philo - 1e-12 or level > phihi + 1e-12:
            continue
        roots.append(
            monotone_solve(
                lambda t: phase(profile, t),
                level,
                (lo, hi),
                tol=tol,
                dg=lambda t: phase_derivative(profile.spec, t),
            )
        )
    return np.array(sorted(roots))


@dataclass(frozen=True)
class HBBarReport:
    """Result of sampling |g#(z)| <= |g(z)| over an upper-half-plane grid."""

    worst_ratio: float
    passed: bool
    n_checked: int
    n_skipped: int
    skipped_points: Tuple[complex, ...]


def hb_bar_check(
    g,
    g_sharp,
    sample_grid,
    tol: float = 1e-12,
) -> HBBarReport:
    """Check |g#(z)| <= |g(z)| (1 + tol) on upper-half-plane samples.

    g and g_sharp are vectorized complex evaluators.  Points where g
    vanishes to working precision are skipped and reported, since the ratio
    is undefined there.
    """
    pts = np.asarray(sample_grid, dtype=complex).ravel()
    if np.any(pts.imag <= 0):
        raise ValueError("all sample points must have positive imaginary part")
    gv = np.asarray(g(pts), dtype=complex)
    gs = np.asarray(g_sharp(pts), dtype=complex)
    mag = np.abs(gv)
    floor = 1e-14 * float(np.max(mag)) if mag.size else 0.0
    ok = mag > floor
    ratios = np.abs(gs[ok]) / mag[ok]
    worst = float(np.max(ratios)) if ratios.size else 0.0
    skipped = tuple(complex(p) for p in pts[~ok])
    return HBBarReport(
        worst_ratio=worst,
        passed=worst <= 1.0 + tol,
        n_checked=int(np.count_nonzero(ok)),
        n_skipped=len(skipped),
        skipped_points=skipped,
    )


def upper_half_plane_grid(
    x_window: Tuple[float, float] = (-5.0, 5.0),
    y_range: Tuple[float, float] = (0.05, 4.0),
    nx: int = 32,
    ny: int = 32,
) -> np.ndarray:
    """nx-by-ny grid of points strictly above the real axis."""
    xs = np.linspace(x_window[0], x_window[1], nx)
    ys = np.geomspace(y_range[0], y_range[1], ny)
    return (xs[:, None] + 1j * ys[None, :]).ravel()


# ---------------------------------------------------------------------------
# Structured members of H^infinity(E)
# ---------------------------------------------------------------------------


def same_de_branges_space(a: HBSpec, b: HBSpec) -> bool:
    """Whether two specs generate the same spaces (rotation is immaterial)."""
    return (
        a.exp_rate == b.exp_rate
        and a.scale == b.scale
        and sorted(a.zeros, key=lambda z: (z.real, z.imag))
        == sorted(b.zeros, key=lambda z: (z.real, z.imag))
    )


class StructuredEntire:
    """A certified real entire member of H^infinity(E).

    Every node evaluates anywhere in the plane and satisfies f = f# by
    construction.  certify() checks the membership certificate against an
    ambient spec; poly_coeffs() returns exact real monomial coefficients when
    the ambient space is polynomial-type.
    """

    def eval(self, z):
        raise NotImplementedError

    def __call__(self, z):
        return self.eval(z)

    def eval_sharp(self, z):
        """f#(z) = conj(f(conj z)); equals f for these real entire nodes."""
        return self.eval(z)

    def certify(self, ambient: HBSpec) -> None:
        raise NotImplementedError

    def poly_coeffs(self, ambient: HBSpec) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


def _as_real_coeffs(c: np.ndarray, what: str) -> np.ndarray:
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    if scale and float(np.max(np.abs(c.imag))) > 1e-12 * scale:
        raise ArithmeticError(f"{what}: coefficients failed to come out real")
    out = np.real(c).astype(float)
    # drop trailing rounding noise so degrees are meaningful
    tol = 1e-13 * scale
    n = out.size
    while n > 1 and abs(out[n - 1]) <= tol:
        n -= 1
    return out[:n]


def _e_poly_coeffs(spec: HBSpec, conjugate: bool = False) -> np.ndarray:
    """Monomial coefficients of polynomial-type E (or E#). Complex."""
    if not spec.is_polynomial:
        raise ValueError("E is not a polynomial (exp_rate > 0)")
    roots = [complex(z).conjugate() if conjugate else complex(z) for z in spec.zeros]
    c = np.polynomial.polynomial.polyfromroots(roots) if roots else np.array([1.0 + 0j])
    sgn = -1.0 if conjugate else 1.0
    return spec.scale * np.exp(1j * sgn * spec.rotation) * c


class RotationRealPart(StructuredEntire):
    """A_beta of a spec: the real part of e^{i beta} E on the real axis."""

    def __init__(self, spec: HBSpec, beta: float):
        if not math.isfinite(beta):
            raise SpecError("beta must be finite")
        self.spec = spec
        self.beta = float(beta)

    def eval(self, z):
        zz = np.asarray(z, dtype=complex)
        w = 0.5 * (
            np.exp(1j * self.beta) * eval_E(self.spec, zz)
            + np.exp(-1j * self.beta) * eval_E(self.spec, zz, conjugate=True)
        )
        if np.ndim(z) == 0:
            return complex(w)
        return w

    def certify(self, ambient: HBSpec) -> None:
        if same_de_branges_space(self.spec, ambient):
            return
        if self.spec.degree == 0 and self.spec.exp_rate <= ambient.exp_rate:
            # pure exponential of smaller type: bounded, type within budget
            return
        raise MembershipError(
            "RotationRealPart is only certified for its own space or, for "
            "pure-exponential specs, an ambient space of at least its type"
        )

    def poly_coeffs(self, ambient: HBSpec) -> np.ndarray:
        if not self.spec.is_polynomial:
            raise ValueError("not polynomial-type")
        c = 0.5 * (
            np.exp(1j * self.beta) * _e_poly_coeffs(self.spec)
            + np.exp(-1j * self.beta) * _e_poly_coeffs(self.spec, conjugate=True)
        )
        return _as_real_coeffs(c, "RotationRealPart")

    def to_dict(self) -> dict:
        return {
            "kind": "rotation_real_part",
            "spec": spec_to_dict(self.spec),
            "beta": self.beta,
        }


class Kernel(StructuredEntire):
    """The reproducing kernel K_t of H^2(E) at a real node t.

    K_t(z) = [E(z) conj(E(t)) - E#(z) conj(E#(t))] / (2 pi i (t - z)), with
    the removable singularity at z = t filled by (1/2pi) |E(t)|^2 phi'(t).
    Near the diagonal the quotient loses eps/|z - t| digits to cancellation,
    so a quadratic Taylor form (exact E derivatives through third order)
    bridges |z - t| below 1e-4 (1 + |t|); its value at t is the diagonal
    formula exactly.
    """

    _DIAGONAL_WINDOW = 1e-4

    def __init__(self, spec: HBSpec, t: float):
        if not math.isfinite(t):
            raise SpecError("kernel node must be finite")
        self.spec = spec
        self.t = float(t)

    def diagonal(self) -> float:
        """K_t(t) = (1/2 pi) |E(t)|^2 phi'(t)."""
        e = eval_E(self.spec, self.t)
        return abs(e) ** 2 * phase_derivative(self.spec, self.t) / (2 * math.pi)

    def _numerator_jet(self):
        """(N', N'', N''') of N(z) = E(z) conj(E(t)) - E#(z) conj(E#(t)) at t."""
        out = []
        for conjugate in (False, True):
            e = complex(eval_E(self.spec, self.t, conjugate=conjugate))
            roots = (
                np.conj(np.array(self.spec.zeros))
                if conjugate
                else np.array(self.spec.zeros)
            )
            sgn = -1.0 if conjugate else 1.0
            d = self.t - roots if self.spec.degree else np.array([])
            l1 = -1j * sgn * self.spec.exp_rate + (np.sum(1.0 / d) if d.size else 0.0)
            l2 = -(np.sum(1.0 / d ** 2) if d.size else 0.0)
            l3 = 2.0 * (np.sum(1.0 / d ** 3) if d.size else 0.0)
            out.append(
                (e * l1, e * (l1 * l1 + l2), e * (l1 ** 3 + 3 * l1 * l2 + l3))
            )
        (e1, e2, e3), (s1, s2, s3) = out
        ct = np.conj(complex(eval_E(self.spec, self.t)))
        cts = np.conj(complex(eval_E(self.spec, self.t, conjugate=True)))
        return (e1 * ct - s1 * cts, e2 * ct - s2 * cts, e3 * ct - s3 * cts)

    def eval(self, z):
        zz = np.asarray(z, dtype=complex)
        et = complex(eval_E(self.spec, self.t))
        ets = complex(eval_E(self.spec, self.t, conjugate=True))
        num = eval_E(self.spec, zz) * np.conj(et) - eval_E(
            self.spec, zz, conjugate=True
        ) * np.conj(ets)
        den = 2j * math.pi * (self.t - zz)
        near = np.abs(zz - self.t) < self._DIAGONAL_WINDOW * (1.0 + abs(self.t))
        n1, n2, n3 = self._numerator_jet()
        u = zz - self.t
        taylor = -(n1 + n2 * u / 2.0 + n3 * u * u / 6.0) / (2j * math.pi)
        out = np.where(near, taylor, num / np.where(near, 1.0, den))
        if np.ndim(z) == 0:
            return complex(out)
        return out

    def certify(self, ambient: HBSpec) -> None:
        if same_de_branges_space(self.spec, ambient):
            return
        if self.spec.degree == 0 and self.spec.exp_rate <= ambient.exp_rate:
            return
        raise MembershipError(
            "Kernel is only certified for its own space or, for "
            "pure-exponential specs, an ambient space of at least its type"
        )

    def poly_coeffs(self, ambient: HBSpec) -> np.ndarray:
        if not self.spec.is_polynomial:
            raise ValueError("not polynomial-type")
        et = complex(eval_E(self.spec, self.t))
        ets = complex(eval_E(self.spec, self.t, conjugate=True))
        num = np.conj(et) * _e_poly_coeffs(self.spec) - np.conj(ets) * _e_poly_coeffs(
            self.spec, conjugate=True
        )
        # numerator vanishes at t; deflate by (z - t) via Horner division
        q, rem = _deflate(num, self.t)
        if abs(rem) > 1e-10 * (1.0 + float(np.max(np.abs(num)))):
            raise ArithmeticError("kernel numerator did not vanish at its node")
        return _as_real_coeffs(q / (-2j * math.pi), "Kernel")

    def to_dict(self) -> dict:
        return {"kind": "kernel", "spec": spec_to_dict(self.spec), "t": self.t}


def _deflate(coeffs: np.ndarray, root: complex):
    """Divide a monomial-coefficient polynomial by (z - root)."""
    n = coeffs.size
    q = np.zeros(n - 1, dtype=complex)
    acc = coeffs[n - 1]
    for k in range(n - 2, -1, -1):
        q[k] = acc
        acc = coeffs[k] + root * acc
    return q, acc


class RealPolynomial(StructuredEntire):
    """Real polynomial in monomial coefficients (constant first)."""

    def __init__(self, coefficients: Sequence[float]):
        c = np.asarray(list(coefficients), dtype=float)
        if c.size == 0:
            raise SpecError("empty coefficient list")
        if not np.all(np.isfinite(c)):
            raise SpecError("non-finite coefficient")
        self.coefficients = c

    @property
    def degree(self) -> int:
        nz = np.nonzero(self.coefficients)[0]
        return int(nz[-1]) if nz.size else 0

    def eval(self, z):
        zz = np.asarray(z, dtype=complex)
        out = np.polynomial.polynomial.polyval(zz, self.coefficients)
        if np.ndim(z) == 0:
            return complex(out)
        return out

    def certify(self, ambient: HBSpec) -> None:
        if not ambient.is_polynomial:
            raise MembershipError(
                "polynomials are unbounded against a Paley-Wiener weight"
            )
        if self.degree > ambient.degree - 1:
            raise MembershipError(
                f"degree {self.degree} exceeds the H^inf cap "
                f"{ambient.degree - 1} for this spec"
            )

    def poly_coeffs(self, ambient: HBSpec) -> np.ndarray:
        return self.coefficients.copy()

    def to_dict(self) -> dict:
        return {"kind": "polynomial", "coefficients": list(map(float, self.coefficients))}


class Combination(StructuredEntire):
    """Real-linear combination of structured members."""

    def __init__(self, terms: Iterable[Tuple[float, StructuredEntire]]):
        terms = tuple((float(w), node) for w, node in terms)
        if not terms:
            raise SpecError("empty combination")
        for w, node in terms:
            if not math.isfinite(w):
                raise SpecError("non-finite weight")
            if not isinstance(node, StructuredEntire):
                raise SpecError(f"not a structured member: {node!r}")
        self.terms = terms

    def eval(self, z):
        acc = self.terms[0][0] * np.asarray(self.terms[0][1].eval(z))
        for w, node in self.terms[1:]:
            acc = acc + w * np.asarray(node.eval(z))
        if np.ndim(z) == 0:
            return complex(acc)
        return acc

    def certify(self, ambient: HBSpec) -> None:
        for _, node in self.terms:
            node.certify(ambient)

    def poly_coeffs(self, ambient: HBSpec) -> np.ndarray:
        parts = [node.poly_coeffs(ambient) * w for w, node in self.terms]
        n = max(p.size for p in parts)
        out = np.zeros(n)
        for p in parts:
            out[: p.size] += p
        return out

    def to_dict(self) -> dict:
        return {
            "kind": "combination",
            "terms": [[w, node.to_dict()] for w, node in self.terms],
        }


# ---------------------------------------------------------------------------
# JSON wire formats
# ---------------------------------------------------------------------------


def spec_to_dict(spec: HBSpec) -> dict:
    return {
        "exp_rate": spec.exp_rate,
        "zeros": [[z.real, z.imag] for z in spec.zeros],
        "rotation": spec.rotation,
        "scale": spec.scale,
    }


def spec_from_dict(d: dict) -> HBSpec:
    if not isinstance(d, dict):
        raise SpecError(f"spec must be a JSON object, got {type(d).__name__}")
    unknown = set(d) - {"exp_rate", "zeros", "rotation", "scale"}
    if unknown:
        raise SpecError(f"unknown spec fields: {sorted(unknown)}")
    try:
        zeros = tuple(complex(float(re), float(im)) for re, im in d.get("zeros", []))
    except (TypeError, ValueError) as exc:
        raise SpecError(f"zeros must be [[re, im], ...]: {exc}") from exc
    try:
        return HBSpec(
            exp_rate=float(d.get("exp_rate", 0.0)),
            zeros=zeros,
            rotation=float(d.get("rotation", 0.0)),
            scale=float(d.get("scale", 1.0)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(str(exc)) from exc


def entire_from_dict(d: dict) -> StructuredEntire:
    """Parse the tagged JSON tree for structured members."""
    if not isinstance(d, dict) or "kind" not in d:
        raise SpecError("structured function must be a JSON object with a 'kind'")
    kind = d["kind"]
    if kind == "rotation_real_part":
        return RotationRealPart(spec_from_dict(d["spec"]), float(d["beta"]))
    if kind == "kernel":
        return Kernel(spec_from_dict(d["spec"]), float(d["t"]))
    if kind == "polynomial":
        return RealPolynomial(d["coefficients"])
    if kind == "combination":
        return Combination(
            (float(w), entire_from_dict(sub)) for w, sub in d["terms"]
        )
    raise SpecError(f"unknown structured-function kind {kind!r}")
