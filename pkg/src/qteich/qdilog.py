"""Noncompact quantum dilogarithm: evaluation strategies and structure maps.

The function ``eb`` evaluated here is the meromorphic function of one complex
variable fixed by the contour integral for its logarithm (see
:mod:`qteich.quadrature`), together with its functional equations:

* inversion:  ``eb(z) eb(-z) = exp(i pi z^2) exp(-i pi (1 + 2 c_b^2) / 6)``
* shift:      ``eb(z - i b / 2) = (1 + exp(2 pi b z)) eb(z + i b / 2)`` and
  the same with ``b`` replaced by ``1/b``
* unitarity:  ``conj(eb(z)) = 1 / eb(conj(z))`` when ``b`` is real or on the
  unit circle
* symmetry:   ``eb`` is unchanged under ``b -> 1/b``

Zeros sit at ``-(c_b + i m b + i n / b)`` and poles at ``+(c_b + i m b +
i n / b)`` for nonnegative integers ``m, n``.

Three evaluation strategies are provided.  The contour integral plus shift
continuation works for every parameter and is the branch-defining oracle; the
convergent infinite product works when ``Im b^2 > 0``; closed asymptotic
forms apply deep inside four sectors of the complex plane.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    ContinuationDepthExceeded,
    HalfPlaneViolation,
    ParameterError,
    PoleHit,
    PoleProximity,
    RegimeViolation,
    SectorBoundary,
)
from .params import ModularParameter
from .quadrature import QuadratureConfig, error_estimate, log_eb_on_line

# Fraction of the strip half-width the continuation tries to shift into;
# the quadrature stays cheap for |Im z| below this.
_BAND_FRACTION = 0.45

# Distance to a pole below which evaluation refuses to proceed.
POLE_TOLERANCE = 1e-6

_DEFAULT_CFG = QuadratureConfig()


class PoleZeroKind(Enum):
    ZERO = "zero"
    POLE = "pole"


@dataclass(frozen=True)
class PoleIndex:
    """Lattice index of a zero or pole: nonnegative integers (m, n)."""

    m: int
    n: int
    kind: PoleZeroKind

    def __post_init__(self) -> None:
        if self.m < 0 or self.n < 0:
            raise ParameterError("pole/zero indices are nonnegative")


def pole_zero_location(index: PoleIndex, p: ModularParameter) -> complex:
    """Position of the indexed zero (``-(c_b + imb + in/b)``) or pole (``+``)."""
    base = p.c_b + 1j * (index.m * p.b + index.n / p.b)
    return base if index.kind is PoleZeroKind.POLE else -base


def nearest_pole_zero(
    z: complex, p: ModularParameter
) -> tuple[PoleIndex, float]:
    """Closest zero/pole lattice point to ``z`` and the distance to it."""
    z = complex(z)
    b = p.b
    best: tuple[float, PoleIndex] | None = None
    # Solve  sign * (c_b + i(m b + n / b)) ~ z  for real (m, n), then probe
    # the neighboring integer pairs.
    for kind, sign in ((PoleZeroKind.POLE, 1.0), (PoleZeroKind.ZERO, -1.0)):
        y = -1j * (sign * z - p.c_b)  # = m b + n / b  at the exact lattice
        if b.imag > 1e-14:
            det = (b.real * (1 / b).imag - b.imag * (1 / b).real)
            m0 = (y.real * (1 / b).imag - y.imag * (1 / b).real) / det
            n0 = (b.real * y.imag - b.imag * y.real) / det
            candidates = {
                (max(0, int(math.floor(m0)) + dm), max(0, int(math.floor(n0)) + dn))
                for dm in (0, 1)
                for dn in (0, 1)
            }
        else:
            # Real b: the lattice heights are m b + n / b on one line.
            candidates = set()
            t = max(0.0, y.real)
            m_hi = int(t / b.real) + 1
            for m in range(0, m_hi + 1):
                rem = (t - m * b.real) * b.real
                n = max(0, int(round(rem)))
                for dn in (-1, 0, 1):
                    candidates.add((m, max(0, n + dn)))
        for m, n in candidates:
            loc = sign * (p.c_b + 1j * (m * b + n / b))
            dist = abs(z - loc)
            if best is None or dist < best[0]:
                best = (dist, PoleIndex(m, n, kind))
    assert best is not None
    return best[1], best[0]


def _log1p_exp(w: np.ndarray) -> np.ndarray:
    """``log(1 + exp(w))`` for complex ``w``, stable for large ``Re w``.

    The branch is immaterial to callers that exponentiate the result, but
    the value returned is continuous on each half ``Re w >< 30``.
    """
    w = np.asarray(w, dtype=np.complex128)
    out = np.empty(w.shape, dtype=np.complex128)
    big = w.real > 30.0
    with np.errstate(divide="ignore", invalid="ignore"):
        out[big] = w[big] + np.log1p(np.exp(-w[big]))
        out[~big] = np.log1p(np.exp(w[~big]))
    return out


def _continue_into_band(
    z: np.ndarray, p: ModularParameter, cfg: QuadratureConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Shift arguments toward the real line using the functional equation.

    Returns ``(u, logpref)`` such that ``eb(z) = exp(logpref) * eb(u)``
    entrywise, with every ``|Im u|`` either inside the target band or at a
    stuck point where neither shift direction helps (always well inside the
    strip, so the quadrature can take over).
    """
    strip = p.strip_half_width
    band = _BAND_FRACTION * strip
    b = p.b
    binv = 1.0 / b
    u = np.array(z, dtype=np.complex128, copy=True)
    logpref = np.zeros(u.shape, dtype=np.complex128)
    for _ in range(cfg.continuation_depth_max):
        im = np.abs(u.imag)
        active = im > band
        if not active.any():
            return u, logpref
        sgn = np.where(u.imag > 0.0, -1.0, 1.0)
        im_b = np.abs(u.imag + sgn * b.real)
        im_v = np.abs(u.imag + sgn * binv.real)
        use_b = im_b <= im_v  # prefer the b-direction on ties
        im_new = np.where(use_b, im_b, im_v)
        step = active & (im_new < im - 1e-15)
        if not step.any():
            return u, logpref
        w = np.where(use_b, b, binv)
        mid = u + 0.5j * sgn * w
        pref = sgn * _log1p_exp(2.0 * np.pi * w * mid)
        logpref = np.where(step, logpref + pref, logpref)
        u = np.where(step, u + 1j * sgn * w, u)
    if (np.abs(u.imag) > band).any():
        raise ContinuationDepthExceeded(
            f"still outside the band after {cfg.continuation_depth_max} shifts"
        )
    return u, logpref


def eb_many(
    z, p: ModularParameter, cfg: QuadratureConfig | None = None
) -> np.ndarray:
    """Vectorized dilogarithm via continuation plus contour quadrature.

    Accepts any array of points off the pole set (zeros are fine; exact
    poles produce ``inf``/``nan`` rather than an exception — callers that
    need guarding should screen with :func:`nearest_pole_zero`).
    """
    cfg = cfg or _DEFAULT_CFG
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    shape = z.shape
    u, logpref = _continue_into_band(z.ravel(), p, cfg)
    logs = log_eb_on_line(u, p, cfg)
    return np.exp(logpref + logs).reshape(shape)


def eb_integral(
    z: complex, p: ModularParameter, cfg: QuadratureConfig | None = None
) -> complex:
    """Dilogarithm by direct contour quadrature; strip-interior points only."""
    cfg = cfg or _DEFAULT_CFG
    val = log_eb_on_line(np.array([complex(z)]), p, cfg)[0]
    return complex(np.exp(val))


def _pochhammer_tail(a_abs: float, t_abs: float, count: int) -> float:
    """Bound on ``sum_{k >= count} |a| t^k``, the dropped log-terms."""
    if t_abs >= 1.0:
        return math.inf
    return a_abs * t_abs**count / (1.0 - t_abs)


def _pochhammer_count(a_abs: float, t_abs: float, target: float) -> int:
    if t_abs >= 1.0:
        raise RegimeViolation("infinite product needs |nome^2| < 1")
    if a_abs == 0.0:
        return 1
    k = (math.log(target * (1.0 - t_abs)) - math.log(a_abs)) / math.log(t_abs)
    return max(4, int(k) + 2)


def _pochhammer(
    a: complex, t: complex, count: int, forbid_zero: bool = False
) -> complex:
    k = np.arange(count)
    factors = 1.0 - a * t**k
    if forbid_zero and np.any(
        np.abs(factors) < 1e-14 * (1.0 + np.abs(a * t**k))
    ):
        raise PoleHit(f"product factor vanished for a = {a}, nome^2 = {t}")
    return complex(np.prod(factors))


def eb_product(
    z: complex, p: ModularParameter, trunc: float = 1e-18
) -> tuple[complex, float]:
    """Dilogarithm by the convergent infinite product; needs ``Im b^2 > 0``.

    Returns ``(value, bound)`` where ``bound`` estimates the relative error
    from truncating both products.  Raises :class:`RegimeViolation` outside
    the convergence regime and :class:`PoleHit` when a denominator factor
    vanishes (the argument sits on a pole).
    """
    if not p.product_regime():
        raise RegimeViolation(
            f"product form needs Im b^2 > 0; b = {p.b} has Im b^2 = "
            f"{(p.b * p.b).imag}"
        )
    z = complex(z)
    b = p.b
    t_num = p.q * p.q
    t_den = p.qbar * p.qbar
    a_num = cmath.exp(2.0 * cmath.pi * (z + p.c_b) * b)
    a_den = cmath.exp(2.0 * cmath.pi * (z - p.c_b) / b)
    k_num = _pochhammer_count(abs(a_num), abs(t_num), trunc)
    k_den = _pochhammer_count(abs(a_den), abs(t_den), trunc)
    num = _pochhammer(a_num, t_num, k_num)
    den = _pochhammer(a_den, t_den, k_den, forbid_zero=True)
    bound = _pochhammer_tail(abs(a_num), abs(t_num), k_num) + _pochhammer_tail(
        abs(a_den), abs(t_den), k_den
    )
    return num / den, bound


def theta(z: complex, tau: complex, tol: float = 1e-18) -> complex:
    """Jacobi theta series ``sum_n exp(i pi tau n^2 + 2 pi i n z)``.

    Requires ``Im tau > 0`` (:class:`HalfPlaneViolation` otherwise).  The
    summation range is chosen so the dropped terms are below ``tol``.
    """
    tau = complex(tau)
    if not tau.imag > 0.0:
        raise HalfPlaneViolation(f"theta nome needs Im tau > 0, got {tau}")
    z = complex(z)
    log_tol = -math.log(tol)
    im_z = abs(z.imag)
    n_max = (
        im_z + math.sqrt(im_z * im_z + log_tol * tau.imag / math.pi)
    ) / tau.imag
    n = np.arange(-int(n_max) - 2, int(n_max) + 3)
    terms = np.exp(1j * math.pi * tau * n * n + 2j * math.pi * n * z)
    return complex(np.sum(terms))


def _dedekind_like(t: complex) -> complex:
    """``prod_{k >= 1} (1 - t^k)`` for ``|t| < 1``."""
    t = complex(t)
    if abs(t) >= 1.0:
        raise RegimeViolation("series parameter must satisfy |t| < 1")
    count = max(4, int(-45.0 / math.log(abs(t))) + 2) if t != 0 else 4
    k = np.arange(1, count + 1)
    return complex(np.prod(1.0 - t**k))


def inversion_constant(p: ModularParameter) -> complex:
    """The constant ``exp(-i pi (1 + 2 c_b^2) / 6)`` from the inversion law."""
    return cmath.exp(-1j * cmath.pi * (1.0 + 2.0 * p.c_b * p.c_b) / 6.0)


def eb_asymptotic(
    z: complex, p: ModularParameter, margin: float = 0.02
) -> complex:
    """Leading asymptotic value of the dilogarithm, by sector of ``arg z``.

    Four sectors, separated by the rays ``arg z = +-(pi/2 -+ arg b)``:
    constant 1 to the left, a Gaussian factor to the right, and theta-series
    expressions in the upper and lower wedges (nonempty only when
    ``Im b^2 > 0``).  Raises :class:`SectorBoundary` within ``margin``
    radians of a separating ray.
    """
    z = complex(z)
    if z == 0:
        raise SectorBoundary("sector of z = 0 is undefined")
    ab = cmath.phase(p.b)
    th = cmath.phase(z)
    rays = (math.pi / 2 - ab, -(math.pi / 2 - ab), math.pi / 2 + ab, -(math.pi / 2 + ab))
    if min(abs(th - ray) for ray in rays) < margin:
        raise SectorBoundary(
            f"arg z = {th} is within {margin} of a sector boundary"
        )
    if abs(th) < math.pi / 2 - ab:
        return cmath.exp(1j * math.pi * z * z) * inversion_constant(p)
    if abs(th) > math.pi / 2 + ab:
        return 1.0 + 0.0j
    if abs(th - math.pi / 2) < ab:
        tau = -1.0 / (p.b * p.b)
        return _dedekind_like(p.qbar * p.qbar) / theta(1j * z / p.b, tau)
    return theta(1j * z * p.b, p.b * p.b) / _dedekind_like(p.q * p.q)


def eb(
    z: complex,
    p: ModularParameter,
    cfg: QuadratureConfig | None = None,
    strategy: str = "auto",
) -> complex:
    """Evaluate the dilogarithm anywhere off its pole set.

    ``strategy`` is one of ``"integral"`` (contour quadrature plus shift
    continuation; works for every admissible ``b``), ``"product"``
    (infinite product; needs ``Im b^2 > 0``), or ``"auto"`` (product when
    available, integral otherwise).  Points within ``POLE_TOLERANCE`` of a
    pole raise :class:`PoleProximity` carrying the offending index.
    """
    cfg = cfg or _DEFAULT_CFG
    z = complex(z)
    index, dist = nearest_pole_zero(z, p)
    if index.kind is PoleZeroKind.POLE and dist < POLE_TOLERANCE:
        raise PoleProximity(
            f"z = {z} is {dist:.2e} away from the pole at index "
            f"({index.m}, {index.n})",
            index=index,
            distance=dist,
        )
    if strategy == "auto":
        strategy = "product" if p.product_regime() else "integral"
    if strategy == "product":
        value, _ = eb_product(z, p)
        return value
    if strategy == "integral":
        return complex(eb_many(np.array([z]), p, cfg)[0])
    raise ParameterError(f"unknown strategy {strategy!r}")


def eval_with_info(
    z: complex,
    p: ModularParameter,
    cfg: QuadratureConfig | None = None,
    strategy: str = "auto",
) -> tuple[complex, str, float]:
    """Evaluate and report ``(value, strategy_used, error_estimate)``."""
    cfg = cfg or _DEFAULT_CFG
    resolved = strategy
    if resolved == "auto":
        resolved = "product" if p.product_regime() else "integral"
    if resolved == "product":
        index, dist = nearest_pole_zero(z, p)
        if index.kind is PoleZeroKind.POLE and dist < POLE_TOLERANCE:
            raise PoleProximity(
                f"z = {z} is {dist:.2e} away from a pole",
                index=index,
                distance=dist,
            )
        value, bound = eb_product(z, p)
        return value, "product", bound
    value = eb(z, p, cfg, strategy="integral")
    u, _ = _continue_into_band(np.array([complex(z)]), p, cfg)
    est = error_estimate(complex(u[0]), p, cfg)
    return value, "integral", est * (1.0 + abs(value))
