"""Finite-grid model of the canonical pair and the operator calculus on it.

Operators act on periodic sampled wave functions over centered grids
x_j = (j - N/2) h.  Everything is expressed as an ``OperatorProgram``, an
ordered list of invertible primitives applied left to right:

* ``DiagPosition(axis, fn)``   multiply by fn(position grid) along one axis
* ``DiagMomentum(axis, fn)``   same in the Fourier-dual basis
* ``DiagMulti(axes, fn)``      joint position diagonal over several axes
* ``FourierAxis(axis, dir)``   centered unitary Fourier transform
* ``Shear(i, j, sign)``        f(x_i, x_j) -> f(x_i + sign x_j, x_j)
* ``PermuteFactors(perm)``     relabel tensor factors
* ``Scalar(c)``                global multiplication

The centered transform sends the position operator q to -p and the
momentum operator p to q, where p = (2 pi i)^{-1} d/dx, so [p, q] =
(2 pi i)^{-1}.  Quadratic-phase diagonals (Gaussian factors) conjugate p
into combinations of p and q; every non-diagonal operator function used
by the builders below is reduced to a diagonal by such conjugations, and
each reduction is covered by an expectation-transport test.

Builder conventions: programs returned by ``build_*`` realize the named
unitary; composition helpers take *application order* (first argument
acts first).  Axes are 0-based.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import fft as _sfft
from scipy.special import erfc as _erfc

from .errors import (
    AxisOutOfRange,
    BoundaryClipping,
    IdenticalAxes,
    ParameterError,
    SpecMismatch,
)
from .params import ModularParameter
from .qdilog import eb_many
from .quadrature import QuadratureConfig

__all__ = [
    "LatticeSpec",
    "StateVector",
    "GaussianPacket",
    "OperatorProgram",
    "OperatorSum",
    "DiagPosition",
    "DiagMomentum",
    "DiagMulti",
    "FourierAxis",
    "Shear",
    "PermuteFactors",
    "Scalar",
    "apply_program",
    "apply_sum",
    "gaussian_packet",
    "random_packets",
    "expectation_position",
    "expectation_momentum",
    "identity_program",
    "sequence",
    "build_A",
    "build_T",
    "build_R",
    "build_dehn",
    "build_dehn_single",
    "build_basis_change",
    "build_L",
    "relation_programs",
    "relation_residual",
    "relation_record",
    "RELATION_NAMES",
]


def _workers() -> int:
    try:
        return max(int(os.environ.get("QTEICH_THREADS", "1")), 1)
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# Grids and states
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeSpec:
    """Geometry of the sampled line: grid size, step, tensor power."""

    n_points: int
    spacing: float | None = None
    n_factors: int = 1

    def __post_init__(self) -> None:
        n = self.n_points
        if n < 2 or (n & (n - 1)) != 0:
            raise ParameterError(f"n_points must be a power of two, got {n}")
        if self.n_factors < 1:
            raise ParameterError("n_factors must be positive")
        if self.spacing is None:
            object.__setattr__(self, "spacing", 1.0 / math.sqrt(n))
        elif not self.spacing > 0.0:
            raise ParameterError("spacing must be positive")

    @property
    def momentum_step(self) -> float:
        return 1.0 / (self.n_points * self.spacing)

    @property
    def shape(self) -> tuple:
        return (self.n_points,) * self.n_factors

    def positions(self) -> np.ndarray:
        n = self.n_points
        return (np.arange(n) - n // 2) * self.spacing

    def momenta(self) -> np.ndarray:
        n = self.n_points
        return (np.arange(n) - n // 2) * self.momentum_step


@dataclass(frozen=True)
class StateVector:
    """Immutable sampled wave function over a LatticeSpec grid."""

    spec: LatticeSpec
    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.shape != self.spec.shape:
            raise SpecMismatch(
                f"data shape {self.data.shape} != grid shape {self.spec.shape}"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.data.ravel()))

    def normalized(self) -> "StateVector":
        return StateVector(self.spec, self.data / self.norm())

    def inner(self, other: "StateVector") -> complex:
        if self.spec != other.spec:
            raise SpecMismatch("states live on different grids")
        return complex(np.vdot(self.data, other.data))


# ---------------------------------------------------------------------------
# Primitives
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiagPosition:
    axis: int
    fn: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DiagMomentum:
    axis: int
    fn: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DiagMulti:
    """Joint diagonal exp-style factor over several position axes."""

    axes: tuple
    fn: Callable


@dataclass(frozen=True)
class FourierAxis:
    axis: int
    direction: int = 1


@dataclass(frozen=True)
class Shear:
    """Grid-exact substitution f(x_i, x_j) -> f(x_i + sign*x_j, x_j)."""

    axis_shifted: int
    axis_by: int
    sign: int = 1


@dataclass(frozen=True)
class PermuteFactors:
    """Relabel factors so the operator q_i maps to q_{perm[i]}."""

    perm: tuple


@dataclass(frozen=True)
class Scalar:
    value: complex


def _reciprocal(fn):
    return lambda g: 1.0 / fn(g)


def _reciprocal_multi(fn):
    return lambda *g: 1.0 / fn(*g)


def _invert_step(step):
    if isinstance(step, DiagPosition):
        return DiagPosition(step.axis, _reciprocal(step.fn))
    if isinstance(step, DiagMomentum):
        return DiagMomentum(step.axis, _reciprocal(step.fn))
    if isinstance(step, DiagMulti):
        return DiagMulti(step.axes, _reciprocal_multi(step.fn))
    if isinstance(step, FourierAxis):
        return FourierAxis(step.axis, -step.direction)
    if isinstance(step, Shear):
        return Shear(step.axis_shifted, step.axis_by, -step.sign)
    if isinstance(step, PermuteFactors):
        inv = tuple(int(k) for k in np.argsort(step.perm))
        return PermuteFactors(inv)
    if isinstance(step, Scalar):
        return Scalar(1.0 / step.value)
    raise TypeError(f"unknown primitive {step!r}")


def _step_axes(step):
    if isinstance(step, (DiagPosition, DiagMomentum, FourierAxis)):
        return (step.axis,)
    if isinstance(step, DiagMulti):
        return tuple(step.axes)
    if isinstance(step, Shear):
        return (step.axis_shifted, step.axis_by)
    return ()


@dataclass(frozen=True)
class OperatorProgram:
    """Ordered primitive list; applied first-to-last."""

    steps: tuple = ()

    def then(self, other: "OperatorProgram") -> "OperatorProgram":
        return OperatorProgram(self.steps + other.steps)

    def inverse(self) -> "OperatorProgram":
        return OperatorProgram(
            tuple(_invert_step(s) for s in reversed(self.steps))
        )

    def scaled(self, value: complex) -> "OperatorProgram":
        return OperatorProgram(self.steps + (Scalar(value),))

    def max_axis(self) -> int:
        top = -1
        for s in self.steps:
            for a in _step_axes(s):
                top = max(top, a)
            if isinstance(s, PermuteFactors):
                top = max(top, len(s.perm) - 1)
        return top


def identity_program() -> OperatorProgram:
    return OperatorProgram(())


def sequence(*programs: OperatorProgram) -> OperatorProgram:
    """Concatenate programs in application order (first acts first)."""
    steps: tuple = ()
    for prog in programs:
        steps = steps + prog.steps
    return OperatorProgram(steps)


@dataclass(frozen=True)
class OperatorSum:
    """Formal sum of programs, for non-invertible combinations."""

    terms: tuple


# ---------------------------------------------------------------------------
# Application engine
# ---------------------------------------------------------------------------


def _axis_slice(ndim: int, axis: int, values: np.ndarray) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = values.shape[0]
    return values.reshape(shape)


def _fourier(data: np.ndarray, axis: int, direction: int, workers: int):
    # Centered unitary transform: conjugate the plain FFT by (-1)^j
    # stencils and a constant so that grid index N/2 is the origin of
    # both the position and the momentum lattice.
    n = data.shape[axis]
    alt = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    alt_b = _axis_slice(data.ndim, axis, alt)
    data *= alt_b
    if direction > 0:
        data = _sfft.fft(data, axis=axis, norm="ortho", overwrite_x=True,
                         workers=workers)
    else:
        data = _sfft.ifft(data, axis=axis, norm="ortho", overwrite_x=True,
                          workers=workers)
    data *= alt_b
    const = np.exp(-1j * direction * np.pi * n / 2.0)
    if abs(const.imag) < 1e-15:
        const = const.real
    if const != 1.0:
        data *= np.asarray(const, dtype=data.dtype)
    return data


def _apply_diag(data, spec, axis, values):
    data *= _axis_slice(data.ndim, axis, values)
    return data


def _apply_multi(data, spec, axes, fn):
    k = len(axes)
    grids = np.meshgrid(*(spec.positions() for _ in range(k)), indexing="ij")
    vals = fn(*grids)
    order = np.argsort(axes)
    vals = np.transpose(vals, tuple(order))
    shape = [1] * data.ndim
    for ax in sorted(axes):
        shape[ax] = spec.n_points
    data *= vals.reshape(shape)
    return data


def _apply_shear(data, spec, shifted, by, sign):
    n = spec.n_points
    view = np.moveaxis(data, (shifted, by), (0, 1))
    half = n // 2
    for c in range(n):
        offset = sign * (c - half)
        if offset == 0:
            continue
        view[:, c, ...] = np.roll(view[:, c, ...], -offset, axis=0)
    return data


def _apply_step(step, data, spec, workers):
    nf = spec.n_factors
    for a in _step_axes(step):
        if not 0 <= a < nf:
            raise AxisOutOfRange(f"axis {a} outside 0..{nf - 1}")
    if isinstance(step, DiagPosition):
        return _apply_diag(data, spec, step.axis, step.fn(spec.positions()))
    if isinstance(step, DiagMomentum):
        data = _fourier(data, step.axis, +1, workers)
        data = _apply_diag(data, spec, step.axis, step.fn(spec.momenta()))
        return _fourier(data, step.axis, -1, workers)
    if isinstance(step, DiagMulti):
        return _apply_multi(data, spec, step.axes, step.fn)
    if isinstance(step, FourierAxis):
        return _fourier(data, step.axis, step.direction, workers)
    if isinstance(step, Shear):
        if step.axis_shifted == step.axis_by:
            raise IdenticalAxes("shear axes must differ")
        return _apply_shear(data, spec, step.axis_shifted, step.axis_by,
                            step.sign)
    if isinstance(step, PermuteFactors):
        if len(step.perm) != nf:
            raise SpecMismatch(
                f"permutation length {len(step.perm)} != factors {nf}"
            )
        inv = np.argsort(step.perm)
        return np.ascontiguousarray(np.transpose(data, tuple(inv)))
    if isinstance(step, Scalar):
        data *= np.asarray(step.value).astype(data.dtype, copy=False)
        return data
    raise TypeError(f"unknown primitive {step!r}")


def apply_program(
    prog: OperatorProgram,
    state: StateVector,
    dtype=None,
    workers: int | None = None,
) -> StateVector:
    """Run the primitive list left-to-right on a copy of the state."""
    spec = state.spec
    if prog.max_axis() >= spec.n_factors:
        raise AxisOutOfRange(
            f"program uses axis {prog.max_axis()}, grid has {spec.n_factors}"
        )
    w = workers if workers is not None else _workers()
    data = np.array(state.data, dtype=dtype or state.data.dtype, copy=True)
    for step in prog.steps:
        data = _apply_step(step, data, spec, w)
    return StateVector(spec, data)


def apply_sum(op: OperatorSum, state: StateVector, **kw) -> StateVector:
    total = None
    for term in op.terms:
        out = apply_program(term, state, **kw)
        total = out.data if total is None else total + out.data
    return StateVector(state.spec, total)


# ---------------------------------------------------------------------------
# Packets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianPacket:
    """Per-axis Gaussian data: centers, momenta, widths (one per factor)."""

    centers: tuple
    momenta: tuple
    widths: tuple

    def __post_init__(self) -> None:
        if not (len(self.centers) == len(self.momenta) == len(self.widths)):
            raise ParameterError("per-axis tuples must share a length")
        if any(not w > 0.0 for w in self.widths):
            raise ParameterError("widths must be positive")


def _clip_estimate(spec: LatticeSpec, c: float, m: float, w: float) -> float:
    """Mass of the continuum Gaussian outside the grid box, both bases."""
    x = spec.positions()
    k = spec.momenta()
    total = 0.0
    # |psi|^2 ~ exp(-(x-c)^2 / w^2); tail beyond distance d is erfc(d/w)/2
    total += 0.5 * _erfc(max(c - x[0], 0.0) / w)
    total += 0.5 * _erfc(max(x[-1] - c, 0.0) / w)
    # Fourier side: |psi_hat|^2 ~ exp(-4 pi^2 w^2 (k-m)^2)
    total += 0.5 * _erfc(2.0 * np.pi * w * max(m - k[0], 0.0))
    total += 0.5 * _erfc(2.0 * np.pi * w * max(k[-1] - m, 0.0))
    return float(total)


def gaussian_packet(
    spec: LatticeSpec,
    packet: GaussianPacket,
    clip_tolerance: float = 1e-10,
    dtype=np.complex128,
) -> StateVector:
    """Normalized product of per-axis Gaussians with phase factors."""
    if len(packet.centers) != spec.n_factors:
        raise SpecMismatch(
            f"packet has {len(packet.centers)} axes, grid {spec.n_factors}"
        )
    x = spec.positions()
    data = None
    for c, m, w in zip(packet.centers, packet.momenta, packet.widths):
        clip = _clip_estimate(spec, c, m, w)
        if clip > clip_tolerance:
            raise BoundaryClipping(
                f"estimated boundary mass {clip:.2e} exceeds "
                f"{clip_tolerance:.1e}"
            )
        g = np.exp(-((x - c) ** 2) / (2.0 * w * w) + 2j * np.pi * m * x)
        g = g / np.linalg.norm(g)
        data = g if data is None else np.multiply.outer(data, g)
    return StateVector(spec, data.astype(dtype))


def random_packets(
    spec: LatticeSpec,
    count: int,
    seed: int,
    width_range: tuple = (0.45, 0.8),
    offset_fraction: float = 0.15,
    clip_tolerance: float = 1e-10,
    dtype=np.complex128,
):
    """Fixed-seed ensemble of interior Gaussian packets."""
    rng = np.random.default_rng(seed)
    x = spec.positions()
    k = spec.momenta()
    out = []
    for _ in range(count):
        centers = tuple(
            rng.uniform(-offset_fraction, offset_fraction) * x[-1]
            for _ in range(spec.n_factors)
        )
        momenta = tuple(
            rng.uniform(-offset_fraction, offset_fraction) * k[-1]
            for _ in range(spec.n_factors)
        )
        widths = tuple(
            rng.uniform(*width_range) for _ in range(spec.n_factors)
        )
        out.append(
            gaussian_packet(
                spec,
                GaussianPacket(centers, momenta, widths),
                clip_tolerance=clip_tolerance,
                dtype=dtype,
            )
        )
    return out


def expectation_position(state: StateVector, axis: int) -> float:
    prob = np.abs(state.data) ** 2
    prob /= prob.sum()
    axes = tuple(a for a in range(state.spec.n_factors) if a != axis)
    marginal = prob.sum(axis=axes) if axes else prob
    return float(np.dot(marginal, state.spec.positions()))


def expectation_momentum(state: StateVector, axis: int) -> float:
    data = np.array(state.data, copy=True)
    data = _fourier(data, axis, +1, _workers())
    prob = np.abs(data) ** 2
    prob /= prob.sum()
    axes = tuple(a for a in range(state.spec.n_factors) if a != axis)
    marginal = prob.sum(axis=axes) if axes else prob
    return float(np.dot(marginal, state.spec.momenta()))


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def _quad_phase(gamma: float):
    return lambda x: np.exp(1j * np.pi * gamma * x * x)


def _cross_phase(sign: int):
    return lambda xi, xj: np.exp(2j * np.pi * sign * xi * xj)


def build_A(axis: int, p: ModularParameter) -> OperatorProgram:
    """Order-three unitary: conjugation sends q -> p - q and p -> -q.

    Realized as quadratic-phase diagonals around one momentum diagonal;
    the central Gaussian of the squared sum of the pair was reduced via
    the conjugation e^{i pi q^2} p e^{-i pi q^2} = p - q.
    """
    return OperatorProgram(
        (
            DiagPosition(axis, _quad_phase(1.0)),
            DiagMomentum(axis, _quad_phase(1.0)),
            DiagPosition(axis, _quad_phase(2.0)),
            Scalar(np.exp(-1j * np.pi / 3.0)),
        )
    )


def _eb_diag(p: ModularParameter, invert: bool, scale: float = 1.0):
    cfg = QuadratureConfig()

    def fn(k):
        vals = eb_many(np.asarray(k, dtype=np.complex128) * scale, p, cfg)
        return 1.0 / vals if invert else vals

    return fn


def build_T(i: int, j: int, p: ModularParameter) -> OperatorProgram:
    """Two-factor dilogarithm transformer on axes (i, j).

    Multiplies the shifted-argument dilogarithm reciprocal (argument
    q_i + p_j - q_j, reduced to a momentum diagonal on axis j by a
    quadratic and a cross-term phase) and follows with the shear that
    translates axis i by axis j.
    """
    if i == j:
        raise IdenticalAxes("transformer needs two distinct axes")
    return OperatorProgram(
        (
            DiagPosition(j, _quad_phase(-1.0)),
            DiagMulti((i, j), _cross_phase(+1)),
            DiagMomentum(j, _eb_diag(p, invert=True)),
            DiagMulti((i, j), _cross_phase(-1)),
            DiagPosition(j, _quad_phase(1.0)),
            Shear(i, j, +1),
        )
    )


def build_R(
    p: ModularParameter,
    axes: tuple = (0, 1, 2, 3),
    variant: str = "plain",
) -> OperatorProgram:
    """Braiding operator on two factor pairs (axes[0:2], axes[2:4]).

    variant "plain" is the explicit eight-factor composite; "conjugate"
    rewrites it with the inner transformer pair conjugated; "twisted"
    uses the conjugated-transformer product form.  All variants agree on
    packets to the grid residual.
    """
    a1, a2, a3, a4 = axes
    A = lambda ax: build_A(ax, p)  # noqa: E731
    T = lambda u, v: build_T(u, v, p)  # noqa: E731
    if variant == "plain":
        # composite: first conjugate pair, four transformers, unconjugate
        return sequence(
            A(a3).inverse(),
            A(a1),
            T(a3, a2),
            T(a4, a2),
            T(a3, a1),
            T(a4, a1),
            A(a3),
            A(a1).inverse(),
        )
    if variant == "twisted":
        inner = sequence(T(a4, a3), A(a4).inverse(), T(a1, a2).inverse(),
                         A(a2))
        return sequence(inner.inverse(), T(a2, a4), inner)
    if variant == "conjugate":
        return sequence(
            A(a3).inverse(),
            T(a3, a2),
            A(a3),
            T(a4, a2),
            T(a1, a3),
            A(a4),
            T(a1, a4),
            A(a4).inverse(),
        )
    raise ParameterError(f"unknown variant {variant!r}")


def build_dehn(p: ModularParameter) -> OperatorProgram:
    """Normalized twist on a two-factor grid.

    Composite of the half-sum quadratic phase (reduced to a momentum
    diagonal by cross-term conjugation) with an inverse transformer and
    a scalar normalization.
    """
    half_quad = OperatorProgram(
        (
            DiagMulti((0, 1), _cross_phase(+1)),
            DiagMomentum(0, lambda k: np.exp(0.5j * np.pi * k * k)),
            DiagMulti((0, 1), _cross_phase(-1)),
        )
    )
    scalar = OperatorProgram((Scalar(p.zeta ** (-6)),))
    return sequence(half_quad, build_T(0, 1, p).inverse(), scalar)


def build_dehn_single(p: ModularParameter) -> OperatorProgram:
    """Single-factor form of the twist in the reduced pair variables."""
    cb2 = p.c_b * p.c_b

    def tail(x):
        return np.exp(1j * np.pi * x * x) * np.exp(-2j * np.pi * cb2)

    return OperatorProgram(
        (
            DiagPosition(0, _quad_phase(1.0)),
            DiagMomentum(0, _eb_diag(p, invert=False)),
            DiagPosition(0, tail),
        )
    )


def build_L(sign: int, p: ModularParameter) -> OperatorSum:
    """Positive transfer-operator pair: cosh diagonal plus exp momentum.

    Not unitary; apply with :func:`apply_sum`.  The exponent scale is b
    for sign=+1 and 1/b for sign=-1.
    """
    rate = p.b if sign > 0 else 1.0 / p.b

    def cosh_term(x):
        return 2.0 * np.cosh(2.0 * np.pi * rate * x)

    def exp_term(k):
        return np.exp(2.0 * np.pi * rate * k)

    return OperatorSum(
        (
            OperatorProgram((DiagPosition(0, cosh_term),)),
            OperatorProgram((DiagMomentum(0, exp_term),)),
        )
    )


def build_basis_change(p: ModularParameter) -> OperatorProgram:
    """Two-factor change of variables isolating the twist-invariant pair.

    Conjugation by the returned program carries the four combinations
    (half-sum phase variable, its conjugate momentum, reduced position,
    reduced momentum) onto the plain grid operators (q_0, p_0, q_1, p_1).
    The word was found by exact symplectic row reduction over the
    primitive generators; expectation-transport tests pin it down.
    """
    return OperatorProgram(
        (
            FourierAxis(0, +1),
            Shear(0, 1, -1),
            DiagMomentum(0, _quad_phase(-1.0)),
            DiagPosition(0, _quad_phase(1.0)),
            DiagMomentum(0, _quad_phase(0.5)),
            Shear(1, 0, +1),
            DiagMulti((0, 1), _cross_phase(-1)),
            DiagPosition(0, _quad_phase(-1.0)),
        )
    )


# ---------------------------------------------------------------------------
# Relation catalog and residual metric
# ---------------------------------------------------------------------------

RELATION_NAMES = (
    "order-three",
    "pentagon",
    "braid-mixed",
    "braid-permutation",
    "yang-baxter",
    "r-form-equivalence",
)


def relation_programs(
    name: str,
    p: ModularParameter,
    scalar_factor: complex = 1.0,
):
    """Left and right side programs plus the factor count for a relation.

    ``scalar_factor`` perturbs the scalar of the permutation relation so
    tests can confirm the exact constant is detected.
    """
    A = lambda ax: build_A(ax, p)  # noqa: E731
    T = lambda u, v: build_T(u, v, p)  # noqa: E731
    if name == "order-three":
        lhs = sequence(A(0), A(0), A(0))
        return lhs, identity_program(), 1
    if name == "pentagon":
        lhs = sequence(T(1, 2), T(0, 2), T(0, 1))
        rhs = sequence(T(0, 1), T(1, 2))
        return lhs, rhs, 3
    if name == "braid-mixed":
        lhs = sequence(A(1), T(0, 1), A(0))
        rhs = sequence(A(0), T(1, 0), A(1))
        return lhs, rhs, 2
    if name == "braid-permutation":
        lhs = sequence(T(1, 0), A(0), T(0, 1))
        rhs = sequence(
            OperatorProgram((PermuteFactors((1, 0)),)),
            A(1),
            A(0),
        ).scaled(p.zeta * scalar_factor)
        return lhs, rhs, 2
    if name == "yang-baxter":
        r12 = build_R(p, (0, 1, 2, 3))
        r13 = build_R(p, (0, 1, 4, 5))
        r23 = build_R(p, (2, 3, 4, 5))
        lhs = sequence(r23, r13, r12)
        rhs = sequence(r12, r13, r23)
        return lhs, rhs, 6
    if name == "r-form-equivalence":
        lhs = build_R(p, (0, 1, 2, 3), "plain")
        rhs = build_R(p, (0, 1, 2, 3), "twisted")
        return lhs, rhs, 4
    raise ParameterError(f"unknown relation {name!r}")


def relation_residual(
    lhs: OperatorProgram,
    rhs: OperatorProgram,
    vectors,
    mode: str = "chain",
    dtype=None,
    workers: int | None = None,
) -> float:
    """Mean relative l2 difference of the two programs on test vectors.

    chain mode computes ||inverse(rhs) lhs v - v|| / ||v||, which equals
    the direct difference whenever rhs is unitary but touches a single
    working vector (matters on large grids).
    """
    vals = []
    if mode == "chain":
        prog = lhs.then(rhs.inverse())
        for v in vectors:
            out = apply_program(prog, v, dtype=dtype, workers=workers)
            vals.append(
                float(np.linalg.norm((out.data - v.data.astype(
                    out.data.dtype)).ravel()))
                / float(np.linalg.norm(v.data.ravel()))
            )
    elif mode == "direct":
        for v in vectors:
            a = apply_program(lhs, v, dtype=dtype, workers=workers)
            b = apply_program(rhs, v, dtype=dtype, workers=workers)
            denom = max(a.norm(), b.norm())
            vals.append(
                float(np.linalg.norm((a.data - b.data).ravel())) / denom
            )
    else:
        raise ParameterError(f"unknown mode {mode!r}")
    return float(np.mean(vals))


def relation_record(
    name: str,
    spec: LatticeSpec,
    residual: float,
    seed: int,
) -> dict:
    """JSON-ready record for one relation measurement."""
    return {
        "relation": name,
        "n_points": spec.n_points,
        "n_factors": spec.n_factors,
        "residual": residual,
        "seed": seed,
    }
