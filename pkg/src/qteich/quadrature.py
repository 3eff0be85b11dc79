"""Trapezoid contour quadrature for the defining integral of the dilogarithm.

The logarithm of the function is an integral of
``exp(-2 i z w) / (4 w sinh(w b) sinh(w / b))`` along a horizontal line that
passes just above the origin.  The integrand is analytic in a strip around
that line (the nearest singularities are the triple pole at ``w = 0`` below
and the first ``sinh`` zeros above), so the trapezoid rule converges
geometrically in the node spacing: the discretization error scales like
``exp(-2 pi d / h)`` where ``d`` is the distance from the line to the nearest
singularity and ``h`` the spacing.  Tail truncation at ``|Re w| = R`` costs
``exp(-rate * R)`` with ``rate = 2 (strip - |Im z|)``.

Defaults aim both error terms at ~1e-18 so that the evaluated function is
accurate to full double precision after exponentiation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, QuadratureDivergence, StripViolation
from .params import ModularParameter

# exp(-42) ~ 6e-19: the shared target for discretization and truncation error.
_LOG_ERR_TARGET = 41.5

# Entries of the z-times-node outer product are capped per chunk.
_CHUNK_ENTRIES = 4_000_000


@dataclass(frozen=True)
class QuadratureConfig:
    """Tuning knobs for the contour quadrature and the shift continuation.

    Attributes:
        contour_offset: height of the integration line above the origin.
            ``None`` selects ``0.1 * strip_half_width``, which keeps the
            roundoff amplification ``exp(2 |Re z| * offset)`` mild for every
            argument this library evaluates.
        truncation_radius: half-length ``R`` of the integration window.
            ``None`` selects ``R`` from the tail decay rate of the integrand.
        node_count: explicit number of quadrature nodes; ``None`` selects the
            count from the analyticity width of the integrand.
        continuation_depth_max: maximum number of functional-equation shift
            steps the strip continuation may take.
        max_nodes: hard ceiling on automatic node selection; exceeding it
            raises :class:`QuadratureDivergence`.
    """

    contour_offset: float | None = None
    truncation_radius: float | None = None
    node_count: int | None = None
    continuation_depth_max: int = 64
    max_nodes: int = 500_000


def ladder_height(p: ModularParameter) -> float:
    """Height of the lowest ``sinh`` zero above the real ``w`` axis."""
    b = p.b
    return math.pi * min(b.real, (1.0 / b).real)


def resolve_nodes(
    z_imag_max: float, p: ModularParameter, cfg: QuadratureConfig
) -> tuple[float, float, float, int]:
    """Resolve (offset, spacing, radius, count) for a batch of arguments.

    ``z_imag_max`` is the largest ``|Im z|`` in the batch; it fixes the tail
    decay rate and therefore the truncation radius.
    """
    strip = p.strip_half_width
    h1 = ladder_height(p)
    eps = cfg.contour_offset if cfg.contour_offset is not None else 0.1 * strip
    if not 0.0 < eps < h1:
        raise ParameterError(
            f"contour offset {eps} outside (0, {h1}), the pole-free range"
        )
    rate = 2.0 * (strip - z_imag_max)
    if rate <= 0.0:
        raise StripViolation(
            f"|Im z| = {z_imag_max} is not inside the strip of half-width {strip}"
        )
    radius = (
        cfg.truncation_radius
        if cfg.truncation_radius is not None
        else (_LOG_ERR_TARGET + 1.0) / rate + 1.0
    )
    width = min(eps, h1 - eps)
    if cfg.node_count is not None:
        count = int(cfg.node_count)
        if count < 2:
            raise ParameterError("node_count must be at least 2")
        spacing = 2.0 * radius / (count - 1)
    else:
        spacing = 2.0 * math.pi * width / _LOG_ERR_TARGET
        count = int(2.0 * radius / spacing) + 2
        if count > cfg.max_nodes:
            raise QuadratureDivergence(
                f"{count} nodes needed (|Im z| = {z_imag_max}, strip {strip}) "
                f"exceeds the budget of {cfg.max_nodes}"
            )
    return eps, spacing, radius, count


def log_eb_on_line(
    z: np.ndarray, p: ModularParameter, cfg: QuadratureConfig
) -> np.ndarray:
    """Logarithm of the dilogarithm at strip-interior points, by quadrature.

    ``z`` is a 1-d complex array; every entry must satisfy
    ``|Im z| < strip_half_width`` strictly, or :class:`StripViolation` is
    raised.  Returns the principal value of the defining integral, which is
    the canonical branch of the logarithm of the function.
    """
    z = np.asarray(z, dtype=np.complex128)
    if z.ndim != 1:
        raise ParameterError("expected a 1-d array of evaluation points")
    if z.size == 0:
        return np.zeros(0, dtype=np.complex128)
    strip = p.strip_half_width
    im_max = float(np.max(np.abs(z.imag)))
    if im_max >= strip:
        raise StripViolation(
            f"point with |Im z| = {im_max} >= strip half-width {strip}"
        )
    eps, spacing, radius, _ = resolve_nodes(im_max, p, cfg)
    b = p.b
    # Nodes are exact integer multiples of the spacing, symmetric about 0;
    # this keeps the sampled grid free of cumulative rounding drift.
    half = int(radius / spacing) + 1
    line = np.arange(-half, half + 1) * spacing
    nodes = line + 1j * eps
    denom = 4.0 * nodes * np.sinh(nodes * b) * np.sinh(nodes / b)
    inv_denom = spacing / denom
    count = line.size
    out = np.empty(z.shape, dtype=np.complex128)
    block = max(1, _CHUNK_ENTRIES // count)
    for start in range(0, z.size, block):
        zz = z[start : start + block, None]
        out[start : start + block] = np.exp(-2j * zz * nodes[None, :]) @ inv_denom
    return out


def error_estimate(
    z: complex, p: ModularParameter, cfg: QuadratureConfig
) -> float:
    """A-priori bound on the quadrature error of ``log_eb_on_line`` at ``z``."""
    strip = p.strip_half_width
    im = abs(complex(z).imag)
    if im >= strip:
        raise StripViolation(f"|Im z| = {im} >= strip half-width {strip}")
    eps, spacing, radius, _ = resolve_nodes(im, p, cfg)
    width = min(eps, ladder_height(p) - eps)
    rate = 2.0 * (strip - im)
    osc = 2.0 * abs(complex(z).real) * (eps + width)
    discretization = math.exp(min(700.0, osc - 2.0 * math.pi * width / spacing))
    truncation = math.exp(-min(700.0, rate * radius))
    return discretization + truncation
