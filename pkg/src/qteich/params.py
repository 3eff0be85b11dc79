"""Modular parameter of the noncompact quantum dilogarithm.

The single coupling constant ``b`` determines everything else: the strip
half-width ``c_b = i(b + 1/b)/2``, the two deformation nomes ``q`` and
``qbar``, and the central scalar ``zeta`` that shows up in the operator
identities.  The normalization is ``Re b > 0`` with ``Im b >= 0``; the
function is invariant under ``b -> 1/b`` and ``b -> -b``, so this half
quadrant covers every distinct parameter.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

from .errors import ParameterError

_UNITARY_TOL = 1e-12


@dataclass(frozen=True)
class ModularParameter:
    """Coupling constant ``b`` together with its derived quantities.

    Attributes:
        b: the coupling constant, ``Re b > 0`` and ``Im b >= 0``.
        c_b: strip half-width parameter ``i (b + 1/b) / 2``.
        q: nome ``exp(i pi b^2)``.
        qbar: dual nome ``exp(-i pi / b^2)``.
        zeta: central scalar ``exp(i pi c_b^2 / 3)``.
        unitary_regime: True when ``(1 - |b|) Im b == 0``, i.e. ``b`` real or
            on the unit circle; there the function has unit modulus on the
            real line.
    """

    b: complex
    c_b: complex = field(init=False)
    q: complex = field(init=False)
    qbar: complex = field(init=False)
    zeta: complex = field(init=False)
    unitary_regime: bool = field(init=False)

    def __post_init__(self) -> None:
        b = complex(self.b)
        if not (b.real > 0.0):
            raise ParameterError(f"need Re b > 0, got b = {b}")
        if b.imag < 0.0:
            raise ParameterError(f"need Im b >= 0, got b = {b}")
        object.__setattr__(self, "b", b)
        c_b = 0.5j * (b + 1.0 / b)
        object.__setattr__(self, "c_b", c_b)
        object.__setattr__(self, "q", cmath.exp(1j * cmath.pi * b * b))
        object.__setattr__(self, "qbar", cmath.exp(-1j * cmath.pi / (b * b)))
        object.__setattr__(self, "zeta", cmath.exp(1j * cmath.pi * c_b * c_b / 3.0))
        unitary = abs((1.0 - abs(b)) * b.imag) < _UNITARY_TOL
        object.__setattr__(self, "unitary_regime", unitary)

    @property
    def strip_half_width(self) -> float:
        """Half-width ``|Im c_b|`` of the analyticity strip around the real line."""
        return abs(self.c_b.imag)

    def inverse(self) -> "ModularParameter":
        """Parameter with ``b`` replaced by ``1/b`` (the same function).

        Only real ``b`` keeps ``1/b`` inside the normalized quadrant; for
        complex ``b`` the constructor rejects the reflected value.
        """
        return ModularParameter(1.0 / self.b)

    def product_regime(self) -> bool:
        """True when ``Im b^2 > 0`` so the infinite-product form converges."""
        return (self.b * self.b).imag > 0.0
