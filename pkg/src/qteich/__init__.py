"""qteich: noncompact quantum dilogarithm, lattice operator calculus, and
mapping-class representations of triangulated surfaces.

The package is organized bottom-up:

* :mod:`qteich.params`, :mod:`qteich.quadrature`, :mod:`qteich.qdilog` —
  the special function, its evaluation strategies, and its identities.
* :mod:`qteich.identities` — the integral identity with two closed forms.
* :mod:`qteich.lattice` — finite Fourier lattices, operator programs, and
  the basic operator relations (rotation, flip, braiding, Yang-Baxter).
* :mod:`qteich.spectral` — length-operator eigenfunctions, orthogonality
  and completeness checks, and a discretized spectrum probe.
* :mod:`qteich.groupoid` — decorated triangulations, elementary moves,
  canned surfaces, move words, and their compilation to operators.
* :mod:`qteich.qgroup` — quantum-group generators, coproducts, and the
  kernel form of the braiding operator.
* :mod:`qteich.verification`, :mod:`qteich.cli` — named check suites and
  the ``qteich`` command-line entry point.
"""

from .errors import QTeichError
from .params import ModularParameter
from .qdilog import (
    PoleIndex,
    PoleZeroKind,
    eb,
    eb_asymptotic,
    eb_integral,
    eb_many,
    eb_product,
    inversion_constant,
    nearest_pole_zero,
    pole_zero_location,
    theta,
)
from .quadrature import QuadratureConfig

__all__ = [
    "ModularParameter",
    "PoleIndex",
    "PoleZeroKind",
    "QTeichError",
    "QuadratureConfig",
    "eb",
    "eb_asymptotic",
    "eb_integral",
    "eb_many",
    "eb_product",
    "inversion_constant",
    "nearest_pole_zero",
    "pole_zero_location",
    "theta",
]

__version__ = "0.1.0"
