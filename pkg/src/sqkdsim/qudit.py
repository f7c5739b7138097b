"""Exact statevector math for the 3-, 9- and 27-level carriers.

The protocol uses two composite bases of a 9x3-dimensional product space:

* ``S1``: the computational product basis, whose a-th element is
  ``|a> (x) |a mod 3>`` for a in 0..8;
* ``S2``: the subsystem-wise discrete-Fourier images of the S1 elements.

All 81 cross-overlaps between S1 and S2 elements have squared modulus 1/27,
i.e. the two composite sets are mutually unbiased.  Composite states are
always separable here, so they are represented as ordered pairs of subsystem
:class:`StateVector` values and never as 27-dimensional arrays.

Fourier convention: entry ``(j, k)`` of the transform is
``exp(+2*pi*i*j*k/d) / sqrt(d)``.  The opposite sign is equally consistent
and produces identical protocol statistics; the positive sign is used
everywhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatchError, NormalizationError
from .rng import RngStream

#: Tolerance for normalization and unitarity checks.
NORM_TOL = 1e-9

#: Outcome probabilities below this floor are treated as exactly zero, so
#: measuring an eigenstate of the measurement basis is deterministic even in
#: the presence of double-precision rounding.
PROB_FLOOR = 1e-12

#: Hilbert-space dimensions the simulator supports.
SUPPORTED_DIMS = (3, 9, 27)


class Basis(Enum):
    """Basis tags: composite (S1/S2) and single-subsystem counterparts."""

    S1 = "s1"
    S2 = "s2"
    COMPUTATIONAL = "computational"
    FOURIER = "fourier"

    @property
    def is_composite(self) -> bool:
        return self in (Basis.S1, Basis.S2)

    @property
    def subsystem(self) -> "Basis":
        """Single-subsystem basis corresponding to a composite tag."""
        if self is Basis.S1:
            return Basis.COMPUTATIONAL
        if self is Basis.S2:
            return Basis.FOURIER
        return self


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized complex amplitude vector of dimension 3, 9 or 27."""

    dim: int
    amps: np.ndarray

    def __post_init__(self):
        if self.dim not in SUPPORTED_DIMS:
            raise DimensionMismatchError(
                f"dim must be one of {SUPPORTED_DIMS}, got {self.dim}"
            )
        amps = np.asarray(self.amps, dtype=np.complex128)
        if amps.shape != (self.dim,):
            raise DimensionMismatchError(
                f"amplitude vector has shape {amps.shape}, expected ({self.dim},)"
            )
        norm_sq = float(np.real(np.vdot(amps, amps)))
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise NormalizationError(
                f"state norm^2 = {norm_sq!r} deviates from 1 beyond {NORM_TOL}"
            )
        if amps.flags.writeable:
            amps = amps.copy()
            amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.amps, other.amps)

    def __repr__(self) -> str:
        return f"StateVector(dim={self.dim}, amps={np.round(self.amps, 6)!r})"


@dataclass(frozen=True)
class MeasurementOutcome:
    """Result of a projective, non-degenerate basis measurement."""

    index: int
    post_state: StateVector


@lru_cache(maxsize=None)
def _basis_amps(dim: int, k: int) -> np.ndarray:
    amps = np.zeros(dim, dtype=np.complex128)
    amps[k] = 1.0
    amps.setflags(write=False)
    return amps


def basis_state(dim: int, k: int) -> StateVector:
    """Computational basis vector |k> of the given dimension."""
    if not 0 <= k < dim:
        raise ValueError(f"basis index {k} out of range for dim {dim}")
    return StateVector(dim, _basis_amps(dim, k))


@lru_cache(maxsize=None)
def _fourier_cached(d: int, sign: int) -> np.ndarray:
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    matrix = np.exp(sign * 2j * np.pi * j * k / d) / np.sqrt(d)
    matrix.setflags(write=False)
    return matrix

def fourier_matrix(d: int, *, sign: int = +1) -> np.ndarray:
    """Discrete Fourier transform matrix of dimension d.

    Entry ``(j, k)`` is ``exp(sign * 2*pi*i*j*k/d) / sqrt(d)``.  The returned
    array is read-only.  ``sign`` selects the exponent convention; both signs
    give unitary matrices and identical measurement statistics.

    Raises:
        ValueError: if d < 2.
    """
    if d < 2:
        raise ValueError(f"Fourier transform needs dimension >= 2, got {d}")
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return _fourier_cached(d, sign)


def fourier_state(dim: int, k: int) -> StateVector:
    """Fourier basis vector F|k>, i.e. column k of the transform."""
    if not 0 <= k < dim:
        raise ValueError(f"basis index {k} out of range for dim {dim}")
    return StateVector(dim, fourier_matrix(dim)[:, k])


def prepare_s1(a: int) -> tuple[StateVector, StateVector]:
    """The a-th element of S1 as a (9-dim, 3-dim) subsystem pair.

    The first subsystem carries |a> and the second |a mod 3>.
    """
    if not 0 <= a <= 8:
        raise ValueError(f"preparation index must be in 0..8, got {a}")
    return basis_state(9, a), basis_state(3, a % 3)


def prepare_s2(a: int) -> tuple[StateVector, StateVector]:
    """The a-th element of S2: subsystem-wise Fourier images of the S1 element."""
    if not 0 <= a <= 8:
        raise ValueError(f"preparation index must be in 0..8, got {a}")
    return fourier_state(9, a), fourier_state(3, a % 3)


def overlap(u: StateVector, v: StateVector) -> complex:
    """Inner product <u|v> (conjugation on u)."""
    if u.dim != v.dim:
        raise DimensionMismatchError(f"overlap of dims {u.dim} and {v.dim}")
    return complex(np.vdot(u.amps, v.amps))


def _outcome_probabilities(state: StateVector, basis: Basis) -> np.ndarray:
    if basis is Basis.COMPUTATIONAL:
        probs = np.abs(state.amps) ** 2
    else:
        coeffs = fourier_matrix(state.dim).conj().T @ state.amps
        probs = np.abs(coeffs) ** 2
    probs[probs < PROB_FLOOR] = 0.0
    total = probs.sum()
    if abs(total - 1.0) > NORM_TOL:
        raise NormalizationError(
            f"outcome probabilities sum to {total!r}, beyond tolerance {NORM_TOL}"
        )
    return probs / total


def measure(state: StateVector, basis: Basis, rng: RngStream) -> MeasurementOutcome:
    """Projective measurement of a single subsystem state.

    Outcome k is sampled with probability ``|<basis_k|state>|^2`` from exactly
    one rng draw; the post-measurement state is basis vector k.

    Args:
        state: normalized state to measure.
        basis: ``COMPUTATIONAL`` or ``FOURIER`` (composite tags are rejected;
            use ``basis.subsystem`` for the per-subsystem counterpart).
        rng: stream supplying the single sampling draw.

    Returns:
        MeasurementOutcome with the sampled index and collapsed state.
    """
    if basis.is_composite:
        raise ValueError(
            f"measure() acts on one subsystem; use {basis}.subsystem, not {basis}"
        )
    probs = _outcome_probabilities(state, basis)
    u = rng.uniform()
    index = int(np.searchsorted(np.cumsum(probs), u, side="right"))
    index = min(index, state.dim - 1)
    if basis is Basis.COMPUTATIONAL:
        post = basis_state(state.dim, index)
    else:
        post = fourier_state(state.dim, index)
    return MeasurementOutcome(index=index, post_state=post)
