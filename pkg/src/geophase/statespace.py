"""Three-level state vectors, rays and the octant+torus chart.

A three-level state is written as

    psi = e^{i eta} (e^{i chi1} cos(theta), e^{i chi2} sin(theta) cos(phi), sin(theta) sin(phi))

with theta, phi in [0, pi/2] (a point on the positive octant of S^2) and
chi1, chi2 in [0, 2 pi) (a point on a torus).  State vectors are plain
complex numpy arrays; dimension 3 uses the basis |00>, |10>, |11> and
dimension 4 the full two-qubit basis |00>, |01>, |10>, |11>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12
LEAKAGE_TOL = 1e-10
# amplitudes below this are treated as zero by the inverse chart
ZERO_AMP = 1e-12

# three-level index -> two-qubit index; |01> (index 1) is the reference state
EMBED_INDEX = (0, 2, 3)
REFERENCE_INDEX = 1

TWO_PI = 2.0 * math.pi


class LeakageError(ValueError):
    """A four-level vector has weight on the reference state |01>."""


def wrap_angle(x: float) -> float:
    """Reduce an angle to the principal interval (-pi, pi]."""
    r = math.remainder(float(x), TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    return r


def _wrap_2pi(x: float) -> float:
    r = math.fmod(x, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    # fmod of a tiny negative number can round up to exactly 2 pi
    return 0.0 if r >= TWO_PI else r


def as_state(v, dim: int | None = None) -> np.ndarray:
    """Validate and return ``v`` as a unit-norm complex vector."""
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1 or arr.shape[0] not in (3, 4):
        raise ValueError(f"state vector must have dimension 3 or 4, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"expected a dimension-{dim} state, got dimension {arr.shape[0]}")
    norm = np.linalg.norm(arr)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"state vector not normalized (norm = {norm!r})")
    return arr


@dataclass(frozen=True)
class ParamPoint:
    theta: float
    phi: float
    chi1: float
    chi2: float

    def __post_init__(self):
        for name in ("theta", "phi"):
            val = getattr(self, name)
            if not 0.0 <= val <= math.pi / 2:
                raise ValueError(f"{name} = {val} outside [0, pi/2]")
        for name in ("chi1", "chi2"):
            val = getattr(self, name)
            if not 0.0 <= val < TWO_PI:
                raise ValueError(f"{name} = {val} outside [0, 2 pi)")


def param_to_state(p: ParamPoint) -> np.ndarray:
    st, ct = math.sin(p.theta), math.cos(p.theta)
    return np.array(
        [
            np.exp(1j * p.chi1) * ct,
            np.exp(1j * p.chi2) * st * math.cos(p.phi),
            st * math.sin(p.phi),
        ],
        dtype=complex,
    )


def state_to_param(v) -> tuple[ParamPoint, float]:
    """Invert the chart, returning the point and the global phase eta.

    The gauge is fixed by making the last nonzero amplitude (searched in
    index order 2, 1, 0) real positive; a torus angle whose amplitude
    vanishes is set to 0.
    """
    v = as_state(v, dim=3)
    mags = np.abs(v)
    eta = 0.0
    for k in (2, 1, 0):
        if mags[k] > ZERO_AMP:
            eta = float(np.angle(v[k]))
            break
    u = v * np.exp(-1j * eta)

    theta = math.atan2(math.hypot(mags[1], mags[2]), mags[0])
    phi = math.atan2(mags[2], mags[1]) if math.hypot(mags[1], mags[2]) > ZERO_AMP else 0.0
    chi1 = _wrap_2pi(float(np.angle(u[0]))) if mags[0] > ZERO_AMP else 0.0
    chi2 = _wrap_2pi(float(np.angle(u[1]))) if mags[1] > ZERO_AMP else 0.0
    # the gauge-fixed amplitude may carry a tiny residual phase
    if mags[2] <= ZERO_AMP and mags[1] > ZERO_AMP:
        chi2 = 0.0
    elif mags[2] <= ZERO_AMP and mags[1] <= ZERO_AMP:
        chi1 = 0.0
    theta = min(max(theta, 0.0), math.pi / 2)
    phi = min(max(phi, 0.0), math.pi / 2)
    return ParamPoint(theta, phi, chi1, chi2), eta


def projector(v) -> np.ndarray:
    v = as_state(v)
    return np.outer(v, v.conj())


def is_ray(rho, tol: float = 1e-10) -> bool:
    """Check the rank-one projector conditions on ``rho``."""
    rho = np.asarray(rho, dtype=complex)
    return (
        np.allclose(rho, rho.conj().T, atol=NORM_TOL, rtol=0)
        and np.allclose(rho @ rho, rho, atol=tol, rtol=0)
        and abs(np.trace(rho) - 1.0) <= NORM_TOL
    )


def embed(v) -> np.ndarray:
    v = as_state(v, dim=3)
    w = np.zeros(4, dtype=complex)
    w[list(EMBED_INDEX)] = v
    return w


def extract(w) -> np.ndarray:
    w = as_state(w, dim=4)
    if abs(w[REFERENCE_INDEX]) > LEAKAGE_TOL:
        raise LeakageError(
            f"reference-state leakage: |01> amplitude {abs(w[REFERENCE_INDEX]):.3e}"
        )
    return w[list(EMBED_INDEX)].copy()


def overlap(v, w) -> complex:
    """Inner product <v|w>, conjugate-linear in ``v``."""
    v = np.asarray(v, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if v.shape != w.shape:
        raise ValueError(f"dimension mismatch: {v.shape} vs {w.shape}")
    return complex(np.vdot(v, w))
