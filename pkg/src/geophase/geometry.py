"""Ray-space geodesics, phase functionals and the Bargmann-invariant phase.

Sign convention (checked against the closed-form cycle phase in
``geophase.evolution``): for a geodesic polygon through rays
rho_1, ..., rho_n the geometric phase is

    beta = -arg( <psi_1|psi_2> <psi_2|psi_3> ... <psi_n|psi_1> ).

Following the phase-aligned geodesic lifts around the polygon returns
psi_1 multiplied by exp(i beta), with zero dynamical phase, so the
quadrature route ``total - dynamical`` reproduces the same number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from geophase.quadrature import QuadratureConfig, QuadratureError, adaptive_simpson
from geophase.statespace import as_state, overlap, projector, wrap_angle

__all__ = [
    "FunctionCurve",
    "GeodesicArc",
    "GeometryError",
    "PhaseReport",
    "PolygonPath",
    "QuadratureConfig",
    "QuadratureError",
    "arc_point",
    "bargmann_gp",
    "bargmann_invariant",
    "dynamical_phase",
    "geometric_phase",
    "make_geodesic",
    "make_polygon",
    "total_phase",
]

# overlaps smaller than this count as orthogonal
ORTHO_TOL = 1e-12
# perpendicular component below this makes an arc degenerate (s_max = 0)
DEGENERATE_TOL = 1e-14
FD_STEP = 1e-5
JOIN_TOL = 1e-8


class GeometryError(ValueError):
    pass


class GeodesicArc:
    """Horizontal lift psi(s) = start cos s + direction sin s, 0 <= s <= s_max."""

    def __init__(self, start: np.ndarray, end_aligned: np.ndarray, direction: np.ndarray,
                 s_max: float):
        self.start = start
        self.end_aligned = end_aligned
        self.direction = direction
        self.s_max = s_max
        for arr in (start, end_aligned, direction):
            arr.setflags(write=False)

    s_start = 0.0

    @property
    def s_end(self) -> float:
        return self.s_max

    @property
    def degenerate(self) -> bool:
        return self.s_max == 0.0

    def point(self, s: float) -> np.ndarray:
        return arc_point(self, s)

    def tangent(self, s: float) -> np.ndarray:
        return -self.start * math.sin(s) + self.direction * math.cos(s)

    def __repr__(self):
        return f"GeodesicArc(s_max={self.s_max!r}, dim={self.start.shape[0]})"


@dataclass(frozen=True)
class FunctionCurve:
    """A lift given by an arbitrary callable s -> psi(s).

    Without an explicit ``derivative`` the tangent is taken from central
    differences with one Richardson extrapolation level.
    """

    func: Callable[[float], np.ndarray]
    s_start: float
    s_end: float
    derivative: Callable[[float], np.ndarray] | None = None
    step: float = FD_STEP

    def point(self, s: float) -> np.ndarray:
        return np.asarray(self.func(s), dtype=complex)

    def tangent(self, s: float) -> np.ndarray:
        if self.derivative is not None:
            return np.asarray(self.derivative(s), dtype=complex)
        h = self.step
        f = self.func
        d1 = (np.asarray(f(s + h)) - np.asarray(f(s - h))) / (2.0 * h)
        d2 = (np.asarray(f(s + h / 2)) - np.asarray(f(s - h / 2))) / h
        return (4.0 * d2 - d1) / 3.0


@dataclass(frozen=True)
class PhaseReport:
    total: float
    dynamical: float
    geometric: float


@dataclass(frozen=True)
class PolygonPath:
    vertices: tuple
    arcs: tuple = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.vertices)


def make_geodesic(psi_k, psi_k1) -> GeodesicArc:
    psi_k = as_state(psi_k)
    psi_k1 = as_state(psi_k1, dim=psi_k.shape[0])
    c = overlap(psi_k, psi_k1)
    mag = abs(c)
    if mag < ORTHO_TOL:
        raise GeometryError("no unique geodesic lift: endpoints are orthogonal")
    end = psi_k1 * (c.conjugate() / mag)
    perp = end - psi_k * mag
    pnorm = float(np.linalg.norm(perp))
    if pnorm < DEGENERATE_TOL:
        return GeodesicArc(psi_k.copy(), end, np.zeros_like(psi_k), 0.0)
    # atan2 keeps s_max accurate for nearly parallel endpoints
    s_max = math.atan2(pnorm, mag)
    return GeodesicArc(psi_k.copy(), end, perp / pnorm, s_max)


def arc_point(arc: GeodesicArc, s: float) -> np.ndarray:
    if not 0.0 <= s <= arc.s_max:
        raise GeometryError(f"arc parameter {s!r} outside [0, {arc.s_max!r}]")
    if s == 0.0:
        return np.array(arc.start)
    return arc.start * math.cos(s) + arc.direction * math.sin(s)


def total_phase(v, w) -> float:
    c = overlap(v, w)
    if abs(c) < ORTHO_TOL:
        raise GeometryError("total phase undefined: vanishing overlap")
    return wrap_angle(float(np.angle(c)))


def dynamical_phase(curve, quad: QuadratureConfig = QuadratureConfig()) -> float:
    """Integral of Im<psi|d psi/ds> over the curve (equals -int <psi|i d/ds|psi> ds)."""
    if not curve.s_start <= curve.s_end:
        raise GeometryError("curve must have s_start <= s_end")

    def integrand(s: float) -> float:
        return float(np.vdot(curve.point(s), curve.tangent(s)).imag)

    value, _ = adaptive_simpson(integrand, curve.s_start, curve.s_end, quad)
    return value


def _as_legs(curve) -> list:
    if isinstance(curve, (list, tuple)):
        legs = list(curve)
    else:
        legs = [curve]
    if not legs:
        raise GeometryError("empty curve")
    for prev, nxt in zip(legs, legs[1:]):
        gap = np.linalg.norm(prev.point(prev.s_end) - nxt.point(nxt.s_start))
        if gap > JOIN_TOL:
            raise GeometryError(f"curve legs do not join (gap {gap:.3e})")
    return legs


def geometric_phase(curve, quad: QuadratureConfig = QuadratureConfig()) -> PhaseReport:
    """Total minus dynamical phase of a curve or of a chain of curves."""
    legs = _as_legs(curve)
    first, last = legs[0], legs[-1]
    tot = total_phase(first.point(first.s_start), last.point(last.s_end))
    dyn = sum(dynamical_phase(leg, quad) for leg in legs)
    return PhaseReport(total=tot, dynamical=dyn, geometric=wrap_angle(tot - dyn))


def bargmann_invariant(vectors: Sequence, method: str = "overlap") -> complex:
    """<psi_1|psi_2>...<psi_n|psi_1>, or equivalently Tr(rho_1 ... rho_n)."""
    vecs = [as_state(v) for v in vectors]
    if len(vecs) < 3:
        raise GeometryError("a polygon needs at least three vertices")
    if method == "overlap":
        prod = 1.0 + 0j
        for a, b in zip(vecs, vecs[1:] + vecs[:1]):
            prod *= overlap(a, b)
        return prod
    if method == "trace":
        acc = np.eye(vecs[0].shape[0], dtype=complex)
        for v in vecs:
            acc = acc @ projector(v)
        return complex(np.trace(acc))
    raise ValueError(f"unknown method {method!r}")


def bargmann_gp(vectors: Sequence) -> float:
    vecs = [as_state(v) for v in vectors]
    if len(vecs) < 3:
        raise GeometryError("a polygon needs at least three vertices")
    for k, (a, b) in enumerate(zip(vecs, vecs[1:] + vecs[:1])):
        if abs(overlap(a, b)) < ORTHO_TOL:
            raise GeometryError(f"degenerate polygon: vertices {k} and {(k + 1) % len(vecs)} "
                                "are orthogonal")
    return wrap_angle(-float(np.angle(bargmann_invariant(vecs))))


def make_polygon(vectors: Sequence) -> PolygonPath:
    """Join the rays of ``vectors`` cyclically by phase-aligned geodesic lifts."""
    vecs = [as_state(v) for v in vectors]
    if len(vecs) < 3:
        raise GeometryError("a polygon needs at least three vertices")
    arcs = []
    current = vecs[0]
    for k, target in enumerate(vecs[1:] + vecs[:1]):
        arc = make_geodesic(current, target)
        if arc.degenerate:
            raise GeometryError(f"consecutive duplicate rays at vertex {k}")
        arcs.append(arc)
        current = arc.end_aligned
    return PolygonPath(vertices=tuple(projector(v) for v in vecs), arcs=tuple(arcs))
