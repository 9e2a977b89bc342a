"""Cycle unitaries for the three-geodesic loop |00> -> psi2 -> psi3 -> |00>.

All matrices are 4x4 in the basis |00>, |01>, |10>, |11>.  The loop lives in
span{|00>, |10>, |11>}; |01> is the interferometric reference and every
cycle unitary leaves it untouched.

Argument binding of the SU(2)_23 factors: ``rot_R23(mix, ph1, ph2)`` follows
the displayed matrix (``mix`` in cos/sin, ``ph1`` on the diagonal phases,
``ph2`` on the off-diagonal phases).  The conjugators of the cycle are
``conjugator(a, b, c) = rot_R23(-b, a, c)``: the first argument is a phase and
the second a (negated) mixing angle.  This is the binding under which
U2(s2_0) psi2 equals the closed-form psi3 (with a non-negative |11>
amplitude) and U3(s3_0) psi3 lands on exp(i beta)|00>; see
``tests/test_evolution.py::test_conjugator_binding``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from geophase.geometry import (
    FunctionCurve,
    PhaseReport,
    QuadratureConfig,
    bargmann_gp,
    dynamical_phase,
    total_phase,
)
from geophase.statespace import REFERENCE_INDEX, wrap_angle

CLOSURE_TOL = 1e-8
REPARAM_TOL = 1e-10
# below this |<psi1|psi3>| the closing geodesic is not unique
ORTHO_TOL = 1e-12

KET00 = np.array([1, 0, 0, 0], dtype=complex)
KET01 = np.array([0, 1, 0, 0], dtype=complex)


class CycleError(ValueError):
    pass


@dataclass(frozen=True)
class CycleParams:
    s1_0: float
    s2_0: float
    theta: float
    varphi: float

    def __post_init__(self):
        for name in ("s1_0", "s2_0", "varphi"):
            val = getattr(self, name)
            if not 0.0 <= val <= math.pi / 2:
                raise CycleError(f"{name} = {val!r} outside [0, pi/2]")
        if not math.isfinite(self.theta):
            raise CycleError("theta must be finite")
        if abs(closure_amplitude(self)) < ORTHO_TOL:
            raise CycleError("beta undefined (orthogonal closure): psi3 is orthogonal to |00>")


@dataclass(frozen=True)
class Reparam:
    xi: float
    chi: float
    tau: float
    s3_0: float

    def state(self) -> np.ndarray:
        c, s = math.cos(self.s3_0), math.sin(self.s3_0)
        return np.array(
            [
                np.exp(1j * self.xi) * c,
                0.0,
                np.exp(1j * (self.xi + self.chi)) * s * math.cos(self.tau),
                s * math.sin(self.tau),
            ],
            dtype=complex,
        )


def closure_amplitude(c: CycleParams) -> complex:
    """<00|psi3> = cos s1 cos s2 - e^{i theta} sin s1 sin s2 cos varphi."""
    return (math.cos(c.s1_0) * math.cos(c.s2_0)
            - np.exp(1j * c.theta) * math.sin(c.s1_0) * math.sin(c.s2_0) * math.cos(c.varphi))


def rot_R(s: float) -> np.ndarray:
    c, sn = math.cos(s), math.sin(s)
    return np.array(
        [
            [c, 0, -sn, 0],
            [0, 1, 0, 0],
            [sn, 0, c, 0],
            [0, 0, 0, 1],
        ],
        dtype=complex,
    )


def rot_R23(mix: float, ph1: float, ph2: float) -> np.ndarray:
    c, s = math.cos(mix), math.sin(mix)
    u = np.eye(4, dtype=complex)
    u[2, 2] = np.exp(1j * ph1) * c
    u[2, 3] = np.exp(-1j * ph2) * s
    u[3, 2] = -np.exp(1j * ph2) * s
    u[3, 3] = np.exp(-1j * ph1) * c
    return u


def conjugator(a: float, b: float, c: float) -> np.ndarray:
    """The R_23(a, b, c) factor as it appears inside the cycle unitaries."""
    return rot_R23(-b, a, c)


def psi2(c: CycleParams) -> np.ndarray:
    return np.array([math.cos(c.s1_0), 0.0, math.sin(c.s1_0), 0.0], dtype=complex)


def psi3(c: CycleParams) -> np.ndarray:
    c1, s1 = math.cos(c.s1_0), math.sin(c.s1_0)
    c2, s2 = math.cos(c.s2_0), math.sin(c.s2_0)
    ph = np.exp(1j * c.theta)
    cv = math.cos(c.varphi)
    return np.array(
        [
            c1 * c2 - ph * s1 * s2 * cv,
            0.0,
            s1 * c2 + ph * c1 * s2 * cv,
            math.sin(c.varphi) * s2,
        ],
        dtype=complex,
    )


def reparametrize(v) -> Reparam:
    """Solve v = e^{i xi}cos s3|00> + e^{i(xi+chi)} sin s3 cos tau|10> + sin s3 sin tau|11>.

    Undetermined angles follow fixed conventions: xi = 0 when cos s3 = 0,
    chi = 0 when the |10> amplitude vanishes, tau = chi = 0 when s3 = 0.
    """
    v = np.asarray(v, dtype=complex)
    if v.shape != (4,):
        raise CycleError("reparametrize expects a four-level vector")
    if abs(v[REFERENCE_INDEX]) > REPARAM_TOL:
        raise CycleError("reference-state leakage into |01>")
    a, b, d = v[0], v[2], v[3]
    if abs(d.imag) > REPARAM_TOL or d.real < -REPARAM_TOL:
        raise CycleError("|11> amplitude must be real and non-negative")
    d = max(d.real, 0.0)
    ma, mb = abs(a), abs(b)
    rest = math.hypot(mb, d)
    s3_0 = math.atan2(rest, ma)
    xi = float(np.angle(a)) if ma > REPARAM_TOL else 0.0
    if rest > REPARAM_TOL:
        tau = math.atan2(d, mb)
        chi = wrap_angle(float(np.angle(b)) - xi) if mb > REPARAM_TOL else 0.0
    else:
        tau, chi = 0.0, 0.0
    rp = Reparam(xi=xi, chi=chi, tau=tau, s3_0=s3_0)
    if np.linalg.norm(rp.state() - v) > REPARAM_TOL:
        raise CycleError("reparametrization failed to reconstruct the state")
    return rp


def u1_family(c: CycleParams) -> Callable[[float], np.ndarray]:
    return rot_R


def u2_family(c: CycleParams) -> Callable[[float], np.ndarray]:
    outer = rot_R(c.s1_0) @ conjugator(c.theta, c.varphi, 0.0)
    inner = outer.conj().T

    def u2(s: float) -> np.ndarray:
        return outer @ rot_R(s) @ inner

    return u2


def u3_family(c: CycleParams) -> Callable[[float], np.ndarray]:
    rp = reparametrize(psi3(c))
    w = conjugator(rp.chi, rp.tau, -rp.xi)
    winv = w.conj().T

    def u3(s: float) -> np.ndarray:
        return w @ rot_R(-s) @ winv

    return u3


def cycle_unitaries(c: CycleParams):
    """Return the three one-parameter families (U1, U2, U3).

    Raises ``CycleError`` ("convention mismatch") if the endpoint unitaries
    do not map |00> -> psi2 -> psi3 -> e^{i beta}|00>.
    """
    u1, u2, u3 = u1_family(c), u2_family(c), u3_family(c)
    s3_0 = reparametrize(psi3(c)).s3_0
    p2 = u1(c.s1_0) @ KET00
    p3 = u2(c.s2_0) @ p2
    p1 = u3(s3_0) @ p3
    expected = np.exp(1j * beta_predicted(c)) * KET00
    if (np.linalg.norm(p2 - psi2(c)) > CLOSURE_TOL
            or np.linalg.norm(p3 - psi3(c)) > CLOSURE_TOL
            or np.linalg.norm(p1 - expected) > CLOSURE_TOL):
        raise CycleError("convention mismatch: cycle unitaries do not close")
    return u1, u2, u3


def beta_predicted(c: CycleParams) -> float:
    amp = closure_amplitude(c)
    if abs(amp) < ORTHO_TOL:
        raise CycleError("beta undefined (orthogonal closure)")
    return wrap_angle(float(np.angle(amp)))


def beta_bargmann(c: CycleParams) -> float:
    return bargmann_gp([KET00, psi2(c), psi3(c)])


def cycle_legs(c: CycleParams) -> list[FunctionCurve]:
    """The three lifts s -> U_k(s) (state at the start of leg k)."""
    u1, u2, u3 = cycle_unitaries(c)
    s3_0 = reparametrize(psi3(c)).s3_0
    start2 = u1(c.s1_0) @ KET00
    start3 = u2(c.s2_0) @ start2
    return [
        FunctionCurve(lambda s: u1(s) @ KET00, 0.0, c.s1_0),
        FunctionCurve(lambda s: u2(s) @ start2, 0.0, c.s2_0),
        FunctionCurve(lambda s: u3(s) @ start3, 0.0, s3_0),
    ]


def run_cycle(c: CycleParams, quad: QuadratureConfig = QuadratureConfig()) -> PhaseReport:
    legs = cycle_legs(c)
    end = legs[-1].point(legs[-1].s_end)
    tot = total_phase(KET00, end)
    dyn = sum(dynamical_phase(leg, quad) for leg in legs)
    return PhaseReport(total=tot, dynamical=dyn, geometric=wrap_angle(tot - dyn))


def leg_dynamical_phases(c: CycleParams, quad: QuadratureConfig = QuadratureConfig()) -> list[float]:
    return [dynamical_phase(leg, quad) for leg in cycle_legs(c)]
