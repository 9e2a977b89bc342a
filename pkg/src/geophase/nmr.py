"""Idealized pulse-level simulation of a heteronuclear two-spin system.

Spin a (1H) is the first qubit and spin b (13C) the second; basis order is
|00>, |01>, |10>, |11> with |0> = spin up (I_z = +1/2).  Propagation happens
in the doubly rotating frame with both carriers on resonance, so free
evolution is generated by the scalar coupling 2 pi J I_z^a I_z^b alone.

Conventions:

* RF pulse R^spin_axis(angle) = exp(-i angle I_axis^spin), hard (zero length).
* Delay(t) = exp(-i 2 pi J t I_z^a I_z^b).
* GradientZ zeroes every off-diagonal element of rho (idealized crusher).

Sequences are read left to right: the first op acts first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from geophase import evolution
from geophase.evolution import CycleParams
from geophase.statespace import wrap_angle

SIGMA = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
I2 = np.eye(2, dtype=complex)

FIDELITY_TOL = 1e-8
SIGNAL_TOL = 1e-10


def spin_op(spin: str, axis: str) -> np.ndarray:
    """I_axis for spin 'a' (first qubit) or 'b' (second qubit) as a 4x4 matrix."""
    half = SIGMA[axis] / 2
    if spin == "a":
        return np.kron(half, I2)
    if spin == "b":
        return np.kron(I2, half)
    raise ValueError(f"unknown spin {spin!r}")


IZIZ = spin_op("a", "z") @ spin_op("b", "z")


class DecompositionError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpinSystem:
    """CHCl3 with nominal 400 MHz / 100 MHz Larmor frequencies (rad/s) and J in Hz."""

    omega_a: float = 2 * math.pi * 400e6
    omega_b: float = 2 * math.pi * 100e6
    J: float = 214.5

    def __post_init__(self):
        if not self.J > 0:
            raise ValueError("J must be positive")

    def lab_hamiltonian(self) -> np.ndarray:
        return (self.omega_a * spin_op("a", "z") + self.omega_b * spin_op("b", "z")
                + 2 * math.pi * self.J * IZIZ)

    def rotating_hamiltonian(self) -> np.ndarray:
        return 2 * math.pi * self.J * IZIZ


# --- pulse operations -------------------------------------------------------

@dataclass(frozen=True)
class RF:
    spin: str
    axis: str
    angle: float
    duration: float = 0.0

    def __post_init__(self):
        if self.spin not in ("a", "b") or self.axis not in ("x", "y", "z"):
            raise ValueError(f"bad RF pulse {self.spin!r}/{self.axis!r}")
        if not math.isfinite(self.angle) or self.duration < 0:
            raise ValueError("RF angle must be finite and duration >= 0")


@dataclass(frozen=True)
class Delay:
    duration: float

    def __post_init__(self):
        if not self.duration >= 0:
            raise ValueError(f"negative delay {self.duration!r}")


@dataclass(frozen=True)
class GradientZ:
    duration: float = 0.0


@dataclass(frozen=True, eq=False)
class IdealGate:
    U: np.ndarray
    duration: float = 0.0

    def __eq__(self, other):
        return (isinstance(other, IdealGate) and self.duration == other.duration
                and np.array_equal(self.U, other.U))

    def __hash__(self):
        return hash((self.U.tobytes(), self.duration))


PulseOp = Union[RF, Delay, GradientZ, IdealGate]


@dataclass(frozen=True)
class PulseSequence:
    ops: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))

    @property
    def total_duration(self) -> float:
        return math.fsum(op.duration for op in self.ops)

    def __add__(self, other: "PulseSequence") -> "PulseSequence":
        return PulseSequence(self.ops + other.ops)

    def __iter__(self):
        return iter(self.ops)

    def __len__(self):
        return len(self.ops)


def concat(*seqs: PulseSequence) -> PulseSequence:
    return PulseSequence(tuple(op for s in seqs for op in s.ops))


def rotation(spin: str, axis: str, angle: float) -> np.ndarray:
    """exp(-i angle I_axis) on one spin, in closed form."""
    u2 = math.cos(angle / 2) * I2 - 1j * math.sin(angle / 2) * SIGMA[axis]
    return np.kron(u2, I2) if spin == "a" else np.kron(I2, u2)


def coupling_propagator(t: float, sys: SpinSystem) -> np.ndarray:
    return np.diag(np.exp(-1j * 2 * math.pi * sys.J * t * np.diag(IZIZ).real))


def op_unitary(op: PulseOp, sys: SpinSystem) -> np.ndarray:
    if isinstance(op, RF):
        return rotation(op.spin, op.axis, op.angle)
    if isinstance(op, Delay):
        return coupling_propagator(op.duration, sys)
    if isinstance(op, IdealGate):
        return np.asarray(op.U, dtype=complex)
    raise TypeError(f"{type(op).__name__} is not unitary")


def sequence_unitary(seq: PulseSequence, sys: SpinSystem = SpinSystem()) -> np.ndarray:
    u = np.eye(4, dtype=complex)
    for op in seq:
        u = op_unitary(op, sys) @ u
    return u


def apply(op: PulseOp, rho: np.ndarray, sys: SpinSystem = SpinSystem()) -> np.ndarray:
    if isinstance(op, GradientZ):
        return np.diag(np.diag(rho))
    u = op_unitary(op, sys)
    out = u @ rho @ u.conj().T
    # restore exact Hermiticity lost to rounding
    return 0.5 * (out + out.conj().T)


def run_sequence(seq: PulseSequence, rho0: np.ndarray,
                 sys: SpinSystem = SpinSystem()) -> tuple[np.ndarray, float]:
    rho = np.asarray(rho0, dtype=complex)
    for op in seq:
        rho = apply(op, rho, sys)
    return rho, seq.total_duration


# --- state preparation and readout -----------------------------------------

PSEUDOPURE_TARGET = np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)


class Preparation(NamedTuple):
    rho: np.ndarray
    fidelity: float
    duration: float
    deviation: bool


def deviation_state(p_a: float = 1.0, p_b: float = 1.0) -> np.ndarray:
    """Traceless thermal deviation p_a I_z^a + p_b I_z^b (use p_a = 4, p_b = 1 for 1H:13C)."""
    return p_a * spin_op("a", "z") + p_b * spin_op("b", "z")


def pseudopure_sequence(sys: SpinSystem = SpinSystem()) -> PulseSequence:
    return PulseSequence([
        RF("b", "x", math.pi / 3),
        GradientZ(),
        RF("b", "x", math.pi / 4),
        Delay(1 / (2 * sys.J)),
        RF("b", "y", math.pi / 4),
        GradientZ(),
    ])


def correlation(rho: np.ndarray, target: np.ndarray) -> float:
    """Normalized overlap of the traceless parts of two density matrices."""
    eye = np.eye(rho.shape[0]) / rho.shape[0]
    a = rho - np.trace(rho) * eye
    b = target - np.trace(target) * eye
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0
    return float(np.real(np.vdot(a, b)) / (na * nb))


def prepare_pseudopure(mode: str = "ideal", sys: SpinSystem = SpinSystem(),
                       p_a: float = 1.0, p_b: float = 1.0) -> Preparation:
    if mode == "ideal":
        return Preparation(PSEUDOPURE_TARGET.copy(), 1.0, 0.0, False)
    if mode == "sequence":
        rho, dur = run_sequence(pseudopure_sequence(sys), deviation_state(p_a, p_b), sys)
        return Preparation(rho, correlation(rho, PSEUDOPURE_TARGET), dur, True)
    raise ValueError(f"unknown preparation mode {mode!r}")


HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def hadamard_b(mode: str = "pulse") -> PulseSequence:
    """Hadamard on spin b; the pulse form R_y(pi/2) then R_x(pi) equals it up to -i."""
    if mode == "ideal":
        return PulseSequence([IdealGate(np.kron(I2, HADAMARD))])
    if mode == "pulse":
        return PulseSequence([RF("b", "y", math.pi / 2), RF("b", "x", math.pi)])
    raise ValueError(f"unknown mode {mode!r}")


def read_phase(rho: np.ndarray) -> float:
    """Phase of the spin-b coherence <00|rho|01> in (-pi, pi]."""
    coh = rho[0, 1]
    if abs(coh) < SIGNAL_TOL:
        raise ValueError("no signal: <00|rho|01> vanishes")
    return wrap_angle(float(np.angle(coh)))


# --- controlled-gate compilation -------------------------------------------

def compile_controlled_R(s: float, sys: SpinSystem = SpinSystem()) -> PulseSequence:
    """R(s): rotate spin a by 2s about y when spin b is |0>, identity otherwise.

    Negative s (needed for inverse factors) flips the sign of the x pulses.
    """
    sign = 1.0 if s >= 0 else -1.0
    return PulseSequence([
        RF("a", "x", sign * math.pi / 2),
        Delay(abs(s) / (math.pi * sys.J)),
        RF("a", "x", -sign * math.pi / 2),
        RF("a", "y", s),
    ])


def su2_axis_angle(block: np.ndarray) -> tuple[float, float, float]:
    """(alpha, beta, phi) with block = exp(-i alpha n.sigma / 2), n = n(beta, phi).

    alpha in [0, 2 pi]; beta is the polar and phi the azimuthal angle of n.
    """
    block = np.asarray(block, dtype=complex)
    det = np.linalg.det(block)
    if abs(det - 1) > 1e-10 or not np.allclose(block.conj().T @ block, I2, atol=1e-10):
        raise DecompositionError("target block is not in SU(2)")
    a, b = block[0, 0], block[0, 1]
    vec = np.array([-b.imag, -b.real, -a.imag])
    sin_half = float(np.linalg.norm(vec))
    alpha = 2 * math.atan2(sin_half, a.real)
    if sin_half < 1e-15:
        return alpha, 0.0, 0.0
    n = vec / sin_half
    beta = math.acos(min(1.0, max(-1.0, n[2])))
    phi = math.atan2(n[1], n[0])
    return alpha, beta, phi


def _axis_rotation_b(alpha: float, beta: float, phi: float) -> list:
    """Rotation of spin b by alpha about n(beta, phi) written as z-y-z pulses."""
    return [
        RF("b", "z", -phi),
        RF("b", "y", -beta),
        RF("b", "z", alpha),
        RF("b", "y", beta),
        RF("b", "z", phi),
    ]


def compile_controlled_su2(block: np.ndarray, sys: SpinSystem = SpinSystem()) -> PulseSequence:
    """Apply ``block`` to spin b when spin a is |1>, identity when spin a is |0>."""
    alpha, beta, phi = su2_axis_angle(block)
    seq = PulseSequence([
        RF("b", "z", -phi),
        RF("b", "y", -math.pi - beta),
        Delay(alpha / (2 * math.pi * sys.J)),
        RF("b", "y", math.pi + beta),
        RF("b", "z", phi),
        *_axis_rotation_b(alpha / 2, beta, phi),
    ])
    target = np.eye(4, dtype=complex)
    target[2:, 2:] = block
    fid = gate_fidelity(sequence_unitary(seq, sys), target)
    if fid < 1 - FIDELITY_TOL:
        raise DecompositionError(f"decomposition invalid (fidelity {fid!r})")
    return seq


def compile_controlled_R23(chi: float, tau: float, neg_xi: float,
                           sys: SpinSystem = SpinSystem()) -> PulseSequence:
    """Controlled SU(2)_23 conjugator with arguments as written in the cycle unitaries."""
    return compile_controlled_su2(evolution.conjugator(chi, tau, neg_xi)[2:, 2:], sys)


def diagonal_phases(u: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Best diagonal phases d such that u ~ diag(d) @ target."""
    m = u @ target.conj().T
    diag = np.diag(m)
    return np.where(np.abs(diag) > 0, diag / np.maximum(np.abs(diag), 1e-300), 1.0)


def gate_fidelity(u: np.ndarray, target: np.ndarray, up_to: str = "diagonal") -> float:
    """|Tr(D^dag T^dag U)| / d maximized over diagonal D (or a global phase only)."""
    m = u @ target.conj().T
    d = target.shape[0]
    if up_to == "diagonal":
        return float(np.sum(np.abs(np.diag(m))) / d)
    if up_to == "global":
        return float(abs(np.trace(m)) / d)
    raise ValueError(f"unknown alignment {up_to!r}")


# --- full experiment -------------------------------------------------------

def cycle_sequence(c: CycleParams, mode: str = "ideal",
                   sys: SpinSystem = SpinSystem()) -> PulseSequence:
    """The three cycle unitaries, as ideal gates or compiled pulse sequences."""
    rp = evolution.reparametrize(evolution.psi3(c))
    if mode == "ideal":
        u1, u2, u3 = evolution.cycle_unitaries(c)
        return PulseSequence([IdealGate(u1(c.s1_0)), IdealGate(u2(c.s2_0)),
                              IdealGate(u3(rp.s3_0))])
    if mode != "pulse":
        raise ValueError(f"unknown mode {mode!r}")
    v = evolution.conjugator(c.theta, c.varphi, 0.0)[2:, 2:]
    w = evolution.conjugator(rp.chi, rp.tau, -rp.xi)[2:, 2:]
    return concat(
        # U1 = R(s1)
        compile_controlled_R(c.s1_0, sys),
        # U2 = R(s1) V R(s2) V^-1 R(-s1), rightmost first
        compile_controlled_R(-c.s1_0, sys),
        compile_controlled_su2(v.conj().T, sys),
        compile_controlled_R(c.s2_0, sys),
        compile_controlled_su2(v, sys),
        compile_controlled_R(c.s1_0, sys),
        # U3 = W R(-s3) W^-1
        compile_controlled_su2(w.conj().T, sys),
        compile_controlled_R(-rp.s3_0, sys),
        compile_controlled_su2(w, sys),
    )


class Measurement(NamedTuple):
    beta: float
    duration: float


def full_experiment(c: CycleParams, mode: str = "ideal", prep: str = "ideal",
                    sys: SpinSystem = SpinSystem()) -> Measurement:
    """Prepare |00>, apply H on spin b, run the cycle and read the spin-b phase.

    The returned duration covers preparation (zero when ideal) and the
    cycle; hard pulses take no time.
    """
    start = prepare_pseudopure(prep, sys)
    seq = hadamard_b("ideal" if mode == "ideal" else "pulse") + cycle_sequence(c, mode, sys)
    rho, dur = run_sequence(seq, start.rho, sys)
    return Measurement(read_phase(rho), start.duration + dur)


# --- text serialization ----------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def dumps_sequence(seq: PulseSequence) -> str:
    """One op per line: ``kind spin axis angle duration [re im ...]``."""
    lines = []
    for op in seq:
        if isinstance(op, RF):
            lines.append(f"rf {op.spin} {op.axis} {_fmt(op.angle)} {_fmt(op.duration)}")
        elif isinstance(op, Delay):
            lines.append(f"delay - - 0.0 {_fmt(op.duration)}")
        elif isinstance(op, GradientZ):
            lines.append(f"gradz - - 0.0 {_fmt(op.duration)}")
        elif isinstance(op, IdealGate):
            flat = np.asarray(op.U, dtype=complex).ravel()
            nums = " ".join(f"{_fmt(z.real)} {_fmt(z.imag)}" for z in flat)
            lines.append(f"gate - - 0.0 {_fmt(op.duration)} {nums}")
        else:
            raise TypeError(f"cannot serialize {op!r}")
    return "\n".join(lines) + ("\n" if lines else "")


def loads_sequence(text: str) -> PulseSequence:
    ops = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 5:
            raise ValueError(f"line {lineno}: expected at least 5 fields")
        kind, spin, axis = parts[:3]
        angle, duration = float(parts[3]), float(parts[4])
        if kind == "rf":
            ops.append(RF(spin, axis, angle, duration))
        elif kind == "delay":
            ops.append(Delay(duration))
        elif kind == "gradz":
            ops.append(GradientZ(duration))
        elif kind == "gate":
            vals = [float(x) for x in parts[5:]]
            if len(vals) != 32:
                raise ValueError(f"line {lineno}: gate needs 32 matrix entries")
            arr = np.array(vals[0::2]) + 1j * np.array(vals[1::2])
            ops.append(IdealGate(arr.reshape(4, 4), duration))
        else:
            raise ValueError(f"line {lineno}: unknown op kind {kind!r}")
    return PulseSequence(ops)
