"""Cross-validation suite behind ``geophase check``.

Each check returns a ``CheckResult`` holding the measured metrics next to the
limit it was judged against, so the test suite can re-assert the numbers.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from geophase import evolution, nmr, sweep
from geophase.evolution import CycleError, CycleParams
from geophase.geometry import (
    GeometryError,
    bargmann_gp,
    bargmann_invariant,
    dynamical_phase,
    make_geodesic,
)
from geophase.quadrature import QuadratureConfig
from geophase.statespace import wrap_angle

GRID_S = np.linspace(0.0, math.pi / 2, 9)
GRID_THETA = (0.0, math.pi / 4, math.pi / 2)
GRID_VARPHI = (0.0, math.pi / 4, math.pi / 2 - 0.01)

AGREEMENT_TOL = 1e-7
DYNAMICAL_TOL = 1e-9
FIG4_RMS_DEG = 1e-6
SPOT_TOL = 1e-8
REFERENCE_TOL = 1e-10
FIDELITY_TOL = 1e-8
DURATION_MS = (5.0, 25.0)
BARGMANN_TOL = 1e-12
RUNTIME_S = 30.0


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    metrics: dict = field(default_factory=dict)
    elapsed: float = 0.0


def random_state(rng: np.random.Generator, dim: int = 3) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def criterion_grid():
    for s1, s2, th, vp in itertools.product(GRID_S, GRID_S, GRID_THETA, GRID_VARPHI):
        yield float(s1), float(s2), th, vp


def _dist(a: float, b: float) -> float:
    return abs(wrap_angle(a - b))


def check_three_way(quad: QuadratureConfig = QuadratureConfig()) -> CheckResult:
    t0 = time.perf_counter()
    worst = 0.0
    compared = barg_skipped = undefined = 0
    for s1, s2, th, vp in criterion_grid():
        try:
            c = CycleParams(s1, s2, th, vp)
        except CycleError:
            undefined += 1
            continue
        vals = [evolution.beta_predicted(c), evolution.run_cycle(c, quad).geometric]
        try:
            vals.append(evolution.beta_bargmann(c))
        except GeometryError:
            barg_skipped += 1
        worst = max([worst] + [_dist(a, b) for a, b in itertools.combinations(vals, 2)])
        compared += 1
    elapsed = time.perf_counter() - t0
    passed = worst < AGREEMENT_TOL and elapsed < RUNTIME_S
    return CheckResult(
        "three-way beta agreement", passed,
        f"max dev {worst:.2e} rad over {compared} cycles "
        f"({undefined} with undefined beta, {barg_skipped} with a vanishing Bargmann "
        f"invariant); {elapsed:.1f} s",
        dict(max_dev=worst, compared=compared, undefined=undefined,
             bargmann_skipped=barg_skipped, runtime=elapsed),
        elapsed,
    )


def check_dynamical(seed: int = 7, quad: QuadratureConfig = QuadratureConfig()) -> CheckResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst_arc = 0.0
    for _ in range(200):
        arc = make_geodesic(random_state(rng), random_state(rng))
        worst_arc = max(worst_arc, abs(dynamical_phase(arc, quad)))
    worst_leg = 0.0
    legs = 0
    for s1, s2, th, vp in criterion_grid():
        try:
            c = CycleParams(s1, s2, th, vp)
        except CycleError:
            continue
        for g in evolution.leg_dynamical_phases(c, quad):
            worst_leg = max(worst_leg, abs(g))
            legs += 1
    passed = worst_arc < DYNAMICAL_TOL and worst_leg < DYNAMICAL_TOL
    return CheckResult(
        "vanishing dynamical phase", passed,
        f"max |gamma_d| {worst_arc:.2e} (200 arcs), {worst_leg:.2e} ({legs} cycle legs)",
        dict(max_arc=worst_arc, max_leg=worst_leg, legs=legs),
        time.perf_counter() - t0,
    )


def check_fig4() -> CheckResult:
    t0 = time.perf_counter()
    rms = {}
    zero_dev = 0.0
    for name, cfg in sweep.demo_configs(mode="ideal").items():
        records = sweep.run_sweep(cfg)
        rms[name] = sweep.summarize(records).rms_sim_vs_formula_deg
        for r in records:
            if r.s1_0 == 0.0:
                zero_dev = max(zero_dev, abs(r.beta_sim), abs(r.beta_formula))
    spot = nmr.full_experiment(CycleParams(math.pi / 4, math.pi / 4, math.pi / 4, 0.0)).beta
    spot_dev = _dist(spot, -3 * math.pi / 8)
    worst = max(rms.values())
    passed = worst < FIG4_RMS_DEG and spot_dev < SPOT_TOL and zero_dev < SPOT_TOL
    return CheckResult(
        "demo theory curves", passed,
        f"rms {worst:.2e} deg; spot -3pi/8 dev {spot_dev:.1e}; s1_0=0 dev {zero_dev:.1e}",
        dict(rms_deg=rms, spot_dev=spot_dev, zero_dev=zero_dev),
        time.perf_counter() - t0,
    )


def check_reference() -> CheckResult:
    t0 = time.perf_counter()
    e1 = np.eye(4, dtype=complex)[1]
    exact = True
    worst_pulse = 0.0
    for s1, s2, th, vp in criterion_grid():
        try:
            c = CycleParams(s1, s2, th, vp)
        except CycleError:
            continue
        u1, u2, u3 = evolution.cycle_unitaries(c)
        s3 = evolution.reparametrize(evolution.psi3(c)).s3_0
        for u in (u1(c.s1_0), u2(c.s2_0), u3(s3)):
            exact &= bool(np.array_equal(u[1, :], e1) and np.array_equal(u[:, 1], e1))
        up = nmr.sequence_unitary(nmr.cycle_sequence(c, "pulse"))
        worst_pulse = max(worst_pulse, float(np.max(np.abs(up[1, :] - e1))),
                          float(np.max(np.abs(up[:, 1] - e1))))
    passed = exact and worst_pulse < REFERENCE_TOL
    return CheckResult(
        "reference-state invariance", passed,
        f"ideal rows/cols exact: {exact}; pulse max dev {worst_pulse:.1e}",
        dict(exact=exact, pulse_dev=worst_pulse),
        time.perf_counter() - t0,
    )


def check_compiled(seed: int = 11) -> CheckResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst_r = worst_r23 = 1.0
    leak = 0.0
    for _ in range(100):
        s = rng.uniform(0, math.pi / 2)
        u = nmr.sequence_unitary(nmr.compile_controlled_R(s))
        target = evolution.rot_R(s)
        worst_r = min(worst_r, nmr.gate_fidelity(u, target))
        d = nmr.diagonal_phases(u, target)
        leak = max(leak, abs(np.angle(d[0] / d[1])))
    for _ in range(100):
        chi, neg_xi = rng.uniform(-math.pi, math.pi, 2)
        tau = rng.uniform(0, math.pi / 2)
        u = nmr.sequence_unitary(nmr.compile_controlled_R23(chi, tau, neg_xi))
        target = evolution.conjugator(chi, tau, neg_xi)
        worst_r23 = min(worst_r23, nmr.gate_fidelity(u, target))
        d = nmr.diagonal_phases(u, target)
        leak = max(leak, abs(np.angle(d[0] / d[1])))
    passed = min(worst_r, worst_r23) >= 1 - FIDELITY_TOL and leak < FIDELITY_TOL
    return CheckResult(
        "compiled-gate fidelity", passed,
        f"min fidelity R {worst_r:.12f}, R23 {worst_r23:.12f}; |00>/|01> phase leak {leak:.1e}",
        dict(min_R=worst_r, min_R23=worst_r23, leak=leak),
        time.perf_counter() - t0,
    )


def check_durations() -> CheckResult:
    t0 = time.perf_counter()
    durs = []
    for cfg in sweep.demo_configs().values():
        for x in cfg.grid():
            c = CycleParams(float(x), cfg.s2_0, cfg.theta, cfg.varphi)
            durs.append(nmr.full_experiment(c, "pulse").duration * 1e3)
    lo, hi = min(durs), max(durs)
    passed = DURATION_MS[0] <= lo and hi <= DURATION_MS[1]
    return CheckResult(
        "duration plausibility", passed, f"durations {lo:.2f} .. {hi:.2f} ms",
        dict(min_ms=lo, max_ms=hi), time.perf_counter() - t0,
    )


def check_bargmann(seed: int = 3) -> CheckResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    gauge = cyc = rev = trace = 0.0
    for n in (3, 4, 5, 6):
        for _ in range(50):
            vecs = [random_state(rng) for _ in range(n)]
            beta = bargmann_gp(vecs)
            phases = rng.uniform(0, 2 * math.pi, n)
            gauge = max(gauge, _dist(beta, bargmann_gp([np.exp(1j * p) * v
                                                        for p, v in zip(phases, vecs)])))
            k = int(rng.integers(1, n))
            cyc = max(cyc, _dist(beta, bargmann_gp(vecs[k:] + vecs[:k])))
            rev = max(rev, _dist(-beta, bargmann_gp(vecs[::-1])))
            trace = max(trace, abs(bargmann_invariant(vecs, "overlap")
                                   - bargmann_invariant(vecs, "trace")))
    worst = max(gauge, cyc, rev, trace)
    return CheckResult(
        "Bargmann invariant properties", worst < BARGMANN_TOL,
        f"gauge {gauge:.1e}, cyclic {cyc:.1e}, reversal {rev:.1e}, trace {trace:.1e}",
        dict(gauge=gauge, cyclic=cyc, reversal=rev, trace=trace),
        time.perf_counter() - t0,
    )


def check_preparation() -> CheckResult:
    t0 = time.perf_counter()
    prep = nmr.prepare_pseudopure("sequence")
    off = float(np.max(np.abs(prep.rho - np.diag(np.diag(prep.rho)))))
    ideal = nmr.prepare_pseudopure("ideal").rho
    exact = bool(np.array_equal(ideal, np.diag([1, 0, 0, 0]).astype(complex)))
    passed = off == 0.0 and exact and math.isfinite(prep.fidelity)
    return CheckResult(
        "pseudopure preparation report", passed,
        f"sequence-mode fidelity {prep.fidelity:.4f} (reported), off-diagonal max {off:.1e}, "
        f"ideal exact: {exact}",
        dict(fidelity=prep.fidelity, offdiag=off, ideal_exact=exact),
        time.perf_counter() - t0,
    )


CHECKS: list[Callable[[], CheckResult]] = [
    check_three_way,
    check_dynamical,
    check_fig4,
    check_reference,
    check_compiled,
    check_durations,
    check_bargmann,
    check_preparation,
]


def run_all() -> list[CheckResult]:
    return [chk() for chk in CHECKS]
