"""Adaptive composite Simpson quadrature with an absolute error target."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable


class QuadratureError(RuntimeError):
    """Raised when the error estimate cannot be pushed below tolerance."""

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(f"{message} (estimate {estimate!r}, error {error:.3e})")
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class QuadratureConfig:
    tolerance: float = 1e-10
    max_panels: int = 2**16
    initial_panels: int = 4


def adaptive_simpson(
    f: Callable[[float], float], a: float, b: float, cfg: QuadratureConfig = QuadratureConfig()
) -> tuple[float, float]:
    """Integrate ``f`` over [a, b]; returns ``(value, error_estimate)``.

    Each panel is accepted once the difference between one Simpson step and
    two half steps is within its share of the tolerance (proportional to
    panel width).  The accepted value includes the Richardson correction.
    """
    if b == a:
        return 0.0, 0.0
    if b < a:
        val, err = adaptive_simpson(f, b, a, cfg)
        return -val, err
    span = b - a
    n0 = max(1, cfg.initial_panels)
    h0 = span / n0
    stack = []
    for k in range(n0):
        lo = a + k * h0
        hi = b if k == n0 - 1 else lo + h0
        mid = 0.5 * (lo + hi)
        stack.append((lo, hi, f(lo), f(mid), f(hi)))

    total = 0.0
    err_total = 0.0
    panels = n0
    while stack:
        lo, hi, flo, fmid, fhi = stack.pop()
        w = hi - lo
        whole = w / 6.0 * (flo + 4.0 * fmid + fhi)
        lmid, rmid = 0.5 * (lo + hi) - 0.25 * w, 0.5 * (lo + hi) + 0.25 * w
        flm, frm = f(lmid), f(rmid)
        left = w / 12.0 * (flo + 4.0 * flm + fmid)
        right = w / 12.0 * (fmid + 4.0 * frm + fhi)
        diff = left + right - whole
        err = abs(diff) / 15.0
        budget = cfg.tolerance * w / span
        if err <= budget or panels >= cfg.max_panels:
            total += left + right + diff / 15.0
            err_total += err
            continue
        panels += 1
        mid = 0.5 * (lo + hi)
        stack.append((mid, hi, fmid, frm, fhi))
        stack.append((lo, mid, flo, flm, fmid))

    if err_total > cfg.tolerance:
        raise QuadratureError("quadrature did not converge", total, err_total)
    return total, err_total
