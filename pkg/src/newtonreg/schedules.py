"""Regularization-parameter sequences {alpha_n} and their partial sums.

A schedule produces alpha_0, alpha_1, ... together with the running sums
s_n = sum_{j<=n} 1/alpha_j (with s_{-1} = 0).  The geometric schedule
alpha_n = alpha0 * r**n is the workhorse; an explicit list is accepted for
experimentation.  ``audit`` checks the admissibility conditions that the
convergence theory needs, on a finite prefix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class AlphaSchedule:
    """Base class: positive alpha_n with cached partial sums."""

    def __init__(self):
        self._sums = [0.0]  # self._sums[k] == s_{k-1}

    def alpha(self, n: int) -> float:
        raise NotImplementedError

    def partial_sum(self, n: int) -> float:
        """s_n for n >= -1 (s_{-1} = 0), cached incrementally."""
        if n < -1:
            raise ValueError("partial sums are defined for n >= -1")
        while len(self._sums) <= n + 1:
            k = len(self._sums) - 1
            self._sums.append(self._sums[-1] + 1.0 / self.alpha(k))
        return self._sums[n + 1]

    def label(self) -> str:
        raise NotImplementedError

    @staticmethod
    def from_config(cfg: dict) -> "AlphaSchedule":
        """Build a schedule from {"kind": "geometric"|"explicit", ...}."""
        kind = cfg.get("kind")
        if kind == "geometric":
            return GeometricSchedule(float(cfg["alpha0"]), float(cfg["r"]))
        if kind == "explicit":
            return ExplicitSchedule([float(v) for v in cfg["values"]])
        raise ValueError(f"unknown schedule kind: {kind!r}")


class GeometricSchedule(AlphaSchedule):
    """alpha_n = alpha0 * r**n with 0 < r < 1."""

    def __init__(self, alpha0: float, r: float):
        super().__init__()
        if alpha0 <= 0:
            raise ValueError("alpha0 must be positive")
        if not 0.0 < r < 1.0:
            raise ValueError("ratio r must lie in (0, 1)")
        self.alpha0 = float(alpha0)
        self.r = float(r)

    def alpha(self, n: int) -> float:
        if n < 0:
            raise IndexError("schedule index must be nonnegative")
        return self.alpha0 * self.r**n

    def label(self) -> str:
        return f"geometric({self.alpha0:g},{self.r:g})"


class ExplicitSchedule(AlphaSchedule):
    """A finite, explicitly listed sequence of positive alphas."""

    def __init__(self, values: Sequence[float]):
        super().__init__()
        vals = [float(v) for v in values]
        if not vals:
            raise ValueError("explicit schedule needs at least one value")
        if any(v <= 0 for v in vals):
            raise ValueError("all alphas must be positive")
        self.values = vals

    def alpha(self, n: int) -> float:
        if n < 0 or n >= len(self.values):
            raise IndexError(f"schedule index {n} out of range (len={len(self.values)})")
        return self.values[n]

    def label(self) -> str:
        return f"explicit(len={len(self.values)})"


@dataclass
class ScheduleAudit:
    """Finite-prefix check of the admissibility conditions on {alpha_n}."""

    satisfies_60: bool
    observed_c0: float
    observed_c1: float
    satisfies_geometric_bracket: bool
    d0: float
    d1: float
    r_fit: float
    alpha0: float
    divergence_caveat: str = field(default="")

    def to_dict(self) -> dict:
        return {
            "satisfies_60": self.satisfies_60,
            "observed_c0": self.observed_c0,
            "observed_c1": self.observed_c1,
            "satisfies_geometric_bracket": self.satisfies_geometric_bracket,
            "d0": self.d0,
            "d1": self.d1,
            "r_fit": self.r_fit,
            "alpha0": self.alpha0,
            "divergence_caveat": self.divergence_caveat,
        }


def audit(sched: AlphaSchedule, n_max: int) -> ScheduleAudit:
    """Audit a schedule prefix alpha_0 .. alpha_{n_max}.

    observed_c0 is the largest s_{n+1}/s_n, observed_c1 the largest alpha_n.
    Divergence of s_n can only be sampled: the audit requires the doubling
    surrogate s_{n_max} >= 2 * s_{n_max // 2}, and records that this is a
    finite proxy for lim s_n = infinity.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    alphas = np.array([sched.alpha(n) for n in range(n_max + 1)])
    sums = np.array([sched.partial_sum(n) for n in range(n_max + 1)])
    observed_c0 = float(np.max(sums[1:] / sums[:-1]))
    observed_c1 = float(np.max(alphas))
    doubling_ok = sums[n_max] >= 2.0 * sums[n_max // 2]
    satisfies_60 = bool(doubling_ok and np.isfinite(observed_c0))
    caveat = "" if doubling_ok else (
        "s_n growth test failed: s_{n_max} < 2*s_{n_max/2}; "
        "partial sums may converge (divergence check is a finite proxy)"
    )

    # log-linear fit alpha_n ~ d * r**n
    idx = np.arange(n_max + 1)
    slope, intercept = np.polyfit(idx, np.log(alphas), 1)
    r_fit = float(np.exp(slope))
    scale = alphas / np.exp(slope * idx)
    d0, d1 = float(np.min(scale)), float(np.max(scale))
    bracket = bool(0.0 < r_fit < 1.0 and d1 <= 10.0 * d0)
    return ScheduleAudit(
        satisfies_60=satisfies_60,
        observed_c0=observed_c0,
        observed_c1=observed_c1,
        satisfies_geometric_bracket=bracket,
        d0=d0,
        d1=d1,
        r_fit=r_fit,
        alpha0=float(alphas[0]),
        divergence_caveat=caveat,
    )
