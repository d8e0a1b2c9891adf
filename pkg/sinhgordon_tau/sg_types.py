# sinhgordon_tau/sg_types.py
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, Optional, Tuple

import numpy as np
import pandas as pd

from .config import DEFAULT_T_MIN, DEFAULT_TOL
from .errors import DomainError

# slack when clipping pi*lambda onto [0, 1]
_EDGE_SLACK = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """(nu, lambda) with derived sigma = (2/pi) arcsin(pi lambda) and s = (1 - sigma)/2."""

    nu: float
    lam: float
    sigma: float = field(init=False)
    s: float = field(init=False)

    def __post_init__(self) -> None:
        nu, lam = float(self.nu), float(self.lam)
        if not math.isfinite(nu) or nu <= -0.5:
            raise DomainError(f"nu outside allowed range (-0.5, inf): {nu}")
        x = math.pi * lam
        if not math.isfinite(x) or x < 0.0 or x > 1.0 + _EDGE_SLACK:
            raise DomainError(f"lambda outside allowed range [0, 1/pi]: {lam}")
        sigma = 2.0 / math.pi * math.asin(min(x, 1.0))
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "s", 0.5 * (1.0 - sigma))

    @classmethod
    def from_lambda(cls, nu: float, lam: float) -> "ModelParams":
        return cls(nu, lam)

    @classmethod
    def from_sigma(cls, nu: float, sigma: float) -> "ModelParams":
        sigma = float(sigma)
        if not (0.0 <= sigma <= 1.0):
            raise DomainError(f"sigma outside allowed range [0, 1]: {sigma}")
        return cls(nu, math.sin(0.5 * math.pi * sigma) / math.pi)

    def with_nu(self, nu: float) -> "ModelParams":
        return ModelParams(nu, self.lam)

    @property
    def excluded(self) -> bool:
        """sigma >= 1 + 2 nu, where B <= 0 and u may vanish."""
        return self.sigma >= 1.0 + 2.0 * self.nu

    @property
    def connection_ok(self) -> bool:
        return (not self.excluded) and (self.s + self.nu > 0.0) and self.sigma < 1.0

    def to_record(self) -> Dict[str, float]:
        return {"nu": self.nu, "lam": self.lam, "sigma": self.sigma, "s": self.s}


@dataclass(frozen=True)
class QuadSettings:
    abs_tol: float
    rel_tol: float
    max_subdivisions: int
    singularity_exponent: float = -0.5  # (y - 1)^(-1/2) at y = 1

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise DomainError(f"quadrature tolerances must be positive: {self.abs_tol}, {self.rel_tol}")
        if int(self.max_subdivisions) < 1:
            raise DomainError(f"max_subdivisions must be >= 1: {self.max_subdivisions}")


@dataclass(frozen=True)
class TrajectorySegment:
    """One dense-output piece; ``log_variable`` means the solver ran in x = ln t."""

    t_lo: float
    t_hi: float
    log_variable: bool
    sol: Callable[[Any], np.ndarray]

    def __call__(self, t: np.ndarray) -> np.ndarray:
        x = np.log(t) if self.log_variable else t
        return np.asarray(self.sol(x))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Backward solution of the Hamiltonian system on [t_min, t0].

    State rows are (q, p, I_H, I_pq, I_sh) where I_* are running integrals
    from t to t0 of H, p dq/ds and sinh^2(q/2). ``tails`` holds the same three
    integrals over [t0, inf).
    """

    params: ModelParams
    t0: float
    t_min: float
    tol: float
    t_nodes: np.ndarray
    q_nodes: np.ndarray
    p_nodes: np.ndarray
    segments: Tuple[TrajectorySegment, ...] = ()
    tails: Tuple[float, float, float] = (0.0, 0.0, 0.0)

    @property
    def nodes(self) -> list[tuple[float, float, float]]:
        return list(zip(self.t_nodes.tolist(), self.q_nodes.tolist(), self.p_nodes.tolist()))

    def covers(self, t: float) -> bool:
        slack = 1e-12 * self.t0
        return (self.t_min - slack) <= t <= (self.t0 + slack)

    def _check(self, t: np.ndarray) -> None:
        lo, hi = float(np.min(t)), float(np.max(t))
        if not (self.covers(lo) and self.covers(hi)):
            raise DomainError(
                f"t outside trajectory range [{self.t_min}, {self.t0}]: [{lo}, {hi}]"
            )

    def state(self, t: float | np.ndarray) -> np.ndarray:
        """(q, p, int_H, int_pq, int_sh) at t; integrals run from t to infinity."""
        tt = np.atleast_1d(np.asarray(t, dtype=float))
        self._check(tt)
        out = np.zeros((5, tt.size))
        tt = np.clip(tt, self.t_min, self.t0)
        for seg in self.segments:
            mask = (tt >= seg.t_lo) & (tt <= seg.t_hi)
            if np.any(mask):
                out[:, mask] = seg(tt[mask])
        out[2:] += np.asarray(self.tails)[:, None]
        return out[:, 0] if np.ndim(t) == 0 else out

    def q(self, t: float | np.ndarray) -> Any:
        return self.state(t)[0]

    def p(self, t: float | np.ndarray) -> Any:
        return self.state(t)[1]

    def integrals(self, t: float | np.ndarray) -> Any:
        """(int H, int p dq/ds, int sinh^2(q/2)) from t to infinity."""
        return self.state(t)[2:]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"t": self.t_nodes, "q": self.q_nodes, "p": self.p_nodes})


@dataclass(frozen=True)
class ConnectionConstants:
    params: ModelParams
    B: float
    A: float
    exponent_u: float
    exponent_tau: float

    def to_record(self) -> Dict[str, float]:
        rec = self.params.to_record()
        rec.update(B=self.B, A=self.A, exponent_u=self.exponent_u, exponent_tau=self.exponent_tau)
        return rec


@dataclass(frozen=True)
class TauSample:
    t: float
    params: ModelParams
    tau: float
    log_tau: float
    H_t: float
    S_t: float
    nu_term: float
    q: float
    p: float
    diagnostics: Mapping[str, float] = field(default_factory=dict)

    def to_record(self) -> Dict[str, Any]:
        rec: Dict[str, Any] = {"t": self.t, **self.params.to_record()}
        rec.update(
            tau=self.tau, log_tau=self.log_tau, h_t=self.H_t, s_t=self.S_t,
            nu_term=self.nu_term, q=self.q, p=self.p,
            diagnostics=dict(self.diagnostics),
        )
        return rec


@dataclass(frozen=True)
class FitResult:
    sigma_fit: float
    B_fit: float
    A_fit: float
    exponent_tau_fit: float
    residual: float
    t_window: Tuple[float, float]

    def to_record(self) -> Dict[str, Any]:
        rec = asdict(self)
        rec["b_fit"] = rec.pop("B_fit")
        rec["a_fit"] = rec.pop("A_fit")
        rec["t_window"] = list(self.t_window)
        return rec


@dataclass(frozen=True)
class RunConfig:
    command: str
    nu: Optional[float] = None
    lam: Optional[float] = None
    sigma: Optional[float] = None
    t0: Optional[float] = None
    t_min: float = DEFAULT_T_MIN
    tol: float = DEFAULT_TOL
    output_path: Optional[Path] = None
    fmt: str = "json"


@dataclass(frozen=True, eq=False)
class VerificationReport:
    """Per-criterion rows: name, group, analytic, fitted, error, tolerance, passed."""

    frame: pd.DataFrame

    @property
    def passed(self) -> bool:
        return bool(len(self.frame)) and bool(self.frame["passed"].all())

    @property
    def failures(self) -> pd.DataFrame:
        return self.frame[~self.frame["passed"]]

    def to_records(self) -> list[Dict[str, Any]]:
        return [
            {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in row.items()}
            for row in self.frame.to_dict(orient="records")
        ]
