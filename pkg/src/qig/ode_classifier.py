"""Classification of the radial ODE (1-r^2) g'(r) + g(r)^2 = A.

Constancy of F(r) over a grid decides whether a metric supports a group
action of the studied type; the constant A selects the solution branch:
A = 0 gives the BKM function, A > 0 the family_a(A) functions, and A < 0
leads to tangent-type functions with poles inside the state space, which
are excluded (represented as a first-class Exclusion carrying evidence).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DomainError
from .metric_family import (MonotoneFunctionSpec, big_f, bkm, family_a,
                            family_b, g_derivative, g_from_f)

CONSTANCY_TOL = 1e-6  # separates constant branches (~1e-9) from RLD (>0.1)
ZERO_TOL = 1e-9


@dataclass(frozen=True)
class OdeClassification:
    spec: str
    grid: tuple
    values: tuple
    constant: Optional[float]  # mean of F if the verdict is constant
    range_width: float
    branch: str  # "bkm_a0" | "family_a_pos" | "family_b_neg" | "none"

    @property
    def is_constant(self) -> bool:
        return self.constant is not None

    def to_json(self) -> dict:
        return {"spec": self.spec, "grid": list(self.grid),
                "values": list(self.values), "constant": self.constant,
                "range_width": self.range_width, "branch": self.branch}


def classify(spec: MonotoneFunctionSpec, grid,
             tol: float = CONSTANCY_TOL) -> OdeClassification:
    """Evaluate F over the grid and detect constancy."""
    grid = np.asarray(grid, dtype=float)
    if grid.size < 20:
        raise DomainError(f"classification grid needs >= 20 points, got {grid.size}")
    if np.any(grid <= 0.0) or np.any(grid >= 1.0):
        raise DomainError("classification grid must lie in (0, 1)")
    values = np.asarray(big_f(spec, grid), dtype=float)
    width = float(values.max() - values.min())
    if width < tol:
        a_const = float(values.mean())
        if abs(a_const) < ZERO_TOL:
            branch = "bkm_a0"
        elif a_const > 0.0:
            branch = "family_a_pos"
        else:
            branch = "family_b_neg"
        return OdeClassification(spec.name, tuple(grid.tolist()),
                                 tuple(values.tolist()), a_const, width, branch)
    return OdeClassification(spec.name, tuple(grid.tolist()),
                             tuple(values.tolist()), None, width, "none")


@dataclass(frozen=True)
class SingularityList:
    """Pole locations of the tangent family inside the state space."""

    b_const: float
    c: float
    t_values: tuple
    r_values: tuple

    def to_json(self) -> dict:
        return {"B": self.b_const, "c": self.c,
                "t_values": list(self.t_values), "r_values": list(self.r_values)}


def singularities(b_const: float, c: float = 0.0,
                  max_count: int = 10) -> SingularityList:
    """First max_count poles t_k = exp(c - (pi/2 + k pi)/sqrt(B)) in (0, 1]."""
    if b_const <= 0.0:
        raise DomainError(f"B must be positive, got {b_const}")
    sb = math.sqrt(b_const)
    k_min = max(0, math.ceil(c * sb / math.pi - 0.5))
    ts, rs = [], []
    k = k_min
    while len(ts) < max_count:
        t = math.exp(c - (math.pi / 2.0 + k * math.pi) / sb)
        if t <= 1.0:
            ts.append(t)
            rs.append((1.0 - t) / (1.0 + t))
        k += 1
    return SingularityList(float(b_const), float(c), tuple(ts), tuple(rs))


@dataclass(frozen=True)
class Exclusion:
    """The A < 0 branch: a spec that cannot define a metric on the full ball."""

    a_const: float
    b_const: float  # B = -A/4
    spec: MonotoneFunctionSpec
    poles: SingularityList

    def to_json(self) -> dict:
        return {"A": self.a_const, "B": self.b_const,
                "excluded": True, "poles": self.poles.to_json()}


def solve_branch(a_const: float, c: float = 0.0,
                 max_poles: int = 10) -> Union[MonotoneFunctionSpec, Exclusion]:
    """Closed-form solution of F = A, normalized so that f(1) = 1.

    A = 0 returns the BKM spec, A > 0 the family_a(A) spec.  A < 0 returns
    an Exclusion carrying the family_b spec (B = -A/4, c a free parameter)
    and the enumerated poles that rule it out.
    """
    if abs(a_const) < ZERO_TOL:
        return bkm()
    if a_const > 0.0:
        return family_a(a_const)
    b_const = -a_const / 4.0
    return Exclusion(float(a_const), b_const, family_b(b_const, c),
                     singularities(b_const, c, max_count=max_poles))


def verify_ode_residual(spec: MonotoneFunctionSpec, a_const: float, grid) -> float:
    """max over the grid of |(1-r^2) g'(r) + g(r)^2 - A|."""
    grid = np.asarray(grid, dtype=float)
    g = np.asarray(g_from_f(spec, grid))
    gp = np.asarray(g_derivative(spec, grid))
    return float(np.max(np.abs((1.0 - grid * grid) * gp + g * g - a_const)))
