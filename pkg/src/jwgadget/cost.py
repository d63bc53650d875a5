"""T-count accounting for compiled circuits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from jwgadget.circuit import Circuit, MultiControlledZ, Rotation, Toffoli
from jwgadget.errors import DomainError


@dataclass(frozen=True)
class SynthesisParams:
    """Rotation-synthesis and Toffoli cost assumptions.

    ``eps_total`` is the synthesis error budget shared by ``n_rot`` rotations
    through the triangle inequality. A ``per_rotation_cost_override`` replaces
    the formula value outright.
    """

    eps_total: float = 1e-5
    n_rot: int = 10_000_000
    per_rotation_cost_override: int | None = None
    toffoli_t_cost: int = 4

    def __post_init__(self):
        if self.eps_total <= 0:
            raise DomainError("eps_total must be positive")
        if self.n_rot < 1:
            raise DomainError("n_rot must be a positive integer")
        if self.eps_total / self.n_rot >= 1:
            raise DomainError("eps_total / n_rot must be below 1")
        if self.per_rotation_cost_override is not None and self.per_rotation_cost_override < 1:
            raise DomainError("per-rotation override must be a positive integer")
        if self.toffoli_t_cost < 1:
            raise DomainError("toffoli_t_cost must be a positive integer")


def per_rotation_epsilon(params: SynthesisParams) -> float:
    return params.eps_total / params.n_rot


def synthesis_formula_cost(epsilon: float) -> int:
    """``ceil(3 log2(1/epsilon))``, with the doubly logarithmic term dropped."""
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    return math.ceil(3 * math.log2(1 / epsilon))


def rotation_synthesis_cost(epsilon: float, params: SynthesisParams | None = None) -> int:
    if params is not None and params.per_rotation_cost_override is not None:
        return params.per_rotation_cost_override
    return synthesis_formula_cost(epsilon)


def mcz_toffoli_count(gate: MultiControlledZ) -> int:
    n = gate.arity
    if n <= 1:
        return 0
    if n == 2:
        return 1
    return 4 * (n - 2)


@dataclass(frozen=True)
class CostReport:
    ppr_count: int = 0
    toffoli_count: int = 0
    t_from_rotations: int = 0
    t_from_toffolis: int = 0
    t_total: int = 0
    per_rotation_t: int = 0
    per_rotation_t_formula: int = 0
    per_rotation_t_override: int | None = None
    epsilon: float = 0.0
    toffoli_t_cost: int = 4
    breakdown: dict = field(default_factory=dict)

    def __add__(self, other: CostReport) -> CostReport:
        keys = set(self.breakdown) | set(other.breakdown)
        return CostReport(
            ppr_count=self.ppr_count + other.ppr_count,
            toffoli_count=self.toffoli_count + other.toffoli_count,
            t_from_rotations=self.t_from_rotations + other.t_from_rotations,
            t_from_toffolis=self.t_from_toffolis + other.t_from_toffolis,
            t_total=self.t_total + other.t_total,
            per_rotation_t=self.per_rotation_t or other.per_rotation_t,
            per_rotation_t_formula=self.per_rotation_t_formula or other.per_rotation_t_formula,
            per_rotation_t_override=(
                self.per_rotation_t_override
                if self.per_rotation_t_override is not None
                else other.per_rotation_t_override
            ),
            epsilon=self.epsilon or other.epsilon,
            toffoli_t_cost=self.toffoli_t_cost,
            breakdown={
                k: self.breakdown.get(k, 0) + other.breakdown.get(k, 0) for k in sorted(keys)
            },
        )

    def as_dict(self) -> dict:
        return {
            "ppr_count": self.ppr_count,
            "toffoli_count": self.toffoli_count,
            "t_from_rotations": self.t_from_rotations,
            "t_from_toffolis": self.t_from_toffolis,
            "t_total": self.t_total,
            "per_rotation_t": self.per_rotation_t,
            "per_rotation_t_formula": self.per_rotation_t_formula,
            "per_rotation_t_override": self.per_rotation_t_override,
            "epsilon": self.epsilon,
            "toffoli_t_cost": self.toffoli_t_cost,
            "breakdown": dict(self.breakdown),
        }


def cost_report(circuit: Circuit, params: SynthesisParams | None = None) -> CostReport:
    """T count of a circuit; Cliffords and global phases are free."""
    params = params or SynthesisParams()
    eps = per_rotation_epsilon(params)
    formula = synthesis_formula_cost(eps)
    per_rot = rotation_synthesis_cost(eps, params)

    rotations = sum(isinstance(g, Rotation) for g in circuit.gates)
    plain_toffolis = sum(isinstance(g, Toffoli) for g in circuit.gates)
    mcz_toffolis = sum(
        mcz_toffoli_count(g) for g in circuit.gates if isinstance(g, MultiControlledZ)
    )
    toffolis = plain_toffolis + mcz_toffolis
    t_rot = rotations * per_rot
    t_tof = toffolis * params.toffoli_t_cost
    return CostReport(
        ppr_count=rotations,
        toffoli_count=toffolis,
        t_from_rotations=t_rot,
        t_from_toffolis=t_tof,
        t_total=t_rot + t_tof,
        per_rotation_t=per_rot,
        per_rotation_t_formula=formula,
        per_rotation_t_override=params.per_rotation_cost_override,
        epsilon=eps,
        toffoli_t_cost=params.toffoli_t_cost,
        breakdown={
            "rotation": t_rot,
            "toffoli": plain_toffolis * params.toffoli_t_cost,
            "multi_controlled_z": mcz_toffolis * params.toffoli_t_cost,
        },
    )


def compare(naive: CostReport, gadget: CostReport) -> float:
    """``naive.t_total / gadget.t_total``."""
    if naive.t_total <= 0 or gadget.t_total <= 0:
        raise ZeroDivisionError("both reports need a positive T count")
    return naive.t_total / gadget.t_total


def format_ratio(ratio: float) -> str:
    """Four significant digits, trailing zeros kept."""
    return f"{ratio:#.4g}"
