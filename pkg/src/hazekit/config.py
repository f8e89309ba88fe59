from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class DehazeConfig:
    """Tunables for the model-based dehazing pipeline.

    Defaults follow the published constants: window radius 7, subset cap 200,
    angular bins of pi/720 over [0, 2pi] x [0, pi], transmission floor 0.1 and
    loss weights 1 (adversarial), 200 (extreme channel), 100 (L1).
    """

    rho: int = 7
    nu: int = 200
    n_theta: int = 1440
    n_psi: int = 720
    t_floor: float = 0.1
    stop_size: int = 32
    w_adv: float = 1.0
    w_e: float = 200.0
    w_R: float = 100.0

    def __post_init__(self):
        if self.rho < 1:
            raise ValueError(f"rho must be >= 1, got {self.rho}")
        if self.nu < 1:
            raise ValueError(f"nu must be >= 1, got {self.nu}")
        if self.n_theta < 1 or self.n_psi < 1:
            raise ValueError(f"bin counts must be >= 1, got {self.n_theta}x{self.n_psi}")
        if not 0.0 < self.t_floor <= 1.0:
            raise ValueError(f"t_floor must lie in (0, 1], got {self.t_floor}")
        if self.stop_size < 1:
            raise ValueError(f"stop_size must be >= 1, got {self.stop_size}")
