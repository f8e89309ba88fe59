"""Five-step dehazing pipeline.

1. airlight from the quadtree search (or a supplied override)
2. DDAP transmission
3. haze-line averaging
4. refinement: identity, or an externally supplied transmission map
5. restoration
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from hazekit import imgcore
from hazekit.airlight import estimate_airlight
from hazekit.config import DehazeConfig
from hazekit.restore import restore
from hazekit.transmission import estimate_transmission


@dataclass
class DehazeResult:
    restored: np.ndarray
    airlight: np.ndarray
    t0: np.ndarray
    t: np.ndarray


def dehaze(Z: np.ndarray, cfg: DehazeConfig = DehazeConfig(), airlight=None,
           transmission: np.ndarray | None = None, skip_hla: bool = False,
           workers: int = 1) -> DehazeResult:
    Z = imgcore.as_image(Z, "hazy image")
    A = imgcore.as_airlight(airlight) if airlight is not None else estimate_airlight(Z, cfg.stop_size)
    t0, t = estimate_transmission(Z, A, cfg, workers=workers, skip_hla=skip_hla)
    if transmission is not None:
        ext = imgcore.as_scalar_map(transmission, "external transmission")
        imgcore.check_same_grid(Z, ext, "hazy image vs external transmission")
        if not np.all(np.isfinite(ext)):
            raise ValueError("external transmission contains non-finite values")
        t = np.clip(ext, 0.0, 1.0)
    return DehazeResult(restore(Z, t, A, cfg.t_floor), A, t0, t)


def format_airlight(A) -> str:
    return "A=" + ",".join(f"{v:.6f}" for v in A)


@dataclass
class PipelineRun:
    input_path: Path
    output_path: Path
    config: DehazeConfig = field(default_factory=DehazeConfig)
    airlight: tuple[float, float, float] | None = None
    transmission_path: Path | None = None
    save_t0: Path | None = None
    save_transmission: Path | None = None
    save_airlight: Path | None = None
    skip_hla: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.airlight is not None:
            imgcore.as_airlight(self.airlight)
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


def run_pipeline(run: PipelineRun) -> DehazeResult:
    """Dehaze ``run.input_path`` and write the restored PNG plus requested side files."""
    Z = imgcore.load_image(run.input_path)
    ext = imgcore.load_scalar_map(run.transmission_path) if run.transmission_path else None
    result = dehaze(Z, run.config, airlight=run.airlight, transmission=ext,
                    skip_hla=run.skip_hla, workers=run.workers)
    imgcore.save_image(result.restored, run.output_path)
    if run.save_t0:
        imgcore.save_scalar_map(result.t0, run.save_t0)
    if run.save_transmission:
        imgcore.save_scalar_map(result.t, run.save_transmission)
    if run.save_airlight:
        Path(run.save_airlight).write_text(format_airlight(result.airlight) + "\n")
    return result
