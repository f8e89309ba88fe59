"""Model-based single image dehazing.

Quadtree airlight search, dark-direct-attenuation transmission, haze-line
averaging, Koschmieder restoration/synthesis, and the matching loss metrics.
"""

from hazekit.airlight import QuadRegion, estimate_airlight, region_score
from hazekit.config import DehazeConfig
from hazekit.imgcore import (
    load_image,
    load_scalar_map,
    save_image,
    save_scalar_map,
)
from hazekit.metrics import (
    LossReport,
    combined_losses,
    extreme_channel,
    loss_adversarial,
    loss_extreme,
    loss_gradient,
    loss_l1,
    psnr,
)
from hazekit.pipeline import DehazeResult, PipelineRun, dehaze, run_pipeline
from hazekit.restore import SynthesisParams, restore, sample_synthesis_params, synthesize
from hazekit.transmission import (
    HazeLineIndex,
    SphericalCoords,
    build_haze_line_index,
    ddap_transmission,
    estimate_transmission,
    haze_line_average,
    to_spherical,
)

__version__ = "0.1.0"
