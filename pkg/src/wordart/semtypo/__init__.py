from .guidance import (
    AvgPoolEncoder,
    BiasedDenoiser,
    GuidanceGrad,
    IdentityEncoder,
    NoiseSchedule,
    NoisyBiasedDenoiser,
    PerfectDenoiser,
    PromptFieldDenoiser,
    SdsGuidance,
    TargetGuidance,
    cosine_schedule,
    sds_gradient,
    target_guidance,
)
from .optimize import OptimizationConfig, Trajectory, TrajectoryPoint, optimize
from .region import (
    RegionConfig,
    RegionSelection,
    full_region,
    localize_crop_grads,
    localize_loss,
    mask_gradient,
    region_box,
    select_region,
)

__all__ = [
    "AvgPoolEncoder",
    "BiasedDenoiser",
    "GuidanceGrad",
    "IdentityEncoder",
    "NoiseSchedule",
    "NoisyBiasedDenoiser",
    "OptimizationConfig",
    "PerfectDenoiser",
    "PromptFieldDenoiser",
    "RegionConfig",
    "RegionSelection",
    "SdsGuidance",
    "TargetGuidance",
    "Trajectory",
    "TrajectoryPoint",
    "cosine_schedule",
    "full_region",
    "localize_crop_grads",
    "localize_loss",
    "mask_gradient",
    "optimize",
    "region_box",
    "sds_gradient",
    "select_region",
    "target_guidance",
]
