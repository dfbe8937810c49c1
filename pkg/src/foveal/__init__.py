"""Saliency-foveated observation preprocessing for a pixel maze agent.

Pipeline: spectral-residual saliency on each frame, alpha-blend foveation
of the raw image, downsampling to a small gray plane, and an n-step
advantage actor-critic learner with a reward-prediction side task; plus a
grid-maze simulator, perturbation-robustness evaluation, and reporting.
"""

from .agent import (
    AgentConfig,
    ParamLayout,
    ParamStore,
    ReplayBuffer,
    RPSample,
    Trajectory,
    a3c_loss_and_grad,
    apply_gradients,
    forward,
    init_params,
    load_checkpoint,
    n_step_returns,
    rp_loss_and_grad,
    sample_rp_batch,
    save_checkpoint,
)
from .config import TrainConfig, default_config, dump_config, load_config, parse_config
from .experiment import (
    EvalReport,
    MetricsRow,
    REFERENCE_SCORES,
    ReferenceScores,
    TrainResult,
    alpha_sweep,
    evaluate,
    plot_metrics,
    random_policy_baseline,
    read_metrics_csv,
    report_table,
    train,
)
from .foveation import (
    FoveationConfig,
    blend_foveate,
    heatmap_overlay,
    preprocess_observation,
)
from .imaging import (
    jet_colormap,
    read_fpl,
    read_png,
    resize_bilinear,
    rgb_to_gray,
    rgb_to_hsv,
    hsv_to_rgb,
    write_fpl,
    write_png,
)
from .maze import Action, EnvState, MazeSpec, default_maze, parse_maze, render, reset, step
from .perturb import (
    PerturbCategory,
    PerturbConfig,
    frame_rng,
    gaussian_noise,
    perturb_frame,
    tint,
)
from .saliency import (
    SaliencyMap,
    SpectralConfig,
    box_filter,
    fft2d,
    gaussian_blur,
    ifft2d,
    normalize_map,
    spectral_residual,
)

__version__ = "0.1.0"

__all__ = [
    "AgentConfig",
    "Action",
    "EnvState",
    "EvalReport",
    "FoveationConfig",
    "MazeSpec",
    "MetricsRow",
    "ParamLayout",
    "ParamStore",
    "PerturbCategory",
    "PerturbConfig",
    "REFERENCE_SCORES",
    "ReferenceScores",
    "ReplayBuffer",
    "RPSample",
    "SaliencyMap",
    "SpectralConfig",
    "TrainConfig",
    "TrainResult",
    "Trajectory",
    "a3c_loss_and_grad",
    "alpha_sweep",
    "apply_gradients",
    "blend_foveate",
    "box_filter",
    "default_config",
    "default_maze",
    "dump_config",
    "evaluate",
    "fft2d",
    "forward",
    "frame_rng",
    "gaussian_blur",
    "gaussian_noise",
    "heatmap_overlay",
    "hsv_to_rgb",
    "ifft2d",
    "init_params",
    "jet_colormap",
    "load_checkpoint",
    "load_config",
    "n_step_returns",
    "normalize_map",
    "parse_config",
    "parse_maze",
    "perturb_frame",
    "plot_metrics",
    "preprocess_observation",
    "random_policy_baseline",
    "read_fpl",
    "read_metrics_csv",
    "read_png",
    "render",
    "report_table",
    "reset",
    "resize_bilinear",
    "rgb_to_gray",
    "rgb_to_hsv",
    "rp_loss_and_grad",
    "sample_rp_batch",
    "save_checkpoint",
    "spectral_residual",
    "step",
    "tint",
    "train",
    "write_fpl",
    "write_png",
]
