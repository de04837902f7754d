from .dataset import load_dataset, save_dataset
from .metrics import (
    Candidate,
    EvalDataset,
    TopXReport,
    calibrate_threshold,
    evaluate_topx,
    random_baseline,
    select_top_x,
)
from .scoring import INK_RATIO_RANGE, ScoreWeights, heuristic_score, ink_mask

__all__ = [
    "Candidate",
    "EvalDataset",
    "INK_RATIO_RANGE",
    "ScoreWeights",
    "TopXReport",
    "calibrate_threshold",
    "evaluate_topx",
    "heuristic_score",
    "ink_mask",
    "load_dataset",
    "random_baseline",
    "save_dataset",
    "select_top_x",
]
