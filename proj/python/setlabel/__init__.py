"""Set-valued labeling: conformal label sets, weighted bootstrap, survival."""

from ._core import (
    MultinomialModel,
    NonConvergenceError,
    ParseError,
    ThresholdVector,
    argmax_labels,
    class_coverage,
    estimate_thresholds,
    fit,
    kaplan_meier,
    label_sets,
    load_model,
    load_thresholds,
    run_pipeline,
    scenario_mask,
    simulate,
    true_probabilities,
)

__version__ = "1.0.0"

__all__ = [
    "MultinomialModel",
    "NonConvergenceError",
    "ParseError",
    "ThresholdVector",
    "argmax_labels",
    "class_coverage",
    "estimate_thresholds",
    "fit",
    "kaplan_meier",
    "label_sets",
    "load_model",
    "load_thresholds",
    "run_pipeline",
    "scenario_mask",
    "simulate",
    "true_probabilities",
]
