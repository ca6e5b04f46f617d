"""Exact joint-state Markov chain of a small machine."""

from tmlab.markov.chain import (
    AnalysisTooLarge,
    ChainReport,
    JointSpace,
    TransitionKernel,
    absorption_probabilities,
    analyze,
    build_kernel,
    closed_classes,
)
from tmlab.markov.conditions import (
    CASES,
    SCENARIOS,
    Drift,
    condition_diagram,
    condition_transitions,
    direction_summary,
    enumerate_conditions,
)

__all__ = [
    "AnalysisTooLarge",
    "CASES",
    "ChainReport",
    "Drift",
    "JointSpace",
    "SCENARIOS",
    "TransitionKernel",
    "absorption_probabilities",
    "analyze",
    "build_kernel",
    "closed_classes",
    "condition_diagram",
    "condition_transitions",
    "direction_summary",
    "enumerate_conditions",
]
