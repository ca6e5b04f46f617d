"""Tsetlin Machine convergence laboratory.

Simulates small positive-polarity Tsetlin Machines on two-input Boolean
operators and analyses them exactly as finite Markov chains.
"""

from tmlab.automaton import Action, AutomatonState
from tmlab.clause import ClauseState, EvalMode
from tmlab.datagen import Operator, OperatorSpec, truth_table
from tmlab.experiments import (
    ActionStability,
    ExperimentConfig,
    ExperimentReport,
    TargetProfile,
    TruthTable,
    run_batch,
    run_trial,
)
from tmlab.feedback import FeedbackContext, FeedbackEvent, FeedbackProbs, InfeasibleContext
from tmlab.machine import ConfigError, Gating, MachineConfig, Sample, TsetlinMachine

__all__ = [
    "Action",
    "ActionStability",
    "AutomatonState",
    "ClauseState",
    "ConfigError",
    "EvalMode",
    "ExperimentConfig",
    "ExperimentReport",
    "FeedbackContext",
    "FeedbackEvent",
    "FeedbackProbs",
    "Gating",
    "InfeasibleContext",
    "MachineConfig",
    "Operator",
    "OperatorSpec",
    "Sample",
    "TargetProfile",
    "TruthTable",
    "TsetlinMachine",
    "run_batch",
    "run_trial",
    "truth_table",
]
