"""Word tracking, conjugation closures, the Y1..Y5 stages and decomposition."""

from .closure import (
    ClosureResult,
    StageFailure,
    check_closure_cycle,
    conjugation_closure,
    find_transvection_group,
)
from .combine import combine_endpoints
from .decompose import Decomposition, Pipeline, StageLedger, decompose
from .elements import DUAL, PRIMAL, Elem, Frame
from .genset import GenSet, word_evaluate
from .stages import Stages
from .synth import gauss_decompose, gauss_ops, synth_transvection
from .words import EMPTY, Word, word_from_json, word_to_json

__all__ = [
    "ClosureResult", "StageFailure", "check_closure_cycle", "conjugation_closure",
    "find_transvection_group", "combine_endpoints", "Decomposition", "Pipeline",
    "StageLedger", "decompose", "DUAL", "PRIMAL", "Elem", "Frame", "GenSet",
    "word_evaluate", "Stages", "gauss_decompose", "gauss_ops", "synth_transvection",
    "EMPTY", "Word", "word_from_json", "word_to_json",
]
