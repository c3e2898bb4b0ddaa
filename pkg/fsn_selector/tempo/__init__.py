from fsn_selector.tempo.agents import (
    AgentTempoState,
    SelectionError,
    SelectionResult,
    ZeroIncrementEvent,
    local_view,
    run_distributed_selection,
    run_switching_selection,
)
from fsn_selector.tempo.samples import (
    ConvergedDynamicsError,
    subset_tempo,
    tempo_sample,
    tempo_sample_continuous,
    tempo_sample_discrete,
    tempo_series,
    tempo_series_csv,
)

__all__ = [
    "AgentTempoState",
    "ConvergedDynamicsError",
    "SelectionError",
    "SelectionResult",
    "ZeroIncrementEvent",
    "local_view",
    "run_distributed_selection",
    "run_switching_selection",
    "subset_tempo",
    "tempo_sample",
    "tempo_sample_continuous",
    "tempo_sample_discrete",
    "tempo_series",
    "tempo_series_csv",
]
