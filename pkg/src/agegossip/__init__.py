"""Slotted-time simulator for version-age gossip in complete networks.

Two protocol families over the random phone call model: INTERLEAVE-style file
slicing (single file, piece push/pull in minislots) and random linear coding
(n files, coded packets over a prime field), both driven by a cycle scheme
that freezes the circulating version per cycle and tracks version age against
a provable per-cycle ceiling.
"""

from .core import (EVERY_SLOT, NEVER, ConfigError, InvariantViolation, Rng,
                   SimClock, UpdateProcess, advance_source, bernoulli,
                   make_update_process, select_target, select_targets,
                   step_clock)
from .cycles import (CyclePlan, MultiFileRun, RunStats, SingleFileRun,
                     age_bound, estimate_failure_prob,
                     interleave_dissemination_trial, rlc_dissemination_trial,
                     update_dominating)
from .harness import (CSV_HEADER, ExperimentConfig, RunSummary, csv_text,
                      dissemination_times, resolve, run_dissemination,
                      run_single, run_sweep, write_csv)
from .interleave import (InterleaveState, PieceSet, pull_request, push_choice,
                         run_interleave_minislot, source_piece_set,
                         source_push_choice)
from .rlc import (CodedNetworkState, CodedPacketBasis, gf_add, gf_inv, gf_mul,
                  inverse_table, is_prime, run_rlc_slot, smallest_prime_ge)

__version__ = "0.1.0"

__all__ = [
    "EVERY_SLOT", "NEVER", "ConfigError", "InvariantViolation", "Rng",
    "SimClock", "UpdateProcess", "advance_source", "bernoulli",
    "make_update_process", "select_target", "select_targets", "step_clock",
    "CyclePlan", "MultiFileRun", "RunStats", "SingleFileRun", "age_bound",
    "estimate_failure_prob", "interleave_dissemination_trial",
    "rlc_dissemination_trial", "update_dominating",
    "CSV_HEADER", "ExperimentConfig", "RunSummary", "csv_text",
    "dissemination_times", "resolve", "run_dissemination", "run_single",
    "run_sweep", "write_csv",
    "InterleaveState", "PieceSet", "pull_request", "push_choice",
    "run_interleave_minislot", "source_piece_set", "source_push_choice",
    "CodedNetworkState", "CodedPacketBasis", "gf_add", "gf_inv", "gf_mul",
    "inverse_table", "is_prime", "run_rlc_slot", "smallest_prime_ge",
]
