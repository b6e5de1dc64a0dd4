"""Commitment capacity of noisy channels: computation, codes and security experiments."""

__version__ = "0.1.0"

from .channel import (
    BUNDLED,
    Channel,
    ChannelError,
    ReductionReport,
    bsc,
    bundled_channel,
    equivocation,
    is_trivial,
    load_channel,
    mutual_information,
    nonredundant_reduce,
    separation_eta,
)
from .capacity import AscentOptions, blahut_arimoto, capacity_report, maximize_equivocation
from .commitment import (
    Codebook,
    CodebookConstructionError,
    ParameterSet,
    Transcript,
    Verdict,
    build_codebook,
    commit,
    derive_parameters,
    reveal_verify,
    run_protocol,
    simulate_channel,
)
from .security import (
    ConverseAudit,
    Estimate,
    SecurityReport,
    binding_attack,
    converse_audit,
    measure_concealing,
    measure_soundness,
    remark_f_scheme,
)
from .typicality import (
    BoundCheckResult,
    chernoff_check,
    cond_typical_prob_exact,
    is_cond_typical,
    is_typical,
    typical_prob_exact,
    verify_bound_suite,
)
