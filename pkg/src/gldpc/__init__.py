"""GLDPC code ensembles over the binary erasure channel.

Construction of generalized-LDPC ensembles, finite-length peeling
decoders (degree-rule, probabilistic and ML at generalized nodes),
density-evolution threshold prediction, and classical rate bounds.
"""

from .codes import (
    ComponentCode,
    DecodingProfile,
    bd_profile,
    decoding_profile,
    design_rate,
    family_profile,
    hamming_rate_bound,
    nu_hat,
    register_code,
    registry_get,
    varshamov_rate_bound,
)
from .de import (
    DERun,
    StepControl,
    bd_threshold,
    de_initial,
    de_rhs,
    de_run,
    de_threshold,
    punctured_threshold,
    sc_bound,
)
from .ensemble import (
    EnsembleSpec,
    ErasurePattern,
    SyntheticComponent,
    TannerGraph,
    apply_channel,
    ensemble_rate,
    sample_graph,
)
from .errors import (
    DegenerateCodeError,
    InconsistentInputError,
    InfeasibleRateError,
    NumericalInstabilityError,
    UnknownCodeError,
)
from .gf2 import BitMatrix, erasure_decodable, min_distance, rank, solve_erasures
from .peeling import BDPD, MLPD, PPD, ResidualTrace, ber_monte_carlo, decode, decoder_kind

__all__ = [
    "BDPD",
    "BitMatrix",
    "ComponentCode",
    "DERun",
    "DecodingProfile",
    "DegenerateCodeError",
    "EnsembleSpec",
    "ErasurePattern",
    "InconsistentInputError",
    "InfeasibleRateError",
    "MLPD",
    "NumericalInstabilityError",
    "PPD",
    "ResidualTrace",
    "StepControl",
    "SyntheticComponent",
    "TannerGraph",
    "UnknownCodeError",
    "apply_channel",
    "bd_profile",
    "bd_threshold",
    "ber_monte_carlo",
    "de_initial",
    "de_rhs",
    "de_run",
    "de_threshold",
    "decode",
    "decoder_kind",
    "decoding_profile",
    "design_rate",
    "ensemble_rate",
    "erasure_decodable",
    "family_profile",
    "hamming_rate_bound",
    "min_distance",
    "nu_hat",
    "punctured_threshold",
    "rank",
    "register_code",
    "registry_get",
    "sample_graph",
    "sc_bound",
    "solve_erasures",
    "varshamov_rate_bound",
]
