"""Limiting spectra of centred Kendall's tau matrices under non-identical distributions."""

from .model import ModelSpec, load_model, model_from_json, sample_matrix
from .kendall import kendall_statistic, kendall_tau_matrix, tau_pair
from .hoeffding import ScoreTables, gki_matrix, trace_stats
from .freelim import enumerate_nc2, lsd_moments, semicircle_moments

__all__ = [
    "ModelSpec", "load_model", "model_from_json", "sample_matrix",
    "kendall_statistic", "kendall_tau_matrix", "tau_pair",
    "ScoreTables", "gki_matrix", "trace_stats",
    "enumerate_nc2", "lsd_moments", "semicircle_moments",
]
