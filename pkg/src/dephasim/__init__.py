"""Simulate and design single-qubit pure-dephasing channels with frequency-entangled photons."""
from .channel import (DephasingChannel, QubitState, apply_channel, choi_eigenvalues, choi_matrix,
                      is_positive_map, trace_distance)
from .freq import (ComplexFreqDistribution, DecoherenceTrace, InteractionSpec, forward_kappa,
                   kappa_zero, scaled_decoherence)

__version__ = "0.1.0"

__all__ = [
    "ComplexFreqDistribution", "DecoherenceTrace", "DephasingChannel", "InteractionSpec",
    "QubitState", "apply_channel", "choi_eigenvalues", "choi_matrix", "forward_kappa",
    "is_positive_map", "kappa_zero", "scaled_decoherence", "trace_distance", "__version__",
]
