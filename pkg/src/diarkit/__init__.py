"""diarkit: desk-scale end-to-end neural speaker diarization.

A small, fully inspectable pipeline: simulate overlapping multi-speaker
mixtures with exact frame labels, extract spliced log-mel features, train
a self-attention encoder with a permutation-free loss, and score the
output with a collar-aware diarization error rate.
"""

from diarkit.numerics import new_rng, spawn_rng

__version__ = "0.1.0"

__all__ = ["new_rng", "spawn_rng", "__version__"]
