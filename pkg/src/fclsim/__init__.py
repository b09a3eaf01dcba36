"""fclsim: a deterministic federated continual-learning simulator.

Simulated nodes train a small dense classifier on keyed-ciphertext features
under pluggable continual-learning strategies; a central server aggregates
parameters by dataset-size-weighted averaging across communication rounds.
"""

__version__ = "0.1.0"

from . import backend
from .nn import Batch, ModelSpec

__all__ = ["Batch", "ModelSpec", "backend", "__version__"]
