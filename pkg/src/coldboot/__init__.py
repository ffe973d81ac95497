"""Key recovery from noisy cold-boot images: enumeration, rank indexing, Grover search."""
from .bits import BitString
from .channel import ChannelParams, estimate_params, log_likelihood, perturb, to_weight
from .enumeration import (CandidateTable, ChunkCandidate, EnumerationParams, build_chunk_lists,
                          generate_candidates, okea_init, okea_next)
from .rankindex import (RankMatrix, WeightDistribution, WeightInterval, create, find_bound,
                        get_key, min_weight, rank)

__all__ = [
    "BitString", "ChannelParams", "estimate_params", "log_likelihood", "perturb", "to_weight",
    "CandidateTable", "ChunkCandidate", "EnumerationParams", "build_chunk_lists",
    "generate_candidates", "okea_init", "okea_next", "RankMatrix", "WeightDistribution",
    "WeightInterval", "create", "find_bound", "get_key", "min_weight", "rank",
]
