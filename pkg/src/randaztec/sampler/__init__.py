from .chain import chain_sample
from .levels import sample_level, sample_levels_one
from .shuffling import reduce_weights, reduce_weights_one_periodic, shuffle_sample

__all__ = ["chain_sample", "reduce_weights", "reduce_weights_one_periodic",
           "sample_level", "sample_levels_one", "shuffle_sample"]
