from neural_linucb.ntk.gram import empirical_gram, gram_convergence, limit_gram, mean_errors
from neural_linucb.ntk.kernel import (
    arccos_expectations,
    kernel_levels,
    mc_expectations,
    ntk_matrix,
    ntk_pair,
)
from neural_linucb.ntk.models import GramError, KernelPair, MonteCarloEstimate, NTKGram
from neural_linucb.ntk.spectrum import min_eigenvalue

__all__ = [
    "GramError",
    "KernelPair",
    "MonteCarloEstimate",
    "NTKGram",
    "arccos_expectations",
    "empirical_gram",
    "gram_convergence",
    "kernel_levels",
    "limit_gram",
    "mc_expectations",
    "mean_errors",
    "min_eigenvalue",
    "ntk_matrix",
    "ntk_pair",
]
