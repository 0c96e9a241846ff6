"""Spectra of Toeplitz matrices symmetrized by the anti-identity flip."""

from .circulant import (
    CirculantSpec,
    abs_circulant,
    apply_inverse,
    dft,
    factorize_flip_circulant,
    phase_circulant,
    sign_circulant,
    strang_circulant,
)
from .eigensolve import SpectrumReport, inertia, numerical_rank, singular_values, sym_eig
from .krylov import SolveReport, minres, preconditioned_spectrum, solve_flipped
from .spectral import (
    AcsSplit,
    DistributionCheck,
    InertiaTable,
    acs_split_check,
    cluster_measure,
    distribution_check,
    inertia_asymptotics,
    sparsely_vanishing_estimate,
)
from .structured import (
    BlockDecomposition,
    block_decompose,
    flip,
    flipped_toeplitz,
    hankel_block,
    toeplitz,
)
from .symbol import (
    GridSamples,
    Symbol,
    builtin_symbol,
    integrate_test_function,
    load_symbol,
    parse_symbol,
    sample,
    shift,
)

__version__ = "0.1.0"
