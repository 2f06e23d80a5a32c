"""mpslab: MPS/tensor-train analysis of fermionic wavefunctions."""

__version__ = "0.1.0"

from .fock import (  # noqa: F401
    CIState,
    OccupationTensor,
    SectorBlock,
    Unfolding,
    ci_to_occupation,
    max_sector_rank,
    occupation_to_ci,
    refold,
    sector_blocks,
    unfold,
)
from .states import (  # noqa: F401
    PrimePool,
    SlaterCoefficientMatrix,
    bell_state,
    prime_state,
    primes_below,
    random_state,
    slater_expand,
)
from .tt import MPS, MPSCore, bell_mps_explicit, contract, reconstruct, tt_svd  # noqa: F401
from .ordering import (  # noqa: F401
    MutualInfoMatrix,
    OrbitalPermutation,
    apply_permutation,
    exhaustive_best_order,
    fiedler_order,
    greedy_best_order,
    mutual_information_matrix,
    pair_entropy,
    pairing_permutation,
    site_entropy,
)
from .exactrank import (  # noqa: F401
    ExactMatrix,
    MultiQuad,
    certify_full_rank,
    mq_add,
    mq_det,
    mq_is_zero,
    mq_mul,
)
from .spectra import (  # noqa: F401
    SpectrumRecord,
    entanglement_entropy,
    export_csv,
    numerical_rank,
    singular_spectrum,
)
