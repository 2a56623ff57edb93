"""Zak-domain numerics for the GKP bosonic code.

Modular wavefunctions on a finite patch, modular phase/shift operators,
GKP codewords and error correction, and the modular-variable subsystem
decomposition with logical-qubit extraction.
"""

from .core import (
    ExtendedValue,
    IdealZakState,
    ModularWavefunction,
    ZakGrid,
    ZakPatch,
    convention_phase,
    evaluate_extended,
    gaussian_comb,
    ideal_state_overlap,
    inner_product,
    inverse_zak_transform,
    stretch_rescale,
    tabulated,
    vacuum,
    zak_transform,
)
from .errors import (
    ConfigError,
    DegenerateLogicalError,
    GridMismatchError,
    NormalizationError,
    OffGridError,
    TruncationError,
    ZakError,
)
from .gkp import (
    DEFAULT_ALPHA,
    GKPCode,
    LogicalQubit,
    MixtureState,
    Syndrome,
    approx_codeword,
    codeword,
    ec_channel_logical,
    ec_kraus_amplitudes,
    logical_from_overlap,
    stabilizer_residual,
    syndrome_reduce,
)
from .modular import (
    CanonicalZakPoint,
    CenteredDecomposition,
    canonicalize_zak_point,
    closest_int_multiple,
    decompose,
    frac_part,
)
from .operators import (
    ModularOperator,
    QuadratureShift,
    apply_phase_u,
    apply_phase_u_unrestricted,
    apply_phase_v,
    apply_translate_u,
    apply_translate_v,
    apply_X,
    apply_Z,
    modular_expectations,
    stretched_translate_u,
    stretched_translate_v,
)
from .ssd import (
    IdealSSDState,
    PPGaugeModes,
    SSDState,
    apply_X_ssd,
    apply_Z_ssd,
    ec_gauge_trace,
    from_ssd,
    gauge_trace,
    load_ssd,
    pp_bridge,
    pp_bridge_inverse,
    save_ssd,
    to_ssd,
)

__version__ = "0.1.0"
