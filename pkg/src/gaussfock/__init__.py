"""Gaussian displacement noise on truncated Fock spaces.

Numerics for a single bosonic mode hit by random coherent displacements
with an isotropic Gaussian profile: build states, apply the channel,
and score how well it preserves them, with several independent
computation routes that can be cross-checked against closed forms.
"""

from ._kernels import get_backend, set_backend
from .channel import (
    McSpec,
    QuadratureSpec,
    apply_channel,
    apply_channel_mc,
    kraus_weights,
    mc_alphas,
)
from .closedform import (
    ResourceMoments,
    cloning_gamma,
    fidelity_number,
    fidelity_squeezed,
    fidelity_superposition01,
    generating_function,
    max_fidelity,
    teleport_gamma,
    thermal_ensemble_fidelity,
    thermal_entanglement_fidelity,
)
from .exceptions import AccuracyError, TruncationError
from .fidelity import (
    METHODS,
    Ensemble,
    FidelityValue,
    bose_einstein_ensemble,
    check_max_bound,
    check_scaling_law,
    ensemble_fidelity,
    entanglement_fidelity,
    entanglement_fidelity_via_purification,
    fidelity_a_gamma,
    fidelity_pure,
    fidelity_pure_direct,
    fidelity_pure_mc,
    fidelity_wigner,
)
from .fock import (
    DEFAULT_DIM,
    DEFAULT_TAIL_TOL,
    DensityMatrix,
    SqueezeSpec,
    ThermalSpec,
    TruncatedPureState,
    annihilation_matrix,
    coherent_state,
    displacement_matrix,
    mean_photon,
    number_state,
    squeezed_state,
    superposition01,
    thermal_state,
)
from .phasespace import (
    DEFAULT_HALF_WIDTH,
    DEFAULT_POINTS,
    ChannelNoise,
    PhaseGrid,
    as_gamma,
    gaussian_profile,
    grid_to_csv,
    weyl_damp,
    weyl_function,
    weyl_grid,
    wigner_convolve,
    wigner_function,
    wigner_grid,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "ChannelNoise",
    "DEFAULT_DIM",
    "DEFAULT_HALF_WIDTH",
    "DEFAULT_POINTS",
    "DEFAULT_TAIL_TOL",
    "DensityMatrix",
    "Ensemble",
    "FidelityValue",
    "METHODS",
    "McSpec",
    "PhaseGrid",
    "QuadratureSpec",
    "ResourceMoments",
    "SqueezeSpec",
    "ThermalSpec",
    "TruncatedPureState",
    "TruncationError",
    "annihilation_matrix",
    "apply_channel",
    "apply_channel_mc",
    "as_gamma",
    "bose_einstein_ensemble",
    "check_max_bound",
    "check_scaling_law",
    "cloning_gamma",
    "coherent_state",
    "displacement_matrix",
    "ensemble_fidelity",
    "entanglement_fidelity",
    "entanglement_fidelity_via_purification",
    "fidelity_a_gamma",
    "fidelity_number",
    "fidelity_pure",
    "fidelity_pure_direct",
    "fidelity_pure_mc",
    "fidelity_squeezed",
    "fidelity_superposition01",
    "fidelity_wigner",
    "gaussian_profile",
    "generating_function",
    "get_backend",
    "grid_to_csv",
    "kraus_weights",
    "max_fidelity",
    "mc_alphas",
    "mean_photon",
    "number_state",
    "set_backend",
    "squeezed_state",
    "superposition01",
    "teleport_gamma",
    "thermal_ensemble_fidelity",
    "thermal_entanglement_fidelity",
    "thermal_state",
    "weyl_damp",
    "weyl_function",
    "weyl_grid",
    "wigner_convolve",
    "wigner_function",
    "wigner_grid",
    "__version__",
]
