"""Quantum resources of two-flavor neutrino oscillations under noise.

The public API re-exports the state builder, the resource measures, the
noise channels and the correlated-dephasing model.
"""

from .channels import (
    ChannelKind,
    apply_channel,
    apply_kraus_generic,
    completeness_residual,
    kraus_set,
    tau_from_rate,
)
from .dephasing import (
    DephasingParams,
    apply_correlated_dephasing,
    attenuation_factor,
    decoherence_function,
    dephasing_kraus_map,
    evolve_combined,
    flip_probability,
)
from .errors import ConfigError, DomainError, EmptyResultError, NuEntangleError, StructureError
from .measures import (
    ResourceTriple,
    SteeringReport,
    coherence_l1,
    negativity,
    resource_triple,
    steering,
    steering_quantity,
)
from .state import (
    FlavorAmplitudes,
    OscillationKinematics,
    build_density_matrix,
    flavor_amplitudes,
    oscillation_phase,
    survival_probability,
    transition_probability,
)

__version__ = "0.1.0"
