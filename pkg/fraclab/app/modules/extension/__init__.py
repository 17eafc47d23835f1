from .models import DEFAULT_LAYERS, ExtensionField, TraceResult, YGrid  # noqa
from .kernels import (  # noqa
    extension_trace_constant,
    poisson_kernel,
    poisson_kernel_constant,
    poisson_kernel_mass,
    theta_kernel,
    theta_kernel_bessel,
    theta_kernel_dy,
)
from .fields import extend_poisson, extend_spectral, poisson_field_gradients, spectral_field_gradients  # noqa
from .solver import (  # noqa
    discrete_flux_trace,
    energy_identity_residual,
    solve_weighted_pde,
    weighted_bilinear_form,
)
from .traces import FIT_LAYERS, first_layer_ratio, neumann_trace  # noqa
from .energies import (  # noqa
    weighted_field_l2,
    weighted_field_profile,
    weighted_gradient_energy,
    weighted_lateral_energy,
    weighted_slope_profile,
    weighted_sup_gradient,
)
