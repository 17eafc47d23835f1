from .models import BOUNDED_KINDS, OPERATOR_KINDS, FracOrder, OperatorKind, as_kind  # noqa
from .kernels import (  # noqa
    exterior_tail,
    gradient,
    normalization_constant,
    regional_frac_laplacian,
    restricted_frac_laplacian,
)
from .spectral import spectral_frac_laplacian, spectral_power_norm  # noqa
from .fourier import DEFAULT_PADDING, FourierBox, fourier_frac_laplacian  # noqa
from .norms import (  # noqa
    frac_sobolev_norm,
    gagliardo_seminorm,
    l1_norm,
    l2_norm,
    pair_integral,
    sup_norm,
    weighted_l1_norm,
    weighted_l2_norm,
)
from .dispatch import FractionalOperator  # noqa
