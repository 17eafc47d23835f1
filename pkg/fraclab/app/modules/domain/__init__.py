from .models import CutoffFamily, Domain, EigenBasis, Grid, GridFunction  # noqa
from .geometry import (  # noqa
    boundary_layer,
    build_cutoff,
    build_grid,
    cutoff_family,
    cutoff_gradient,
    dist_to_boundary,
    grid_distance,
    integrate,
    sample,
)
from .basis import build_eigenbasis, orthonormality_defect, project, synthesize  # noqa
from .corpus import corpus_functions, interior_bump, make_corpus  # noqa
