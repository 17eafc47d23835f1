from .models import (  # noqa
    CONJECTURAL,
    FIT_R2_THRESHOLD,
    INCONCLUSIVE,
    NO_ESTIMATE,
    REPORTED_ONLY,
    EstimateReport,
    ScalingFit,
)
from .commutator import (  # noqa
    CommutatorField,
    check_theorem_1,
    commutator,
    commutator_via_extension,
    solve_commutator_field,
    solve_whole_space_commutator_field,
)
from .lemmas import check_es2, check_es42_es39, check_es43, check_z_energy_balance, default_ygrid  # noqa
from .hardy import check_hardy, check_hardy_profile, extremal_ratio, hardy_extremal_sweep  # noqa
from .appendix import (  # noqa
    CounterexampleResult,
    check_l1_theorem,
    check_truncation_identity,
    run_counterexample,
    slope_verdict,
    truncation,
)
from .sweep import SWEEP_CHECKS, CellKey, SweepResult, ratio_sweep  # noqa
