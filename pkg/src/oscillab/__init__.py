"""oscillab: a numerical laboratory for oscillation operators of ergodic averages.

The package builds lacunary window structures, evaluates the associated
oscillation operator on the real line (exactly, via prefix integrals of
piecewise-constant functions) and along orbits of circle rotations (map and
flow), realizes the operator as a vector-valued convolution kernel whose
regularity integrals are computed in closed form, and ships an experiment
harness probing strong (p,p), weak (1,1), Hardy-space, BMO, maximal-function,
and transference behavior with deterministic CSV/JSON reports.
"""

from .block_space import (
    BlockVector,
    WindowLayout,
    aggregate_rows,
    b_add,
    b_norm,
    b_scale,
    vector_from_window_values,
    window_layout,
    zero_vector,
)
from .ergodic import (
    THETA_DEFAULT,
    CircleFunction,
    CircleHarmonic,
    CirclePiecewise,
    HilbertResult,
    HorizonLimited,
    RotationSystem,
    circle_indicator,
    ebmo_norm,
    ergodic_average,
    ergodic_hilbert,
    ergodic_maximal,
    ergodic_sharp,
    hilbert_profile,
    maximal_profile,
    orbit_values,
    random_circle,
    sharp_profile,
)
from .grid import (
    GridFunction,
    distribution_bound,
    from_csv,
    indicator,
    lp_norm,
    random_bounded,
    sup_norm,
    tent,
    window_average,
)
from .kernel import (
    HormanderResult,
    difference_breakpoints,
    hormander_ceiling,
    hormander_integral,
    hormander_integral_riemann,
    kernel_at,
    kernel_difference_norm,
    kernel_norm_at,
    shell_condition_values,
)
from .lab import (
    DEFAULTS,
    EXPERIMENTS,
    ExperimentReport,
    exp_bmo,
    exp_fstar_ratio,
    exp_h1,
    exp_hormander,
    exp_oscillation,
    exp_strong_p,
    exp_transference,
    exp_weak_11,
    line_block_profile,
    line_operator_profile,
    load_config,
    run_experiment,
    write_report,
)
from .norms import (
    Atom,
    BlockGridFunction,
    ErgodicH1Result,
    bmo_norm,
    bmo_vector_norm,
    h1_norm_ergodic,
    h1_norm_line,
    hilbert_line,
    make_atom,
    mean_oscillation,
    random_block_grid,
    vector_mean_oscillation,
)
from .oscillation import (
    OscillationConfig,
    OscillationResult,
    ergodic_tail_bound,
    oscillation_ergodic,
    oscillation_ergodic_profile,
    oscillation_line,
    oscillation_line_profile,
    truncation_tail_bound,
)
from .sequences import (
    LacunaryPair,
    LacunarySequence,
    build_blocks,
    dyadic_powers,
    geometric_sequence,
    lacunary_tail_sum,
    validate_lacunary,
)

__version__ = "0.1.0"
