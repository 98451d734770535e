"""Correlation-tensor criteria for genuine multiqubit entanglement."""

__version__ = "0.1.0"

from .corrtensor import (
    DiagonalMetric,
    ExtendedCorrelationTensor,
    LocalFrame,
    density_from_tensor,
    g_norm_sq,
    inner_product_g,
    rotate_local_frames,
    tensor_from_density,
)
from .criteria import (
    CriterionVerdict,
    FamilySpec,
    analytic_vcrit,
    direct21_bound,
    evaluate_criterion,
    family_density,
    ghz_metric_heuristic,
    ghz_metric_test,
    ghz_metric_threshold,
    prop1_three_qubit,
    prop2_modified,
    prop211_not3sep_4q,
    prop3_simple,
    prop4q_31_check,
    prop5q_genuine_4q,
    vcrit_scan,
)
from .errors import NotAStateError, NumericError, StateFileError
from .frameopt import OptimizerConfig, OptResult, maximize_over_frames, schmidt_normal_form, t_max
from .metrics import (
    ghz_metric,
    ghz_xy_metric_4q,
    modified_metric_3q,
    standard_full_correlation_metric,
)
from .oracle import (
    ProductSampler,
    max_biprod_fidelity,
    max_product_overlap,
    sample_pure_product,
    verify_schmidt_properties,
)
from .partitions import Partition, enumerate_k_partitions, make_partition, partition_shape
from .states import (
    DensityMatrix,
    PureState,
    density_from_pure,
    make_generalized_ghz,
    make_ghz,
    make_w3,
    mix_white_noise,
    tensor_product,
)
