"""Minimal transposition factorizations of the long cycle: trees, bijections and local limits."""

from .bijections import (
    CayleyTree,
    compute_faces,
    denes_to_factorization,
    factorization_tree,
    gy_bijection,
    gy_dual,
    moszkowski_forward,
    moszkowski_inverse,
    phi,
    phi_inverse,
    prufer_decode,
    prufer_encode,
)
from .errors import (
    BudgetExceeded,
    CapacityError,
    CrossingChordsError,
    FactorizationError,
    LabellingError,
    ResourceError,
    UnresolvedLabelError,
)
from .factorization import (
    Factorization,
    StepTrajectory,
    entering_indices,
    from_tilde,
    full_cycle,
    is_minimal,
    move_set,
    partial_product,
    to_tilde,
    touch_set,
    trajectories,
    trajectory,
)
from .kesten import LazyKestenTree, kesten_expand, limit_entering_indices, limit_labels, limit_trajectory
from .labelling import find_k, full_relabel, ofind_k
from .random_gen import DEFAULT_SEED, RandomSource, sample_uniform_factorization
from .trees import ELTree, EVTree, PlaneTree, ball, balls_agree, isomorphic, scale_edge_labels, shape

__version__ = "0.1.0"
