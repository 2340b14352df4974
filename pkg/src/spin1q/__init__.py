"""Quantumness of spin-1 states.

The quantumness of a state is its Hilbert-Schmidt distance to the convex
hull of spin coherent states.  Pure states have a closed form in terms of
the smallest eigenvalue of their Bloch matrix; mixed states are handled by
a simplex-constrained quadratic program over sampled coherent states.
"""

__version__ = "0.1.0"

from .chull import (
    CoherentAtomSet,
    QPResult,
    QuantumnessConfig,
    QuantumnessReport,
    atom_gram,
    interpolated_state,
    lower_bound,
    quantumness,
    refine,
    sample_atoms,
    simplex_project,
    solve_simplex_qp,
)
from .ensembles import RngStream, random_coherent, random_hs_density, random_pure
from .entanglement import (
    concurrence,
    dicke_embed,
    is_classical,
    min_bloch_eig,
    negativity,
    partial_transpose,
    ppt_from_bloch,
    spin1_concurrence,
)
from .errors import (
    ConsistencyError,
    DomainError,
    InvalidInputError,
    NotPSDError,
    Spin1Error,
    StateFileError,
    StateInvariantError,
    StateSchemaError,
    StateSyntaxError,
)
from .pure import (
    appendix_oracle_F_min,
    canonicalize,
    ccs_of_pure,
    ell,
    ell_closed_form,
    f_quantumness,
    majorana_points,
    pure_quantumness,
)
from .states import (
    BlochMatrix,
    CoherentAngles,
    Decomposition,
    DensityMatrix,
    PureSpin1,
    Rotation3,
    bloch_from_density,
    density_from_bloch,
    hs_distance,
)
from .stateio import parse_state, read_state, serialize_state
