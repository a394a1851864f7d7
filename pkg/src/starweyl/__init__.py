"""Affine Weyl group actions on star quivers and Fuchsian systems, with
the dual Cremona dynamics on point configurations.

Modules: dynkin (exact root/Weyl engine), quiver (moment maps and the
increment calculus), fuchsian (residue tuples, sampling, invariants),
weylops (matrix-level reflections, middle convolution, Schlesinger
translations), sakai (Picard lattice and cuspidal-cubic configurations),
serialize/cli (file formats and the command-line driver).
"""

from .dynkin import (
    AFFINE_TYPES,
    AffineWeylElement,
    CartanMatrix,
    ParamVector,
    RootVector,
    StarGraph,
    cartan_matrix,
    enumerate_roots,
    hyperplane_count,
    is_regular,
    lattice_index,
    reflect_param,
    reflect_root,
    weight_lattice_basis,
    weight_lattice_member,
)
from .errors import DegeneracyError, InputFormatError, StarweylError
from .fuchsian import (
    FuchsianSystem,
    OrbitSpec,
    Signature,
    is_irreducible,
    leg_from_orbit,
    make_system,
    normalize,
    orbit_from_leg,
    sample_system,
    signature,
)
from .quiver import (
    AlmostAffineQuiver,
    DimensionVector,
    IncrementedQuiver,
    QuiverRep,
    dim_w,
    expected_dim,
    increment,
    moment_map,
    orbit_dimension,
    permute_params,
    project_params,
    shift_params,
)
from .sakai import (
    PicardLattice,
    PointConfig,
    chi,
    cremona_reflect,
    reflect_pic,
    sakai_orbit,
    swap_points,
    wall_check,
)
from .weylops import (
    IncrementedPair,
    WeylWord,
    apply_word,
    central_reflection,
    dp_orbit,
    leg_reflection,
    lift,
    light_translation_basis,
    project,
    scalar_shift,
    schlesinger_step,
    tensor_shift,
    translate,
)

__version__ = "0.1.0"
