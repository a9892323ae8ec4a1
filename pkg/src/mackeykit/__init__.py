"""mackeykit: exact computational algebra for finite-group induction theory.

Everything is exact (prime fields and rationals, no floating point in any
verdict) and every categorical identity the package constructs is verified
mechanically at construction time or by an explicit checker.
"""

from .linalg import GF, QQ, Field, Mat
from .groups import (
    DoubleCosetDecomposition,
    FiniteGroup,
    InjectiveHom,
    Subgroup,
    group_from_generators,
    group_from_table,
)
from .catalog import BUILTIN_NAMES, builtin_group, load_group
from .groupoids import (
    FiniteGroupoid,
    GroupoidFunctor,
    isocomma,
    skeletonize,
    verify_isocomma_decomposition,
)
from .burnside import (
    Block,
    CommutativeAlgebra,
    CrossedBurnsideAlgebra,
    GSet,
    NotSplitOverRationals,
    block_decomposition,
    burnside_multiply,
    burnside_vector,
    gset_from_subgroup,
    gset_induce,
    gset_restrict,
    primitive_idempotents,
    table_of_marks,
)
from .reps import (
    DecompositionError,
    Module,
    ModuleHom,
    decompose,
    frobenius_object,
    green_correspondent,
    hom_space,
    induce,
    is_summand,
    mackey_iso,
    module_isomorphism,
    permutation_module,
    projection_map,
    regular_module,
    restrict,
    restrict_to,
    tensor,
    trivial_module,
    unit_counit,
    vertex,
)
from .mackey import (
    GreenFunctorData,
    OrdinaryMackeyFunctor,
    burnside_green_functor,
    cohomological_check,
    green_from_monoid,
    hom_decategorify,
    verify_green_axioms,
    verify_mackey_axioms,
)

__version__ = "0.1.0"
