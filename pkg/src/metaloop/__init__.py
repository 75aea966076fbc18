"""Finite quasigroups, loops and metagroups: structure checks, cosets and
transversals, smashed twisted (wreath) products, and finite topologies."""
from .catalog import catalog, cayley_dickson_factors, cd_basis, cyclic, dihedral, klein, m16, q8, s3, symmetric
from .cosets import (
    check_right_coset_shift, check_nested_transversals, check_transversal, check_translation_commutes, quotient,
    quotient_structure, right_translation, transversal,
)
from .errors import (
    FactorRejected, InputError, MetaloopError, PreconditionError, Report, ResourceError, StructureError, Verdict,
)
from .magma import LEVELS, FiniteBinarySystem, classify, satisfies
from .products import (
    SmashingFactors, compose_smashed, direct_product, embeddings_and_invariance, psi_tau_product,
    smashed_twisted_product, validate_factors,
)
from .search import brute_force_count, search_small
from .structure import (
    Subset, associator_t, center, commutant, is_central_metagroup, is_invariant, is_metagroup,
    minimal_t_subgroup, nuclei, nucleus,
)
from .topology import (
    BaseFamily, FiniteTopology, base_from_topology, check_continuity, topology_from_base,
    verify_base_axioms, verify_function_space_identities, w_set,
)
from .wreath import FunctionSpace, WreathSpec, f_action, theta_isomorphism, wreath_product

__version__ = "0.1.0"
