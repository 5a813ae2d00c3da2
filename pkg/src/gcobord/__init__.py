"""Schur multiplier classes of G-cobordisms over closed surfaces."""
from .groups import (GroupElement, GroupTable, SubgroupEmbedding, build_group, commutator,
                     commutator_product, commutator_subgroup, sylow_subgroup)
from .homology import (MultiplierClass, MultiplierStructure, bar_h2, class_of, corestriction,
                       exterior_square, restriction_transfer, surface_cycle)
from .pairword import (PairWord, RewriteTrace, SurfaceWord, apply_relation, commuting_shift,
                       from_surface, in_Z, separating_monodromy, to_surface)
from .classify import (ClassificationResult, classify, classify_abelian, classify_dihedral,
                       classify_symmetric, classify_via_sylow, sort_by_fixed_point)
from .extend import (BranchData, ExtensionCertificate, GenusOnePiece, decompose_abelian,
                     dihedral_reduction_certificate, genus_one_certificate,
                     riemann_hurwitz_check, validate_certificate)

__version__ = "0.1.0"

__all__ = [
    "GroupElement", "GroupTable", "SubgroupEmbedding", "build_group", "commutator",
    "commutator_product", "commutator_subgroup", "sylow_subgroup",
    "MultiplierClass", "MultiplierStructure", "bar_h2", "class_of", "corestriction",
    "exterior_square", "restriction_transfer", "surface_cycle",
    "PairWord", "RewriteTrace", "SurfaceWord", "apply_relation", "commuting_shift",
    "from_surface", "in_Z", "separating_monodromy", "to_surface",
    "ClassificationResult", "classify", "classify_abelian", "classify_dihedral",
    "classify_symmetric", "classify_via_sylow", "sort_by_fixed_point",
    "BranchData", "ExtensionCertificate", "GenusOnePiece", "decompose_abelian",
    "dihedral_reduction_certificate", "genus_one_certificate", "riemann_hurwitz_check",
    "validate_certificate",
]
