"""Media: constructors, the decomposability condition, 3D views and the quadratic classifier."""

from .appendix import QuadraticClassification, classify_quadratic_medium, quadratic_residual
from .condition import (Dc1Witness, condition_matrix, dc1_residual, detect_dcm,
                        factor_symmetric_rank2, gram, witness_from_construction)
from .medium import (KINDS, Medium, Provenance, axion_medium, bivector_map, bivectors_ab,
                     construct_pdcm, construct_qdcm, construct_sdcm, p_medium, q_medium,
                     raw_medium, solve_d_from_ab)
from .threed import (GibbsianMedium, ThreeDSplit, fourd_from_gibbsian, gibbsian_fields,
                     gibbsian_from_4d, gyrotropic_sdcm_medium, join_3d, pdcm_3d_components,
                     sdcm_3d_components, sdcm_4d_params, sdcm_from_3d, sdcm_gyrotropic_example,
                     split_3d, uniaxial_gibbsian)

__all__ = [
    "KINDS", "Medium", "Provenance", "axion_medium", "raw_medium", "construct_qdcm",
    "construct_pdcm", "construct_sdcm", "q_medium", "p_medium", "bivector_map",
    "bivectors_ab", "solve_d_from_ab",
    "Dc1Witness", "condition_matrix", "dc1_residual", "detect_dcm", "factor_symmetric_rank2",
    "gram", "witness_from_construction",
    "ThreeDSplit", "GibbsianMedium", "split_3d", "join_3d", "gibbsian_from_4d",
    "fourd_from_gibbsian", "gibbsian_fields", "uniaxial_gibbsian", "pdcm_3d_components",
    "sdcm_3d_components",
    "sdcm_4d_params", "sdcm_from_3d", "sdcm_gyrotropic_example", "gyrotropic_sdcm_medium",
    "QuadraticClassification", "classify_quadratic_medium", "quadratic_residual",
]
