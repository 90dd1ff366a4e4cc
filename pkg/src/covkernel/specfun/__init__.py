"""Special functions: Airy, integer-order Bessel, and the uniform-expansion maps."""
from .airy import AIRY_MAX, airy_ai, airy_ai_prime, airy_pair, airy_scaled
from .bessel import (DEFAULT_PRECISION_BITS, airy_correction_bound, bessel_i_exact,
                     bessel_i_ratio, bessel_i_ratio_mp, bessel_i_uniform, bessel_j_exact,
                     bessel_j_uniform_airy, default_precision, log_bessel_i,
                     log_bessel_i_ratio)
from .conformal import (DEFAULT_EPSILON, Branch, BranchedValue, Region, UniformBesselRegion,
                        eta_map, turning_prefactor, xi_map, zeta_map)

__all__ = [
    "AIRY_MAX", "DEFAULT_EPSILON", "DEFAULT_PRECISION_BITS", "Branch", "BranchedValue",
    "Region", "UniformBesselRegion", "airy_ai", "airy_ai_prime", "airy_correction_bound",
    "airy_pair", "airy_scaled", "bessel_i_exact", "bessel_i_ratio", "bessel_i_ratio_mp",
    "bessel_i_uniform", "bessel_j_exact", "bessel_j_uniform_airy", "default_precision",
    "eta_map", "log_bessel_i", "log_bessel_i_ratio", "turning_prefactor", "xi_map", "zeta_map",
]
