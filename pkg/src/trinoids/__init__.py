"""Classification and verification tools for catenoid-cousin end data.

Subpackages by task:

* params        -- parameter conventions and conversions
* classify      -- tetrahedron admissibility of angle triples
* surfaces      -- closed-form surface evaluators and model maps
* weierstrass   -- numerical evaluation of immersions from (g, omega)
* constellation -- the two line constellations of an admissible triple
* asymptotics   -- conjugate-end sampling, helicoid fitting, decay checks
* cli           -- command-line front end and file emitters
"""

from .params import (
    Angle,
    BpsParameter,
    BryantParameter,
    CatenoidParameter,
    PitchConvention,
    bobenko_delta,
    bps_to_lambda,
    bryant_mu_to_lambda,
    lambda_of_phi,
    phi_of_lambda,
    ray_distance_h,
    reduced_angle,
    total_curvature,
)
from .classify import Membership, TripleClass, TripleTag, classify_triple, tetrahedron_contains

__version__ = "0.1.0"

__all__ = [
    "Angle",
    "BpsParameter",
    "BryantParameter",
    "CatenoidParameter",
    "Membership",
    "PitchConvention",
    "TripleClass",
    "TripleTag",
    "bobenko_delta",
    "bps_to_lambda",
    "bryant_mu_to_lambda",
    "classify_triple",
    "lambda_of_phi",
    "phi_of_lambda",
    "ray_distance_h",
    "reduced_angle",
    "tetrahedron_contains",
    "total_curvature",
    "__version__",
]
