"""attractorlab: attractors and minimal sets of finitely generated affine
group actions, with suspension-foliation lifting."""

from .affine import (AffineMap, GeneratorSet, apply, commutator_h_n, compose,
                     evaluate_word, fixed_point, inverse,
                     linearize_at_fixed_point, operator_norm, power,
                     spectral_radius, word_linear_part)
from .dynamics import (AttractorReport, BasinEvidence, Certificate,
                       DetectionParams, LimitPointEvidence, OrbitSample,
                       contraction_certificate, detect_attractor,
                       detect_local_limit_point, enumerate_reduced_words,
                       fit_affine_subspace, global_check, hausdorff_distance,
                       minimality_check, orbit, orbit_reaches,
                       verify_attractor)
from .estimators import AttractorDetector, LeafClassifier
from .suspension import (BaseDescriptor, FoliationAttractor, LeafClass,
                         Presentation, Representation, SuspendedFoliation,
                         build_representation, classify_leaf,
                         free_presentation, lift_attractor,
                         surface_presentation, suspend)
from .words import Word, ball_size, free_reduce

__version__ = "0.1.0"

__all__ = [
    "AffineMap", "GeneratorSet", "Word", "apply", "compose", "inverse",
    "power", "evaluate_word", "word_linear_part", "fixed_point",
    "linearize_at_fixed_point", "commutator_h_n", "operator_norm",
    "spectral_radius", "free_reduce", "ball_size", "enumerate_reduced_words",
    "OrbitSample", "orbit", "orbit_reaches", "Certificate",
    "contraction_certificate", "LimitPointEvidence",
    "detect_local_limit_point", "AttractorReport", "BasinEvidence",
    "DetectionParams", "detect_attractor", "verify_attractor",
    "minimality_check", "global_check", "fit_affine_subspace",
    "hausdorff_distance", "Presentation", "Representation",
    "BaseDescriptor", "SuspendedFoliation", "LeafClass",
    "FoliationAttractor", "surface_presentation", "free_presentation",
    "build_representation", "suspend", "classify_leaf", "lift_attractor",
    "AttractorDetector", "LeafClassifier",
]
