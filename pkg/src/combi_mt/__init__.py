"""Finite-model-theory workbench for P- and E-combinations of structures."""

from .combine import (
    CombinedStructure,
    FamilySpec,
    e_combine,
    p_combine,
    p_infinity_residual,
    relativize,
    restrict_to_class,
    restrict_to_predicate,
)
from .logic import Signature, free_variables, parse_formula, quantifier_rank, render
from .model import FiniteStructure, are_isomorphic, ef_equivalent, evaluate, orbit_count
from .separate import SeparationCertificate, e_separating_set, separating_sentence
from .spectra import CONTINUUM, OMEGA, ExtCardinal, Fin

__version__ = "0.1.0"
