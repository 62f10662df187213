"""Classify three-qutrit states by the singularities of their hyperplane sections.

A state ``phi`` in C3 x C3 x C3 defines a hyperplane in P26; cutting the
Segre variety P2 x P2 x P2 with it gives a cubic hypersurface whose singular
points are located exactly (Gröbner bases over Q(i)) and typed A_k / D4 by
local analysis.
"""

from .arith import GaussianRational, gauss, to_field
from .poly import MultiPoly, VariableMismatch
from .ideal import (TermOrder, IdealBasis, Staircase, NotZeroDimensional, buchberger,
                    normal_form, krull_dimension, quotient_basis, mult_matrix, char_poly,
                    local_algebra_dim)
from .numeric import (NumericTolerances, NumericFailure, NotOnSection, univariate_roots,
                      numeric_rank, newton_refine)
from .segre import (StateTensor, StateFormatError, Chart, CHARTS, ProjectivePoint,
                    section_polynomial, restrict_to_chart, segre_embed, tangent_pairings,
                    tangent_membership, slocc_act, random_sl3_triple)
from .classify import (LocalType, SingularPoint, SectionClassification, ConsistencyError,
                       classify_state, classify_point, find_singular_points, splitting_reduce,
                       binary_cubic_degeneracy, milnor_oracle, stratum_of, ADJACENCY)
from .catalog import (CATALOG, ROW_IDS, NormalForm, ConstraintViolated, build_state,
                      sample_generic, expected, run_catalog)
from .report import ClassificationReport, OnionReport, onion_for
from .perturb import run_perturbation, directed_scan, adjacency_closure

__version__ = "0.1.0"
