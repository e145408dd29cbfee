"""Exact local-system and quasicoherator computations on simplicial complexes."""

from .bncheck import (asphericity_check, bn_verdict, derived_quasicoherator,
                      e2_page, quasicoherator)
from .cellsheaf import CellularSheaf, constant_sheaf, sheaf_cohomology
from .exactalg import INTEGERS, RATIONALS, FpModule, Matrix, RingSpec, prime_field
from .fundgroup import GroupPresentation, presentation, todd_coxeter
from .localsys import Representation, rep_to_sheaf, sheaf_to_rep
from .simplicial import SimplicialComplex, build_complex, homology

__version__ = "0.1.0"
