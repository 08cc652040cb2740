"""Exact-arithmetic engine for differential BV algebras.

Verifies the dBV axioms over exact rationals, decides E1-degeneration of the
hbar-filtration spectral sequence by lifting homology classes, builds the
quantum splitting, and constructs versal solutions to the classical
Maurer-Cartan equation and the quantum master equation with machine-checked
residuals.

Typical session::

    >>> from dbv import landau_ginzburg, compute_homology, build_beta, quantum_solve
    >>> A = landau_ginzburg("x^3")
    >>> H, dec = compute_homology(A)
    >>> sorted(c.name for c in H)
    ['[1]', '[x]']
    >>> sol = quantum_solve(A, build_beta(A, dec), 3)
    >>> sol.residual().is_zero()
    True
"""

from .algebras import DBVAlgebra, FiniteDimDBV, LandauGinzburgDBV, algebra_from_json
from .axioms import AxiomReport, check_axioms
from .errors import (
    AlgebraSpecError,
    BasisMismatchError,
    DbvError,
    DegenerationRefusedError,
    HbarDivisionError,
    PreconditionError,
    SolverInvariantError,
)
from .generators import (
    landau_ginzburg,
    qdelta_gap_example,
    random_finite,
    square_zero_example,
)
from .series import DeformationVariable, Monomial, Series, monomial_mul
from .solver import (
    Residual,
    VersalSolution,
    classical_solve_log,
    closed_representatives,
    conjugated_master_operator,
    observable_extend,
    quantum_solve,
    residual,
    solution_from_json,
    verify_solution,
)
from .splitting import (
    DegenerationReport,
    HomologyBasis,
    HomologyClass,
    Lift,
    Obstruction,
    ObstructionReport,
    QDeltaReport,
    QuantumSplitting,
    build_beta,
    compute_homology,
    degeneration_check,
    lift_to_K_closed,
    obstruction_grid,
    qdelta_lemma_check,
)
from .vectors import GradedBasis, Vector

__version__ = "0.1.0"

__all__ = [
    "AlgebraSpecError",
    "AxiomReport",
    "BasisMismatchError",
    "DBVAlgebra",
    "DbvError",
    "DeformationVariable",
    "DegenerationRefusedError",
    "DegenerationReport",
    "FiniteDimDBV",
    "GradedBasis",
    "HbarDivisionError",
    "HomologyBasis",
    "HomologyClass",
    "LandauGinzburgDBV",
    "Lift",
    "Monomial",
    "Obstruction",
    "ObstructionReport",
    "PreconditionError",
    "QDeltaReport",
    "QuantumSplitting",
    "Residual",
    "Series",
    "SolverInvariantError",
    "Vector",
    "VersalSolution",
    "algebra_from_json",
    "build_beta",
    "check_axioms",
    "classical_solve_log",
    "closed_representatives",
    "compute_homology",
    "conjugated_master_operator",
    "degeneration_check",
    "landau_ginzburg",
    "lift_to_K_closed",
    "monomial_mul",
    "observable_extend",
    "obstruction_grid",
    "qdelta_gap_example",
    "qdelta_lemma_check",
    "quantum_solve",
    "random_finite",
    "residual",
    "solution_from_json",
    "square_zero_example",
    "verify_solution",
]
