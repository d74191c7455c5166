"""Quantum graphs dressed with delta potentials and their nonlinear optical response."""

__version__ = "0.1.0"

from .errors import (ConfigError, DegeneracyError, DomainError, GraphError, InconsistentStateError,
                     InsufficientBasisError, QuadratureError, SolverFailure, UnsupportedTopologyError,
                     ValidationError)
from .graph import DeltaSpec, EdgeSpec, GraphSpec, Topology, make_spec, straight_wire
from .eigensolve import Spectrum, solve_spectrum
from .wavefunctions import EigenState, assemble_state, assemble_states, evaluate
from .moments import TransitionTable, build_table, sum_rule_residual
from .response import (BetaTensor, GammaTensor, beta_intrinsic, beta_norm, gamma_intrinsic,
                       gamma_norm, rotate_beta, rotate_gamma, tla_params)
from .pipeline import ResponseReport, analyze
