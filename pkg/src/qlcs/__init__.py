"""Hybrid quantum/classical longest common substring and longest palindromic
substring, with every oracle built from reversible gates and run on an exact
sparse statevector simulator."""

from .circuit import Circuit, CircuitError, Gate, RegisterMap, depth, dump, expand_multicontrolled, inverse, parse
from .driver import (
    CapacityError,
    RunReport,
    TestOutcome,
    lcs,
    lps,
    quantum_test_lcs,
    quantum_test_lps,
)
from .grover import (
    GroverConfig,
    OracleSpec,
    build_U_phi,
    build_U_psi,
    build_U_rho,
    build_U_rho_pair,
    grover_search,
    prepare_kickback,
)
from .operators import (
    OperatorBuild,
    build_ctrl_rot,
    build_diffuser,
    build_fpm,
    build_ipm,
    build_sfc,
    lcs_layout,
    lps_layout,
)
from .resources import ResourceRow, estimate_resources
from .sim import SparseState, apply_circuit, apply_gate, init_basis, measure_register
from .strings import Alphabet, InputError, PaddedText, brute_lcs, brute_lps, pad_input, phi, psi, rho, rotate

__version__ = "0.1.0"
