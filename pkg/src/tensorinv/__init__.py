"""Exact invariant rings of SL(m) x SL(n) x SL(2) on m x n x 2 tensors."""

from .ring import Monomial, Polynomial, PolyRing, tensor_ring, tensor_variable
from .linalg import RatMatrix, SymMatrix, det_rational, det_symbolic, kernel_basis, minor, rank
from .pencil import (
    FormatError,
    IndeterminateTensor,
    PencilInvariants,
    TrivialInvariantRing,
    block_det,
    block_matrix,
    leading_monomial_support_check,
    pencil_coefficients_interp,
    pencil_coefficients_subset,
)
from .action import (
    GroupElement,
    TensorValues,
    act_on_polynomial,
    act_on_tensor,
    check_invariance,
    lie_invariant_space,
    random_sl,
)
from .invariants import (
    bridge_from_xi,
    bridge_to_xi,
    classical_invariants,
    hyperdet_exists,
    hyperdet_nn1,
    pencil_degenerate,
    pencil_values,
    subduct,
    substitute_generators,
    support_divisibility_check,
    u_ring,
    xi_ring,
)

__version__ = "0.1.0"
