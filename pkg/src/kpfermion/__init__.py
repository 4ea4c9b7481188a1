"""Exact fermionic computation of KP tau-functions, n-point functions, and
the classification machinery for affine subalgebras of the infinite matrix
algebra.  All arithmetic is over exact rationals (extended by i and sqrt2
where the neutral fermions need them); there are no floats anywhere."""

from .fock import (BasisState, FockVector, QuadElement, VACUUM, apply_boson,
                   apply_fermion, apply_neutral, apply_quad, charge_of,
                   chevalley_apply, l_vacuum, normalize_wedge, vev)
from .grassmannian import (AffineCoords, Kernel, bogoliubov_state,
                           frobenius_state, plucker_minor, two_point_cell)
from .loopalg import (BandMatrix, EmbeddingData, LoopElement,
                      MatrixAutomorphism, affinized_cocycle, ainf_bracket,
                      cocycle_pairs, diagram_fixed_part, loop_embed,
                      residue_cocycle, unit_matrix)
from .npoint import NPointTable, kernel_hat_cell, npoint_formula, npoint_oracle
from .subalgebras import (InvolutionRule, KAPPA, NeutralQuadElement,
                          TWO_COMPONENT_SIGMA, b_prime_to_b, classify,
                          involution_image, is_bireduced, is_d_prime, is_fixed,
                          is_reduced, kappa, neutral_to_charged, sigma_rule)
from .tau import (PunctureData, TSeries, boson_exp_pairing, check_bprime_square,
                  check_puncture, free_energy, schur_poly, tau_series,
                  tau_series_schur)

__version__ = "0.1.0"
