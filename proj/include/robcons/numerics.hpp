#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "robcons/state_space.hpp"

namespace robcons {

/// Every numerical threshold used by the library. Functions take a settings
/// record (defaulted) so tests can tighten or loosen tolerances in one place.
struct NumericSettings {
  /// A matrix is Hurwitz when its spectral abscissa is below −hurwitz_margin.
  double hurwitz_margin = 1e-12;

  double lyapunov_residual = 1e-9;

  /// CARE acceptance: ‖residual‖_F ≤ are_residual·(1 + ‖X‖_F²).
  double are_residual = 1e-8;
  /// Hamiltonian eigenvalues with |Re λ| below this are treated as lying on
  /// the imaginary axis.
  double are_imag_axis = 1e-8;
  /// Reciprocal condition number below which the stable subspace basis is
  /// declared singular.
  double subspace_rcond = 1e-12;
  int are_newton_steps = 4;

  double hinf_abs_tol = 1e-6;
  double hinf_rel_tol = 1e-9;
  double hinf_imag_axis = 1e-8;
  int hinf_grid_points = 200;
  double hinf_grid_min = 1e-4;
  double hinf_grid_max = 1e4;
  int hinf_max_iterations = 200;
  double hinf_crossing_check = 1e-3;

  double det_zero = 1e-9;
  double origin_tol = 1e-9;
  int contour_base_points = 400;
  double contour_omega_min = 1e-6;
  double contour_omega_max = 1e6;
  std::size_t contour_max_points = std::size_t{1} << 18;

  double tie_tolerance = 1e-9;
  double singular_l_cond = 1e12;
  double descriptor_rank_tol = 1e-8;
  double margin_slack = 1e-6;
  double margin_identity_tol = 1e-8;
};

/// Solves A·W + W·Aᵀ + Q = 0 for Hurwitz A by Kronecker vectorization.
Matrix solve_lyapunov(const Matrix& A, const Matrix& Q,
                      const NumericSettings& settings = {});

/// Stabilizing solution of AᵀX + XA − X·B·Bᵀ·X + Q = 0.
///
/// The solution is read off the stable invariant subspace of the Hamiltonian
/// [[A, −BBᵀ], [−Q, −Aᵀ]], found with a complex Schur decomposition whose
/// diagonal is reordered so that the stable eigenvalues lead. When the
/// residual is not small enough a few Newton (Kleinman) steps polish X.
///
/// @throws Error(kNoStabilizingSolution) for Hamiltonian eigenvalues on the
///   imaginary axis or when the result does not stabilize A − BBᵀX.
/// @throws Error(kSingularSubspace) when the subspace basis is singular.
Matrix solve_care(const Matrix& A, const Matrix& B, const Matrix& Q,
                  const NumericSettings& settings = {});

/// e^{M t}. Rejects non-finite input.
Matrix matrix_exponential(const Matrix& M, double t);

/// Largest real part over the eigenvalues of A (−∞ for an empty matrix).
double spectral_abscissa(const Matrix& A);

bool is_hurwitz(const Matrix& A, const NumericSettings& settings = {});

/// Largest singular value of a complex matrix.
double max_singular_value(const ComplexMatrix& G);

/// H∞ norm of a stable system by bisection on the Hamiltonian
/// imaginary-axis eigenvalue test, seeded with a frequency grid and lifted at
/// crossing frequencies.
double hinf_norm(const StateSpace& sys, const NumericSettings& settings = {});

/// √λ_max(W_c·W_o) with the controllability and observability Gramians.
double hankel_norm(const StateSpace& sys, const NumericSettings& settings = {});

namespace detail {

/// Complex Schur form H = U·T·Uᴴ with the eigenvalues of negative real part
/// moved to the leading diagonal positions. Returns the number of them.
int ordered_schur(const Matrix& H, ComplexMatrix* T, ComplexMatrix* U);

/// Frequencies ω ≥ 0 at which σ_max(G(jω)) = gamma, from the Hamiltonian
/// eigenvalues on the imaginary axis. Requires gamma > σ_max(D).
std::vector<double> gain_crossings(const StateSpace& sys, double gamma,
                                   double imag_tol);

}  // namespace detail

}  // namespace robcons
