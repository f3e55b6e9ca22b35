#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "robcons/error.hpp"

namespace robcons {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// A real, proper, continuous-time LTI system
///
///   ẋ = A x + B u,   y = C x + D u.
///
/// A system with zero states is a static gain D. Construction validates
/// dimensions and rejects non-finite entries.
class StateSpace {
 public:
  StateSpace() = default;
  StateSpace(Matrix A, Matrix B, Matrix C, Matrix D);

  /// A static gain with no internal states.
  static StateSpace Gain(const Matrix& D);

  const Matrix& A() const { return A_; }
  const Matrix& B() const { return B_; }
  const Matrix& C() const { return C_; }
  const Matrix& D() const { return D_; }

  Eigen::Index states() const { return A_.rows(); }
  Eigen::Index inputs() const { return D_.cols(); }
  Eigen::Index outputs() const { return D_.rows(); }

 private:
  Matrix A_{0, 0};
  Matrix B_{0, 0};
  Matrix C_{0, 0};
  Matrix D_{0, 0};
};

/// Evaluates C(sI − A)⁻¹B + D at many points for one system. The eigenvalues
/// of A are computed once so that evaluation on the imaginary axis can reject
/// poles on the axis.
class ResponseEvaluator {
 public:
  explicit ResponseEvaluator(const StateSpace& sys);

  /// Response at s = jω. Throws PoleOnAxis if jω is within 1e-12 of an
  /// eigenvalue of A.
  ComplexMatrix at_frequency(double omega) const;

  /// Response at an arbitrary complex point (no pole check).
  ComplexMatrix at(Complex s) const;

  const StateSpace& system() const { return sys_; }

 private:
  StateSpace sys_;
  ComplexMatrix A_, B_, C_, D_;
  Eigen::VectorXcd poles_;
};

ComplexMatrix freq_response(const StateSpace& P, double omega);

/// Para-Hermitian conjugate: the realization (−Aᵀ, −Cᵀ, Bᵀ, Dᵀ) of Pᵀ(−s).
StateSpace conjugate(const StateSpace& P);

/// Cascade in which the output of `first` drives `second`, i.e. the transfer
/// function second(s)·first(s).
StateSpace series(const StateSpace& first, const StateSpace& second);

/// Parallel connection with shared input and summed outputs.
StateSpace add(const StateSpace& P1, const StateSpace& P2);

StateSpace negate(const StateSpace& P);

/// Shared input, outputs stacked as [P1; P2].
StateSpace vstack(const StateSpace& P1, const StateSpace& P2);

/// Separate inputs, summed outputs: [P1 P2].
StateSpace hstack(const StateSpace& P1, const StateSpace& P2);

}  // namespace robcons
