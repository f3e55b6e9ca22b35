#include "robcons/state_space.hpp"

#include <sstream>

namespace robcons {
namespace {

std::string shape(const Matrix& M) {
  std::ostringstream os;
  os << M.rows() << "x" << M.cols();
  return os.str();
}

Matrix block_diag(const Matrix& X, const Matrix& Y) {
  Matrix out = Matrix::Zero(X.rows() + Y.rows(), X.cols() + Y.cols());
  out.topLeftCorner(X.rows(), X.cols()) = X;
  out.bottomRightCorner(Y.rows(), Y.cols()) = Y;
  return out;
}

Matrix vcat(const Matrix& X, const Matrix& Y) {
  Matrix out(X.rows() + Y.rows(), X.cols());
  out << X, Y;
  return out;
}

Matrix hcat(const Matrix& X, const Matrix& Y) {
  Matrix out(X.rows(), X.cols() + Y.cols());
  out << X, Y;
  return out;
}

}  // namespace

StateSpace::StateSpace(Matrix A, Matrix B, Matrix C, Matrix D)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), D_(std::move(D)) {
  const Eigen::Index n = A_.rows();
  if (A_.cols() != n || B_.rows() != n || C_.cols() != n ||
      D_.rows() != C_.rows() || D_.cols() != B_.cols()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "inconsistent realization A=" + shape(A_) + " B=" + shape(B_) +
                    " C=" + shape(C_) + " D=" + shape(D_));
  }
  if (!A_.allFinite() || !B_.allFinite() || !C_.allFinite() ||
      !D_.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument,
                "state-space matrices must have finite entries");
  }
}

StateSpace StateSpace::Gain(const Matrix& D) {
  return StateSpace(Matrix(0, 0), Matrix(0, D.cols()), Matrix(D.rows(), 0), D);
}

ResponseEvaluator::ResponseEvaluator(const StateSpace& sys)
    : sys_(sys),
      A_(sys.A().cast<Complex>()),
      B_(sys.B().cast<Complex>()),
      C_(sys.C().cast<Complex>()),
      D_(sys.D().cast<Complex>()) {
  if (sys.states() > 0) {
    Eigen::EigenSolver<Matrix> es(sys.A(), false);
    if (es.info() != Eigen::Success) {
      throw Error(ErrorKind::kEigenFailure, "eigenvalues of A did not converge");
    }
    poles_ = es.eigenvalues();
  }
}

ComplexMatrix ResponseEvaluator::at_frequency(double omega) const {
  const Complex s(0.0, omega);
  for (Eigen::Index i = 0; i < poles_.size(); ++i) {
    if (std::abs(poles_(i) - s) <= 1e-12) {
      throw Error(ErrorKind::kPoleOnAxis,
                  "system has a pole at j*" + std::to_string(omega));
    }
  }
  return at(s);
}

ComplexMatrix ResponseEvaluator::at(Complex s) const {
  const Eigen::Index n = A_.rows();
  if (n == 0) return D_;
  ComplexMatrix sI_A = -A_;
  sI_A.diagonal().array() += s;
  return C_ * sI_A.partialPivLu().solve(B_) + D_;
}

ComplexMatrix freq_response(const StateSpace& P, double omega) {
  return ResponseEvaluator(P).at_frequency(omega);
}

StateSpace conjugate(const StateSpace& P) {
  return StateSpace(-P.A().transpose(), -P.C().transpose(), P.B().transpose(),
                    P.D().transpose());
}

StateSpace series(const StateSpace& first, const StateSpace& second) {
  if (first.outputs() != second.inputs()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "series: first has " + std::to_string(first.outputs()) +
                    " outputs, second has " + std::to_string(second.inputs()) +
                    " inputs");
  }
  const Eigen::Index n1 = first.states();
  const Eigen::Index n2 = second.states();
  Matrix A = Matrix::Zero(n1 + n2, n1 + n2);
  A.topLeftCorner(n1, n1) = first.A();
  A.bottomLeftCorner(n2, n1) = second.B() * first.C();
  A.bottomRightCorner(n2, n2) = second.A();
  Matrix B = vcat(first.B(), second.B() * first.D());
  Matrix C = hcat(second.D() * first.C(), second.C());
  Matrix D = second.D() * first.D();
  return StateSpace(std::move(A), std::move(B), std::move(C), std::move(D));
}

StateSpace add(const StateSpace& P1, const StateSpace& P2) {
  if (P1.inputs() != P2.inputs() || P1.outputs() != P2.outputs()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "add: port dimensions differ (" + shape(P1.D()) + " vs " +
                    shape(P2.D()) + ")");
  }
  return StateSpace(block_diag(P1.A(), P2.A()), vcat(P1.B(), P2.B()),
                    hcat(P1.C(), P2.C()), P1.D() + P2.D());
}

StateSpace negate(const StateSpace& P) {
  return StateSpace(P.A(), P.B(), -P.C(), -P.D());
}

StateSpace vstack(const StateSpace& P1, const StateSpace& P2) {
  if (P1.inputs() != P2.inputs()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "vstack: input counts differ (" + std::to_string(P1.inputs()) +
                    " vs " + std::to_string(P2.inputs()) + ")");
  }
  return StateSpace(block_diag(P1.A(), P2.A()), vcat(P1.B(), P2.B()),
                    block_diag(P1.C(), P2.C()), vcat(P1.D(), P2.D()));
}

StateSpace hstack(const StateSpace& P1, const StateSpace& P2) {
  if (P1.outputs() != P2.outputs()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "hstack: output counts differ (" +
                    std::to_string(P1.outputs()) + " vs " +
                    std::to_string(P2.outputs()) + ")");
  }
  return StateSpace(block_diag(P1.A(), P2.A()), block_diag(P1.B(), P2.B()),
                    hcat(P1.C(), P2.C()), hcat(P1.D(), P2.D()));
}

}  // namespace robcons
