#include "robcons/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

namespace robcons {
namespace {

void require_square(const Matrix& M, const char* what) {
  if (M.rows() != M.cols()) {
    throw Error(ErrorKind::kDimensionMismatch,
                std::string(what) + " must be square, got " +
                    std::to_string(M.rows()) + "x" + std::to_string(M.cols()));
  }
}

Matrix symmetrize(const Matrix& X) { return 0.5 * (X + X.transpose()); }

// Plane rotation of zlartg: [cs, sn; -conj(sn), cs]·[f; g] = [r; 0].
void givens(Complex f, Complex g, double* cs, Complex* sn) {
  if (g == Complex(0.0)) {
    *cs = 1.0;
    *sn = 0.0;
    return;
  }
  if (f == Complex(0.0)) {
    *cs = 0.0;
    *sn = std::conj(g) / std::abs(g);
    return;
  }
  const double af = std::abs(f);
  const double d = std::hypot(af, std::abs(g));
  *cs = af / d;
  *sn = (f / af) * std::conj(g) / d;
}

// x' = c·x + s·y, y' = c·y − conj(s)·x on the given index range.
template <typename X, typename Y>
void rotate(X&& x, Y&& y, double c, Complex s) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Complex xi = x(i);
    const Complex yi = y(i);
    x(i) = c * xi + s * yi;
    y(i) = c * yi - std::conj(s) * xi;
  }
}

// Exchanges the diagonal entries k and k+1 of the triangular T, updating U.
void swap_adjacent(ComplexMatrix* T, ComplexMatrix* U, Eigen::Index k) {
  ComplexMatrix& t = *T;
  const Eigen::Index n = t.rows();
  const Complex t11 = t(k, k);
  const Complex t22 = t(k + 1, k + 1);
  double cs;
  Complex sn;
  givens(t(k, k + 1), t22 - t11, &cs, &sn);
  if (k + 2 < n) {
    const Eigen::Index len = n - k - 2;
    rotate(t.row(k).segment(k + 2, len), t.row(k + 1).segment(k + 2, len), cs,
           sn);
  }
  if (k > 0) {
    rotate(t.col(k).head(k), t.col(k + 1).head(k), cs, std::conj(sn));
  }
  t(k, k) = t22;
  t(k + 1, k + 1) = t11;
  rotate(U->col(k), U->col(k + 1), cs, std::conj(sn));
}

double care_residual(const Matrix& A, const Matrix& G, const Matrix& Q,
                     const Matrix& X) {
  return (A.transpose() * X + X * A - X * G * X + Q).norm();
}

// Kronecker operator I⊗A + A⊗I.
Matrix kron_sum(const Matrix& A) {
  const Eigen::Index n = A.rows();
  Matrix K = Matrix::Zero(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    K.block(j * n, j * n, n, n) += A;
    for (Eigen::Index i = 0; i < n; ++i) {
      K.block(i * n, j * n, n, n).diagonal().array() += A(i, j);
    }
  }
  return K;
}

// Hamiltonian whose imaginary-axis eigenvalues mark σ_max(G(jω)) = gamma.
Matrix gain_hamiltonian(const StateSpace& sys, double gamma) {
  const Matrix& A = sys.A();
  const Matrix& B = sys.B();
  const Matrix& C = sys.C();
  const Matrix& D = sys.D();
  const Eigen::Index n = A.rows();
  const Eigen::Index m = D.cols();
  const Eigen::Index p = D.rows();
  Matrix R = gamma * gamma * Matrix::Identity(m, m) - D.transpose() * D;
  Eigen::LLT<Matrix> llt(R);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::kInvalidArgument,
                "gain level does not exceed the feedthrough norm");
  }
  const Matrix Rinv_Dt = llt.solve(D.transpose());
  const Matrix Rinv_Bt = llt.solve(B.transpose());
  const Matrix Ah = A + B * Rinv_Dt * C;
  Matrix H(2 * n, 2 * n);
  H.topLeftCorner(n, n) = Ah;
  H.topRightCorner(n, n) = B * Rinv_Bt;
  H.bottomLeftCorner(n, n) =
      -C.transpose() * (Matrix::Identity(p, p) + D * Rinv_Dt) * C;
  H.bottomRightCorner(n, n) = -Ah.transpose();
  return H;
}

}  // namespace

Matrix solve_lyapunov(const Matrix& A, const Matrix& Q,
                      const NumericSettings& settings) {
  require_square(A, "A");
  require_square(Q, "Q");
  if (A.rows() != Q.rows()) {
    throw Error(ErrorKind::kDimensionMismatch, "A and Q sizes differ");
  }
  const Eigen::Index n = A.rows();
  if (n == 0) return Matrix(0, 0);
  const double alpha = spectral_abscissa(A);
  if (alpha >= -settings.hurwitz_margin) {
    throw Error(ErrorKind::kNotHurwitz,
                "spectral abscissa " + std::to_string(alpha) + " is not negative");
  }
  const Matrix Qs = symmetrize(Q);
  Vector q = -Eigen::Map<const Vector>(Qs.data(), n * n);
  Vector w = kron_sum(A).partialPivLu().solve(q);
  Matrix W = symmetrize(Eigen::Map<Matrix>(w.data(), n, n));
  return W;
}

namespace detail {

int ordered_schur(const Matrix& H, ComplexMatrix* T, ComplexMatrix* U) {
  Eigen::ComplexSchur<ComplexMatrix> schur(H.cast<Complex>());
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorKind::kEigenFailure, "complex Schur did not converge");
  }
  *T = schur.matrixT();
  *U = schur.matrixU();
  const Eigen::Index n = T->rows();
  // Bubble the stable eigenvalues forward with adjacent swaps. The relative
  // order inside each group is preserved.
  int stable = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if ((*T)(i, i).real() < 0.0) {
      for (Eigen::Index k = i - 1; k >= stable; --k) swap_adjacent(T, U, k);
      ++stable;
    }
  }
  return stable;
}

std::vector<double> gain_crossings(const StateSpace& sys, double gamma,
                                   double imag_tol) {
  const Matrix H = gain_hamiltonian(sys, gamma);
  Eigen::EigenSolver<Matrix> es(H, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::kEigenFailure,
                "Hamiltonian eigenvalues did not converge");
  }
  std::vector<double> omegas;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex lam = es.eigenvalues()(i);
    if (std::abs(lam.real()) < imag_tol * (1.0 + std::abs(lam)) &&
        lam.imag() >= 0.0) {
      omegas.push_back(lam.imag());
    }
  }
  std::sort(omegas.begin(), omegas.end());
  return omegas;
}

}  // namespace detail

Matrix solve_care(const Matrix& A, const Matrix& B, const Matrix& Q,
                  const NumericSettings& settings) {
  require_square(A, "A");
  require_square(Q, "Q");
  const Eigen::Index n = A.rows();
  if (B.rows() != n || Q.rows() != n) {
    throw Error(ErrorKind::kDimensionMismatch,
                "solve_care: A, B and Q must share the state dimension");
  }
  if (!A.allFinite() || !B.allFinite() || !Q.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "solve_care: non-finite input");
  }
  if (n == 0) return Matrix(0, 0);

  const Matrix G = B * B.transpose();
  const Matrix Qs = symmetrize(Q);
  Matrix H(2 * n, 2 * n);
  H << A, -G, -Qs, -A.transpose();

  ComplexMatrix T, U;
  detail::ordered_schur(H, &T, &U);
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    if (std::abs(T(i, i).real()) < settings.are_imag_axis) {
      throw Error(ErrorKind::kNoStabilizingSolution,
                  "Hamiltonian has an eigenvalue on the imaginary axis");
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (T(i, i).real() >= 0.0) {
      throw Error(ErrorKind::kNoStabilizingSolution,
                  "Hamiltonian stable subspace has the wrong dimension");
    }
  }

  const ComplexMatrix U11 = U.topLeftCorner(n, n);
  const ComplexMatrix U21 = U.bottomLeftCorner(n, n);
  Eigen::JacobiSVD<ComplexMatrix> svd(U11);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0 || sv(n - 1) / sv(0) < settings.subspace_rcond) {
    throw Error(ErrorKind::kSingularSubspace,
                "stable subspace basis block is singular");
  }
  const ComplexMatrix Xc =
      U11.transpose().partialPivLu().solve(U21.transpose()).transpose();
  Matrix X = symmetrize(Xc.real());

  auto tolerance = [&](const Matrix& Xk) {
    return settings.are_residual * (1.0 + Xk.squaredNorm());
  };
  for (int step = 0; step < settings.are_newton_steps &&
                     care_residual(A, G, Qs, X) > tolerance(X);
       ++step) {
    const Matrix Ak = A - G * X;
    if (spectral_abscissa(Ak) >= -settings.hurwitz_margin) break;
    X = solve_lyapunov(Ak.transpose(), X * G * X + Qs, settings);
  }
  if (care_residual(A, G, Qs, X) > tolerance(X)) {
    throw Error(ErrorKind::kNumericalInconsistency,
                "CARE residual " + std::to_string(care_residual(A, G, Qs, X)) +
                    " exceeds tolerance");
  }
  if (spectral_abscissa(A - G * X) >= -settings.hurwitz_margin) {
    throw Error(ErrorKind::kNoStabilizingSolution,
                "CARE solution does not stabilize A - B B' X");
  }
  return X;
}

Matrix matrix_exponential(const Matrix& M, double t) {
  require_square(M, "M");
  if (!M.allFinite() || !std::isfinite(t)) {
    throw Error(ErrorKind::kInvalidArgument,
                "matrix_exponential: non-finite input");
  }
  if (M.rows() == 0) return Matrix(0, 0);
  return (M * t).exp();
}

double spectral_abscissa(const Matrix& A) {
  require_square(A, "A");
  if (A.rows() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::EigenSolver<Matrix> es(A, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::kEigenFailure, "eigenvalues did not converge");
  }
  return es.eigenvalues().real().maxCoeff();
}

bool is_hurwitz(const Matrix& A, const NumericSettings& settings) {
  return spectral_abscissa(A) < -settings.hurwitz_margin;
}

double max_singular_value(const ComplexMatrix& G) {
  if (G.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(G);
  return svd.singularValues()(0);
}

double hinf_norm(const StateSpace& sys, const NumericSettings& settings) {
  const double sigma_d = max_singular_value(sys.D().cast<Complex>());
  if (sys.states() == 0) return sigma_d;
  const double alpha = spectral_abscissa(sys.A());
  if (alpha >= -settings.hurwitz_margin) {
    throw Error(ErrorKind::kUnstableSystem,
                "hinf_norm requires a stable system, spectral abscissa " +
                    std::to_string(alpha));
  }

  const ResponseEvaluator eval(sys);
  auto gain = [&](double w) { return max_singular_value(eval.at_frequency(w)); };

  double lo = std::max(sigma_d, gain(0.0));
  const int npts = settings.hinf_grid_points;
  const double lmin = std::log10(settings.hinf_grid_min);
  const double lmax = std::log10(settings.hinf_grid_max);
  for (int i = 0; i < npts; ++i) {
    const double e = npts > 1 ? lmin + (lmax - lmin) * i / (npts - 1) : lmin;
    lo = std::max(lo, gain(std::pow(10.0, e)));
  }

  auto crossings = [&](double gamma) {
    return detail::gain_crossings(sys, gamma, settings.hinf_imag_axis);
  };
  // Peak gain over the crossing frequencies and their midpoints. A genuine
  // crossing set reaches the test level; when every probe stays clearly below
  // it, the reported crossings are rounding artefacts of the Hamiltonian.
  auto probe = [&](const std::vector<double>& ws) {
    double best = 0.0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      best = std::max(best, gain(ws[i]));
      if (i + 1 < ws.size()) best = std::max(best, gain(0.5 * (ws[i] + ws[i + 1])));
    }
    return best;
  };
  auto spurious = [&](double seen, double gamma) {
    return seen < gamma * (1.0 - settings.hinf_crossing_check);
  };

  double hi = std::max(2.0 * lo, 1e-10);
  for (int k = 0;; ++k) {
    if (k > 1100) {
      throw Error(ErrorKind::kBisectionStall, "no upper bound for the H-inf norm");
    }
    const auto ws = crossings(hi);
    if (ws.empty()) break;
    const double seen = probe(ws);
    if (spurious(seen, hi)) break;
    lo = std::max(lo, seen);
    hi = std::max(2.0 * hi, 2.0 * lo);
  }

  for (int iter = 0;; ++iter) {
    const double width = hi - lo;
    if (width <= std::min(settings.hinf_abs_tol,
                          settings.hinf_rel_tol * std::max(lo, 1e-2))) {
      break;
    }
    if (iter >= settings.hinf_max_iterations) {
      throw Error(ErrorKind::kBisectionStall,
                  "H-inf bisection did not converge");
    }
    const double mid =
        (lo > 0.0 && hi / lo > 10.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    const auto ws = crossings(mid);
    const double seen = ws.empty() ? 0.0 : probe(ws);
    if (ws.empty() || spurious(seen, mid)) {
      hi = mid;
    } else {
      lo = std::max({lo, mid, seen});
      hi = std::max(hi, lo);
    }
  }
  return 0.5 * (lo + hi);
}

double hankel_norm(const StateSpace& sys, const NumericSettings& settings) {
  if (sys.states() == 0) return 0.0;
  const double alpha = spectral_abscissa(sys.A());
  if (alpha >= -settings.hurwitz_margin) {
    throw Error(ErrorKind::kUnstableSystem,
                "hankel_norm requires a stable system, spectral abscissa " +
                    std::to_string(alpha));
  }
  const Matrix Wc =
      solve_lyapunov(sys.A(), sys.B() * sys.B().transpose(), settings);
  const Matrix Wo = solve_lyapunov(sys.A().transpose(),
                                   sys.C().transpose() * sys.C(), settings);
  Eigen::EigenSolver<Matrix> es(Wc * Wo, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::kEigenFailure, "Gramian product eigenvalues failed");
  }
  return std::sqrt(std::max(0.0, es.eigenvalues().real().maxCoeff()));
}

}  // namespace robcons
