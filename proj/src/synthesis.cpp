#include "robcons/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"

namespace robcons {
namespace {

std::vector<double> distinct_lambdas(const std::vector<double>& lambdas) {
  std::vector<double> out;
  for (double l : lambdas) {
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  }
  return out;
}

double perturbed_gap(const CoprimeFactors& cp, const Matrix& dA,
                     const Matrix& dB, const PlantFamily& family,
                     double lambda, const NumericSettings& settings) {
  const StateSpace plant(family.A + dA, lambda * (family.B + dB), family.C,
                         Matrix::Zero(family.C.rows(), family.B.cols()));
  CoprimeFactors f;
  try {
    f = normalized_coprime_factors(plant, settings);
  } catch (const Error& e) {
    throw Error(ErrorKind::kFactorizationFailed,
                "perturbed plant with lambda=" + std::to_string(lambda) +
                    ": " + e.what());
  }
  return nu_gap(cp, f, settings).value;
}

Matrix inverse_checked(const Matrix& M, double max_cond, const char* what) {
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return M;
  if (s(s.size() - 1) == 0.0 || s(0) / s(s.size() - 1) > max_cond) {
    throw Error(ErrorKind::kSingularL,
                std::string(what) + " is numerically singular (cond > " +
                    std::to_string(max_cond) + ")");
  }
  return M.inverse();
}

}  // namespace

StateSpace PlantFamily::plant(double lambda) const {
  return StateSpace(A, lambda * B, C, Matrix::Zero(C.rows(), B.cols()));
}

PlantFamily build_plant_family(const Matrix& A, const Matrix& B,
                               const Matrix& C, const EigenvaluePool& pool,
                               const NumericSettings& settings) {
  if (pool.lambdas.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "eigenvalue pool is empty");
  }
  for (double l : pool.lambdas) {
    if (!(l > 0.0)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "pool eigenvalues must be positive");
    }
  }
  PlantFamily family{A, B, C, pool, {}};
  const double lambda_min =
      *std::min_element(pool.lambdas.begin(), pool.lambdas.end());
  try {
    solve_care(A, lambda_min * B, C.transpose() * C, settings);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kDimensionMismatch) throw;
    throw Error(ErrorKind::kNotStabilizable,
                std::string("(A, lambda_min B) is not stabilizable: ") +
                    e.what());
  }
  family.plants.reserve(pool.lambdas.size());
  for (double l : pool.lambdas) family.plants.push_back(family.plant(l));
  return family;
}

PerturbationBox PerturbationBox::Zero(Eigen::Index n, Eigen::Index m) {
  PerturbationBox box;
  box.dA_lower = box.dA_upper = Matrix::Zero(n, n);
  box.dB_lower = box.dB_upper = Matrix::Zero(n, m);
  return box;
}

void PerturbationBox::validate(Eigen::Index n, Eigen::Index m) const {
  if (dA_lower.rows() != n || dA_lower.cols() != n || dA_upper.rows() != n ||
      dA_upper.cols() != n || dB_lower.rows() != n || dB_lower.cols() != m ||
      dB_upper.rows() != n || dB_upper.cols() != m) {
    throw Error(ErrorKind::kDimensionMismatch,
                "perturbation bounds do not match the agent dimensions");
  }
  if ((dA_lower.array() > dA_upper.array()).any() ||
      (dB_lower.array() > dB_upper.array()).any()) {
    throw Error(ErrorKind::kInvalidArgument,
                "perturbation lower bound exceeds upper bound");
  }
  if (grid_count < 2) {
    throw Error(ErrorKind::kInvalidArgument, "grid_count must be at least 2");
  }
}

std::vector<PerturbationBox::Point> PerturbationBox::grid() const {
  struct Axis {
    bool in_a;
    Eigen::Index i, j;
    std::vector<double> values;
  };
  std::vector<Axis> axes;
  auto collect = [&](const Matrix& lo, const Matrix& hi, bool in_a) {
    for (Eigen::Index j = 0; j < lo.cols(); ++j) {
      for (Eigen::Index i = 0; i < lo.rows(); ++i) {
        if (lo(i, j) == hi(i, j)) continue;
        Axis ax{in_a, i, j, {}};
        for (int k = 0; k < grid_count; ++k) {
          ax.values.push_back(k == grid_count - 1
                                  ? hi(i, j)
                                  : lo(i, j) + (hi(i, j) - lo(i, j)) * k /
                                                   (grid_count - 1));
        }
        if (lo(i, j) < 0.0 && hi(i, j) > 0.0) {
          auto it = std::lower_bound(ax.values.begin(), ax.values.end(), 0.0);
          const bool has_zero = std::any_of(ax.values.begin(), ax.values.end(),
                                            [](double v) { return v == 0.0; });
          if (!has_zero) ax.values.insert(it, 0.0);
        }
        axes.push_back(std::move(ax));
      }
    }
  };
  collect(dA_lower, dA_upper, true);
  collect(dB_lower, dB_upper, false);

  std::size_t total = 1;
  for (const Axis& ax : axes) {
    total *= ax.values.size();
    if (total > 10'000'000) {
      throw Error(ErrorKind::kInvalidArgument,
                  "perturbation grid exceeds 1e7 points");
    }
  }
  std::vector<Point> points;
  points.reserve(total);
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t k = 0; k < total; ++k) {
    Point p{dA_lower, dB_lower};
    for (std::size_t a = 0; a < axes.size(); ++a) {
      Matrix& target = axes[a].in_a ? p.dA : p.dB;
      target(axes[a].i, axes[a].j) = axes[a].values[idx[a]];
    }
    points.push_back(std::move(p));
    for (std::size_t a = 0; a < axes.size(); ++a) {
      if (++idx[a] < axes[a].values.size()) break;
      idx[a] = 0;
    }
  }
  return points;
}

Controller Controller::FromSystem(const StateSpace& sys) {
  return Controller{sys.A(), sys.B(), sys.C(), sys.D()};
}

double margin_from_riccati(const CoprimeFactors& f) {
  Eigen::EigenSolver<Matrix> es(f.X * f.Z, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::kEigenFailure, "eigenvalues of XZ did not converge");
  }
  const double lmax = std::max(0.0, es.eigenvalues().real().maxCoeff());
  return 1.0 / std::sqrt(1.0 + lmax);
}

double max_stability_margin(const StateSpace& P_cp,
                            const NumericSettings& settings) {
  const CoprimeFactors f = normalized_coprime_factors(P_cp, settings);
  const double h = hankel_norm(right_graph_symbol(f), settings);
  const double b = std::sqrt(std::max(0.0, 1.0 - h * h));
  const double b_are = margin_from_riccati(f);
  if (std::abs(b - b_are) > settings.margin_identity_tol) {
    throw Error(ErrorKind::kNumericalInconsistency,
                "Hankel margin " + std::to_string(b) +
                    " disagrees with Riccati margin " + std::to_string(b_are));
  }
  return b;
}

double psi(const Matrix& dA, const Matrix& dB, const PlantFamily& family,
           const StateSpace& cp, const NumericSettings& settings) {
  const CoprimeFactors cpf = normalized_coprime_factors(cp, settings);
  const std::vector<double> lambdas = distinct_lambdas(family.pool.lambdas);
  std::vector<double> gaps(lambdas.size(), 0.0);
  internal::parallel_for(lambdas.size(), 0, [&](std::size_t u) {
    gaps[u] = perturbed_gap(cpf, dA, dB, family, lambdas[u], settings);
  });
  return gaps.empty() ? 0.0 : *std::max_element(gaps.begin(), gaps.end());
}

MarginReport check_conditions(const PlantFamily& family,
                              const PerturbationBox& box,
                              const NumericSettings& settings) {
  box.validate(family.A.rows(), family.B.cols());
  MarginReport report;
  const NuGapTable table(family.plants, settings);
  report.nu_gap_table = table.values();
  const CentralPlant cp = central_plant(table, settings);
  report.cp_index = cp.index;
  report.cp_lambda = family.pool.lambdas[cp.index];
  const StateSpace& P_cp = family.plants[cp.index];

  const CoprimeFactors cpf = normalized_coprime_factors(P_cp, settings);
  report.b_max = max_stability_margin(P_cp, settings);
  report.b_max_riccati = margin_from_riccati(cpf);

  const std::vector<double> lambdas = distinct_lambdas(family.pool.lambdas);
  const std::vector<PerturbationBox::Point> grid = box.grid();
  const Eigen::Index n = family.A.rows();
  const Eigen::Index m = family.B.cols();
  const Matrix zero_a = Matrix::Zero(n, n);
  const Matrix zero_b = Matrix::Zero(n, m);

  // Row 0 is the unperturbed plant set, rows 1.. follow the grid.
  const std::size_t nl = lambdas.size();
  std::vector<double> gaps((grid.size() + 1) * nl, 0.0);
  internal::parallel_for(gaps.size(), 0, [&](std::size_t k) {
    const std::size_t g = k / nl;
    const std::size_t u = k % nl;
    const Matrix& dA = g == 0 ? zero_a : grid[g - 1].dA;
    const Matrix& dB = g == 0 ? zero_b : grid[g - 1].dB;
    gaps[k] = perturbed_gap(cpf, dA, dB, family, lambdas[u], settings);
  });
  auto row_max = [&](std::size_t g) {
    return *std::max_element(gaps.begin() + static_cast<long>(g * nl),
                             gaps.begin() + static_cast<long>((g + 1) * nl));
  };
  report.eps_cp = row_max(0);
  report.psi_values.reserve(grid.size());
  report.psi_max = report.eps_cp;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    report.psi_values.push_back(row_max(g + 1));
    report.psi_max = std::max(report.psi_max, report.psi_values.back());
  }
  report.nominal_ok = report.b_max > report.eps_cp;
  report.robust_ok = report.b_max > report.psi_max;
  return report;
}

SynthesisResult synthesize_controller(const StateSpace& P_cp, double gamma_rel,
                                      const NumericSettings& settings) {
  if (!(gamma_rel >= 1.0) || !std::isfinite(gamma_rel)) {
    throw Error(ErrorKind::kInvalidArgument,
                "gamma_rel must be a finite number >= 1");
  }
  if (!P_cp.D().isZero(0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "controller synthesis expects a strictly proper plant");
  }
  const Matrix& A = P_cp.A();
  const Matrix& B = P_cp.B();
  const Matrix& C = P_cp.C();
  const Eigen::Index n = A.rows();
  const CoprimeFactors f = normalized_coprime_factors(P_cp, settings);
  const Matrix& X = f.X;
  const Matrix& Z = f.Z;
  const double b_max = margin_from_riccati(f);

  SynthesisResult out;
  out.b_max = b_max;
  out.gamma_rel = gamma_rel;
  const Matrix F = -B.transpose() * X;
  const Matrix I = Matrix::Identity(n, n);

  if (gamma_rel > 1.0) {
    const double gamma = gamma_rel / b_max;
    const double g2 = gamma * gamma;
    const Matrix L = (1.0 - g2) * I + X * Z;
    const Matrix Lt_inv = inverse_checked(L.transpose(), settings.singular_l_cond,
                                          "L");
    out.gamma = gamma;
    out.K.K_A = A + B * F + g2 * Lt_inv * Z * C.transpose() * C;
    out.K.K_B = g2 * Lt_inv * Z * C.transpose();
    out.K.K_C = B.transpose() * X;
    out.K.K_D = Matrix::Zero(B.cols(), C.rows());
  } else {
    const double g2 = 1.0 / (b_max * b_max);
    const Matrix L = (1.0 - g2) * I + X * Z;
    const Matrix E = L.transpose();
    const Matrix At = E * (A + B * F) + g2 * Z * C.transpose() * C;
    const Matrix Bt = g2 * Z * C.transpose();
    const Matrix Ct = B.transpose() * X;
    out.gamma = std::sqrt(g2);

    Eigen::JacobiSVD<Matrix> svd(E, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    Eigen::Index r = 0;
    while (r < n && s(r) > settings.descriptor_rank_tol * s(0)) ++r;
    const Matrix& U = svd.matrixU();
    const Matrix& V = svd.matrixV();
    const Matrix Ah = U.transpose() * At * V;
    const Matrix Bh = U.transpose() * Bt;
    const Matrix Ch = Ct * V;
    const Eigen::Index q = n - r;
    const Matrix S1_inv = s.head(r).cwiseInverse().asDiagonal();
    if (q == 0) {
      out.K.K_A = S1_inv * Ah;
      out.K.K_B = S1_inv * Bh;
      out.K.K_C = Ch;
      out.K.K_D = Matrix::Zero(B.cols(), C.rows());
    } else {
      const Matrix A11 = Ah.topLeftCorner(r, r);
      const Matrix A12 = Ah.topRightCorner(r, q);
      const Matrix A21 = Ah.bottomLeftCorner(q, r);
      const Matrix A22 = Ah.bottomRightCorner(q, q);
      const Matrix A22_inv =
          inverse_checked(A22, settings.singular_l_cond, "algebraic block");
      const Matrix B1 = Bh.topRows(r);
      const Matrix B2 = Bh.bottomRows(q);
      const Matrix C1 = Ch.leftCols(r);
      const Matrix C2 = Ch.rightCols(q);
      out.K.K_A = S1_inv * (A11 - A12 * A22_inv * A21);
      out.K.K_B = S1_inv * (B1 - A12 * A22_inv * B2);
      out.K.K_C = C1 - C2 * A22_inv * A21;
      out.K.K_D = -C2 * A22_inv * B2;
    }
  }

  out.margin = generalized_stability_margin(P_cp, out.K, settings);
  const double required = b_max / gamma_rel - settings.margin_slack;
  if (out.margin < required) {
    throw Error(ErrorKind::kMarginShortfall,
                "achieved margin " + std::to_string(out.margin) +
                    " is below b_max/gamma_rel = " +
                    std::to_string(b_max / gamma_rel));
  }
  return out;
}

namespace {

struct Loop {
  Matrix A, B, C, D;
};

Loop positive_feedback_loop(const StateSpace& P, const Controller& K) {
  const Eigen::Index n = P.states();
  const Eigen::Index m = P.inputs();
  const Eigen::Index p = P.outputs();
  const Eigen::Index nk = K.K_A.rows();
  if (K.K_A.cols() != nk || K.K_B.rows() != nk || K.K_B.cols() != p ||
      K.K_C.rows() != m || K.K_C.cols() != nk || K.K_D.rows() != m ||
      K.K_D.cols() != p) {
    throw Error(ErrorKind::kDimensionMismatch,
                "controller dimensions do not match the plant");
  }
  const Matrix& A = P.A();
  const Matrix& B = P.B();
  const Matrix& C = P.C();
  const Matrix& D = P.D();
  const Matrix Im = Matrix::Identity(m, m);
  const Matrix loop = Im - K.K_D * D;
  Eigen::FullPivLU<Matrix> lu(loop);
  if (!lu.isInvertible()) {
    throw Error(ErrorKind::kAlgebraicLoop, "I - K_D D is singular");
  }
  const Matrix S = lu.inverse();
  const Matrix& Ak = K.K_A;
  const Matrix& Bk = K.K_B;
  const Matrix& Ck = K.K_C;
  const Matrix& Dk = K.K_D;

  Loop l;
  l.A.resize(n + nk, n + nk);
  l.A << A + B * S * Dk * C, B * S * Ck,
      Bk * C + Bk * D * S * Dk * C, Ak + Bk * D * S * Ck;
  l.B.resize(n + nk, m + p);
  l.B << -B * S, B * S * Dk,
      -Bk * D * S, Bk + Bk * D * S * Dk;
  l.C.resize(p + m, n + nk);
  l.C << C + D * S * Dk * C, D * S * Ck,
      S * Dk * C, S * Ck;
  l.D.resize(p + m, m + p);
  l.D << -D * S, D * S * Dk,
      -S, S * Dk;
  return l;
}

}  // namespace

Matrix closed_loop_matrix(const StateSpace& P, const Controller& K) {
  return positive_feedback_loop(P, K).A;
}

double generalized_stability_margin(const StateSpace& P, const Controller& K,
                                    const NumericSettings& settings) {
  Loop l = positive_feedback_loop(P, K);
  if (spectral_abscissa(l.A) >= -settings.hurwitz_margin) return 0.0;
  const StateSpace upsilon(std::move(l.A), std::move(l.B), std::move(l.C),
                           std::move(l.D));
  return 1.0 / hinf_norm(upsilon, settings);
}

StabilizationReport verify_simultaneous_stabilization(
    const Controller& K, const PlantFamily& family, const PerturbationBox& box,
    const NumericSettings& settings) {
  box.validate(family.A.rows(), family.B.cols());
  const std::vector<PerturbationBox::Point> grid = box.grid();
  const std::size_t np = family.size();
  StabilizationReport report;
  report.entries.resize(grid.size() * np);
  internal::parallel_for(report.entries.size(), 0, [&](std::size_t k) {
    const std::size_t g = k / np;
    const std::size_t i = k % np;
    const double lambda = family.pool.lambdas[i];
    const StateSpace plant(family.A + grid[g].dA,
                           lambda * (family.B + grid[g].dB), family.C,
                           Matrix::Zero(family.C.rows(), family.B.cols()));
    report.entries[k] = {g, i, spectral_abscissa(closed_loop_matrix(plant, K))};
  });
  report.worst_abscissa = -std::numeric_limits<double>::infinity();
  for (const auto& e : report.entries) {
    report.worst_abscissa = std::max(report.worst_abscissa, e.abscissa);
  }
  report.all_stable = report.worst_abscissa < -settings.hurwitz_margin;
  return report;
}

}  // namespace robcons
