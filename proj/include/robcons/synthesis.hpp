#pragma once

#include <vector>

#include "robcons/coprime.hpp"
#include "robcons/graphs.hpp"
#include "robcons/nugap.hpp"
#include "robcons/numerics.hpp"
#include "robcons/state_space.hpp"

namespace robcons {

/// The plants (A, λ_i B, C, 0), one per pool eigenvalue.
struct PlantFamily {
  Matrix A;
  Matrix B;
  Matrix C;
  EigenvaluePool pool;
  std::vector<StateSpace> plants;

  std::size_t size() const { return plants.size(); }
  StateSpace plant(double lambda) const;
};

/// @throws Error(kNotStabilizable) if the Riccati equation for
///   (A, λ_min B) has no stabilizing solution.
PlantFamily build_plant_family(const Matrix& A, const Matrix& B,
                               const Matrix& C, const EigenvaluePool& pool,
                               const NumericSettings& settings = {});

/// Elementwise bounds on additive perturbations of A and B. Entries with
/// equal bounds are fixed; every other entry is sampled on `grid_count`
/// evenly spaced points including both bounds.
struct PerturbationBox {
  Matrix dA_lower;
  Matrix dA_upper;
  Matrix dB_lower;
  Matrix dB_upper;
  int grid_count = 21;

  /// A box with all bounds zero.
  static PerturbationBox Zero(Eigen::Index n, Eigen::Index m);

  void validate(Eigen::Index n, Eigen::Index m) const;

  struct Point {
    Matrix dA;
    Matrix dB;
  };

  /// All grid combinations. Zero is added to the samples of any entry whose
  /// interval contains it, so the unperturbed point is always present.
  std::vector<Point> grid() const;
};

/// Dynamic protocol v̇ = K_A v + K_B δ, u = K_C v + K_D δ.
struct Controller {
  Matrix K_A;
  Matrix K_B;
  Matrix K_C;
  Matrix K_D;

  StateSpace system() const {
    return StateSpace(K_A, K_B, K_C, K_D);
  }
  static Controller FromSystem(const StateSpace& sys);
};

/// √(1 − ‖[N; M]‖_H²) for the normalized right factors of P_cp. The result
/// is cross-checked against (1 + λ_max(XZ))^{-1/2}.
///
/// @throws Error(kNumericalInconsistency) if the two disagree by more than
///   margin_identity_tol.
double max_stability_margin(const StateSpace& P_cp,
                            const NumericSettings& settings = {});

/// (1 + λ_max(XZ))^{-1/2} from a factorization.
double margin_from_riccati(const CoprimeFactors& f);

/// max over the family of δν(P_cp, (A+dA, λ_i(B+dB), C, 0)).
///
/// @throws Error(kFactorizationFailed) naming the perturbed plant that could
///   not be factored.
double psi(const Matrix& dA, const Matrix& dB, const PlantFamily& family,
           const StateSpace& cp, const NumericSettings& settings = {});

struct MarginReport {
  double b_max = 0.0;
  double b_max_riccati = 0.0;
  double eps_cp = 0.0;
  double psi_max = 0.0;
  std::size_t cp_index = 0;
  double cp_lambda = 0.0;
  bool nominal_ok = false;
  bool robust_ok = false;
  /// Ψ at each point of box.grid(), same order.
  std::vector<double> psi_values;
  Matrix nu_gap_table;
};

MarginReport check_conditions(const PlantFamily& family,
                              const PerturbationBox& box,
                              const NumericSettings& settings = {});

struct SynthesisResult {
  Controller K;
  double gamma = 0.0;
  double gamma_rel = 1.0;
  double b_max = 0.0;
  double margin = 0.0;
};

/// Loop-shaping controller for P_cp = (A, B, C, 0) in positive feedback.
///
/// For gamma_rel > 1, with γ = gamma_rel/b_max, F = −BᵀX and
/// L = (1 − γ²)I + XZ:
///   K_A = A + BF + γ²L⁻ᵀZCᵀC,  K_B = γ²L⁻ᵀZCᵀ,  K_C = BᵀX,  K_D = 0.
/// For gamma_rel = 1, γ² = 1 + λ_max(XZ) makes L singular. The controller is
/// then the descriptor system Lᵀv̇ = (Lᵀ(A+BF) + γ²ZCᵀC)v + γ²ZCᵀδ,
/// u = BᵀXv, reduced to a standard realization by eliminating the algebraic
/// part.
///
/// @throws Error(kSingularL) if L is numerically singular for gamma_rel > 1
///   or the algebraic block is singular for gamma_rel = 1.
/// @throws Error(kMarginShortfall) if b_{P,K} < b_max/gamma_rel − margin_slack.
SynthesisResult synthesize_controller(const StateSpace& P_cp, double gamma_rel,
                                      const NumericSettings& settings = {});

/// State matrix of the positive-feedback loop u = K y around P.
///
/// @throws Error(kAlgebraicLoop) if I − K_D·D is singular.
Matrix closed_loop_matrix(const StateSpace& P, const Controller& K);

/// b_{P,K} = 1/‖[P; I](I − KP)⁻¹[−I K]‖∞ when the loop is internally stable,
/// 0 otherwise.
double generalized_stability_margin(const StateSpace& P, const Controller& K,
                                    const NumericSettings& settings = {});

struct StabilityEntry {
  std::size_t grid_index = 0;
  std::size_t plant_index = 0;
  double abscissa = 0.0;
};

struct StabilizationReport {
  std::vector<StabilityEntry> entries;
  bool all_stable = false;
  double worst_abscissa = 0.0;
};

/// Closed-loop spectral abscissa for every box grid point and plant.
StabilizationReport verify_simultaneous_stabilization(
    const Controller& K, const PlantFamily& family, const PerturbationBox& box,
    const NumericSettings& settings = {});

}  // namespace robcons
