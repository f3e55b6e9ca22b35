#pragma once

#include <functional>
#include <span>
#include <vector>

#include "robcons/coprime.hpp"
#include "robcons/numerics.hpp"
#include "robcons/state_space.hpp"

namespace robcons {

struct NuGapResult {
  /// ‖Φ‖∞ when both conditions hold, 1 otherwise.
  double value = 1.0;
  bool winding_ok = false;
  bool det_nonzero_ok = false;
  double phi_norm = 1.0;
  int winding = 0;
  double min_abs_det = 0.0;
  std::size_t contour_points = 0;
};

/// Samples f(jω) along the closed imaginary-axis contour ω: −∞ → +∞.
///
/// The contour is parametrized by θ = atan(ω) so that both endpoints are
/// finite; `at_infinity` supplies the common limit value at θ = ±π/2. A
/// log-symmetric base grid is refined by bisection in θ until every phase
/// step between neighbours is below π/2. Intervals touching a sample of
/// magnitude below `origin_tol` are left unrefined.
///
/// @throws Error(kGridResolutionExceeded) past contour_max_points samples.
std::vector<Complex> sample_contour(const std::function<Complex(double)>& f,
                                    Complex at_infinity,
                                    const NumericSettings& settings = {});

/// Net clockwise encirclements of the origin by an ordered closed sequence
/// of samples (the last sample is joined back to the first).
///
/// @throws Error(kOriginCrossing) if a sample is within origin_tol of 0.
/// @throws Error(kGridResolutionExceeded) if a phase step is ambiguous
///   (|Δarg| ≥ π).
int winding_number(std::span<const Complex> samples,
                   const NumericSettings& settings = {});

NuGapResult nu_gap(const StateSpace& P1, const StateSpace& P2,
                   const NumericSettings& settings = {});

/// Same metric from precomputed factorizations.
NuGapResult nu_gap(const CoprimeFactors& f1, const CoprimeFactors& f2,
                   const NumericSettings& settings = {});

/// Symmetric table of pairwise ν-gaps over a list of plants. Plants with
/// identical realizations are factored once and their mutual distance is 0.
/// Pairs are evaluated concurrently.
class NuGapTable {
 public:
  explicit NuGapTable(const std::vector<StateSpace>& plants,
                      const NumericSettings& settings = {},
                      unsigned threads = 0);

  std::size_t size() const { return static_cast<std::size_t>(values_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Matrix& values() const { return values_; }

  /// max over f of δν(P_i, P_f).
  double max_nu_gap(std::size_t i) const;

 private:
  Matrix values_;
};

/// max over f of δν(P_i, P_f) computed directly (0-based index).
double max_nu_gap(std::size_t i, const std::vector<StateSpace>& plants,
                  const NumericSettings& settings = {});

struct CentralPlant {
  std::size_t index = 0;
  double eps = 0.0;
};

/// Plant whose maximum ν-gap to the rest is smallest. Values within
/// tie_tolerance of the minimum count as ties and the lowest index wins.
CentralPlant central_plant(const NuGapTable& table,
                           const NumericSettings& settings = {});
CentralPlant central_plant(const std::vector<StateSpace>& plants,
                           const NumericSettings& settings = {});

}  // namespace robcons
