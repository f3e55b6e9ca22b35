#include "robcons/nugap.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace robcons {
namespace {

struct ContourPoint {
  double theta;
  Complex value;
};

double phase_step(Complex a, Complex b) { return std::arg(b / a); }

// [M̃, −Ñ] as one system; both factors share the state matrix.
StateSpace left_graph_symbol(const CoprimeFactors& f) {
  Matrix B(f.Mtilde.states(), f.Mtilde.inputs() + f.Ntilde.inputs());
  B << f.Mtilde.B(), -f.Ntilde.B();
  Matrix D(f.Mtilde.outputs(), f.Mtilde.inputs() + f.Ntilde.inputs());
  D << f.Mtilde.D(), -f.Ntilde.D();
  return StateSpace(f.Mtilde.A(), B, f.Mtilde.C(), D);
}

bool same_realization(const StateSpace& a, const StateSpace& b) {
  return a.A() == b.A() && a.B() == b.B() && a.C() == b.C() && a.D() == b.D();
}

}  // namespace

std::vector<Complex> sample_contour(const std::function<Complex(double)>& f,
                                    Complex at_infinity,
                                    const NumericSettings& settings) {
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  std::vector<double> thetas;
  const int n = settings.contour_base_points;
  const double lmin = std::log10(settings.contour_omega_min);
  const double lmax = std::log10(settings.contour_omega_max);
  thetas.reserve(2 * static_cast<std::size_t>(n) + 3);
  thetas.push_back(-kHalfPi);
  for (int i = n - 1; i >= 0; --i) {
    const double e = n > 1 ? lmin + (lmax - lmin) * i / (n - 1) : lmin;
    thetas.push_back(-std::atan(std::pow(10.0, e)));
  }
  thetas.push_back(0.0);
  for (int i = 0; i < n; ++i) {
    const double e = n > 1 ? lmin + (lmax - lmin) * i / (n - 1) : lmin;
    thetas.push_back(std::atan(std::pow(10.0, e)));
  }
  thetas.push_back(kHalfPi);

  auto eval = [&](double theta) {
    if (theta <= -kHalfPi || theta >= kHalfPi) return at_infinity;
    return f(std::tan(theta));
  };

  std::vector<ContourPoint> pts;
  pts.reserve(thetas.size());
  for (double th : thetas) pts.push_back({th, eval(th)});

  const double limit = std::numbers::pi / 2.0;
  for (;;) {
    std::vector<ContourPoint> refined;
    refined.reserve(pts.size() * 2);
    bool changed = false;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      refined.push_back(pts[k]);
      const ContourPoint& a = pts[k];
      const ContourPoint& b = pts[k + 1];
      if (std::abs(a.value) < settings.origin_tol ||
          std::abs(b.value) < settings.origin_tol) {
        continue;
      }
      if (std::abs(phase_step(a.value, b.value)) >= limit) {
        const double mid = 0.5 * (a.theta + b.theta);
        if (mid <= a.theta || mid >= b.theta) {
          throw Error(ErrorKind::kGridResolutionExceeded,
                      "contour refinement reached floating-point resolution");
        }
        refined.push_back({mid, eval(mid)});
        changed = true;
      }
    }
    refined.push_back(pts.back());
    pts = std::move(refined);
    if (pts.size() > settings.contour_max_points) {
      throw Error(ErrorKind::kGridResolutionExceeded,
                  "contour needs more than " +
                      std::to_string(settings.contour_max_points) + " points");
    }
    if (!changed) break;
  }

  std::vector<Complex> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(p.value);
  return out;
}

int winding_number(std::span<const Complex> samples,
                   const NumericSettings& settings) {
  if (samples.empty()) return 0;
  for (const Complex& s : samples) {
    if (std::abs(s) < settings.origin_tol) {
      throw Error(ErrorKind::kOriginCrossing,
                  "contour sample within tolerance of the origin");
    }
  }
  double total = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Complex a = samples[k];
    const Complex b = samples[(k + 1) % samples.size()];
    const double step = phase_step(a, b);
    if (std::abs(step) >= std::numbers::pi * (1.0 - 1e-12)) {
      throw Error(ErrorKind::kGridResolutionExceeded,
                  "phase step too large to unwrap unambiguously");
    }
    total += step;
  }
  return static_cast<int>(std::lround(-total / (2.0 * std::numbers::pi)));
}

NuGapResult nu_gap(const StateSpace& P1, const StateSpace& P2,
                   const NumericSettings& settings) {
  return nu_gap(normalized_coprime_factors(P1, settings),
                normalized_coprime_factors(P2, settings), settings);
}

NuGapResult nu_gap(const CoprimeFactors& f1, const CoprimeFactors& f2,
                   const NumericSettings& settings) {
  const StateSpace G1 = right_graph_symbol(f1);
  const StateSpace G2 = right_graph_symbol(f2);
  if (G1.outputs() != G2.outputs() || G1.inputs() != G2.inputs()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "nu_gap: plants have different port dimensions");
  }
  const ResponseEvaluator e1(G1);
  const ResponseEvaluator e2(G2);
  auto det_theta = [&](double w) -> Complex {
    const ComplexMatrix g1 = e1.at_frequency(w);
    const ComplexMatrix g2 = e2.at_frequency(w);
    return (g2.adjoint() * g1).determinant();
  };
  const Complex at_inf =
      (G2.D().transpose() * G1.D()).cast<Complex>().determinant();

  NuGapResult r;
  const std::vector<Complex> samples = sample_contour(det_theta, at_inf, settings);
  r.contour_points = samples.size();
  double min_det = std::numeric_limits<double>::infinity();
  for (const Complex& s : samples) min_det = std::min(min_det, std::abs(s));
  r.min_abs_det = min_det;
  r.det_nonzero_ok = min_det > settings.det_zero;
  if (r.det_nonzero_ok) {
    r.winding = winding_number(samples, settings);
    r.winding_ok = r.winding == 0;
  }
  if (!(r.det_nonzero_ok && r.winding_ok)) {
    r.value = 1.0;
    return r;
  }
  const StateSpace phi = series(G1, left_graph_symbol(f2));
  r.phi_norm = hinf_norm(phi, settings);
  r.value = std::clamp(r.phi_norm, 0.0, 1.0);
  return r;
}

NuGapTable::NuGapTable(const std::vector<StateSpace>& plants,
                       const NumericSettings& settings, unsigned threads) {
  const std::size_t count = plants.size();
  std::vector<std::size_t> rep(count);
  std::vector<std::size_t> unique;
  for (std::size_t i = 0; i < count; ++i) {
    rep[i] = unique.size();
    for (std::size_t u = 0; u < unique.size(); ++u) {
      if (same_realization(plants[unique[u]], plants[i])) {
        rep[i] = u;
        break;
      }
    }
    if (rep[i] == unique.size()) unique.push_back(i);
  }

  std::vector<CoprimeFactors> factors(unique.size());
  internal::parallel_for(unique.size(), threads, [&](std::size_t u) {
    factors[u] = normalized_coprime_factors(plants[unique[u]], settings);
  });

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < unique.size(); ++a) {
    for (std::size_t b = a + 1; b < unique.size(); ++b) pairs.emplace_back(a, b);
  }
  Matrix ugap = Matrix::Zero(static_cast<Eigen::Index>(unique.size()),
                             static_cast<Eigen::Index>(unique.size()));
  internal::parallel_for(pairs.size(), threads, [&](std::size_t k) {
    const auto [a, b] = pairs[k];
    const double v = nu_gap(factors[a], factors[b], settings).value;
    ugap(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
    ugap(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
  });

  values_.resize(static_cast<Eigen::Index>(count),
                 static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          ugap(static_cast<Eigen::Index>(rep[i]),
               static_cast<Eigen::Index>(rep[j]));
    }
  }
}

double NuGapTable::max_nu_gap(std::size_t i) const {
  if (i >= size()) {
    throw Error(ErrorKind::kInvalidArgument, "plant index out of range");
  }
  return values_.row(static_cast<Eigen::Index>(i)).maxCoeff();
}

double max_nu_gap(std::size_t i, const std::vector<StateSpace>& plants,
                  const NumericSettings& settings) {
  if (i >= plants.size()) {
    throw Error(ErrorKind::kInvalidArgument, "plant index out of range");
  }
  const CoprimeFactors fi = normalized_coprime_factors(plants[i], settings);
  double eps = 0.0;
  for (std::size_t f = 0; f < plants.size(); ++f) {
    if (f == i || same_realization(plants[f], plants[i])) continue;
    eps = std::max(eps, nu_gap(fi, normalized_coprime_factors(plants[f], settings),
                               settings)
                            .value);
  }
  return eps;
}

CentralPlant central_plant(const NuGapTable& table,
                           const NumericSettings& settings) {
  if (table.size() == 0) {
    throw Error(ErrorKind::kInvalidArgument, "central_plant: empty family");
  }
  std::vector<double> eps(table.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < table.size(); ++i) {
    eps[i] = table.max_nu_gap(i);
    best = std::min(best, eps[i]);
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (eps[i] <= best + settings.tie_tolerance) return {i, eps[i]};
  }
  return {0, eps[0]};
}

CentralPlant central_plant(const std::vector<StateSpace>& plants,
                           const NumericSettings& settings) {
  return central_plant(NuGapTable(plants, settings), settings);
}

}  // namespace robcons
