#pragma once

#include <functional>
#include <random>
#include <vector>

#include "robcons/state_space.hpp"
#include "robcons/synthesis.hpp"

namespace robcons::oracle {

/// C(jωI − A)⁻¹B + D by a dense complex solve, independent of the library's
/// response evaluator.
ComplexMatrix response(const StateSpace& P, double omega);

std::vector<double> log_grid(double lo, double hi, int points);

/// Largest σ_max of the response over the grid.
double grid_peak_gain(const StateSpace& P, const std::vector<double>& omegas);

/// sup over the grid of the pointwise chordal distance
/// σ_max((I + P2P2ᴴ)^{-1/2}(P2 − P1)(I + P1ᴴP1)^{-1/2}).
double chordal_distance(const StateSpace& P1, const StateSpace& P2,
                        const std::vector<double>& omegas);

/// Net clockwise encirclements of 0 by f(jω) on a dense symmetric grid.
int brute_force_winding(const std::function<Complex(double)>& f, int points);

/// Closed-loop multi-agent matrix by explicit entrywise Kronecker expansion.
Matrix kron_closed_loop(const Matrix& L, const Matrix& Abar, const Matrix& Bbar,
                        const Controller& K);

/// Random matrix with Hurwitz spectrum (shifted by its own abscissa).
Matrix random_hurwitz(int n, std::mt19937& rng, double margin = 0.1);

Matrix random_matrix(int rows, int cols, std::mt19937& rng);

/// Random stable system, n states.
StateSpace random_stable_system(int n, int m, int p, std::mt19937& rng,
                                bool with_d = false);

/// Random (possibly unstable) strictly proper plant; generically
/// stabilizable and detectable.
StateSpace random_plant(int n, int m, int p, std::mt19937& rng);

}  // namespace robcons::oracle
