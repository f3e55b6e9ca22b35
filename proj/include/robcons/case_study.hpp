#pragma once

#include <vector>

#include "robcons/config.hpp"
#include "robcons/graphs.hpp"
#include "robcons/simulator.hpp"
#include "robcons/synthesis.hpp"

namespace robcons::uuv {

/// Nominal surge velocity (m/s).
inline constexpr double kNominalSurge = 0.3;
/// Half-width of the surge velocity uncertainty (m/s).
inline constexpr double kSurgeUncertainty = 0.075;

/// Linearized depth dynamics with states (pitch rate, pitch, depth) at surge
/// velocity v.
Matrix A(double v = kNominalSurge);
Matrix B();
Matrix C();

/// Velocities of the uncertain-dynamics runs.
std::vector<double> case_velocities();

/// ΔA for a run at surge velocity v relative to the nominal model.
Matrix delta_A(double v);

/// Star, cycle and complete graphs on 4 and 5 nodes and every connected
/// graph on 3 nodes (labels "N", "N-P", "N+M").
TopologyBank canonical_bank();

/// Box with ΔA(3,2) ∈ [−0.075, 0.075] and every other entry fixed at zero.
PerturbationBox perturbation_box(int grid_count = 21);

/// Realization of the reference protocol reported for the case study.
Controller reference_controller();

/// Full case-study configuration: model, bank, box, the four cases and
/// output settings.
Config default_config();

}  // namespace robcons::uuv

namespace robcons {

/// One scenario per run of the case.
std::vector<Scenario> build_scenarios(const Config& config, int case_id,
                                      const Controller& K);

/// Simulates every run of a case; runs are independent and execute
/// concurrently.
std::vector<SimResult> run_case_study(const Config& config, int case_id,
                                      const Controller& K);

/// Case study with an explicit list of surge velocities replacing the runs of
/// the configured case.
std::vector<SimResult> run_case_study(int case_id,
                                      const std::vector<double>& v_values,
                                      const Controller& K);

}  // namespace robcons
