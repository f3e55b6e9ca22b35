#pragma once

#include "robcons/numerics.hpp"
#include "robcons/state_space.hpp"

namespace robcons {

/// Normalized coprime factors P = N·M⁻¹ = M̃⁻¹·Ñ together with the control
/// (X) and filter (Z) Riccati solutions that generate them, and the
/// corresponding state-feedback gain F and output-injection gain H.
struct CoprimeFactors {
  StateSpace N;
  StateSpace M;
  StateSpace Ntilde;
  StateSpace Mtilde;
  Matrix X;
  Matrix Z;
  Matrix F;
  Matrix H;
};

/// Normalized right and left coprime factorization.
///
/// With R = I + DᵀD and R̃ = I + DDᵀ, X and Z are the stabilizing solutions of
/// the control and filter Riccati equations, F = −R⁻¹(BᵀX + DᵀC) and
/// H = −(BDᵀ + ZCᵀ)R̃⁻¹. For D = 0 these reduce to F = −BᵀX, H = −ZCᵀ,
/// M = (A+BF, B, F, I), N = (A+BF, B, C, 0), M̃ = (A+HC, H, C, I) and
/// Ñ = (A+HC, B, C, 0).
///
/// @throws Error(kNoStabilizingSolution) when the control equation fails.
/// @throws Error(kNotDetectable) when the filter equation fails.
CoprimeFactors normalized_coprime_factors(const StateSpace& P,
                                          const NumericSettings& settings = {});

/// [N; M] as one system, the graph symbol of P.
StateSpace right_graph_symbol(const CoprimeFactors& f);

}  // namespace robcons
