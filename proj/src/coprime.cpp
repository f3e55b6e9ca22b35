#include "robcons/coprime.hpp"

namespace robcons {
namespace {

Matrix inverse_sqrt_spd(const Matrix& R) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(R);
  return es.operatorInverseSqrt();
}

}  // namespace

CoprimeFactors normalized_coprime_factors(const StateSpace& P,
                                          const NumericSettings& settings) {
  const Matrix& A = P.A();
  const Matrix& B = P.B();
  const Matrix& C = P.C();
  const Matrix& D = P.D();
  const Eigen::Index m = P.inputs();
  const Eigen::Index p = P.outputs();

  const Matrix R = Matrix::Identity(m, m) + D.transpose() * D;
  const Matrix Rt = Matrix::Identity(p, p) + D * D.transpose();
  const Matrix R_inv = R.inverse();
  const Matrix Rt_inv = Rt.inverse();
  const Matrix R_isqrt = inverse_sqrt_spd(R);
  const Matrix Rt_isqrt = inverse_sqrt_spd(Rt);

  CoprimeFactors f;
  try {
    f.X = solve_care(A - B * R_inv * D.transpose() * C, B * R_isqrt,
                     C.transpose() * Rt_inv * C, settings);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kDimensionMismatch ||
        e.kind() == ErrorKind::kInvalidArgument) {
      throw;
    }
    throw Error(ErrorKind::kNoStabilizingSolution,
                std::string("control Riccati equation: ") + e.what());
  }
  try {
    f.Z = solve_care((A - B * D.transpose() * Rt_inv * C).transpose(),
                     C.transpose() * Rt_isqrt, B * R_inv * B.transpose(),
                     settings);
  } catch (const Error& e) {
    throw Error(ErrorKind::kNotDetectable,
                std::string("filter Riccati equation: ") + e.what());
  }

  f.F = -R_inv * (B.transpose() * f.X + D.transpose() * C);
  f.H = -(B * D.transpose() + f.Z * C.transpose()) * Rt_inv;

  const Matrix Ar = A + B * f.F;
  const Matrix Br = B * R_isqrt;
  f.N = StateSpace(Ar, Br, C + D * f.F, D * R_isqrt);
  f.M = StateSpace(Ar, Br, f.F, R_isqrt);

  const Matrix Al = A + f.H * C;
  const Matrix Cl = Rt_isqrt * C;
  f.Mtilde = StateSpace(Al, f.H, Cl, Rt_isqrt);
  f.Ntilde = StateSpace(Al, B + f.H * D, Cl, Rt_isqrt * D);
  return f;
}

StateSpace right_graph_symbol(const CoprimeFactors& f) {
  // N and M share (A+BF, B R^{-1/2}); stacking the outputs avoids doubling
  // the state dimension.
  Matrix C(f.N.outputs() + f.M.outputs(), f.N.states());
  C << f.N.C(), f.M.C();
  Matrix D(f.N.outputs() + f.M.outputs(), f.N.inputs());
  D << f.N.D(), f.M.D();
  return StateSpace(f.N.A(), f.N.B(), C, D);
}

}  // namespace robcons
