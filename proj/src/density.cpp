#include "qcell/density.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "qcell/kernels.hpp"

namespace qcell {

Eigen::Matrix4cd reduced_spin_density(const RegisterState& state, int a, int b) {
  state.check_cell(a);
  state.check_cell(b);
  if (a == b) fail(ErrorCode::DuplicateIndex, "need two distinct cells");
  cplx raw[16];
  kernels::reduced_pair_density(state.amplitudes().data(), state.dim(),
                                state.stride(a), state.stride(b), raw);
  Eigen::Matrix4cd rho;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) rho(r, c) = raw[r * 4 + c];
  return rho;
}

double concurrence(const Eigen::Matrix4cd& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol::density)
    fail(ErrorCode::NotADensityMatrix, "matrix is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > tol::density ||
      std::abs(rho.trace().imag()) > tol::density)
    fail(ErrorCode::NotADensityMatrix, "trace is not 1");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> herm(rho);
  if (herm.eigenvalues().minCoeff() < -tol::density)
    fail(ErrorCode::NotADensityMatrix, "matrix has a negative eigenvalue");

  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1; yy(1, 2) = 1; yy(2, 1) = 1; yy(3, 0) = -1;  // sigma_y x sigma_y
  Eigen::Matrix4cd r = rho * yy * rho.conjugate() * yy;

  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(r, false);
  std::array<double, 4> lambda{};
  for (int i = 0; i < 4; ++i)
    lambda[i] = std::sqrt(std::max(0.0, solver.eigenvalues()(i).real()));
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

double concurrence(const RegisterState& state, int a, int b) {
  return concurrence(reduced_spin_density(state, a, b));
}

}  // namespace qcell
