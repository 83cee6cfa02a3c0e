#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "rdcalib/twoview.hpp"

namespace rdcalib {

struct LambdaRange {
  double lo = -1.0;
  double hi = 0.0;

  bool contains(double lambda) const noexcept { return lambda >= lo && lambda <= hi; }
};

struct SolverCandidate {
  EssentialMatrix e;
  double lambda = 0.0;
  // Max |algebraic_residual| over the nine input correspondences, evaluated
  // with the projected essential matrix.
  double residual = 0.0;
};

using Matrix9d = Eigen::Matrix<double, 9, 9>;

// Coefficients of the quadratic eigenvalue problem
//   (A + lambda B + lambda^2 C) vec(E) = 0,
// with vec(E) the row-major flattening of E.
struct QuadraticPencil {
  Matrix9d a = Matrix9d::Zero();
  Matrix9d b = Matrix9d::Zero();
  Matrix9d c = Matrix9d::Zero();

  Matrix9d evaluate(double lambda) const { return a + lambda * b + lambda * lambda * c; }
};

/// Row i expands the lifted epipolar constraint of correspondence i in powers
/// of lambda. Rows are not normalized. Throws DuplicatePoints when two
/// correspondences coincide, InvalidArgument unless exactly nine are given.
QuadraticPencil build_qep(std::span<const Correspondence> corrs);

struct SolverOptions {
  // A complex eigenvalue counts as real when |imag| / max(1, |real|) is below this.
  double realness_tolerance = 1e-6;
};

/// All (E, lambda) solutions of the nine lifted epipolar constraints with real
/// lambda inside the range (roots within 1e-9 outside a bound are snapped onto
/// it), sorted by residual then |lambda|. Throws NoCandidate
/// when nothing survives, EigenFailure when the eigen decomposition fails.
std::vector<SolverCandidate> solve(std::span<const Correspondence> corrs, LambdaRange range,
                                   const SolverOptions& options = {});

/// Row-major reshape of a 9-vector into a 3x3 matrix.
Eigen::Matrix3d unflatten(const Eigen::Matrix<double, 9, 1>& v);
Eigen::Matrix<double, 9, 1> flatten(const Eigen::Matrix3d& m);

}  // namespace rdcalib
