#include "rdcalib/solver9pt.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include "rdcalib/error.hpp"

namespace rdcalib {

namespace {

using Matrix18d = Eigen::Matrix<double, 18, 18>;
using Vector9d = Eigen::Matrix<double, 9, 1>;

constexpr double kDuplicateTolerance = 1e-12;
// Roots this close outside the range are snapped onto the bound; a root at
// exactly lo or hi otherwise comes back on either side of it.
constexpr double kBoundarySlack = 1e-9;

bool same_point(const NormalizedPoint& a, const NormalizedPoint& b) {
  return std::abs(a.x - b.x) <= kDuplicateTolerance && std::abs(a.y - b.y) <= kDuplicateTolerance;
}

}  // namespace

Eigen::Matrix3d unflatten(const Vector9d& v) {
  Eigen::Matrix3d m;
  m << v(0), v(1), v(2),
       v(3), v(4), v(5),
       v(6), v(7), v(8);
  return m;
}

Vector9d flatten(const Eigen::Matrix3d& m) {
  Vector9d v;
  v << m(0, 0), m(0, 1), m(0, 2), m(1, 0), m(1, 1), m(1, 2), m(2, 0), m(2, 1), m(2, 2);
  return v;
}

QuadraticPencil build_qep(std::span<const Correspondence> corrs) {
  if (corrs.size() != 9) {
    std::ostringstream msg;
    msg << "expected 9 correspondences, got " << corrs.size();
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    for (std::size_t j = i + 1; j < corrs.size(); ++j) {
      if (same_point(corrs[i].p1, corrs[j].p1) && same_point(corrs[i].p2, corrs[j].p2)) {
        std::ostringstream msg;
        msg << "correspondences " << i << " and " << j << " coincide";
        throw Error(ErrorCode::DuplicatePoints, msg.str());
      }
    }
  }

  // lift(p) = a + lambda * b with a = [x, y, 1], b = [0, 0, r^2], so
  // lift(p1)^T E lift(p2) = (a1 (x) a2) e + lambda (b1 (x) a2 + a1 (x) b2) e + lambda^2 (b1 (x) b2) e.
  QuadraticPencil pencil;
  for (int i = 0; i < 9; ++i) {
    const auto& c = corrs[static_cast<std::size_t>(i)];
    const Eigen::Vector3d a1(c.p1.x, c.p1.y, 1.0);
    const Eigen::Vector3d a2(c.p2.x, c.p2.y, 1.0);
    const Eigen::Vector3d b1(0.0, 0.0, c.p1.squared_radius());
    const Eigen::Vector3d b2(0.0, 0.0, c.p2.squared_radius());
    pencil.a.row(i) = Eigen::kroneckerProduct(a1, a2).transpose();
    pencil.b.row(i) = (Eigen::kroneckerProduct(b1, a2) + Eigen::kroneckerProduct(a1, b2)).transpose();
    pencil.c.row(i) = Eigen::kroneckerProduct(b1, b2).transpose();
  }
  return pencil;
}

std::vector<SolverCandidate> solve(std::span<const Correspondence> corrs, LambdaRange range,
                                   const SolverOptions& options) {
  QuadraticPencil pencil = build_qep(corrs);

  for (int i = 0; i < 9; ++i) {
    const double norm = std::sqrt(pencil.a.row(i).squaredNorm() + pencil.b.row(i).squaredNorm() +
                                  pencil.c.row(i).squaredNorm());
    pencil.a.row(i) /= norm;
    pencil.b.row(i) /= norm;
    pencil.c.row(i) /= norm;
  }

  // Linearization with z = [e; lambda e]:
  //   [A 0; 0 I] z = lambda [-B -C; I 0] z
  Matrix18d lhs = Matrix18d::Zero();
  Matrix18d rhs = Matrix18d::Zero();
  lhs.topLeftCorner<9, 9>() = pencil.a;
  lhs.bottomRightCorner<9, 9>().setIdentity();
  rhs.topLeftCorner<9, 9>() = -pencil.b;
  rhs.topRightCorner<9, 9>() = -pencil.c;
  rhs.bottomLeftCorner<9, 9>().setIdentity();

  Eigen::GeneralizedEigenSolver<Matrix18d> ges;
  ges.compute(lhs, rhs, false);
  if (ges.info() != Eigen::Success) {
    throw Error(ErrorCode::EigenFailure, "generalized eigen decomposition did not converge");
  }

  std::vector<SolverCandidate> candidates;
  const auto alphas = ges.alphas();
  const auto betas = ges.betas();
  for (int k = 0; k < 18; ++k) {
    if (betas(k) == 0.0) continue;
    const std::complex<double> value = alphas(k) / betas(k);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) continue;
    if (std::abs(value.imag()) / std::max(1.0, std::abs(value.real())) >= options.realness_tolerance) continue;
    double lambda = value.real();
    if (lambda < range.lo && lambda >= range.lo - kBoundarySlack) lambda = range.lo;
    if (lambda > range.hi && lambda <= range.hi + kBoundarySlack) lambda = range.hi;
    if (!range.contains(lambda)) continue;

    Eigen::JacobiSVD<Matrix9d> svd(pencil.evaluate(lambda), Eigen::ComputeFullV);
    const Vector9d e = svd.matrixV().col(8);

    SolverCandidate cand;
    try {
      cand.e = project_to_essential(unflatten(e));
    } catch (const Error&) {
      continue;
    }
    cand.lambda = lambda;
    for (const auto& c : corrs) {
      cand.residual = std::max(cand.residual, std::abs(algebraic_residual(c, cand.e, lambda)));
    }
    candidates.push_back(cand);
  }

  if (candidates.empty()) throw Error(ErrorCode::NoCandidate, "no real lambda inside the requested range");

  std::stable_sort(candidates.begin(), candidates.end(), [](const SolverCandidate& l, const SolverCandidate& r) {
    if (l.residual != r.residual) return l.residual < r.residual;
    return std::abs(l.lambda) < std::abs(r.lambda);
  });
  return candidates;
}

}  // namespace rdcalib
