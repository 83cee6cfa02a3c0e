#include "rdcalib/twoview.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Geometry>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "rdcalib/error.hpp"

namespace rdcalib {

namespace {

constexpr double kParallelRayAngle = 1e-8;
constexpr double kRank2Tolerance = 1e-9;

}  // namespace

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return s;
}

EssentialMatrix essential_from_pose(const RelativePose& pose) {
  return {skew(pose.translation) * pose.rotation};
}

Eigen::Vector3d lift(const NormalizedPoint& p, double lambda) {
  return {p.x, p.y, 1.0 + lambda * p.squared_radius()};
}

double algebraic_residual(const Correspondence& c, const EssentialMatrix& e, double lambda) {
  return lift(c.p1, lambda).dot(e.m * lift(c.p2, lambda));
}

double sampson_residual(const Correspondence& c, const EssentialMatrix& e, double lambda) {
  const Eigen::Vector3d l1 = lift(c.p1, lambda);
  const Eigen::Vector3d l2 = lift(c.p2, lambda);
  const Eigen::Vector3d a = e.m * l2;
  const Eigen::Vector3d b = e.m.transpose() * l1;
  const double g = l1.dot(a);

  const double dx1 = a.x() + a.z() * 2.0 * lambda * c.p1.x;
  const double dy1 = a.y() + a.z() * 2.0 * lambda * c.p1.y;
  const double dx2 = b.x() + b.z() * 2.0 * lambda * c.p2.x;
  const double dy2 = b.y() + b.z() * 2.0 * lambda * c.p2.y;
  const double grad2 = dx1 * dx1 + dy1 * dy1 + dx2 * dx2 + dy2 * dy2;

  if (grad2 == 0.0) return g == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(g) / std::sqrt(grad2);
}

EssentialMatrix project_to_essential(const Eigen::Matrix3d& m) {
  if (!(m.norm() > 0.0)) throw Error(ErrorCode::ZeroMatrix, "cannot project a zero matrix");
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sigma(1.0, 1.0, 0.0);
  return {svd.matrixU() * sigma.asDiagonal() * svd.matrixV().transpose()};
}

std::array<RelativePose, 4> decompose(const EssentialMatrix& e) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(e.m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d s = svd.singularValues();
  if (!(s(0) > 0.0) || s(1) < kRank2Tolerance * s(0)) {
    throw Error(ErrorCode::DegenerateE, "essential matrix has rank < 2");
  }
  Eigen::Matrix3d u = svd.matrixU();
  Eigen::Matrix3d v = svd.matrixV();
  if (u.determinant() < 0.0) u = -u;
  if (v.determinant() < 0.0) v = -v;

  Eigen::Matrix3d w;
  w << 0.0, -1.0, 0.0,
       1.0, 0.0, 0.0,
       0.0, 0.0, 1.0;
  const Eigen::Matrix3d r1 = u * w * v.transpose();
  const Eigen::Matrix3d r2 = u * w.transpose() * v.transpose();
  const Eigen::Vector3d t = u.col(2).normalized();
  return {RelativePose{r1, t}, RelativePose{r1, -t}, RelativePose{r2, t}, RelativePose{r2, -t}};
}

Triangulation triangulate(const Correspondence& undistorted, const RelativePose& pose) {
  const Eigen::Vector3d d1(undistorted.p1.x, undistorted.p1.y, 1.0);
  const Eigen::Vector3d d2 = pose.rotation * Eigen::Vector3d(undistorted.p2.x, undistorted.p2.y, 1.0);
  const Eigen::Vector3d& t = pose.translation;

  const double sin_angle = d1.cross(d2).norm() / (d1.norm() * d2.norm());
  if (sin_angle < std::sin(kParallelRayAngle)) {
    throw Error(ErrorCode::ParallelRays, "viewing rays are parallel");
  }

  // Closest points a*d1 and t + b*d2 on the two rays.
  Eigen::Matrix2d normal;
  normal << d1.dot(d1), -d1.dot(d2),
           -d1.dot(d2), d2.dot(d2);
  const Eigen::Vector2d rhs(d1.dot(t), -d2.dot(t));
  const Eigen::Vector2d ab = normal.inverse() * rhs;

  Triangulation out;
  out.point = 0.5 * (ab(0) * d1 + t + ab(1) * d2);
  out.depth1 = out.point.z();
  out.depth2 = (pose.rotation.transpose() * (out.point - t)).z();
  return out;
}

Correspondence undistort(const Correspondence& c, double lambda) {
  const auto model = DistortionModel::division(lambda);
  return {undistort_point(c.p1, model), undistort_point(c.p2, model)};
}

RelativePose select_by_cheirality(std::span<const RelativePose> candidates,
                                  std::span<const Correspondence> correspondences, double lambda) {
  if (candidates.empty() || correspondences.empty()) {
    throw Error(ErrorCode::InvalidArgument, "cheirality selection needs candidates and correspondences");
  }

  std::vector<Correspondence> undistorted;
  undistorted.reserve(correspondences.size());
  for (const auto& c : correspondences) {
    try {
      undistorted.push_back(undistort(c, lambda));
    } catch (const Error&) {
      // Outside the valid radius; cannot vote.
    }
  }

  std::size_t best_index = 0;
  int best_count = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    int count = 0;
    for (const auto& c : undistorted) {
      try {
        const auto tri = triangulate(c, candidates[i]);
        if (tri.depth1 > 0.0 && tri.depth2 > 0.0) ++count;
      } catch (const Error&) {
      }
    }
    if (count > best_count) {
      best_count = count;
      best_index = i;
    }
  }
  if (best_count == 0) throw Error(ErrorCode::NoPositiveDepth, "no candidate places any point in front of both cameras");
  return candidates[best_index];
}

double rotation_error(const Eigen::Matrix3d& r_est, const Eigen::Matrix3d& r_gt) {
  const Eigen::Matrix3d d = r_est.transpose() * r_gt;
  const double cos_angle = 0.5 * (d.trace() - 1.0);
  const Eigen::Vector3d axis(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1));
  const double sin_angle = 0.5 * axis.norm();
  return std::atan2(sin_angle, cos_angle);
}

double translation_error(const Eigen::Vector3d& t_est, const Eigen::Vector3d& t_gt) {
  const double n_est = t_est.norm();
  const double n_gt = t_gt.norm();
  if (!(n_est > 0.0) || !(n_gt > 0.0)) throw Error(ErrorCode::ZeroTranslation, "translation has zero norm");
  const Eigen::Vector3d a = t_est / n_est;
  const Eigen::Vector3d b = t_gt / n_gt;
  return std::atan2(a.cross(b).norm(), std::abs(a.dot(b)));
}

}  // namespace rdcalib
