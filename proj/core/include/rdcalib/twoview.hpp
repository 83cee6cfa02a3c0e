#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rdcalib/distortion.hpp"

namespace rdcalib {

// A pair of observed (distorted) normalized points, one per view.
struct Correspondence {
  NormalizedPoint p1;
  NormalizedPoint p2;
};

// Rank-2 essential matrix in the convention lift(p1)^T E lift(p2) = 0.
struct EssentialMatrix {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
};

// Pose of camera 2 expressed in the frame of camera 1: a point X2 in camera-2
// coordinates is X1 = rotation * X2 + translation in camera-1 coordinates, and
// translation is the position of the second camera center. The matching
// essential matrix is [translation]_x * rotation.
struct RelativePose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::UnitZ();
};

Eigen::Matrix3d skew(const Eigen::Vector3d& v);

/// Essential matrix [t]_x R for a pose.
EssentialMatrix essential_from_pose(const RelativePose& pose);

/// Lifted homogeneous coordinate [x, y, 1 + lambda (x^2 + y^2)].
Eigen::Vector3d lift(const NormalizedPoint& p, double lambda);

/// lift(p1)^T E lift(p2).
double algebraic_residual(const Correspondence& c, const EssentialMatrix& e, double lambda);

/// Algebraic residual divided by the norm of its gradient with respect to the
/// four observed coordinates. Zero exactly when the algebraic residual is zero.
double sampson_residual(const Correspondence& c, const EssentialMatrix& e, double lambda);

/// Closest matrix with singular values (1, 1, 0). Throws ZeroMatrix.
EssentialMatrix project_to_essential(const Eigen::Matrix3d& m);

/// The four (R, t) factorizations of E, with unit-norm t. Throws DegenerateE
/// when the second singular value vanishes.
std::array<RelativePose, 4> decompose(const EssentialMatrix& e);

struct Triangulation {
  Eigen::Vector3d point;  // camera-1 frame
  double depth1 = 0.0;
  double depth2 = 0.0;
};

/// Midpoint triangulation of an undistorted correspondence. Throws ParallelRays
/// when the viewing rays are within 1e-8 rad of each other.
Triangulation triangulate(const Correspondence& undistorted, const RelativePose& pose);

/// Picks the candidate with the most correspondences triangulating in front of
/// both cameras after undistortion with a Division model of parameter lambda.
/// Ties resolve to the lowest candidate index. Throws NoPositiveDepth.
RelativePose select_by_cheirality(std::span<const RelativePose> candidates,
                                  std::span<const Correspondence> correspondences, double lambda);

/// Angle of R_est^T R_gt, in radians.
double rotation_error(const Eigen::Matrix3d& r_est, const Eigen::Matrix3d& r_gt);

/// Angle between translation directions, ignoring sign. Throws ZeroTranslation.
double translation_error(const Eigen::Vector3d& t_est, const Eigen::Vector3d& t_gt);

/// Undistorts both points of a correspondence with a Division model.
Correspondence undistort(const Correspondence& c, double lambda);

}  // namespace rdcalib
