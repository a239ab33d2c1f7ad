#pragma once

#include "limo/skeleton.hpp"

namespace limo {
namespace kin {

// Pelvis-anchored orthonormal frame. `rotation` columns are the body axes in
// world coordinates: x = forward, y = up, z = lateral (toward the right hip).
struct BodyFrame {
    Mat3 rotation;
    Vec3 origin;
};

inline constexpr double kDegenerateEps = 1e-8;

// Heading-only body frame: lateral = horizontal projection of the left-to-
// right hip direction, vertical = world up, forward = up x lateral. Throws
// on coincident hips (degenerate pose).
BodyFrame build_body_frame(const std::vector<Vec3>& frame, const Skeleton& sk);

// Full pelvis-attached frame from the hip line and the rigid spine joint;
// this one tilts and lists with the pelvis.
Mat3 build_pelvis_frame(const std::vector<Vec3>& frame, const Skeleton& sk);

// Extrinsic Z-X-Y Euler decomposition: R = Ry(rotation) * Rx(list) *
// Rz(tilt). Rotating the world about +y adds to `rotation` only.
struct EulerZXY {
    double tilt = 0.0, list = 0.0, rotation = 0.0;
    bool degenerate = false;  // |list| at the +-pi/2 gimbal
};
EulerZXY euler_zxy_from_matrix(const Mat3& r);
Mat3 euler_zxy_to_matrix(double tilt, double list, double rotation);

// Ball-and-socket swing decomposition of a child direction in the parent
// frame. Neutral direction is (0,-1,0) (limb hanging straight down).
//   flexion  = atan2(v.x, -v.y)
//   adduction = sign(v.z) * arccos(v . v_xy / (|v| |v_xy|)),
// where v_xy is v with its z component zeroed.
struct SwingAngles {
    double flexion = 0.0, adduction = 0.0;
    bool degenerate = false;  // |adduction| at pi/2: flexion unobservable
};
SwingAngles extract_ball_socket(const Vec3& child_in_parent);

// Spinal variant: neutral direction is (0,+1,0) (upright), so
// extension = atan2(v.x, v.y); bending as above.
SwingAngles extract_spinal(const Vec3& child_in_parent);

// Inverse of the swing decompositions: unit direction from angles.
Vec3 ball_socket_direction(double flexion, double adduction);
Vec3 spinal_direction(double extension, double bending);

// Signed twist about the child segment axis: angle from the parent frame's
// forward axis (projected onto the plane normal to the axis) to the
// grandchild direction projected onto the same plane. Vectors are world
// frame; segment = pivot->child, grandchild_dir = child->grandchild.
// Collinear grandchild (projection below eps) yields 0 with *degenerate set.
double extract_axial_rotation(const Mat3& parent_frame, const Vec3& segment,
                              const Vec3& grandchild_dir,
                              bool* degenerate = nullptr);

// Hinge angle between adjacent segments, in [0, pi]; 0 = straight.
// Throws on zero-length segments.
double extract_hinge(const Vec3& upper_segment, const Vec3& lower_segment);

// Full 29-dim feature vector for one frame, Table order:
// pelvis tilt/list/rotation; pelvis tx/ty/tz; L/R hip flex/add/rot;
// L/R knee; L/R ankle; lumbar ext/bend/rot; L/R shoulder flex/add/rot;
// L/R elbow; neck flex/add.
PoseFeatures extract_pose_features(const std::vector<Vec3>& frame,
                                   const Skeleton& sk);

// Per-frame extraction over a whole sequence; errors carry the frame index.
FeatureSequence extract_sequence(const MotionSequence& motion,
                                 const Skeleton& sk);

// Reconstruct joint positions from features. Joints outside the modeled set
// are placed via rest offsets in their propagated frame. Inverse of
// extract_sequence on its own output for in-range features.
MotionSequence forward_kinematics(const FeatureSequence& features,
                                  const Skeleton& sk);
std::vector<Vec3> forward_kinematics_frame(const double* features,
                                           const Skeleton& sk);

// Sampling ranges for each feature dimension under which extraction is free
// of degeneracies (twist references well-conditioned, hinges observable).
// Used by the synthetic generator and round-trip tests.
struct FeatureRange {
    double lo = 0.0, hi = 0.0;
};
const std::array<FeatureRange, kFeatureDim>& safe_feature_ranges();

}  // namespace kin
}  // namespace limo
