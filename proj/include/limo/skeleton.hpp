#pragma once

#include <array>
#include <string>
#include <vector>

#include "limo/common.hpp"

namespace limo {

// Feature joint kinds. Each kind owns a fixed number of angular (or, for the
// translation entry, positional) dimensions.
enum class JointKind {
    pelvis_orientation,  // 3: tilt, list, rotation (extrinsic Z, X, Y)
    pelvis_translation,  // 3: tx, ty, tz (world meters)
    ball_socket,         // 3: flexion, adduction, axial rotation
    hinge,               // 1: bend angle in [0, pi]
    spinal3,             // 3: extension, bending, axial rotation
    spinal2,             // 2: flexion, adduction
};

int joint_kind_dof(JointKind k);
const char* joint_kind_name(JointKind k);
JointKind joint_kind_from_name(const std::string& name);

// One modeled degree-of-freedom block. The a/b/c joint indices are
// kind-specific:
//   ball_socket: a = pivot, b = child (segment end), c = twist carrier
//                (grandchild after the next joint)
//   hinge:       a = upper segment start, b = pivot, c = lower segment end
//   spinal3:     a = pivot, b = child, c = twist carrier
//   spinal2:     a = pivot, b = child
//   pelvis_*:    indices unused (pelvis frame joints live in Skeleton)
struct FeatureJoint {
    std::string name;
    JointKind kind = JointKind::hinge;
    int a = -1, b = -1, c = -1;
    int dof = 1;
    // Offset of the 29-vector block this joint owns; derived at load.
    int dim_offset = 0;
    // Rest-pose twist of the carrier about the segment axis relative to the
    // pivot frame's forward axis; subtracted so the rest pose reads zero.
    // Zero for joints whose carrier is collinear at rest (limbs).
    double twist_rest = 0.0;
};

struct Skeleton {
    std::vector<std::string> joint_names;
    std::vector<int> parents;          // -1 for the root
    std::vector<Vec3> rest_offsets;    // per joint, in the parent frame
    std::vector<FeatureJoint> feature_joints;  // exactly 14, dof sum 29

    // Joints defining the pelvis-attached frame.
    int pelvis = 0, left_hip = -1, right_hip = -1, spine_ref = -1;

    size_t joint_count() const { return joint_names.size(); }
    int find_joint(const std::string& name) const;

    // Rest-pose world positions with the pelvis at `root`.
    std::vector<Vec3> rest_pose(const Vec3& root = {}) const;

    // Checks tree structure, feature-joint dof budget and index validity;
    // fills dim_offset and twist_rest. Throws data_error on violations.
    void validate_and_finish();
};

// 22-joint humanoid with straight rest limbs (hinge angles read zero at
// rest) and the 14-entry feature map. Serialized copy ships in data/.
Skeleton default_skeleton();

struct MotionSequence {
    double fps = 20.0;
    size_t joint_count = 0;
    // frames[t][j] world position in meters.
    std::vector<std::vector<Vec3>> frames;

    size_t frame_count() const { return frames.size(); }
};

// Table-1 style feature vector layout, 29 dims total.
inline constexpr int kFeatureDim = 29;
inline constexpr int kFeatureJoints = 14;

// Names for CSV headers and diagnostics, in storage order.
const std::array<std::string, kFeatureDim>& feature_dim_names();

struct PoseFeatures {
    std::array<double, kFeatureDim> values{};
    // Degenerate-configuration flags raised during extraction (gimbal poses,
    // collinear twist carriers). Extraction still returns finite values.
    bool degenerate = false;
};

struct FeatureSequence {
    double fps = 20.0;
    MatD rows;  // T x 29
    size_t frame_count() const { return rows.rows; }
};

}  // namespace limo
