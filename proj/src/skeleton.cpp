#include "limo/skeleton.hpp"

#include <algorithm>

#include "limo/kinematics.hpp"

namespace limo {

int joint_kind_dof(JointKind k) {
    switch (k) {
        case JointKind::pelvis_orientation: return 3;
        case JointKind::pelvis_translation: return 3;
        case JointKind::ball_socket: return 3;
        case JointKind::hinge: return 1;
        case JointKind::spinal3: return 3;
        case JointKind::spinal2: return 2;
    }
    return 0;
}

const char* joint_kind_name(JointKind k) {
    switch (k) {
        case JointKind::pelvis_orientation: return "pelvis_orientation";
        case JointKind::pelvis_translation: return "pelvis_translation";
        case JointKind::ball_socket: return "ball_socket";
        case JointKind::hinge: return "hinge";
        case JointKind::spinal3: return "spinal3";
        case JointKind::spinal2: return "spinal2";
    }
    return "?";
}

JointKind joint_kind_from_name(const std::string& name) {
    if (name == "pelvis_orientation") return JointKind::pelvis_orientation;
    if (name == "pelvis_translation") return JointKind::pelvis_translation;
    if (name == "ball_socket") return JointKind::ball_socket;
    if (name == "hinge") return JointKind::hinge;
    if (name == "spinal3") return JointKind::spinal3;
    if (name == "spinal2") return JointKind::spinal2;
    throw data_error("unknown joint kind: " + name);
}

int Skeleton::find_joint(const std::string& name) const {
    for (size_t i = 0; i < joint_names.size(); i++)
        if (joint_names[i] == name) return (int)i;
    return -1;
}

std::vector<Vec3> Skeleton::rest_pose(const Vec3& root) const {
    std::vector<Vec3> pos(joint_count());
    for (size_t j = 0; j < joint_count(); j++) {
        if (parents[j] < 0)
            pos[j] = root + rest_offsets[j];
        else
            pos[j] = pos[parents[j]] + rest_offsets[j];
    }
    return pos;
}

void Skeleton::validate_and_finish() {
    size_t n = joint_count();
    if (n == 0) throw data_error("skeleton has no joints");
    if (parents.size() != n || rest_offsets.size() != n)
        throw data_error("skeleton arrays disagree on joint count");

    int roots = 0;
    for (size_t j = 0; j < n; j++) {
        if (parents[j] < 0) {
            roots++;
            continue;
        }
        if ((size_t)parents[j] >= n)
            throw data_error("parent index out of range");
        // Parents must precede children; that also rules out cycles.
        if ((size_t)parents[j] >= j)
            throw data_error("joints must be listed parents-first");
    }
    if (roots != 1) throw data_error("skeleton must have exactly one root");
    if (parents[0] >= 0) throw data_error("joint 0 must be the root pelvis");

    if (left_hip < 0 || right_hip < 0 || spine_ref < 0 ||
        (size_t)left_hip >= n || (size_t)right_hip >= n ||
        (size_t)spine_ref >= n)
        throw data_error("pelvis frame joints not set");

    if (feature_joints.size() != (size_t)kFeatureJoints)
        throw data_error("expected 14 feature joints, got " +
                         std::to_string(feature_joints.size()));
    int dof_sum = 0;
    for (auto& fj : feature_joints) {
        fj.dof = joint_kind_dof(fj.kind);
        fj.dim_offset = dof_sum;
        dof_sum += fj.dof;
        auto check = [&](int idx) {
            if (idx < 0 || (size_t)idx >= n)
                throw data_error("feature joint '" + fj.name +
                                 "' references joint index out of range");
        };
        switch (fj.kind) {
            case JointKind::ball_socket:
            case JointKind::spinal3:
                check(fj.a);
                check(fj.b);
                check(fj.c);  // twist needs a grandchild carrier
                break;
            case JointKind::hinge:
                check(fj.a);
                check(fj.b);
                check(fj.c);
                break;
            case JointKind::spinal2:
                check(fj.a);
                check(fj.b);
                break;
            default: break;
        }
    }
    if (dof_sum != kFeatureDim)
        throw data_error("feature joint dofs sum to " +
                         std::to_string(dof_sum) + ", expected 29");

    // Rest-pose twist calibration: the angle the twist carrier sits at, about
    // the segment axis, relative to the rest forward axis. Collinear carriers
    // calibrate to zero.
    auto rest = rest_pose();
    for (auto& fj : feature_joints) {
        fj.twist_rest = 0.0;
        if (fj.kind != JointKind::ball_socket && fj.kind != JointKind::spinal3)
            continue;
        Vec3 seg = rest[fj.b] - rest[fj.a];
        Vec3 gc = rest[fj.c] - rest[fj.b];
        if (seg.norm() < kin::kDegenerateEps) continue;
        bool degen = false;
        double raw = kin::extract_axial_rotation(Mat3::identity(), seg, gc,
                                                 &degen);
        fj.twist_rest = degen ? 0.0 : raw;
    }
}

Skeleton default_skeleton() {
    Skeleton sk;
    sk.joint_names = {
            "pelvis",      "left_hip",      "right_hip",      "spine1",
            "left_knee",   "right_knee",    "spine2",         "left_ankle",
            "right_ankle", "spine3",        "left_foot",      "right_foot",
            "neck",        "left_collar",   "right_collar",   "head",
            "left_shoulder", "right_shoulder", "left_elbow",  "right_elbow",
            "left_wrist",  "right_wrist"};
    sk.parents = {-1, 0, 0, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 9, 12,
                  13, 14, 16, 17, 18, 19};
    // x forward, y up, z toward the right hip. Feet and arms continue their
    // parent segments so every hinge reads zero at rest.
    sk.rest_offsets = {
            {0.0, 0.95, 0.0},     // pelvis (root height)
            {0.0, -0.05, -0.10},  // left_hip
            {0.0, -0.05, 0.10},   // right_hip
            {0.0, 0.10, 0.0},     // spine1
            {0.0, -0.40, 0.0},    // left_knee
            {0.0, -0.40, 0.0},    // right_knee
            {0.0, 0.12, 0.0},     // spine2
            {0.0, -0.40, 0.0},    // left_ankle
            {0.0, -0.40, 0.0},    // right_ankle
            {0.0, 0.13, 0.0},     // spine3
            {0.0, -0.10, 0.0},    // left_foot
            {0.0, -0.10, 0.0},    // right_foot
            {0.0, 0.10, 0.0},     // neck
            {0.0, 0.05, -0.08},   // left_collar
            {0.0, 0.05, 0.08},    // right_collar
            {0.0, 0.15, 0.0},     // head
            {0.0, 0.0, -0.10},    // left_shoulder
            {0.0, 0.0, 0.10},     // right_shoulder
            {0.0, -0.28, 0.0},    // left_elbow
            {0.0, -0.28, 0.0},    // right_elbow
            {0.0, -0.26, 0.0},    // left_wrist
            {0.0, -0.26, 0.0}};   // right_wrist
    sk.pelvis = 0;
    sk.left_hip = 1;
    sk.right_hip = 2;
    sk.spine_ref = 3;

    using K = JointKind;
    sk.feature_joints = {
            {"pelvis_orientation", K::pelvis_orientation, -1, -1, -1},
            {"pelvis_translation", K::pelvis_translation, -1, -1, -1},
            {"left_hip", K::ball_socket, 1, 4, 7},
            {"right_hip", K::ball_socket, 2, 5, 8},
            {"left_knee", K::hinge, 1, 4, 7},
            {"right_knee", K::hinge, 2, 5, 8},
            {"left_ankle", K::hinge, 4, 7, 10},
            {"right_ankle", K::hinge, 5, 8, 11},
            {"lumbar", K::spinal3, 3, 9, 14},
            {"left_shoulder", K::ball_socket, 16, 18, 20},
            {"right_shoulder", K::ball_socket, 17, 19, 21},
            {"left_elbow", K::hinge, 16, 18, 20},
            {"right_elbow", K::hinge, 17, 19, 21},
            {"neck", K::spinal2, 12, 15, -1}};
    sk.validate_and_finish();
    return sk;
}

const std::array<std::string, kFeatureDim>& feature_dim_names() {
    static const std::array<std::string, kFeatureDim> names = {
            "pelvis_tilt", "pelvis_list", "pelvis_rotation",
            "pelvis_tx", "pelvis_ty", "pelvis_tz",
            "left_hip_flexion", "left_hip_adduction", "left_hip_rotation",
            "right_hip_flexion", "right_hip_adduction", "right_hip_rotation",
            "left_knee_bend", "right_knee_bend",
            "left_ankle_bend", "right_ankle_bend",
            "lumbar_extension", "lumbar_bending", "lumbar_rotation",
            "left_shoulder_flexion", "left_shoulder_adduction",
            "left_shoulder_rotation",
            "right_shoulder_flexion", "right_shoulder_adduction",
            "right_shoulder_rotation",
            "left_elbow_flexion", "right_elbow_flexion",
            "neck_flexion", "neck_adduction"};
    return names;
}

}  // namespace limo
