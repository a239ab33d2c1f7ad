#include "limo/kinematics.hpp"

#include <algorithm>
#include <mutex>

namespace limo {
namespace kin {

namespace {

Vec3 project_perp(const Vec3& v, const Vec3& unit_axis) {
    return v - unit_axis * v.dot(unit_axis);
}

double clamp1(double v) { return std::max(-1.0, std::min(1.0, v)); }

// Signed angle from `a` to `b` about unit axis, both already in the plane
// normal to the axis and normalized.
double signed_angle(const Vec3& a, const Vec3& b, const Vec3& axis) {
    return std::atan2(a.cross(b).dot(axis), a.dot(b));
}

}  // namespace

BodyFrame build_body_frame(const std::vector<Vec3>& frame,
                           const Skeleton& sk) {
    const Vec3& lh = frame[sk.left_hip];
    const Vec3& rh = frame[sk.right_hip];
    Vec3 lateral = rh - lh;
    lateral.y = 0.0;  // horizontal projection
    if (lateral.norm() < kDegenerateEps)
        throw data_error("degenerate pose: hips coincide in the horizontal "
                         "plane");
    lateral = lateral.normalized();
    Vec3 up{0.0, 1.0, 0.0};
    Vec3 forward = up.cross(lateral);
    BodyFrame bf;
    bf.rotation = Mat3::from_columns(forward, up, lateral);
    bf.origin = frame[sk.pelvis];
    return bf;
}

Mat3 build_pelvis_frame(const std::vector<Vec3>& frame, const Skeleton& sk) {
    Vec3 z = frame[sk.right_hip] - frame[sk.left_hip];
    if (z.norm() < kDegenerateEps)
        throw data_error("degenerate pose: hips coincide");
    z = z.normalized();
    Vec3 spine = frame[sk.spine_ref] - frame[sk.pelvis];
    Vec3 y = project_perp(spine, z);
    if (y.norm() < kDegenerateEps)
        throw data_error("degenerate pose: spine collinear with hip line");
    y = y.normalized();
    Vec3 x = y.cross(z);
    return Mat3::from_columns(x, y, z);
}

Mat3 euler_zxy_to_matrix(double tilt, double list, double rotation) {
    return Mat3::rot_y(rotation) * Mat3::rot_x(list) * Mat3::rot_z(tilt);
}

EulerZXY euler_zxy_from_matrix(const Mat3& r) {
    EulerZXY e;
    e.list = std::asin(clamp1(-r.m[1][2]));
    double cos_list = std::cos(e.list);
    if (std::abs(cos_list) < 1e-9) {
        // Gimbal: tilt and rotation share an axis. Pin tilt to zero.
        e.degenerate = true;
        e.tilt = 0.0;
        e.rotation = std::atan2(-r.m[2][0], r.m[0][0]);
        return e;
    }
    e.tilt = std::atan2(r.m[1][0], r.m[1][1]);
    e.rotation = std::atan2(r.m[0][2], r.m[2][2]);
    return e;
}

SwingAngles extract_ball_socket(const Vec3& v) {
    double n = v.norm();
    if (n < kDegenerateEps)
        throw data_error("degenerate pose: zero-length segment");
    SwingAngles out;
    double nxy = std::sqrt(v.x * v.x + v.y * v.y);
    if (nxy < kDegenerateEps) {
        // Pure abduction: the sagittal projection vanishes and flexion is
        // unobservable.
        out.flexion = 0.0;
        out.adduction = (v.z >= 0.0 ? 1.0 : -1.0) * M_PI / 2.0;
        out.degenerate = true;
        return out;
    }
    out.flexion = std::atan2(v.x, -v.y);
    // v . v_xy = nxy^2, so the cosine reduces to nxy / |v|.
    double c = clamp1(nxy / n);
    out.adduction = (v.z >= 0.0 ? 1.0 : -1.0) * std::acos(c);
    if (v.z == 0.0) out.adduction = 0.0;
    return out;
}

SwingAngles extract_spinal(const Vec3& v) {
    // Same decomposition with the neutral direction flipped to +y.
    Vec3 flipped{v.x, -v.y, v.z};
    return extract_ball_socket(flipped);
}

Vec3 ball_socket_direction(double flexion, double adduction) {
    double ca = std::cos(adduction);
    return {ca * std::sin(flexion), -ca * std::cos(flexion),
            std::sin(adduction)};
}

Vec3 spinal_direction(double extension, double bending) {
    double cb = std::cos(bending);
    return {cb * std::sin(extension), cb * std::cos(extension),
            std::sin(bending)};
}

double extract_axial_rotation(const Mat3& parent_frame, const Vec3& segment,
                              const Vec3& grandchild_dir, bool* degenerate) {
    if (degenerate) *degenerate = false;
    double seg_norm = segment.norm();
    if (seg_norm < kDegenerateEps)
        throw data_error("degenerate pose: zero-length twist segment");
    Vec3 axis = segment / seg_norm;

    Vec3 g_perp = project_perp(grandchild_dir, axis);
    if (g_perp.norm() < kDegenerateEps) {
        // Grandchild collinear with the segment: twist unobservable.
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    Vec3 fwd = parent_frame.col(0);
    Vec3 ref = project_perp(fwd, axis);
    if (ref.norm() < kDegenerateEps) {
        // Segment parallel to the parent forward axis: reference undefined.
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    return signed_angle(ref.normalized(), g_perp.normalized(), axis);
}

double extract_hinge(const Vec3& upper, const Vec3& lower) {
    double nu = upper.norm(), nl = lower.norm();
    if (nu < kDegenerateEps || nl < kDegenerateEps)
        throw data_error("degenerate pose: zero-length hinge segment");
    return std::acos(clamp1(upper.dot(lower) / (nu * nl)));
}

namespace {

// Child-segment frame shared by IK and FK: columns are
// [twist-rotated forward, segment axis oriented like the parent up, x cross y].
Mat3 segment_frame(const Vec3& axis_along_segment, const Vec3& forward,
                   bool spinal) {
    Vec3 y = spinal ? axis_along_segment : axis_along_segment * -1.0;
    Vec3 x = forward;
    return Mat3::from_columns(x, y, x.cross(y));
}

// Twist reference: parent forward projected off the segment axis. Falls back
// to the lateral axis when the segment is parallel to forward.
Vec3 twist_reference(const Mat3& parent_frame, const Vec3& axis,
                     bool* degenerate) {
    Vec3 ref = project_perp(parent_frame.col(0), axis);
    if (ref.norm() >= kDegenerateEps) return ref.normalized();
    if (degenerate) *degenerate = true;
    Vec3 alt = project_perp(parent_frame.col(2), axis);
    if (alt.norm() < kDegenerateEps)
        throw internal_error("twist reference unrecoverable");
    return alt.normalized();
}

struct SubtreeMap {
    // children[j] = joint indices whose parent is j.
    std::vector<std::vector<int>> children;

    explicit SubtreeMap(const Skeleton& sk)
            : children(sk.joint_count()) {
        for (size_t j = 0; j < sk.joint_count(); j++)
            if (sk.parents[j] >= 0) children[sk.parents[j]].push_back((int)j);
    }

    template <typename F>
    void visit(int root, F&& fn) const {
        fn(root);
        for (int c : children[root]) visit(c, fn);
    }
};

}  // namespace

PoseFeatures extract_pose_features(const std::vector<Vec3>& frame,
                                   const Skeleton& sk) {
    if (frame.size() != sk.joint_count())
        throw data_error("frame joint count does not match skeleton");
    for (const auto& p : frame)
        if (!p.finite()) throw data_error("non-finite joint position");

    PoseFeatures out;
    Mat3 pelvis = build_pelvis_frame(frame, sk);
    SubtreeMap tree(sk);

    // Segment frame in effect at each joint, refined below feature pivots
    // as we walk the feature list in hierarchy order.
    std::vector<Mat3> node_frame(sk.joint_count(), pelvis);

    for (const auto& fj : sk.feature_joints) {
        double* dst = out.values.data() + fj.dim_offset;
        switch (fj.kind) {
            case JointKind::pelvis_orientation: {
                EulerZXY e = euler_zxy_from_matrix(pelvis);
                dst[0] = e.tilt;
                dst[1] = e.list;
                dst[2] = e.rotation;
                out.degenerate |= e.degenerate;
                break;
            }
            case JointKind::pelvis_translation: {
                dst[0] = frame[sk.pelvis].x;
                dst[1] = frame[sk.pelvis].y;
                dst[2] = frame[sk.pelvis].z;
                break;
            }
            case JointKind::hinge: {
                dst[0] = extract_hinge(frame[fj.b] - frame[fj.a],
                                       frame[fj.c] - frame[fj.b]);
                break;
            }
            case JointKind::spinal2: {
                const Mat3& pf = node_frame[fj.a];
                Vec3 v = pf.transposed() * (frame[fj.b] - frame[fj.a]);
                SwingAngles sw = extract_spinal(v);
                dst[0] = sw.flexion;
                dst[1] = sw.adduction;
                out.degenerate |= sw.degenerate;
                break;
            }
            case JointKind::ball_socket:
            case JointKind::spinal3: {
                bool spinal = fj.kind == JointKind::spinal3;
                const Mat3 pf = node_frame[fj.a];
                Vec3 seg = frame[fj.b] - frame[fj.a];
                Vec3 v = pf.transposed() * seg;
                SwingAngles sw =
                        spinal ? extract_spinal(v) : extract_ball_socket(v);
                dst[0] = sw.flexion;
                dst[1] = sw.adduction;
                out.degenerate |= sw.degenerate;

                bool twist_degen = false;
                double raw = extract_axial_rotation(
                        pf, seg, frame[fj.c] - frame[fj.b], &twist_degen);
                dst[2] = twist_degen ? 0.0
                                     : wrap_angle(raw - fj.twist_rest);
                out.degenerate |= twist_degen;

                // Rebuild the child frame so deeper joints (shoulders, neck)
                // decompose against the twisted segment frame.
                Vec3 axis = seg.normalized();
                Vec3 fwd;
                if (!twist_degen) {
                    Vec3 g_perp = project_perp(frame[fj.c] - frame[fj.b],
                                               axis).normalized();
                    fwd = rotate_about_axis(g_perp, axis, -fj.twist_rest);
                } else {
                    bool ref_degen = false;
                    fwd = twist_reference(pf, axis, &ref_degen);
                    out.degenerate |= ref_degen;
                }
                Mat3 child = segment_frame(axis, fwd, spinal);
                tree.visit(fj.b, [&](int j) { node_frame[j] = child; });
                break;
            }
        }
    }
    for (double v : out.values)
        if (!std::isfinite(v)) throw internal_error("non-finite feature");
    return out;
}

FeatureSequence extract_sequence(const MotionSequence& motion,
                                 const Skeleton& sk) {
    if (motion.frame_count() == 0) throw data_error("empty motion");
    if (motion.joint_count != sk.joint_count())
        throw data_error("motion joint count does not match skeleton");
    FeatureSequence fs;
    fs.fps = motion.fps;
    fs.rows = MatD(motion.frame_count(), kFeatureDim);

    std::mutex err_mutex;
    size_t err_frame = motion.frame_count();
    std::string err_msg;
    parallel_for(motion.frame_count(), [&](size_t begin, size_t end) {
        for (size_t t = begin; t < end; t++) {
            try {
                PoseFeatures pf = extract_pose_features(motion.frames[t], sk);
                std::copy(pf.values.begin(), pf.values.end(), fs.rows.row(t));
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (t < err_frame) {
                    err_frame = t;
                    err_msg = e.what();
                }
            }
        }
    });
    if (err_frame < motion.frame_count())
        throw data_error("frame " + std::to_string(err_frame) + ": " +
                         err_msg);
    return fs;
}

std::vector<Vec3> forward_kinematics_frame(const double* f,
                                           const Skeleton& sk) {
    std::vector<Mat3> node_frame(sk.joint_count());
    std::vector<Vec3> pos(sk.joint_count());

    // Per-pivot local rotations, resolved from the feature vector.
    std::vector<const FeatureJoint*> pivot_of(sk.joint_count(), nullptr);
    Vec3 translation;
    Mat3 pelvis;
    for (const auto& fj : sk.feature_joints) {
        const double* src = f + fj.dim_offset;
        switch (fj.kind) {
            case JointKind::pelvis_orientation:
                pelvis = euler_zxy_to_matrix(src[0], src[1], src[2]);
                break;
            case JointKind::pelvis_translation:
                translation = {src[0], src[1], src[2]};
                break;
            case JointKind::hinge:
                pivot_of[fj.b] = &fj;
                break;
            default:
                pivot_of[fj.a] = &fj;
                break;
        }
    }

    for (size_t j = 0; j < sk.joint_count(); j++) {
        Mat3 base = sk.parents[j] < 0 ? pelvis : node_frame[sk.parents[j]];
        const FeatureJoint* fj = pivot_of[j];
        if (!fj) {
            node_frame[j] = base;
        } else if (fj->kind == JointKind::hinge) {
            node_frame[j] = base * Mat3::rot_z(f[fj->dim_offset]);
        } else {
            bool spinal = fj->kind == JointKind::spinal3 ||
                          fj->kind == JointKind::spinal2;
            const double* src = f + fj->dim_offset;
            Vec3 v = spinal ? spinal_direction(src[0], src[1])
                            : ball_socket_direction(src[0], src[1]);
            Vec3 x_axis{1.0, 0.0, 0.0};
            Vec3 ref = project_perp(x_axis, v);
            Vec3 fwd;
            if (ref.norm() < kDegenerateEps) {
                fwd = project_perp(Vec3{0.0, 0.0, 1.0}, v).normalized();
            } else {
                fwd = ref.normalized();
            }
            double twist = fj->dof >= 3 ? src[2] : 0.0;
            if (twist != 0.0) fwd = rotate_about_axis(fwd, v, twist);
            node_frame[j] = base * segment_frame(v, fwd, spinal);
        }
        pos[j] = sk.parents[j] < 0
                         ? translation
                         : pos[sk.parents[j]] + base * sk.rest_offsets[j];
    }
    return pos;
}

MotionSequence forward_kinematics(const FeatureSequence& features,
                                  const Skeleton& sk) {
    if (features.frame_count() == 0) throw data_error("empty feature sequence");
    MotionSequence motion;
    motion.fps = features.fps;
    motion.joint_count = sk.joint_count();
    motion.frames.resize(features.frame_count());
    parallel_for(features.frame_count(), [&](size_t begin, size_t end) {
        for (size_t t = begin; t < end; t++)
            motion.frames[t] = forward_kinematics_frame(features.rows.row(t),
                                                        sk);
    });
    return motion;
}

const std::array<FeatureRange, kFeatureDim>& safe_feature_ranges() {
    static const std::array<FeatureRange, kFeatureDim> ranges = [] {
        std::array<FeatureRange, kFeatureDim> r{};
        r[0] = {-0.6, 0.6};    // pelvis tilt
        r[1] = {-0.5, 0.5};    // pelvis list
        r[2] = {-2.9, 2.9};    // pelvis rotation
        r[3] = {-2.0, 2.0};    // tx
        r[4] = {0.6, 1.4};     // ty
        r[5] = {-2.0, 2.0};    // tz
        for (int side = 0; side < 2; side++) {
            int o = 6 + 3 * side;
            r[o + 0] = {-1.0, 1.0};  // hip flexion
            r[o + 1] = {-0.9, 0.9};  // hip adduction
            r[o + 2] = {-2.9, 2.9};  // hip rotation
        }
        r[12] = r[13] = {0.2, 2.5};  // knees (bent so hip twist is visible)
        r[14] = r[15] = {0.1, 1.0};  // ankles
        r[16] = {-0.7, 0.7};         // lumbar extension
        r[17] = {-0.7, 0.7};         // lumbar bending
        r[18] = {-2.9, 2.9};         // lumbar rotation
        for (int side = 0; side < 2; side++) {
            int o = 19 + 3 * side;
            r[o + 0] = {-1.0, 1.0};  // shoulder flexion
            r[o + 1] = {-0.9, 0.9};  // shoulder adduction
            r[o + 2] = {-2.9, 2.9};  // shoulder rotation
        }
        r[25] = r[26] = {0.2, 2.5};  // elbows
        r[27] = {-0.8, 0.8};         // neck flexion
        r[28] = {-0.8, 0.8};         // neck adduction
        return r;
    }();
    return ranges;
}

}  // namespace kin
}  // namespace limo
