#include "limo/motion_image.hpp"

#include <random>

namespace limo {
namespace mimg {

FeatureLayout base_layout(const Skeleton& sk) {
    FeatureLayout l;
    if (sk.feature_joints.size() != (size_t)kFeatureJoints)
        throw data_error("layout requires 14 feature joints");
    for (int k = 0; k < kFeatureJoints; k++) {
        l.dof[k] = sk.feature_joints[k].dof;
        l.dim_offset[k] = sk.feature_joints[k].dim_offset;
    }
    return l;
}

FeatureLayout base_layout() {
    static const FeatureLayout l = base_layout(default_skeleton());
    return l;
}

PartProjections init_part_projections(const FeatureLayout& layout,
                                      uint64_t seed) {
    PartProjections p;
    p.layout = layout;
    p.init_seed = seed;
    std::mt19937_64 rng(seed);
    for (int k = 0; k < kFeatureJoints; k++) {
        int dof = layout.dof[k];
        double bound = 1.0 / std::sqrt((double)dof);
        std::uniform_real_distribution<double> dist(-bound, bound);
        p.weights[k].resize((size_t)layout.band_height * dof);
        for (auto& w : p.weights[k]) w = dist(rng);
        p.bias[k].assign(layout.band_height, 0.0);
    }
    return p;
}

std::vector<double> project_frame(const double* features,
                                  const PartProjections& proj) {
    const FeatureLayout& l = proj.layout;
    std::vector<double> column(l.image_height, 0.0);
    for (int k = 0; k < l.joints; k++) {
        int dof = l.dof[k];
        const double* w = proj.weights[k].data();
        const double* p = features + l.dim_offset[k];
        for (int r = 0; r < l.band_height; r++) {
            double acc = proj.bias[k][r];
            for (int c = 0; c < dof; c++) acc += w[r * dof + c] * p[c];
            column[k * l.band_height + r] = acc;
        }
    }
    return column;
}

size_t column_source_frame(size_t c, size_t total_frames, int image_width) {
    if (total_frames <= (size_t)image_width) return c;
    return c * total_frames / image_width;
}

MotionImage build_motion_image(const FeatureSequence& features,
                               const PartProjections& proj) {
    size_t total = features.frame_count();
    if (total == 0) throw data_error("empty feature sequence");
    const FeatureLayout& l = proj.layout;
    MotionImage img;
    img.height = l.image_height;
    img.width = l.image_width;
    img.pixels.assign((size_t)img.height * img.width, 0.0);
    img.valid_frames = (int)std::min(total, (size_t)l.image_width);
    for (int c = 0; c < img.valid_frames; c++) {
        size_t t = column_source_frame(c, total, l.image_width);
        std::vector<double> col = project_frame(features.rows.row(t), proj);
        for (int r = 0; r < img.height; r++) img.at(r, c) = col[r];
    }
    return img;
}

std::vector<double> to_rgb(const MotionImage& image,
                           const ChannelStats& stats) {
    size_t plane = image.pixels.size();
    std::vector<double> out(3 * plane);
    for (int ch = 0; ch < 3; ch++) {
        if (stats.std[ch] == 0.0)
            throw data_error("zero channel std in normalization stats");
        double inv = 1.0 / stats.std[ch];
        for (size_t i = 0; i < plane; i++)
            out[ch * plane + i] = (image.pixels[i] - stats.mean[ch]) * inv;
    }
    return out;
}

int patch_index(int joint, int time_window, const FeatureLayout& layout) {
    int g = layout.patch_grid();
    if (joint < 0 || joint >= g || time_window < 0 || time_window >= g)
        throw data_error("patch coordinates out of range");
    return joint * g + time_window;
}

void patch_coords(int patch_id, const FeatureLayout& layout, int* joint,
                  int* time_window) {
    int g = layout.patch_grid();
    if (patch_id < 0 || patch_id >= layout.patch_count())
        throw data_error("patch id out of range");
    if (joint) *joint = patch_id / g;
    if (time_window) *time_window = patch_id % g;
}

}  // namespace mimg
}  // namespace limo
