#pragma once

#include <cstdint>

#include "limo/skeleton.hpp"

namespace limo {
namespace mimg {

// Base geometry: 14 joints x 16-pixel bands = 224 rows, 224 frame columns,
// 16x16 patches on a 14x14 grid.
struct FeatureLayout {
    int joints = kFeatureJoints;       // K
    int band_height = 16;              // d_part
    int image_height = 224;            // K * d_part
    int image_width = 224;             // T after padding/resampling
    std::array<int, kFeatureJoints> dof{};
    std::array<int, kFeatureJoints> dim_offset{};

    int patch_grid() const { return image_height / band_height; }  // 14
    int patch_count() const { return patch_grid() * patch_grid(); }  // 196
};

FeatureLayout base_layout(const Skeleton& sk);
FeatureLayout base_layout();  // from the default feature-joint dof list

// Per-joint learnable band projections: column of band k =
// W[k] * features_of_joint_k + b[k].
struct PartProjections {
    FeatureLayout layout;
    // weights[k]: band_height x dof_k row-major; bias[k]: band_height.
    std::array<std::vector<double>, kFeatureJoints> weights;
    std::array<std::vector<double>, kFeatureJoints> bias;
    uint64_t init_seed = 0;
};

// Entries uniform in [-1/sqrt(dof_k), 1/sqrt(dof_k)], bias zero.
PartProjections init_part_projections(const FeatureLayout& layout,
                                      uint64_t seed);

struct MotionImage {
    int height = 224, width = 224;
    std::vector<double> pixels;  // row-major height x width
    int valid_frames = 0;        // columns >= valid_frames are pad (zero)

    double at(int r, int c) const { return pixels[(size_t)r * width + c]; }
    double& at(int r, int c) { return pixels[(size_t)r * width + c]; }
};

// One image column from one feature row.
std::vector<double> project_frame(const double* features,
                                  const PartProjections& proj);

// Columns 0..min(T,224) from (resampled) frames, zero padding on the right.
// T > 224 is handled by uniform subsampling: column c <- frame
// floor(c*T/224).
MotionImage build_motion_image(const FeatureSequence& features,
                               const PartProjections& proj);

// Index of the source frame used for column c.
size_t column_source_frame(size_t c, size_t total_frames, int image_width);

struct ChannelStats {
    double mean[3] = {0.0, 0.0, 0.0};
    double std[3] = {1.0, 1.0, 1.0};
};

// Single channel replicated 3x, then (x - mean) / std per channel.
// Throws on zero std.
std::vector<double> to_rgb(const MotionImage& image, const ChannelStats& stats);

// Row-major 16x16 patching: patch id = joint * 14 + time_window.
int patch_index(int joint, int time_window, const FeatureLayout& layout);
void patch_coords(int patch_id, const FeatureLayout& layout, int* joint,
                  int* time_window);

}  // namespace mimg
}  // namespace limo
