#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "limo/encoders.hpp"
#include "limo/skeleton.hpp"

namespace limo {
namespace io {

// All binary payloads are little-endian 32-bit floats behind a 4-byte magic.
//   features  "LIFE": magic, u32 rows, rows x 29 f32
//   image     "LIMI": magic, u32 valid_frames, 224*224 f32
//   params    "LIEP": magic, u32 version, u32 vocab, u32 d, then f32 fields
//             in declaration order (patch weight, patch bias, positional,
//             token table, alpha, mlm weight, tau, part projections, stats)

// Write via temp file + atomic rename so failures leave no partial output.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

// Motion JSON: {fps, joint_names, parents, frames[T][J][3]}.
MotionSequence load_motion_json(const std::filesystem::path& path);
void save_motion_json(const std::filesystem::path& path,
                      const MotionSequence& motion,
                      const std::vector<std::string>& joint_names,
                      const std::vector<int>& parents);

// Skeleton JSON mirrors the Skeleton struct.
Skeleton load_skeleton_json(const std::filesystem::path& path);
void save_skeleton_json(const std::filesystem::path& path, const Skeleton& sk);

// Feature table, CSV (header row of dimension names) and binary.
void save_features_csv(const std::filesystem::path& path,
                       const FeatureSequence& fs);
FeatureSequence load_features_csv(const std::filesystem::path& path);
void save_features_binary(const std::filesystem::path& path,
                          const FeatureSequence& fs);
FeatureSequence load_features_binary(const std::filesystem::path& path);

void save_motion_image(const std::filesystem::path& path,
                       const mimg::MotionImage& img);
mimg::MotionImage load_motion_image(const std::filesystem::path& path);

void save_encoder_params(const std::filesystem::path& path,
                         const enc::EncoderParams& p);
enc::EncoderParams load_encoder_params(const std::filesystem::path& path);

void save_vocabulary_json(const std::filesystem::path& path,
                          const enc::Vocabulary& v);
enc::Vocabulary load_vocabulary_json(const std::filesystem::path& path);

// 8-bit grayscale image writers; values min-max scaled by the caller or
// here via the *_scaled variants.
void write_pgm(const std::filesystem::path& path, const uint8_t* pixels,
               int width, int height);
void write_png_gray(const std::filesystem::path& path, const uint8_t* pixels,
                    int width, int height);
std::vector<uint8_t> minmax_to_u8(const std::vector<double>& values);

// Generic CSV helper: rows of already formatted cells.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::vector<std::string>>& rows);

std::string format_double(double v);

}  // namespace io
}  // namespace limo
