#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "limo/motion_image.hpp"

namespace limo {
namespace enc {

inline constexpr int kEmbedDim = 256;   // d, shared latent dimension
inline constexpr int kPatchDim = 256;   // flattened 16x16 patch
inline constexpr int kPatchCount = 196;
inline constexpr size_t kMaxVocab = 2048;

struct Vocabulary {
    // Dense ids: 0 = PAD, 1 = MASK, 2 = UNK, content words from 3.
    static constexpr int kPad = 0;
    static constexpr int kMask = 1;
    static constexpr int kUnk = 2;

    std::unordered_map<std::string, int> token_to_id;
    std::vector<std::string> id_to_token;  // specials included

    size_t size() const { return id_to_token.size(); }
    int lookup(const std::string& token) const;
};

// Frequency-ranked vocabulary from a corpus, capped at kMaxVocab entries
// (specials included); ties broken lexicographically for reproducibility.
Vocabulary build_vocabulary(const std::vector<std::string>& corpus,
                            size_t max_size = kMaxVocab);

// Lowercase, split on non-alphanumeric runs, UNK fallback. Throws an
// empty-query error if nothing survives.
std::vector<int> tokenize(const std::string& text, const Vocabulary& vocab);
std::vector<std::string> split_words(const std::string& text);

// All trainable parameters. Doubles internally; serialized as f32.
struct EncoderParams {
    uint32_t vocab_size = 0;
    int dim = kEmbedDim;

    // Motion side.
    MatD patch_weight;               // d x kPatchDim
    std::vector<double> patch_bias;  // d
    MatD positional;                 // kPatchCount x d
    // Text side.
    MatD token_table;                // vocab_size x d
    double alpha = 0.5;              // context mixing weight in [0,1]
    MatD mlm_weight;                 // d x vocab_size
    double log_tau = 0.0;            // temperature, stored as log
    // Shared with the motion-image stage.
    mimg::PartProjections parts;
    mimg::ChannelStats stats;

    double tau() const { return std::exp(log_tau); }
};

// Seeded init: patch/token/mlm weights uniform with fan-in scaling,
// positional vectors small gaussian, alpha 0.5, tau 0.07.
EncoderParams init_encoder_params(size_t vocab_size, uint64_t seed);

struct TokenEmbeddings {
    std::vector<int> ids;
    MatD rows;  // M x d
    size_t count() const { return rows.rows; }
};

struct PatchEmbeddings {
    MatD rows;  // kPatchCount x d
};

// l_i = (1-alpha) * table[id_i] + alpha * mean(table[id_w]) over the window
// w in [i-1, i+1] clipped to bounds (self included).
TokenEmbeddings encode_text(const std::vector<int>& ids,
                            const EncoderParams& params);

// v_j = patch_weight * flatten(patch j of the normalized image) + bias +
// positional[j]. Channel replication is an identity for this linear encoder.
PatchEmbeddings encode_motion(const mimg::MotionImage& image,
                              const EncoderParams& params);

struct MaskedBatch {
    std::vector<int> original_ids;
    std::vector<int> masked_ids;
    std::vector<size_t> positions;  // distinct, ascending
    double rate = 0.15;
};

// ceil(rate * M) distinct positions replaced by MASK, at least one.
// rate must lie in (0, 1).
MaskedBatch mask_tokens(const std::vector<int>& ids, double rate,
                        std::mt19937_64& rng);

// Scores over the vocabulary for one hidden state: state . mlm_weight.
std::vector<double> mlm_logits(const double* state, const EncoderParams& p);

// log softmax(logits)[target]; stabilized.
double log_softmax_at(const std::vector<double>& logits, int target);

}  // namespace enc
}  // namespace limo
