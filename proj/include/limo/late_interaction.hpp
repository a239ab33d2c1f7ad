#pragma once

#include "limo/encoders.hpp"

namespace limo {
namespace li {

inline constexpr double kNormFloor = 1e-12;

// Token-patch cosine similarity matrix, M x N.
struct InteractionMatrix {
    MatD s;                // M x N cosines
    std::vector<int> token_ids;
};

// Cosine of every (token, patch) pair. A row with norm <= kNormFloor is a
// hard error: a zero embedding is an upstream bug, not something to smooth
// over.
InteractionMatrix interaction_matrix(const enc::TokenEmbeddings& tokens,
                                     const enc::PatchEmbeddings& patches);

// Late-interaction score: mean over tokens of the per-token max over
// patches. Ties in the max resolve toward the smallest patch index.
double maxsim_score(const InteractionMatrix& m);

// Winning patch per token under the same tie rule.
std::vector<size_t> argmax_assignment(const InteractionMatrix& m);

// B x B scores: entry (i, j) = score of text i against motion j, computed
// exactly as the single-pair path (text queries motion only).
struct BatchScoreMatrix {
    MatD scores;  // B x B
};
BatchScoreMatrix batch_scores(const std::vector<enc::TokenEmbeddings>& texts,
                              const std::vector<enc::PatchEmbeddings>& motions);

// Direct pair score without materializing the matrix.
double pair_score(const enc::TokenEmbeddings& text,
                  const enc::PatchEmbeddings& motion);

}  // namespace li
}  // namespace limo
