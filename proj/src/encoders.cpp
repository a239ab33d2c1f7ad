#include "limo/encoders.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace limo {
namespace enc {

int Vocabulary::lookup(const std::string& token) const {
    auto it = token_to_id.find(token);
    return it == token_to_id.end() ? kUnk : it->second;
}

std::vector<std::string> split_words(const std::string& text) {
    std::vector<std::string> words;
    std::string cur;
    for (char ch : text) {
        if (std::isalnum((unsigned char)ch)) {
            cur.push_back((char)std::tolower((unsigned char)ch));
        } else if (!cur.empty()) {
            words.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) words.push_back(cur);
    return words;
}

Vocabulary build_vocabulary(const std::vector<std::string>& corpus,
                            size_t max_size) {
    // std::map keeps iteration order stable for the tie sort below.
    std::map<std::string, size_t> freq;
    for (const auto& text : corpus)
        for (const auto& w : split_words(text)) freq[w]++;

    std::vector<std::pair<std::string, size_t>> ranked(freq.begin(),
                                                       freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Vocabulary v;
    v.id_to_token = {"[PAD]", "[MASK]", "[UNK]"};
    for (const auto& [word, count] : ranked) {
        if (v.id_to_token.size() >= max_size) break;
        v.id_to_token.push_back(word);
    }
    for (size_t i = 0; i < v.id_to_token.size(); i++)
        v.token_to_id[v.id_to_token[i]] = (int)i;
    return v;
}

std::vector<int> tokenize(const std::string& text, const Vocabulary& vocab) {
    std::vector<int> ids;
    for (const auto& w : split_words(text)) ids.push_back(vocab.lookup(w));
    if (ids.empty()) throw data_error("empty query after tokenization");
    return ids;
}

EncoderParams init_encoder_params(size_t vocab_size, uint64_t seed) {
    EncoderParams p;
    p.vocab_size = (uint32_t)vocab_size;
    std::mt19937_64 rng(seed);

    auto fill_uniform = [&](MatD& m, double bound) {
        std::uniform_real_distribution<double> d(-bound, bound);
        for (auto& v : m.data) v = d(rng);
    };

    p.patch_weight = MatD(kEmbedDim, kPatchDim);
    fill_uniform(p.patch_weight, 1.0 / std::sqrt((double)kPatchDim));
    p.patch_bias.assign(kEmbedDim, 0.0);

    p.positional = MatD(kPatchCount, kEmbedDim);
    std::normal_distribution<double> pos_dist(0.0, 0.02);
    for (auto& v : p.positional.data) v = pos_dist(rng);

    p.token_table = MatD(vocab_size, kEmbedDim);
    fill_uniform(p.token_table, 1.0 / std::sqrt((double)kEmbedDim));

    p.alpha = 0.5;

    p.mlm_weight = MatD(kEmbedDim, vocab_size);
    fill_uniform(p.mlm_weight, 1.0 / std::sqrt((double)kEmbedDim));

    p.log_tau = std::log(0.07);
    p.parts = mimg::init_part_projections(mimg::base_layout(), rng());
    return p;
}

TokenEmbeddings encode_text(const std::vector<int>& ids,
                            const EncoderParams& params) {
    if (ids.empty()) throw data_error("cannot encode an empty token list");
    size_t m = ids.size();
    for (int id : ids)
        if (id < 0 || (uint32_t)id >= params.vocab_size)
            throw data_error("token id out of table range: " +
                             std::to_string(id));

    TokenEmbeddings out;
    out.ids = ids;
    out.rows = MatD(m, params.dim);
    double a = params.alpha;
    for (size_t i = 0; i < m; i++) {
        size_t lo = i > 0 ? i - 1 : 0;
        size_t hi = std::min(m - 1, i + 1);
        double inv_w = 1.0 / (double)(hi - lo + 1);
        const double* self = params.token_table.row(ids[i]);
        double* dst = out.rows.row(i);
        for (int dcol = 0; dcol < params.dim; dcol++)
            dst[dcol] = (1.0 - a) * self[dcol];
        for (size_t w = lo; w <= hi; w++) {
            const double* nb = params.token_table.row(ids[w]);
            for (int dcol = 0; dcol < params.dim; dcol++)
                dst[dcol] += a * inv_w * nb[dcol];
        }
    }
    return out;
}

PatchEmbeddings encode_motion(const mimg::MotionImage& image,
                              const EncoderParams& params) {
    const auto& layout = params.parts.layout;
    if (image.height != layout.image_height ||
        image.width != layout.image_width)
        throw data_error("motion image geometry mismatch");

    double mean = params.stats.mean[0];
    double inv_std = 1.0 / params.stats.std[0];
    if (params.stats.std[0] == 0.0)
        throw data_error("zero std in normalization stats");

    int grid = layout.patch_grid();
    int side = layout.band_height;
    PatchEmbeddings out;
    out.rows = MatD(kPatchCount, params.dim);
    std::vector<double> patch(kPatchDim);
    for (int pj = 0; pj < kPatchCount; pj++) {
        int pr = pj / grid, pc = pj % grid;
        for (int r = 0; r < side; r++)
            for (int c = 0; c < side; c++)
                patch[r * side + c] =
                        (image.at(pr * side + r, pc * side + c) - mean) *
                        inv_std;
        double* dst = out.rows.row(pj);
        const double* pos = params.positional.row(pj);
        for (int dr = 0; dr < params.dim; dr++) {
            const double* w = params.patch_weight.row(dr);
            double acc = params.patch_bias[dr];
            for (int c = 0; c < kPatchDim; c++) acc += w[c] * patch[c];
            dst[dr] = acc + pos[dr];
        }
    }
    return out;
}

MaskedBatch mask_tokens(const std::vector<int>& ids, double rate,
                        std::mt19937_64& rng) {
    if (ids.empty()) throw data_error("cannot mask an empty token list");
    if (!(rate > 0.0 && rate < 1.0))
        throw data_error("mask rate must lie in (0, 1)");
    size_t m = ids.size();
    size_t count = (size_t)std::ceil(rate * (double)m);
    count = std::max<size_t>(1, std::min(count, m));

    // Partial Fisher-Yates over the index set.
    std::vector<size_t> idx(m);
    for (size_t i = 0; i < m; i++) idx[i] = i;
    for (size_t i = 0; i < count; i++) {
        std::uniform_int_distribution<size_t> pick(i, m - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    MaskedBatch batch;
    batch.original_ids = ids;
    batch.masked_ids = ids;
    batch.rate = rate;
    batch.positions.assign(idx.begin(), idx.begin() + count);
    std::sort(batch.positions.begin(), batch.positions.end());
    for (size_t p : batch.positions)
        batch.masked_ids[p] = Vocabulary::kMask;
    return batch;
}

std::vector<double> mlm_logits(const double* state, const EncoderParams& p) {
    std::vector<double> logits(p.vocab_size, 0.0);
    for (int d = 0; d < p.dim; d++) {
        const double* w = p.mlm_weight.row(d);
        double s = state[d];
        for (uint32_t v = 0; v < p.vocab_size; v++) logits[v] += s * w[v];
    }
    return logits;
}

double log_softmax_at(const std::vector<double>& logits, int target) {
    double mx = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double z : logits) sum += std::exp(z - mx);
    return logits[target] - mx - std::log(sum);
}

}  // namespace enc
}  // namespace limo
