#include "limo/late_interaction.hpp"

#include "limo/kernels.hpp"

namespace limo {
namespace li {

namespace {

std::vector<double> row_norms(const MatD& m, const char* what) {
    std::vector<double> norms(m.rows);
    for (size_t r = 0; r < m.rows; r++) {
        double n = std::sqrt(kernels::norm_sq_f64(m.row(r), m.cols));
        if (!(n > kNormFloor))
            throw data_error(std::string("degenerate ") + what +
                             " embedding: zero-norm row " + std::to_string(r));
        norms[r] = n;
    }
    return norms;
}

}  // namespace

InteractionMatrix interaction_matrix(const enc::TokenEmbeddings& tokens,
                                     const enc::PatchEmbeddings& patches) {
    if (tokens.count() == 0) throw data_error("no token embeddings");
    if (patches.rows.rows == 0) throw data_error("no patch embeddings");
    if (tokens.rows.cols != patches.rows.cols)
        throw data_error("embedding dimensions disagree");

    auto tn = row_norms(tokens.rows, "token");
    auto pn = row_norms(patches.rows, "patch");

    InteractionMatrix out;
    out.token_ids = tokens.ids;
    out.s = MatD(tokens.count(), patches.rows.rows);
    for (size_t i = 0; i < tokens.count(); i++) {
        const double* li_row = tokens.rows.row(i);
        double* dst = out.s.row(i);
        for (size_t j = 0; j < patches.rows.rows; j++) {
            double dot = kernels::dot_f64(li_row, patches.rows.row(j),
                                          tokens.rows.cols);
            dst[j] = dot / (tn[i] * pn[j]);
        }
    }
    return out;
}

double maxsim_score(const InteractionMatrix& m) {
    double total = 0.0;
    for (size_t i = 0; i < m.s.rows; i++) {
        const double* row = m.s.row(i);
        double best = row[0];
        for (size_t j = 1; j < m.s.cols; j++)
            if (row[j] > best) best = row[j];
        total += best;
    }
    return total / (double)m.s.rows;
}

std::vector<size_t> argmax_assignment(const InteractionMatrix& m) {
    std::vector<size_t> winners(m.s.rows);
    for (size_t i = 0; i < m.s.rows; i++) {
        const double* row = m.s.row(i);
        size_t best = 0;
        for (size_t j = 1; j < m.s.cols; j++)
            if (row[j] > row[best]) best = j;  // strict: first max wins
        winners[i] = best;
    }
    return winners;
}

double pair_score(const enc::TokenEmbeddings& text,
                  const enc::PatchEmbeddings& motion) {
    return maxsim_score(interaction_matrix(text, motion));
}

BatchScoreMatrix batch_scores(
        const std::vector<enc::TokenEmbeddings>& texts,
        const std::vector<enc::PatchEmbeddings>& motions) {
    if (texts.size() != motions.size())
        throw data_error("batch sizes disagree");
    size_t b = texts.size();
    BatchScoreMatrix out;
    out.scores = MatD(b, b);
    std::string error;
    std::mutex err_mutex;
    parallel_for(b, [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; i++) {
            try {
                for (size_t j = 0; j < b; j++)
                    out.scores.at(i, j) = pair_score(texts[i], motions[j]);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (error.empty())
                    error = "pair (" + std::to_string(i) + ", *): " + e.what();
            }
        }
    });
    if (!error.empty()) throw data_error(error);
    return out;
}

}  // namespace li
}  // namespace limo
