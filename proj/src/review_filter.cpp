#include "higemine/review_filter.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "higemine/errors.hpp"

namespace higemine::review_filter {

double cosine_similarity(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size()) {
        throw DataError("cosine_similarity length mismatch: " + std::to_string(u.size()) +
                        " vs " + std::to_string(v.size()));
    }
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

FilterResult filter_reviews(const std::string& blurb, const std::vector<std::string>& reviews,
                            const embeddings::EmbeddingProvider& provider,
                            const FilterConfig& cfg) {
    FilterResult result;

    const std::size_t blurb_tokens = corpus::tokenize(blurb).size();
    if (blurb_tokens < cfg.min_blurb_tokens) {
        // Blurb too short to anchor filtering: retain everything.
        result.bypass = true;
        result.kept_indices.resize(reviews.size());
        for (std::size_t i = 0; i < reviews.size(); ++i) result.kept_indices[i] = i;
    } else {
        const std::vector<double> anchor = provider.embed(blurb);
        result.similarities.reserve(reviews.size());
        for (const std::string& review : reviews) {
            result.similarities.push_back(cosine_similarity(anchor, provider.embed(review)));
        }
        double mean = 0.0;
        for (double d : result.similarities) mean += d;
        if (!result.similarities.empty()) mean /= static_cast<double>(result.similarities.size());
        result.threshold_used = std::max(cfg.floor, mean);
        for (std::size_t i = 0; i < result.similarities.size(); ++i) {
            if (result.similarities[i] >= result.threshold_used) result.kept_indices.push_back(i);
        }
        if (result.kept_indices.empty() && !reviews.empty()) {
            // Degenerate case: keep the single most similar review so the
            // review path stays nonempty. Ties go to the lowest index.
            std::size_t best = 0;
            for (std::size_t i = 1; i < result.similarities.size(); ++i) {
                if (result.similarities[i] > result.similarities[best]) best = i;
            }
            result.kept_indices.push_back(best);
        }
    }

    for (std::size_t i = 0; i < result.kept_indices.size(); ++i) {
        if (i > 0) result.consolidated += ' ';
        result.consolidated += reviews[result.kept_indices[i]];
    }
    return result;
}

std::vector<std::string> build_vocabulary(const std::vector<corpus::BookRecord>& books,
                                          const std::map<std::string, FilterResult>& filtered,
                                          const VocabConfig& cfg) {
    std::map<std::string, std::size_t> df;
    for (const corpus::BookRecord& book : books) {
        std::set<std::string> in_book;
        for (const std::string& tok : corpus::tokenize(book.blurb)) in_book.insert(tok);
        auto it = filtered.find(book.id);
        if (it == filtered.end()) {
            throw DataError("build_vocabulary: no filter result for book \"" + book.id + "\"");
        }
        for (const std::string& tok : corpus::tokenize(it->second.consolidated)) {
            in_book.insert(tok);
        }
        for (const std::string& tok : in_book) ++df[tok];
    }
    const double max_df = cfg.max_df_ratio * static_cast<double>(books.size());
    std::vector<std::string> vocab;
    for (const auto& [tok, count] : df) {
        if (count >= cfg.min_df && static_cast<double>(count) <= max_df) vocab.push_back(tok);
    }
    // std::map iteration is already lexicographic; vocab is sorted.
    if (vocab.empty()) throw DataError("vocabulary is empty after frequency cutoffs");
    return vocab;
}

}  // namespace higemine::review_filter
