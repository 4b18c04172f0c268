#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "higemine/corpus.hpp"
#include "higemine/embeddings.hpp"

namespace higemine::review_filter {

struct FilterConfig {
    // Blurbs with fewer tokens than this bypass filtering entirely.
    std::size_t min_blurb_tokens = 20;
    // Safety floor for the per-book dynamic threshold.
    double floor = 0.35;
};

struct FilterResult {
    std::vector<std::size_t> kept_indices;
    std::vector<double> similarities;  // one per review; empty on bypass
    std::string consolidated;          // kept reviews joined by single spaces, original order
    double threshold_used = 0.0;
    bool bypass = false;
};

// Cosine similarity, defined as 0 when either vector has zero norm.
double cosine_similarity(const std::vector<double>& u, const std::vector<double>& v);

// Keeps reviews whose similarity to the blurb meets the per-book dynamic
// threshold max(floor, mean similarity). Short blurbs bypass filtering; if
// nothing clears the threshold the single best review is kept.
FilterResult filter_reviews(const std::string& blurb, const std::vector<std::string>& reviews,
                            const embeddings::EmbeddingProvider& provider,
                            const FilterConfig& cfg);

struct VocabConfig {
    std::size_t min_df = 1;
    double max_df_ratio = 1.0;
};

// Shared vocabulary over blurbs and consolidated reviews. Document frequency
// counts books (a token inside both the blurb and the consolidated review of
// one book counts once). Sorted lexicographically; this order is the
// canonical token-node order everywhere downstream.
std::vector<std::string> build_vocabulary(const std::vector<corpus::BookRecord>& books,
                                          const std::map<std::string, FilterResult>& filtered,
                                          const VocabConfig& cfg);

}  // namespace higemine::review_filter
