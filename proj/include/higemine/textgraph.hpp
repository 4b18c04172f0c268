#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "higemine/sparse.hpp"

namespace higemine::textgraph {

enum class GraphKind { blurb, review };

// Heterogeneous doc+token graph. Documents occupy rows [0, n_docs), tokens
// occupy [n_docs, n_docs+m) in vocabulary order. Doc-doc entries are zero,
// doc-token entries are TF-IDF, token-token entries are PPMI.
struct TextGraph {
    sparse::SparseMatrix adjacency;
    std::map<std::string, std::size_t> doc_index;    // doc id -> row
    std::map<std::string, std::size_t> token_index;  // token -> row (offset by n_docs)
    std::size_t n_docs = 0;
    std::size_t n_tokens = 0;
    GraphKind kind = GraphKind::blurb;
};

// TF-IDF with smoothed idf: tf(d,t) * (ln((1+n_docs)/(1+df(t))) + 1).
// Out-of-vocabulary tokens are skipped.
sparse::SparseMatrix compute_tfidf(const std::vector<std::vector<std::string>>& docs,
                                   const std::vector<std::string>& vocab);

// Positive PMI over sliding windows of `window` tokens (stride 1; documents
// shorter than the window contribute one window). Pairs are counted at most
// once per window; the diagonal is zero. Out-of-vocabulary tokens are skipped
// before windowing.
sparse::SparseMatrix compute_ppmi(const std::vector<std::vector<std::string>>& docs,
                                  const std::vector<std::string>& vocab, std::size_t window);

// Assembles the symmetric (n_docs+m)x(n_docs+m) adjacency from the two blocks
// above. Ready for sparse::normalize_adjacency.
TextGraph build_text_graph(const std::vector<std::pair<std::string, std::vector<std::string>>>& docs,
                           const std::vector<std::string>& vocab, std::size_t window,
                           GraphKind kind);

}  // namespace higemine::textgraph
