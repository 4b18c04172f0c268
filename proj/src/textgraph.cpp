#include "higemine/textgraph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "higemine/errors.hpp"

namespace higemine::textgraph {

namespace {

std::map<std::string, std::size_t> index_of(const std::vector<std::string>& vocab) {
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < vocab.size(); ++i) idx[vocab[i]] = i;
    return idx;
}

// Token sequence restricted to vocabulary ids.
std::vector<std::size_t> to_ids(const std::vector<std::string>& doc,
                                const std::map<std::string, std::size_t>& idx) {
    std::vector<std::size_t> ids;
    ids.reserve(doc.size());
    for (const std::string& tok : doc) {
        auto it = idx.find(tok);
        if (it != idx.end()) ids.push_back(it->second);
    }
    return ids;
}

}  // namespace

sparse::SparseMatrix compute_tfidf(const std::vector<std::vector<std::string>>& docs,
                                   const std::vector<std::string>& vocab) {
    if (vocab.empty()) throw DataError("compute_tfidf: empty vocabulary");
    const auto idx = index_of(vocab);
    const std::size_t n_docs = docs.size();

    std::vector<std::size_t> df(vocab.size(), 0);
    std::vector<std::map<std::size_t, std::size_t>> tf(n_docs);
    for (std::size_t d = 0; d < n_docs; ++d) {
        for (std::size_t t : to_ids(docs[d], idx)) ++tf[d][t];
        for (const auto& [t, count] : tf[d]) ++df[t];
    }

    std::vector<sparse::Coord> entries;
    for (std::size_t d = 0; d < n_docs; ++d) {
        for (const auto& [t, count] : tf[d]) {
            const double idf =
                std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(df[t]))) +
                1.0;
            entries.push_back({d, t, static_cast<double>(count) * idf});
        }
    }
    return sparse::SparseMatrix(n_docs, vocab.size(), std::move(entries));
}

sparse::SparseMatrix compute_ppmi(const std::vector<std::vector<std::string>>& docs,
                                  const std::vector<std::string>& vocab, std::size_t window) {
    if (window < 2) throw DataError("compute_ppmi: window must be >= 2");
    const auto idx = index_of(vocab);
    const std::size_t m = vocab.size();

    std::size_t total_windows = 0;
    std::vector<std::size_t> token_windows(m, 0);
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> pair_windows;

    for (const auto& doc : docs) {
        const std::vector<std::size_t> ids = to_ids(doc, idx);
        if (ids.empty()) continue;
        const std::size_t n_windows = ids.size() <= window ? 1 : ids.size() - window + 1;
        for (std::size_t w = 0; w < n_windows; ++w) {
            const std::size_t end = std::min(w + window, ids.size());
            std::set<std::size_t> uniq(ids.begin() + static_cast<std::ptrdiff_t>(w),
                                       ids.begin() + static_cast<std::ptrdiff_t>(end));
            ++total_windows;
            for (std::size_t t : uniq) ++token_windows[t];
            for (auto i = uniq.begin(); i != uniq.end(); ++i) {
                for (auto j = std::next(i); j != uniq.end(); ++j) {
                    ++pair_windows[{*i, *j}];
                }
            }
        }
    }

    std::vector<sparse::Coord> entries;
    if (total_windows > 0) {
        const double w_total = static_cast<double>(total_windows);
        for (const auto& [pair, count] : pair_windows) {
            const auto [i, j] = pair;
            const double p_ij = static_cast<double>(count) / w_total;
            const double p_i = static_cast<double>(token_windows[i]) / w_total;
            const double p_j = static_cast<double>(token_windows[j]) / w_total;
            const double pmi = std::log(p_ij / (p_i * p_j));
            if (pmi > 0.0) {
                entries.push_back({i, j, pmi});
                entries.push_back({j, i, pmi});
            }
        }
    }
    return sparse::SparseMatrix(m, m, std::move(entries));
}

TextGraph build_text_graph(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& docs,
    const std::vector<std::string>& vocab, std::size_t window, GraphKind kind) {
    TextGraph graph;
    graph.kind = kind;
    graph.n_docs = docs.size();
    graph.n_tokens = vocab.size();

    std::vector<std::vector<std::string>> token_lists;
    token_lists.reserve(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        const auto& [id, tokens] = docs[d];
        if (graph.doc_index.count(id)) {
            throw DataError("build_text_graph: duplicate doc id \"" + id + "\"");
        }
        graph.doc_index[id] = d;
        token_lists.push_back(tokens);
    }
    for (std::size_t t = 0; t < vocab.size(); ++t) {
        graph.token_index[vocab[t]] = graph.n_docs + t;
    }

    const sparse::SparseMatrix tfidf = compute_tfidf(token_lists, vocab);
    const sparse::SparseMatrix ppmi = compute_ppmi(token_lists, vocab, window);

    const std::size_t n = graph.n_docs + graph.n_tokens;
    std::vector<sparse::Coord> entries;
    entries.reserve(2 * tfidf.nnz() + ppmi.nnz());
    for (const sparse::Coord& e : tfidf.coords()) {
        entries.push_back({e.row, graph.n_docs + e.col, e.value});
        entries.push_back({graph.n_docs + e.col, e.row, e.value});
    }
    for (const sparse::Coord& e : ppmi.coords()) {
        entries.push_back({graph.n_docs + e.row, graph.n_docs + e.col, e.value});
    }
    graph.adjacency = sparse::SparseMatrix(n, n, std::move(entries));
    return graph;
}

}  // namespace higemine::textgraph
