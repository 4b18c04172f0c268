#include "higemine/labelgraph.hpp"

#include <cmath>

#include "higemine/errors.hpp"

namespace higemine::labelgraph {

sparse::DenseMatrix compute_cooccurrence(const std::vector<corpus::BookRecord>& train_books,
                                         std::size_t n_labels) {
    if (train_books.empty()) throw DataError("compute_cooccurrence: empty branch");
    std::vector<std::size_t> count(n_labels, 0);
    std::vector<std::vector<std::size_t>> joint(n_labels, std::vector<std::size_t>(n_labels, 0));
    for (const corpus::BookRecord& book : train_books) {
        if (book.level2.size() != n_labels) {
            throw DataError("compute_cooccurrence: book \"" + book.id +
                            "\" has a label vector of wrong length");
        }
        for (std::size_t i = 0; i < n_labels; ++i) {
            if (!book.level2[i]) continue;
            ++count[i];
            for (std::size_t j = 0; j < n_labels; ++j) {
                if (book.level2[j]) ++joint[i][j];
            }
        }
    }
    sparse::DenseMatrix m(n_labels, n_labels);
    for (std::size_t i = 0; i < n_labels; ++i) {
        for (std::size_t j = 0; j < n_labels; ++j) {
            if (i == j || count[j] == 0) continue;
            m.at(i, j) = static_cast<double>(joint[i][j]) / static_cast<double>(count[j]);
        }
    }
    return m;
}

LabelGraph threshold_cooccurrence(const sparse::DenseMatrix& m,
                                  const std::vector<std::string>& labels, double psi1,
                                  double psi2) {
    if (!(psi1 >= 0.0 && psi1 <= psi2 && psi2 <= 1.0)) {
        throw ConfigError("threshold_cooccurrence requires 0 <= psi1 <= psi2 <= 1");
    }
    if (m.rows() != m.cols() || m.rows() != labels.size()) {
        throw DataError("threshold_cooccurrence: matrix/label shape mismatch");
    }
    std::vector<sparse::Coord> entries;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const double v = m.at(i, j);
            if (v == 0.0 || v < psi1) continue;
            entries.push_back({i, j, v >= psi2 ? 1.0 : v});
        }
    }
    LabelGraph graph;
    graph.adjacency = sparse::SparseMatrix(m.rows(), m.cols(), std::move(entries));
    graph.labels = labels;
    graph.psi1 = psi1;
    graph.psi2 = psi2;
    return graph;
}

std::vector<std::string> split_label_words(const std::string& label) {
    std::vector<std::string> words;
    std::string current;
    for (char ch : label) {
        const unsigned char uc = static_cast<unsigned char>(ch);
        if ((uc >= 'a' && uc <= 'z') || (uc >= '0' && uc <= '9')) {
            current += static_cast<char>(uc);
        } else if (uc >= 'A' && uc <= 'Z') {
            current += static_cast<char>(uc - 'A' + 'a');
        } else if (!current.empty()) {
            words.push_back(current);
            current.clear();
        }
    }
    if (!current.empty()) words.push_back(current);
    return words;
}

sparse::DenseMatrix label_static_embeddings(
    const std::vector<std::string>& labels,
    const std::map<std::string, std::vector<double>>& vectors, std::size_t dim,
    std::vector<std::string>* warnings) {
    sparse::DenseMatrix x_e(labels.size(), dim);
    for (std::size_t row = 0; row < labels.size(); ++row) {
        const std::vector<std::string> words = split_label_words(labels[row]);
        std::size_t found = 0;
        for (const std::string& word : words) {
            auto it = vectors.find(word);
            if (it == vectors.end()) {
                if (warnings) {
                    warnings->push_back("label \"" + labels[row] + "\": no vector for word \"" +
                                        word + "\"");
                }
                continue;
            }
            if (it->second.size() != dim) {
                throw DataError("label_static_embeddings: vector for \"" + word +
                                "\" has dim " + std::to_string(it->second.size()) +
                                ", expected " + std::to_string(dim));
            }
            for (std::size_t c = 0; c < dim; ++c) x_e.at(row, c) += it->second[c];
            ++found;
        }
        if (!words.empty()) {
            for (std::size_t c = 0; c < dim; ++c) {
                x_e.at(row, c) /= static_cast<double>(words.size());
            }
        }
        if (found == 0 && warnings) {
            warnings->push_back("label \"" + labels[row] + "\" has no known words; zero row");
        }
    }
    return x_e;
}

GenreWordEmbeddings genre_word_embeddings(
    const std::vector<corpus::BookRecord>& train_books,
    const std::map<std::string, review_filter::FilterResult>& filtered,
    const std::vector<std::string>& vocab, const sparse::DenseMatrix& label_static) {
    const std::size_t m = vocab.size();
    const std::size_t k = label_static.rows();
    if (m == 0 || k == 0) throw DataError("genre_word_embeddings: empty vocabulary or label set");

    std::map<std::string, std::size_t> vocab_index;
    for (std::size_t i = 0; i < m; ++i) vocab_index[vocab[i]] = i;

    sparse::DenseMatrix gamma(m, k);
    for (const corpus::BookRecord& book : train_books) {
        if (book.level2.size() != k) {
            throw DataError("genre_word_embeddings: book \"" + book.id +
                            "\" label vector length mismatch");
        }
        std::map<std::size_t, double> counts;
        for (const std::string& tok : corpus::tokenize(book.blurb)) {
            auto it = vocab_index.find(tok);
            if (it != vocab_index.end()) counts[it->second] += 1.0;
        }
        auto fit = filtered.find(book.id);
        if (fit != filtered.end()) {
            for (const std::string& tok : corpus::tokenize(fit->second.consolidated)) {
                auto it = vocab_index.find(tok);
                if (it != vocab_index.end()) counts[it->second] += 1.0;
            }
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (!book.level2[j]) continue;
            for (const auto& [word, c] : counts) gamma.at(word, j) += c;
        }
    }

    // Per-word z-score across the k genres (population std), then absolute
    // value. The |.| makes the subsequent negative clip a no-op.
    for (std::size_t i = 0; i < m; ++i) {
        double mean = 0.0;
        for (std::size_t j = 0; j < k; ++j) mean += gamma.at(i, j);
        mean /= static_cast<double>(k);
        double var = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double d = gamma.at(i, j) - mean;
            var += d * d;
        }
        const double std_dev = std::sqrt(var / static_cast<double>(k));
        for (std::size_t j = 0; j < k; ++j) {
            gamma.at(i, j) = std_dev == 0.0 ? 0.0 : std::abs((gamma.at(i, j) - mean) / std_dev);
        }
    }

    GenreWordEmbeddings out;
    out.embeddings = sparse::matmul(gamma, label_static);
    out.frequencies = std::move(gamma);
    return out;
}

}  // namespace higemine::labelgraph
