#pragma once

#include <map>
#include <string>
#include <vector>

#include "higemine/corpus.hpp"
#include "higemine/review_filter.hpp"
#include "higemine/sparse.hpp"

namespace higemine::labelgraph {

// Directed genre co-occurrence graph with entry (i,j) = P(C_i | C_j) after
// psi thresholding: entries below psi1 are dropped, entries at or above psi2
// are pinned to 1.
struct LabelGraph {
    sparse::SparseMatrix adjacency;
    std::vector<std::string> labels;
    double psi1 = 0.0;
    double psi2 = 1.0;
};

struct LabelEmbeddings {
    sparse::DenseMatrix static_part;  // X_e, frozen after construction
    // The learnable part X_l lives with the model parameters; the combined
    // embedding X_e + X_l is recomputed on every forward pass.
};

struct GenreWordEmbeddings {
    sparse::DenseMatrix frequencies;  // normalized gamma, m x k', entries >= 0
    sparse::DenseMatrix embeddings;   // X_tk = gamma * X_e, m x e
};

// Conditional co-occurrence M_ij = count(i and j)/count(j) over the given
// books' label vectors. Diagonal is zero; genres that never occur produce
// all-zero rows/columns.
sparse::DenseMatrix compute_cooccurrence(const std::vector<corpus::BookRecord>& train_books,
                                         std::size_t n_labels);

LabelGraph threshold_cooccurrence(const sparse::DenseMatrix& m,
                                  const std::vector<std::string>& labels, double psi1,
                                  double psi2);

// Label names split on non-alphanumeric boundaries, lowercased; no stopword
// or length filtering (every word of a label counts).
std::vector<std::string> split_label_words(const std::string& label);

// Static label embeddings: single-word labels map to their vector, multi-word
// labels to the mean over constituent words (missing words contribute zero
// vectors and a warning).
sparse::DenseMatrix label_static_embeddings(const std::vector<std::string>& labels,
                                            const std::map<std::string, std::vector<double>>& vectors,
                                            std::size_t dim,
                                            std::vector<std::string>* warnings = nullptr);

// Genre-aware word embeddings: per-genre word frequencies from blurbs and
// consolidated reviews, z-scored per word across genres, absolute value
// (which subsumes negative clipping), then projected through X_e.
GenreWordEmbeddings genre_word_embeddings(
    const std::vector<corpus::BookRecord>& train_books,
    const std::map<std::string, review_filter::FilterResult>& filtered,
    const std::vector<std::string>& vocab, const sparse::DenseMatrix& label_static);

}  // namespace higemine::labelgraph
