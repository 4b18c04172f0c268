#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "higemine/corpus.hpp"
#include "higemine/gcn.hpp"
#include "higemine/sparse.hpp"

namespace higemine::hierarchy {

struct LambdaSetting {
    bool adaptive = false;
    double fixed_value = 0.5;  // used when not adaptive
};

struct GateConfig {
    // Shared "too short" threshold for blurbs and consolidated reviews.
    std::size_t short_text_tokens = 20;
    LambdaSetting lambda1{false, 0.3};
    LambdaSetting lambda2{false, 0.7};
    // Empirical fusion weights used by the adaptive rule's "otherwise" arm.
    double lambda1_default = 0.3;
    double lambda2_default = 0.7;
    double decision_threshold = 0.5;
};

// Length-adaptive fusion weight: short blurb -> 0 (review only), short
// reviews -> 1 (blurb only), both short -> 0.5, otherwise the empirical
// default.
double adaptive_lambda(std::size_t blurb_tokens, std::size_t review_tokens,
                       std::size_t short_text_tokens, double default_value);

struct Prediction {
    std::optional<corpus::Branch> level1;  // absent in flat mode
    double level1_probability = 0.0;       // p(nonfiction) when level1 is set
    std::vector<std::string> genres;       // genre list of the routed head
    std::vector<double> probabilities;
    std::vector<std::uint8_t> decisions;
    double lambda1_used = 0.0;  // 0 in flat mode reports the unused slot
    double lambda2_used = 0.0;
};

// Everything one Level-2 head needs at inference.
struct HeadInputs {
    gcn::Level2Model model;
    sparse::SparseMatrix ac_norm;
    sparse::DenseMatrix label_static;
    sparse::DenseMatrix blurb_features;   // (n_docs+m) x e
    sparse::DenseMatrix review_features;  // (n_docs+m) x e
    std::vector<std::string> genre_names;
};

struct PredictorInputs {
    sparse::SparseMatrix blurb_adjacency;   // normalized, shared by all heads
    sparse::SparseMatrix review_adjacency;  // normalized
    std::optional<gcn::Level1Model> level1;
    sparse::DenseMatrix level1_blurb_features;
    sparse::DenseMatrix level1_review_features;
    // Index 0: fiction head, 1: nonfiction head. In flat mode a single head
    // over the concatenated genre list.
    std::vector<HeadInputs> heads;
    bool flat = false;
    std::size_t n_docs = 0;
    std::vector<std::string> doc_ids;                // row order
    std::vector<std::size_t> blurb_token_counts;     // per doc, for adaptive lambda
    std::vector<std::size_t> review_token_counts;
    GateConfig gate;
};

// Inference-time gate. Path score matrices are computed lazily and cached, so
// an endpoint lambda never evaluates the excluded modality, and exactly one
// Level-2 head is consulted per prediction (observable via level2_uses()).
class Predictor {
public:
    explicit Predictor(PredictorInputs inputs);

    Prediction predict(const std::string& book_id);

    // How many predictions consulted each Level-2 head (fiction, nonfiction);
    // in flat mode only slot 0 is used.
    const std::array<std::size_t, 2>& level2_uses() const { return level2_uses_; }

private:
    double resolve_lambda(const LambdaSetting& setting, double fallback, std::size_t row) const;
    const sparse::DenseMatrix& level1_scores(bool blurb);
    const sparse::DenseMatrix& head_scores(std::size_t head, bool blurb);

    PredictorInputs in_;
    std::map<std::string, std::size_t> doc_rows_;
    std::optional<sparse::DenseMatrix> l1_blurb_, l1_review_;
    std::vector<std::optional<sparse::DenseMatrix>> head_blurb_, head_review_;
    std::array<std::size_t, 2> level2_uses_ = {0, 0};
};

}  // namespace higemine::hierarchy
