#include "higemine/hierarchy.hpp"

#include <algorithm>

#include "higemine/errors.hpp"

namespace higemine::hierarchy {

using sparse::DenseMatrix;

double adaptive_lambda(std::size_t blurb_tokens, std::size_t review_tokens,
                       std::size_t short_text_tokens, double default_value) {
    const bool blurb_short = blurb_tokens < short_text_tokens;
    const bool review_short = review_tokens < short_text_tokens;
    if (blurb_short && review_short) return 0.5;
    if (blurb_short) return 0.0;
    if (review_short) return 1.0;
    return default_value;
}

Predictor::Predictor(PredictorInputs inputs) : in_(std::move(inputs)) {
    if (in_.heads.empty()) throw DataError("predictor needs at least one Level-2 head");
    if (!in_.flat && in_.heads.size() != 2) {
        throw DataError("hierarchical predictor needs a fiction and a nonfiction head");
    }
    if (!in_.flat && !in_.level1) throw DataError("hierarchical predictor needs a Level-1 model");
    head_blurb_.resize(in_.heads.size());
    head_review_.resize(in_.heads.size());
    for (std::size_t i = 0; i < in_.doc_ids.size() && i < in_.n_docs; ++i) {
        doc_rows_[in_.doc_ids[i]] = i;
    }
}

double Predictor::resolve_lambda(const LambdaSetting& setting, double fallback,
                                 std::size_t row) const {
    if (!setting.adaptive) return setting.fixed_value;
    return adaptive_lambda(in_.blurb_token_counts[row], in_.review_token_counts[row],
                           in_.gate.short_text_tokens, fallback);
}

const DenseMatrix& Predictor::level1_scores(bool blurb) {
    auto& slot = blurb ? l1_blurb_ : l1_review_;
    if (!slot) {
        gcn::GraphInputs g;
        g.blurb_adjacency = &in_.blurb_adjacency;
        g.review_adjacency = &in_.review_adjacency;
        g.blurb_features = &in_.level1_blurb_features;
        g.review_features = &in_.level1_review_features;
        g.n_docs = in_.n_docs;
        gcn::Tape tape;
        // A single-path forward: lambda 1 evaluates only the blurb path,
        // lambda 0 only the review path.
        gcn::Tape::NodeId out = gcn::level1_forward(tape, *in_.level1, g, blurb ? 1.0 : 0.0);
        slot = tape.value(out);
    }
    return *slot;
}

const DenseMatrix& Predictor::head_scores(std::size_t head, bool blurb) {
    auto& slot = blurb ? head_blurb_[head] : head_review_[head];
    if (!slot) {
        HeadInputs& h = in_.heads[head];
        gcn::GraphInputs g;
        g.blurb_adjacency = &in_.blurb_adjacency;
        g.review_adjacency = &in_.review_adjacency;
        g.blurb_features = &h.blurb_features;
        g.review_features = &h.review_features;
        g.n_docs = in_.n_docs;
        gcn::Tape tape;
        gcn::Tape::NodeId out = gcn::level2_forward_logits(tape, h.model, g, h.ac_norm,
                                                           h.label_static, blurb ? 1.0 : 0.0);
        slot = tape.value(out);
    }
    return *slot;
}

Prediction Predictor::predict(const std::string& book_id) {
    auto it = doc_rows_.find(book_id);
    if (it == doc_rows_.end()) {
        throw DataError("no document row for book \"" + book_id +
                        "\" (transductive inference requires the book in the corpus)");
    }
    const std::size_t row = it->second;

    Prediction pred;
    std::size_t head_index = 0;
    if (in_.flat) {
        pred.lambda1_used = 0.0;
    } else {
        const double lambda1 =
            resolve_lambda(in_.gate.lambda1, in_.gate.lambda1_default, row);
        pred.lambda1_used = lambda1;
        double logit;
        if (lambda1 == 1.0) {
            logit = level1_scores(true).at(row, 0);
        } else if (lambda1 == 0.0) {
            logit = level1_scores(false).at(row, 0);
        } else {
            logit = lambda1 * level1_scores(true).at(row, 0) +
                    (1.0 - lambda1) * level1_scores(false).at(row, 0);
        }
        pred.level1_probability = gcn::sigmoid(logit);
        pred.level1 = pred.level1_probability >= 0.5 ? corpus::Branch::nonfiction
                                                     : corpus::Branch::fiction;
        head_index = static_cast<std::size_t>(*pred.level1);
    }

    const double lambda2 = resolve_lambda(in_.gate.lambda2, in_.gate.lambda2_default, row);
    pred.lambda2_used = lambda2;
    level2_uses_[head_index] += 1;

    const HeadInputs& head = in_.heads[head_index];
    const std::size_t k = head.genre_names.size();
    pred.genres = head.genre_names;
    pred.probabilities.resize(k);
    pred.decisions.assign(k, 0);
    for (std::size_t c = 0; c < k; ++c) {
        double logit;
        if (lambda2 == 1.0) {
            logit = head_scores(head_index, true).at(row, c);
        } else if (lambda2 == 0.0) {
            logit = head_scores(head_index, false).at(row, c);
        } else {
            logit = lambda2 * head_scores(head_index, true).at(row, c) +
                    (1.0 - lambda2) * head_scores(head_index, false).at(row, c);
        }
        pred.probabilities[c] = gcn::sigmoid(logit);
        if (pred.probabilities[c] >= in_.gate.decision_threshold) pred.decisions[c] = 1;
    }
    // Every book carries at least one genre: force the argmax on when the
    // threshold switched everything off. Ties go to the lowest index.
    if (std::find(pred.decisions.begin(), pred.decisions.end(), 1) == pred.decisions.end() &&
        k > 0) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < k; ++c) {
            if (pred.probabilities[c] > pred.probabilities[best]) best = c;
        }
        pred.decisions[best] = 1;
    }
    return pred;
}

}  // namespace higemine::hierarchy
