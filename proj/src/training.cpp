#include "higemine/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "higemine/errors.hpp"

namespace higemine::training {

using gcn::Tape;
using gcn::Tensor;
using sparse::DenseMatrix;

double bce_loss(const std::vector<double>& probabilities, const std::vector<double>& targets) {
    if (probabilities.size() != targets.size()) {
        throw DataError("bce_loss length mismatch");
    }
    if (probabilities.empty()) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        const double p = std::clamp(probabilities[i], 1e-7, 1.0 - 1e-7);
        total += -(targets[i] * std::log(p) + (1.0 - targets[i]) * std::log(1.0 - p));
    }
    return total / static_cast<double>(probabilities.size());
}

namespace {

inline double stable_bce_logit(double x, double y) {
    return std::max(x, 0.0) - x * y + std::log1p(std::exp(-std::abs(x)));
}

}  // namespace

double bce_with_logits(const std::vector<double>& logits, const std::vector<double>& targets,
                       const std::vector<double>& weights) {
    if (logits.size() != targets.size() || logits.size() != weights.size()) {
        throw DataError("bce_with_logits length mismatch");
    }
    double total = 0.0;
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        if (weights[i] == 0.0) continue;
        total += weights[i] * stable_bce_logit(logits[i], targets[i]);
        weight_sum += weights[i];
    }
    return weight_sum == 0.0 ? 0.0 : total / weight_sum;
}

LossGrad masked_binary_loss(const DenseMatrix& logits, const std::vector<std::uint8_t>& labels,
                            const std::vector<std::uint8_t>& selected) {
    if (logits.cols() != 1 || logits.rows() != labels.size() ||
        labels.size() != selected.size()) {
        throw DataError("masked_binary_loss shape mismatch");
    }
    LossGrad out;
    out.grad = DenseMatrix(logits.rows(), 1);
    std::size_t n = 0;
    for (std::uint8_t s : selected) n += s ? 1 : 0;
    if (n == 0) return out;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t r = 0; r < logits.rows(); ++r) {
        if (!selected[r]) continue;
        const double x = logits.at(r, 0);
        const double y = static_cast<double>(labels[r]);
        out.value += stable_bce_logit(x, y) * inv_n;
        out.grad.at(r, 0) = (gcn::sigmoid(x) - y) * inv_n;
    }
    return out;
}

LossGrad weighted_multilabel_loss(const DenseMatrix& logits, const DenseMatrix& targets,
                                  const std::vector<double>& doc_weights,
                                  const std::vector<std::uint8_t>& selected) {
    if (!logits.same_shape(targets) || logits.rows() != doc_weights.size() ||
        doc_weights.size() != selected.size()) {
        throw DataError("weighted_multilabel_loss shape mismatch");
    }
    LossGrad out;
    out.grad = DenseMatrix(logits.rows(), logits.cols());
    double weight_sum = 0.0;
    for (std::size_t r = 0; r < logits.rows(); ++r) {
        if (selected[r] && doc_weights[r] != 0.0) {
            weight_sum += doc_weights[r] * static_cast<double>(logits.cols());
        }
    }
    if (weight_sum == 0.0) return out;
    const double inv = 1.0 / weight_sum;
    for (std::size_t r = 0; r < logits.rows(); ++r) {
        if (!selected[r] || doc_weights[r] == 0.0) continue;
        const double w = doc_weights[r] * inv;
        for (std::size_t c = 0; c < logits.cols(); ++c) {
            const double x = logits.at(r, c);
            const double y = targets.at(r, c);
            out.value += w * stable_bce_logit(x, y);
            out.grad.at(r, c) = w * (gcn::sigmoid(x) - y);
        }
    }
    return out;
}

void Optimizer::step(const std::vector<Tensor*>& params) {
    ++t_;
    for (Tensor* p : params) {
        if (!p->grad.all_finite()) {
            throw NumericError("non-finite gradient in tensor " + p->name);
        }
        auto& value = p->value.data();
        const auto& grad = p->grad.data();
        if (cfg_.kind == OptimizerKind::sgd) {
            for (std::size_t i = 0; i < value.size(); ++i) {
                value[i] -= cfg_.learning_rate * grad[i];
            }
            continue;
        }
        auto it = state_.find(p);
        if (it == state_.end()) {
            Moments mo;
            mo.m = DenseMatrix(p->value.rows(), p->value.cols());
            mo.v = DenseMatrix(p->value.rows(), p->value.cols());
            it = state_.emplace(p, std::move(mo)).first;
        }
        auto& m = it->second.m.data();
        auto& v = it->second.v.data();
        const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
        for (std::size_t i = 0; i < value.size(); ++i) {
            m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * grad[i];
            v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            value[i] -= cfg_.learning_rate * m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
        }
    }
}

namespace {

void zero_grads(const std::vector<Tensor*>& params) {
    for (Tensor* p : params) p->grad.fill(0.0);
}

std::vector<DenseMatrix> snapshot(const std::vector<Tensor*>& params) {
    std::vector<DenseMatrix> out;
    out.reserve(params.size());
    for (Tensor* p : params) out.push_back(p->value);
    return out;
}

void restore(const std::vector<Tensor*>& params, const std::vector<DenseMatrix>& snap) {
    for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = snap[i];
}

// Binary F1 over selected rows, positive class = 1.
double binary_f1(const DenseMatrix& logits, const std::vector<std::uint8_t>& labels,
                 const std::vector<std::uint8_t>& selected) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t r = 0; r < logits.rows(); ++r) {
        if (!selected[r]) continue;
        const bool pred = gcn::sigmoid(logits.at(r, 0)) >= 0.5;
        const bool truth = labels[r] != 0;
        if (pred && truth) ++tp;
        if (pred && !truth) ++fp;
        if (!pred && truth) ++fn;
    }
    const double denom = static_cast<double>(2 * tp + fp + fn);
    return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
}

// Micro-F1 at 0.5 over selected, gated rows.
double multilabel_micro_f1(const DenseMatrix& logits, const DenseMatrix& targets,
                           const std::vector<double>& doc_weights,
                           const std::vector<std::uint8_t>& selected) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t r = 0; r < logits.rows(); ++r) {
        if (!selected[r] || doc_weights[r] == 0.0) continue;
        for (std::size_t c = 0; c < logits.cols(); ++c) {
            const bool pred = gcn::sigmoid(logits.at(r, c)) >= 0.5;
            const bool truth = targets.at(r, c) != 0.0;
            if (pred && truth) ++tp;
            if (pred && !truth) ++fp;
            if (!pred && truth) ++fn;
        }
    }
    const double denom = static_cast<double>(2 * tp + fp + fn);
    return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
}

bool any_selected(const std::vector<std::uint8_t>& mask) {
    return std::any_of(mask.begin(), mask.end(), [](std::uint8_t v) { return v != 0; });
}

// Shared epoch loop. forward() records a fresh tape and returns the logits
// node; loss() turns logits into a LossGrad; val() scores the current
// parameters for early stopping (may be NaN when there is no validation set).
template <typename Forward, typename Loss, typename Val>
TrainReport run_epochs(const std::vector<Tensor*>& params, const TrainConfig& cfg,
                       bool has_validation, Forward&& forward, Loss&& loss, Val&& val) {
    const auto t0 = std::chrono::steady_clock::now();
    TrainReport report;
    Optimizer optimizer(cfg.optimizer);
    std::vector<DenseMatrix> best = snapshot(params);
    double best_metric = -1.0;
    std::size_t best_epoch = 0;
    std::size_t since_best = 0;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        Tape tape;
        Tape::NodeId logits = forward(tape);
        LossGrad lg = loss(tape.value(logits));
        if (!std::isfinite(lg.value)) {
            throw NumericError("training diverged at epoch " + std::to_string(epoch) +
                               " (non-finite loss)");
        }
        zero_grads(params);
        tape.backward(logits, lg.grad);
        optimizer.step(params);
        report.train_loss.push_back(lg.value);

        if (has_validation) {
            const double metric = val();
            report.val_metric.push_back(metric);
            if (metric > best_metric) {
                best_metric = metric;
                best_epoch = epoch;
                best = snapshot(params);
                since_best = 0;
            } else if (++since_best >= cfg.patience) {
                break;
            }
        }
    }

    if (has_validation) {
        restore(params, best);
        report.best_epoch = best_epoch;
        report.best_val_metric = best_metric;
    } else {
        report.best_epoch = report.train_loss.empty() ? 0 : report.train_loss.size() - 1;
    }
    report.epochs_run = report.train_loss.size();
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace

gcn::Level1Model make_level1_model(std::size_t feature_dim, const ModelDims& dims,
                                   std::uint64_t seed) {
    Rng rng(seed);
    gcn::Level1Model model;
    model.blurb_path = gcn::make_path(feature_dim, dims.gcn1_out, dims.gcn2_out,
                                      dims.dense_hidden, 1, rng, "level1.blurb");
    model.review_path = gcn::make_path(feature_dim, dims.gcn1_out, dims.gcn2_out,
                                       dims.dense_hidden, 1, rng, "level1.review");
    return model;
}

gcn::Level2Model make_level2_model(std::size_t feature_dim, std::size_t n_labels,
                                   std::size_t embed_dim, const ModelDims& dims,
                                   const Level2Options& options, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t path_out = options.use_label_network ? dims.label_dim : n_labels;
    gcn::Level2Model model;
    model.use_label_network = options.use_label_network;
    model.train_label_embeddings = options.train_label_embeddings;
    model.blurb_path = gcn::make_path(feature_dim, dims.gcn1_out, dims.gcn2_out,
                                      dims.dense_hidden, path_out, rng, "level2.blurb");
    model.review_path = gcn::make_path(feature_dim, dims.gcn1_out, dims.gcn2_out,
                                       dims.dense_hidden, path_out, rng, "level2.review");
    if (options.use_label_network) {
        model.label_net = gcn::make_label_net(embed_dim, dims.gcn1_out, dims.gcn2_out,
                                              dims.label_dim, rng, "level2.labelnet");
        // X_l starts at zero so the initial combined embedding is exactly X_e.
        model.label_learned.name = "level2.label_learned";
        model.label_learned.value = DenseMatrix(n_labels, embed_dim);
        model.label_learned.grad = DenseMatrix(n_labels, embed_dim);
    }
    return model;
}

std::pair<gcn::Level1Model, TrainReport> train_level1(const gcn::GraphInputs& g,
                                                      const std::vector<std::uint8_t>& labels,
                                                      const std::vector<std::uint8_t>& train_mask,
                                                      const std::vector<std::uint8_t>& val_mask,
                                                      const ModelDims& dims,
                                                      const TrainConfig& cfg) {
    if (labels.size() != g.n_docs || train_mask.size() != g.n_docs ||
        val_mask.size() != g.n_docs) {
        throw DataError("train_level1 mask/label size mismatch");
    }
    gcn::Level1Model model = make_level1_model(g.blurb_features->cols(), dims, cfg.seed);
    auto params = model.tensors();

    auto forward = [&](Tape& tape) { return gcn::level1_forward(tape, model, g, cfg.lambda); };
    auto loss = [&](const DenseMatrix& logits) {
        return masked_binary_loss(logits, labels, train_mask);
    };
    auto val = [&]() {
        Tape tape;
        Tape::NodeId logits = gcn::level1_forward(tape, model, g, cfg.lambda);
        return binary_f1(tape.value(logits), labels, val_mask);
    };
    TrainReport report = run_epochs(params, cfg, any_selected(val_mask), forward, loss, val);
    return {std::move(model), std::move(report)};
}

std::pair<gcn::Level2Model, TrainReport> train_level2(
    const gcn::GraphInputs& g, const sparse::SparseMatrix& ac_norm,
    const sparse::DenseMatrix& label_static, const sparse::DenseMatrix& targets,
    const std::vector<double>& doc_weights, const std::vector<std::uint8_t>& train_mask,
    const std::vector<std::uint8_t>& val_mask, const ModelDims& dims, const TrainConfig& cfg,
    const Level2Options& options) {
    const std::size_t k = label_static.rows();
    if (targets.rows() != g.n_docs || targets.cols() != k || doc_weights.size() != g.n_docs ||
        train_mask.size() != g.n_docs || val_mask.size() != g.n_docs) {
        throw DataError("train_level2 shape mismatch");
    }
    gcn::Level2Model model = make_level2_model(g.blurb_features->cols(), k, label_static.cols(),
                                               dims, options, cfg.seed);
    auto params = model.tensors();

    auto forward = [&](Tape& tape) {
        return gcn::level2_forward_logits(tape, model, g, ac_norm, label_static, cfg.lambda);
    };
    auto loss = [&](const DenseMatrix& logits) {
        return weighted_multilabel_loss(logits, targets, doc_weights, train_mask);
    };
    auto val = [&]() {
        Tape tape;
        Tape::NodeId logits =
            gcn::level2_forward_logits(tape, model, g, ac_norm, label_static, cfg.lambda);
        return multilabel_micro_f1(tape.value(logits), targets, doc_weights, val_mask);
    };
    bool has_val = false;
    for (std::size_t r = 0; r < g.n_docs; ++r) {
        if (val_mask[r] && doc_weights[r] != 0.0) has_val = true;
    }
    TrainReport report = run_epochs(params, cfg, has_val, forward, loss, val);
    return {std::move(model), std::move(report)};
}

}  // namespace higemine::training
