#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "higemine/gcn.hpp"
#include "higemine/sparse.hpp"

namespace higemine::training {

// Mean of -[y ln p + (1-y) ln(1-p)] with probabilities clamped to
// [1e-7, 1-1e-7].
double bce_loss(const std::vector<double>& probabilities, const std::vector<double>& targets);

// Numerically stable logit form max(x,0) - x*y + ln(1+exp(-|x|)), as a
// weighted mean (zero when all weights are zero).
double bce_with_logits(const std::vector<double>& logits, const std::vector<double>& targets,
                       const std::vector<double>& weights);

struct LossGrad {
    double value = 0.0;
    sparse::DenseMatrix grad;  // same shape as the logits
};

// Level-1 training loss: stable binary cross entropy on the sigmoid of the
// per-document logit, averaged over selected rows. Unselected rows get
// exactly zero gradient.
LossGrad masked_binary_loss(const sparse::DenseMatrix& logits,
                            const std::vector<std::uint8_t>& labels,
                            const std::vector<std::uint8_t>& selected);

// Level-2 training loss: bce_with_logits over selected rows weighted per
// document. Rows with zero weight are skipped outright, so their labels can
// never influence a single bit of the loss or gradients.
LossGrad weighted_multilabel_loss(const sparse::DenseMatrix& logits,
                                  const sparse::DenseMatrix& targets,
                                  const std::vector<double>& doc_weights,
                                  const std::vector<std::uint8_t>& selected);

enum class OptimizerKind { sgd, adam };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::adam;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// SGD or bias-corrected Adam over the tensors' gradient slots. State is keyed
// by tensor identity; one optimizer owns one model's parameters.
class Optimizer {
public:
    explicit Optimizer(OptimizerConfig cfg) : cfg_(cfg) {}
    void step(const std::vector<gcn::Tensor*>& params);

private:
    struct Moments {
        sparse::DenseMatrix m;
        sparse::DenseMatrix v;
    };
    OptimizerConfig cfg_;
    std::map<gcn::Tensor*, Moments> state_;
    std::uint64_t t_ = 0;
};

struct ModelDims {
    std::size_t gcn1_out = 256;
    std::size_t gcn2_out = 128;
    std::size_t dense_hidden = 128;
    std::size_t label_dim = 64;  // e', the fused dot-product width
};

struct TrainConfig {
    OptimizerConfig optimizer;
    std::size_t epochs = 200;
    std::uint64_t seed = 42;
    std::size_t patience = 20;  // early stop on validation F1
    double lambda = 0.5;        // training-time fusion weight
};

struct TrainReport {
    std::vector<double> train_loss;
    std::vector<double> val_metric;  // F1 (L1) or micro-F1 (L2) per epoch
    std::size_t best_epoch = 0;
    double best_val_metric = 0.0;
    std::size_t epochs_run = 0;
    double wall_time_seconds = 0.0;
};

struct Level2Options {
    bool use_label_network = true;
    bool train_label_embeddings = true;
};

// Model factories; training and checkpoint loading build skeletons through
// the same code path so tensor names and shapes always line up.
gcn::Level1Model make_level1_model(std::size_t feature_dim, const ModelDims& dims,
                                   std::uint64_t seed);
gcn::Level2Model make_level2_model(std::size_t feature_dim, std::size_t n_labels,
                                   std::size_t embed_dim, const ModelDims& dims,
                                   const Level2Options& options, std::uint64_t seed);

// Trains the Level-1 dual-path model with BCE over training rows; early
// stopping tracks validation F1 and the best parameters are restored.
std::pair<gcn::Level1Model, TrainReport> train_level1(const gcn::GraphInputs& g,
                                                      const std::vector<std::uint8_t>& labels,
                                                      const std::vector<std::uint8_t>& train_mask,
                                                      const std::vector<std::uint8_t>& val_mask,
                                                      const ModelDims& dims,
                                                      const TrainConfig& cfg);

// Trains one Level-2 branch head. doc_weights carries the true-Level-1 gate
// (1 for books of this branch, else 0); only gated rows contribute loss or
// gradients. X_l is updated jointly with the network parameters.
std::pair<gcn::Level2Model, TrainReport> train_level2(
    const gcn::GraphInputs& g, const sparse::SparseMatrix& ac_norm,
    const sparse::DenseMatrix& label_static, const sparse::DenseMatrix& targets,
    const std::vector<double>& doc_weights, const std::vector<std::uint8_t>& train_mask,
    const std::vector<std::uint8_t>& val_mask, const ModelDims& dims, const TrainConfig& cfg,
    const Level2Options& options);

}  // namespace higemine::training
