#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "higemine/rng.hpp"
#include "higemine/sparse.hpp"

namespace higemine::gcn {

enum class Activation { identity, relu };

// One learnable tensor with its gradient slot.
struct Tensor {
    std::string name;
    sparse::DenseMatrix value;
    sparse::DenseMatrix grad;
};

struct GcnLayerParams {
    Tensor weight;  // in x out
    Tensor bias;    // 1 x out
    Activation activation = Activation::relu;
};

struct DenseLayerParams {
    Tensor weight;
    Tensor bias;
    Activation activation = Activation::identity;
};

// One modality path: two stacked GCN layers, concat with the input features,
// truncation to document rows, then a two-layer dense head.
struct PathParams {
    GcnLayerParams gcn1;
    GcnLayerParams gcn2;
    DenseLayerParams dense1;  // relu
    DenseLayerParams dense2;  // identity; raw logits or path features
    std::vector<Tensor*> tensors();
};

// Label co-occurrence network: two GCN layers over the label graph, concat
// with the input label embeddings, one dense projection.
struct LabelNetParams {
    GcnLayerParams gcn1;
    GcnLayerParams gcn2;
    DenseLayerParams dense;
    std::vector<Tensor*> tensors();
};

// Recorded-tape reverse pass over the fixed operation set used by the model.
// Leaf values are referenced, not copied; callers keep features, adjacency
// matrices and parameter tensors alive until backward() has run. A tape is
// single-use: one forward recording, one backward.
class Tape {
public:
    using NodeId = std::size_t;

    NodeId constant(const sparse::DenseMatrix& value);
    NodeId parameter(Tensor& t);

    const sparse::DenseMatrix& value(NodeId id) const;
    const sparse::DenseMatrix& grad(NodeId id) const;

    NodeId spmm(const sparse::SparseMatrix& a, NodeId x);
    NodeId matmul(NodeId x, NodeId w);
    NodeId matmul_bt(NodeId x, NodeId y);  // x * y^T
    NodeId add(NodeId a, NodeId b);
    NodeId add_row_bias(NodeId x, NodeId bias);
    NodeId relu(NodeId x);
    NodeId concat_cols(const std::vector<NodeId>& xs);
    NodeId head_rows(NodeId x, std::size_t n);
    // lam*a + (1-lam)*b; lam of exactly 0 or 1 short-circuits to the single
    // input node so the unused side cannot perturb the result.
    NodeId blend(NodeId a, NodeId b, double lam);
    // Per-row blend with the same endpoint short-circuit row by row.
    NodeId blend_rows(NodeId a, NodeId b, const std::vector<double>& lam);

    // Seeds the output gradient and runs the reverse pass, accumulating into
    // the bound parameter tensors' grad slots.
    void backward(NodeId output, const sparse::DenseMatrix& upstream);

private:
    struct Node {
        sparse::DenseMatrix owned;
        const sparse::DenseMatrix* view = nullptr;
        sparse::DenseMatrix grad;
        bool needs_grad = false;
        Tensor* bound = nullptr;
        const sparse::DenseMatrix& val() const { return view ? *view : owned; }
    };

    NodeId push_leaf(const sparse::DenseMatrix* view, bool needs_grad, Tensor* bound);
    NodeId push_op(sparse::DenseMatrix value, bool needs_grad);
    void accumulate(NodeId id, const sparse::DenseMatrix& g);
    void add_range(NodeId id, const sparse::DenseMatrix& g, std::size_t row0, std::size_t col0);

    std::vector<Node> nodes_;
    std::vector<std::function<void()>> back_ops_;
    bool backward_done_ = false;
};

// Parameter factories. Weights use a Glorot-style uniform range based on
// fan-in/fan-out; biases start small but nonzero so relu units are off the
// kink when features are all-zero rows.
GcnLayerParams make_gcn_layer(std::size_t in, std::size_t out, Activation act, Rng& rng,
                              const std::string& name);
DenseLayerParams make_dense_layer(std::size_t in, std::size_t out, Activation act, Rng& rng,
                                  const std::string& name);
PathParams make_path(std::size_t feature_dim, std::size_t gcn1_out, std::size_t gcn2_out,
                     std::size_t dense_hidden, std::size_t out_dim, Rng& rng,
                     const std::string& name);
LabelNetParams make_label_net(std::size_t embed_dim, std::size_t gcn1_out, std::size_t gcn2_out,
                              std::size_t out_dim, Rng& rng, const std::string& name);

// sigma(A_norm * X * W + theta)
Tape::NodeId gcn_layer(Tape& tape, const sparse::SparseMatrix& a_norm, Tape::NodeId x,
                       GcnLayerParams& p);
Tape::NodeId dense_layer(Tape& tape, Tape::NodeId x, DenseLayerParams& p);

// Two stacked GCN layers, concat(X, h1, h2) truncated to document rows, then
// the dense head. Output is n_docs x dense2-out with no output activation.
Tape::NodeId graph_unit(Tape& tape, const sparse::SparseMatrix& a_norm, Tape::NodeId x,
                        PathParams& p, std::size_t n_docs);

// Label network producing refined label features X'_c (k' x e').
Tape::NodeId label_network(Tape& tape, const sparse::SparseMatrix& ac_norm, Tape::NodeId xc,
                           LabelNetParams& p);

struct Level1Model {
    PathParams blurb_path;
    PathParams review_path;
    std::vector<Tensor*> tensors();
};

// Level-2 head. With use_label_network the paths emit e'-wide features fused
// with refined label embeddings via dot products; without it (label network
// ablated) dense2 emits per-label logits directly.
struct Level2Model {
    PathParams blurb_path;
    PathParams review_path;
    bool use_label_network = true;
    LabelNetParams label_net;
    Tensor label_learned;  // X_l, k' x e
    bool train_label_embeddings = true;
    std::vector<Tensor*> tensors();
};

struct GraphInputs {
    const sparse::SparseMatrix* blurb_adjacency = nullptr;   // normalized
    const sparse::SparseMatrix* review_adjacency = nullptr;  // normalized
    const sparse::DenseMatrix* blurb_features = nullptr;     // (n_docs+m) x width
    const sparse::DenseMatrix* review_features = nullptr;
    std::size_t n_docs = 0;
};

// Fused Level-1 logits (n_docs x 1).
Tape::NodeId level1_forward(Tape& tape, Level1Model& model, const GraphInputs& g, double lambda1);
Tape::NodeId level1_forward(Tape& tape, Level1Model& model, const GraphInputs& g,
                            const std::vector<double>& lambda1);

// Fused Level-2 logits (n_docs x k').
Tape::NodeId level2_forward_logits(Tape& tape, Level2Model& model, const GraphInputs& g,
                                   const sparse::SparseMatrix& ac_norm,
                                   const sparse::DenseMatrix& label_static, double lambda2);
Tape::NodeId level2_forward_logits(Tape& tape, Level2Model& model, const GraphInputs& g,
                                   const sparse::SparseMatrix& ac_norm,
                                   const sparse::DenseMatrix& label_static,
                                   const std::vector<double>& lambda2);

// Convenience: sigmoid of the fused Level-2 logits.
sparse::DenseMatrix level2_forward(Level2Model& model, const GraphInputs& g,
                                   const sparse::SparseMatrix& ac_norm,
                                   const sparse::DenseMatrix& label_static, double lambda2);

double sigmoid(double x);

}  // namespace higemine::gcn
