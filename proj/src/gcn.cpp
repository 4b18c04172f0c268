#include "higemine/gcn.hpp"

#include <cmath>
#include <stdexcept>

#include "higemine/errors.hpp"

namespace higemine::gcn {

using sparse::DenseMatrix;
using sparse::SparseMatrix;

std::vector<Tensor*> PathParams::tensors() {
    return {&gcn1.weight, &gcn1.bias, &gcn2.weight, &gcn2.bias,
            &dense1.weight, &dense1.bias, &dense2.weight, &dense2.bias};
}

std::vector<Tensor*> LabelNetParams::tensors() {
    return {&gcn1.weight, &gcn1.bias, &gcn2.weight, &gcn2.bias, &dense.weight, &dense.bias};
}

std::vector<Tensor*> Level1Model::tensors() {
    std::vector<Tensor*> out = blurb_path.tensors();
    for (Tensor* t : review_path.tensors()) out.push_back(t);
    return out;
}

std::vector<Tensor*> Level2Model::tensors() {
    std::vector<Tensor*> out = blurb_path.tensors();
    for (Tensor* t : review_path.tensors()) out.push_back(t);
    if (use_label_network) {
        for (Tensor* t : label_net.tensors()) out.push_back(t);
        if (train_label_embeddings) out.push_back(&label_learned);
    }
    return out;
}

Tape::NodeId Tape::push_leaf(const DenseMatrix* view, bool needs_grad, Tensor* bound) {
    Node n;
    n.view = view;
    n.needs_grad = needs_grad;
    n.bound = bound;
    if (needs_grad) n.grad = DenseMatrix(view->rows(), view->cols());
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
}

Tape::NodeId Tape::push_op(DenseMatrix value, bool needs_grad) {
    Node n;
    n.owned = std::move(value);
    n.needs_grad = needs_grad;
    if (needs_grad) n.grad = DenseMatrix(n.owned.rows(), n.owned.cols());
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
}

Tape::NodeId Tape::constant(const DenseMatrix& value) { return push_leaf(&value, false, nullptr); }

Tape::NodeId Tape::parameter(Tensor& t) { return push_leaf(&t.value, true, &t); }

const DenseMatrix& Tape::value(NodeId id) const { return nodes_.at(id).val(); }

const DenseMatrix& Tape::grad(NodeId id) const {
    const Node& n = nodes_.at(id);
    if (!n.needs_grad) throw std::logic_error("tape node has no gradient");
    return n.grad;
}

void Tape::accumulate(NodeId id, const DenseMatrix& g) {
    Node& n = nodes_[id];
    if (!n.needs_grad) return;
    auto& dst = n.grad.data();
    const auto& src = g.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

void Tape::add_range(NodeId id, const DenseMatrix& g, std::size_t row0, std::size_t col0) {
    Node& n = nodes_[id];
    if (!n.needs_grad) return;
    for (std::size_t r = 0; r < g.rows(); ++r) {
        for (std::size_t c = 0; c < g.cols(); ++c) {
            n.grad.at(row0 + r, col0 + c) += g.at(r, c);
        }
    }
}

Tape::NodeId Tape::spmm(const SparseMatrix& a, NodeId x) {
    NodeId out = push_op(sparse::spmm(a, value(x)), nodes_[x].needs_grad);
    if (nodes_[out].needs_grad) {
        back_ops_.push_back([this, &a, x, out] {
            accumulate(x, sparse::spmm_transposed(a, nodes_[out].grad));
        });
    }
    return out;
}

Tape::NodeId Tape::matmul(NodeId x, NodeId w) {
    const bool needs = nodes_[x].needs_grad || nodes_[w].needs_grad;
    NodeId out = push_op(sparse::matmul(value(x), value(w)), needs);
    if (needs) {
        back_ops_.push_back([this, x, w, out] {
            const DenseMatrix& g = nodes_[out].grad;
            if (nodes_[x].needs_grad) accumulate(x, sparse::matmul_transposed_b(g, value(w)));
            if (nodes_[w].needs_grad) accumulate(w, sparse::matmul_transposed_a(value(x), g));
        });
    }
    return out;
}

Tape::NodeId Tape::matmul_bt(NodeId x, NodeId y) {
    const bool needs = nodes_[x].needs_grad || nodes_[y].needs_grad;
    NodeId out = push_op(sparse::matmul_transposed_b(value(x), value(y)), needs);
    if (needs) {
        back_ops_.push_back([this, x, y, out] {
            const DenseMatrix& g = nodes_[out].grad;
            if (nodes_[x].needs_grad) accumulate(x, sparse::matmul(g, value(y)));
            if (nodes_[y].needs_grad) accumulate(y, sparse::matmul_transposed_a(g, value(x)));
        });
    }
    return out;
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
    const DenseMatrix& av = value(a);
    const DenseMatrix& bv = value(b);
    if (!av.same_shape(bv)) throw DataError("tape add shape mismatch");
    DenseMatrix out_v = av;
    for (std::size_t i = 0; i < out_v.size(); ++i) out_v.data()[i] += bv.data()[i];
    const bool needs = nodes_[a].needs_grad || nodes_[b].needs_grad;
    NodeId out = push_op(std::move(out_v), needs);
    if (needs) {
        back_ops_.push_back([this, a, b, out] {
            accumulate(a, nodes_[out].grad);
            accumulate(b, nodes_[out].grad);
        });
    }
    return out;
}

Tape::NodeId Tape::add_row_bias(NodeId x, NodeId bias) {
    const DenseMatrix& xv = value(x);
    const DenseMatrix& bv = value(bias);
    if (bv.rows() != 1 || bv.cols() != xv.cols()) {
        throw DataError("add_row_bias expects a 1 x cols bias");
    }
    DenseMatrix out_v = xv;
    for (std::size_t r = 0; r < out_v.rows(); ++r) {
        for (std::size_t c = 0; c < out_v.cols(); ++c) out_v.at(r, c) += bv.at(0, c);
    }
    const bool needs = nodes_[x].needs_grad || nodes_[bias].needs_grad;
    NodeId out = push_op(std::move(out_v), needs);
    if (needs) {
        back_ops_.push_back([this, x, bias, out] {
            const DenseMatrix& g = nodes_[out].grad;
            accumulate(x, g);
            if (nodes_[bias].needs_grad) {
                DenseMatrix col_sum(1, g.cols());
                for (std::size_t r = 0; r < g.rows(); ++r) {
                    for (std::size_t c = 0; c < g.cols(); ++c) col_sum.at(0, c) += g.at(r, c);
                }
                accumulate(bias, col_sum);
            }
        });
    }
    return out;
}

Tape::NodeId Tape::relu(NodeId x) {
    const DenseMatrix& xv = value(x);
    DenseMatrix out_v = xv;
    for (double& v : out_v.data()) {
        if (v < 0.0) v = 0.0;
    }
    const bool needs = nodes_[x].needs_grad;
    NodeId out = push_op(std::move(out_v), needs);
    if (needs) {
        back_ops_.push_back([this, x, out] {
            const DenseMatrix& g = nodes_[out].grad;
            const DenseMatrix& xv2 = value(x);
            DenseMatrix masked(g.rows(), g.cols());
            for (std::size_t i = 0; i < masked.size(); ++i) {
                masked.data()[i] = xv2.data()[i] > 0.0 ? g.data()[i] : 0.0;
            }
            accumulate(x, masked);
        });
    }
    return out;
}

Tape::NodeId Tape::concat_cols(const std::vector<NodeId>& xs) {
    std::vector<DenseMatrix> blocks;
    blocks.reserve(xs.size());
    bool needs = false;
    for (NodeId id : xs) {
        blocks.push_back(value(id));
        needs = needs || nodes_[id].needs_grad;
    }
    NodeId out = push_op(sparse::concat_cols(blocks), needs);
    if (needs) {
        back_ops_.push_back([this, xs, out] {
            const DenseMatrix& g = nodes_[out].grad;
            std::size_t offset = 0;
            for (NodeId id : xs) {
                const DenseMatrix& v = value(id);
                if (nodes_[id].needs_grad) {
                    DenseMatrix slice(v.rows(), v.cols());
                    for (std::size_t r = 0; r < v.rows(); ++r) {
                        for (std::size_t c = 0; c < v.cols(); ++c) {
                            slice.at(r, c) = g.at(r, offset + c);
                        }
                    }
                    accumulate(id, slice);
                }
                offset += v.cols();
            }
        });
    }
    return out;
}

Tape::NodeId Tape::head_rows(NodeId x, std::size_t n) {
    const DenseMatrix& xv = value(x);
    if (n > xv.rows()) throw DataError("head_rows: not enough rows");
    DenseMatrix out_v(n, xv.cols());
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < xv.cols(); ++c) out_v.at(r, c) = xv.at(r, c);
    }
    const bool needs = nodes_[x].needs_grad;
    NodeId out = push_op(std::move(out_v), needs);
    if (needs) {
        back_ops_.push_back([this, x, out] { add_range(x, nodes_[out].grad, 0, 0); });
    }
    return out;
}

Tape::NodeId Tape::blend(NodeId a, NodeId b, double lam) {
    if (lam == 1.0) return a;
    if (lam == 0.0) return b;
    const DenseMatrix& av = value(a);
    const DenseMatrix& bv = value(b);
    if (!av.same_shape(bv)) throw DataError("blend shape mismatch");
    DenseMatrix out_v(av.rows(), av.cols());
    for (std::size_t i = 0; i < out_v.size(); ++i) {
        out_v.data()[i] = lam * av.data()[i] + (1.0 - lam) * bv.data()[i];
    }
    const bool needs = nodes_[a].needs_grad || nodes_[b].needs_grad;
    NodeId out = push_op(std::move(out_v), needs);
    if (needs) {
        back_ops_.push_back([this, a, b, lam, out] {
            const DenseMatrix& g = nodes_[out].grad;
            if (nodes_[a].needs_grad) {
                DenseMatrix ga(g.rows(), g.cols());
                for (std::size_t i = 0; i < ga.size(); ++i) ga.data()[i] = lam * g.data()[i];
                accumulate(a, ga);
            }
            if (nodes_[b].needs_grad) {
                DenseMatrix gb(g.rows(), g.cols());
                for (std::size_t i = 0; i < gb.size(); ++i) {
                    gb.data()[i] = (1.0 - lam) * g.data()[i];
                }
                accumulate(b, gb);
            }
        });
    }
    return out;
}

Tape::NodeId Tape::blend_rows(NodeId a, NodeId b, const std::vector<double>& lam) {
    const DenseMatrix& av = value(a);
    const DenseMatrix& bv = value(b);
    if (!av.same_shape(bv)) throw DataError("blend_rows shape mismatch");
    if (lam.size() != av.rows()) throw DataError("blend_rows lambda length mismatch");
    DenseMatrix out_v(av.rows(), av.cols());
    for (std::size_t r = 0; r < av.rows(); ++r) {
        for (std::size_t c = 0; c < av.cols(); ++c) {
            if (lam[r] == 1.0) {
                out_v.at(r, c) = av.at(r, c);
            } else if (lam[r] == 0.0) {
                out_v.at(r, c) = bv.at(r, c);
            } else {
                out_v.at(r, c) = lam[r] * av.at(r, c) + (1.0 - lam[r]) * bv.at(r, c);
            }
        }
    }
    const bool needs = nodes_[a].needs_grad || nodes_[b].needs_grad;
    NodeId out = push_op(std::move(out_v), needs);
    if (needs) {
        back_ops_.push_back([this, a, b, lam, out] {
            const DenseMatrix& g = nodes_[out].grad;
            DenseMatrix ga(g.rows(), g.cols());
            DenseMatrix gb(g.rows(), g.cols());
            for (std::size_t r = 0; r < g.rows(); ++r) {
                for (std::size_t c = 0; c < g.cols(); ++c) {
                    ga.at(r, c) = lam[r] * g.at(r, c);
                    gb.at(r, c) = (1.0 - lam[r]) * g.at(r, c);
                }
            }
            accumulate(a, ga);
            accumulate(b, gb);
        });
    }
    return out;
}

void Tape::backward(NodeId output, const DenseMatrix& upstream) {
    if (back_ops_.empty() && nodes_.empty()) {
        throw std::logic_error("backward called without a recorded forward pass");
    }
    if (backward_done_) throw std::logic_error("tape backward already ran");
    backward_done_ = true;
    Node& out = nodes_.at(output);
    if (!upstream.same_shape(out.val())) throw DataError("backward upstream shape mismatch");
    if (out.needs_grad) {
        auto& dst = out.grad.data();
        const auto& src = upstream.data();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
    for (auto it = back_ops_.rbegin(); it != back_ops_.rend(); ++it) (*it)();
    for (Node& n : nodes_) {
        if (n.bound) {
            auto& dst = n.bound->grad.data();
            const auto& src = n.grad.data();
            for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
        }
    }
}

namespace {

Tensor make_tensor(const std::string& name, std::size_t rows, std::size_t cols) {
    Tensor t;
    t.name = name;
    t.value = DenseMatrix(rows, cols);
    t.grad = DenseMatrix(rows, cols);
    return t;
}

void glorot_fill(DenseMatrix& m, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : m.data()) v = rng.uniform(-limit, limit);
}

}  // namespace

GcnLayerParams make_gcn_layer(std::size_t in, std::size_t out, Activation act, Rng& rng,
                              const std::string& name) {
    GcnLayerParams p;
    p.activation = act;
    p.weight = make_tensor(name + ".weight", in, out);
    p.bias = make_tensor(name + ".bias", 1, out);
    glorot_fill(p.weight.value, in, out, rng);
    for (double& v : p.bias.value.data()) v = rng.uniform(-0.05, 0.05);
    return p;
}

DenseLayerParams make_dense_layer(std::size_t in, std::size_t out, Activation act, Rng& rng,
                                  const std::string& name) {
    DenseLayerParams p;
    p.activation = act;
    p.weight = make_tensor(name + ".weight", in, out);
    p.bias = make_tensor(name + ".bias", 1, out);
    glorot_fill(p.weight.value, in, out, rng);
    for (double& v : p.bias.value.data()) v = rng.uniform(-0.05, 0.05);
    return p;
}

PathParams make_path(std::size_t feature_dim, std::size_t gcn1_out, std::size_t gcn2_out,
                     std::size_t dense_hidden, std::size_t out_dim, Rng& rng,
                     const std::string& name) {
    PathParams p;
    p.gcn1 = make_gcn_layer(feature_dim, gcn1_out, Activation::relu, rng, name + ".gcn1");
    p.gcn2 = make_gcn_layer(gcn1_out, gcn2_out, Activation::relu, rng, name + ".gcn2");
    const std::size_t concat_dim = feature_dim + gcn1_out + gcn2_out;
    p.dense1 = make_dense_layer(concat_dim, dense_hidden, Activation::relu, rng, name + ".dense1");
    p.dense2 = make_dense_layer(dense_hidden, out_dim, Activation::identity, rng, name + ".dense2");
    return p;
}

LabelNetParams make_label_net(std::size_t embed_dim, std::size_t gcn1_out, std::size_t gcn2_out,
                              std::size_t out_dim, Rng& rng, const std::string& name) {
    LabelNetParams p;
    p.gcn1 = make_gcn_layer(embed_dim, gcn1_out, Activation::relu, rng, name + ".gcn1");
    p.gcn2 = make_gcn_layer(gcn1_out, gcn2_out, Activation::relu, rng, name + ".gcn2");
    p.dense = make_dense_layer(embed_dim + gcn1_out + gcn2_out, out_dim, Activation::identity, rng,
                               name + ".dense");
    return p;
}

Tape::NodeId gcn_layer(Tape& tape, const SparseMatrix& a_norm, Tape::NodeId x, GcnLayerParams& p) {
    Tape::NodeId h = tape.spmm(a_norm, x);
    h = tape.matmul(h, tape.parameter(p.weight));
    h = tape.add_row_bias(h, tape.parameter(p.bias));
    if (p.activation == Activation::relu) h = tape.relu(h);
    return h;
}

Tape::NodeId dense_layer(Tape& tape, Tape::NodeId x, DenseLayerParams& p) {
    Tape::NodeId h = tape.matmul(x, tape.parameter(p.weight));
    h = tape.add_row_bias(h, tape.parameter(p.bias));
    if (p.activation == Activation::relu) h = tape.relu(h);
    return h;
}

Tape::NodeId graph_unit(Tape& tape, const SparseMatrix& a_norm, Tape::NodeId x, PathParams& p,
                        std::size_t n_docs) {
    Tape::NodeId h1 = gcn_layer(tape, a_norm, x, p.gcn1);
    Tape::NodeId h2 = gcn_layer(tape, a_norm, h1, p.gcn2);
    Tape::NodeId concat = tape.concat_cols({x, h1, h2});
    Tape::NodeId docs = tape.head_rows(concat, n_docs);
    Tape::NodeId hidden = dense_layer(tape, docs, p.dense1);
    return dense_layer(tape, hidden, p.dense2);
}

Tape::NodeId label_network(Tape& tape, const SparseMatrix& ac_norm, Tape::NodeId xc,
                           LabelNetParams& p) {
    Tape::NodeId h1 = gcn_layer(tape, ac_norm, xc, p.gcn1);
    Tape::NodeId h2 = gcn_layer(tape, ac_norm, h1, p.gcn2);
    Tape::NodeId concat = tape.concat_cols({xc, h1, h2});
    return dense_layer(tape, concat, p.dense);
}

namespace {

// Shared body for the scalar and per-document lambda variants. Endpoint
// lambdas skip the unused path entirely.
template <typename Fuse>
Tape::NodeId fused_paths(Tape& tape, PathParams& blurb, PathParams& review, const GraphInputs& g,
                         bool need_blurb, bool need_review, Fuse&& fuse) {
    Tape::NodeId zb = 0, zp = 0;
    if (need_blurb) {
        zb = graph_unit(tape, *g.blurb_adjacency, tape.constant(*g.blurb_features), blurb,
                        g.n_docs);
    }
    if (need_review) {
        zp = graph_unit(tape, *g.review_adjacency, tape.constant(*g.review_features), review,
                        g.n_docs);
    }
    return fuse(zb, zp);
}

}  // namespace

Tape::NodeId level1_forward(Tape& tape, Level1Model& model, const GraphInputs& g, double lambda1) {
    return fused_paths(tape, model.blurb_path, model.review_path, g, lambda1 > 0.0, lambda1 < 1.0,
                       [&](Tape::NodeId zb, Tape::NodeId zp) {
                           if (lambda1 == 1.0) return zb;
                           if (lambda1 == 0.0) return zp;
                           return tape.blend(zb, zp, lambda1);
                       });
}

Tape::NodeId level1_forward(Tape& tape, Level1Model& model, const GraphInputs& g,
                            const std::vector<double>& lambda1) {
    return fused_paths(tape, model.blurb_path, model.review_path, g, true, true,
                       [&](Tape::NodeId zb, Tape::NodeId zp) {
                           return tape.blend_rows(zb, zp, lambda1);
                       });
}

namespace {

Tape::NodeId level2_scores(Tape& tape, Level2Model& model, const GraphInputs& g,
                           const SparseMatrix& ac_norm, const DenseMatrix& label_static,
                           bool need_blurb, bool need_review,
                           const std::function<Tape::NodeId(Tape::NodeId, Tape::NodeId)>& fuse) {
    if (!model.use_label_network) {
        // Label network ablated: dense2 is a per-label affine head.
        return fused_paths(tape, model.blurb_path, model.review_path, g, need_blurb, need_review,
                           fuse);
    }
    Tape::NodeId xc = model.train_label_embeddings
                          ? tape.add(tape.parameter(model.label_learned),
                                     tape.constant(label_static))
                          : tape.constant(label_static);
    Tape::NodeId refined = label_network(tape, ac_norm, xc, model.label_net);
    return fused_paths(
        tape, model.blurb_path, model.review_path, g, need_blurb, need_review,
        [&](Tape::NodeId xb3, Tape::NodeId xp3) {
            Tape::NodeId zb = need_blurb ? tape.matmul_bt(xb3, refined) : 0;
            Tape::NodeId zp = need_review ? tape.matmul_bt(xp3, refined) : 0;
            if (!need_review) return zb;
            if (!need_blurb) return zp;
            return fuse(zb, zp);
        });
}

}  // namespace

Tape::NodeId level2_forward_logits(Tape& tape, Level2Model& model, const GraphInputs& g,
                                   const SparseMatrix& ac_norm, const DenseMatrix& label_static,
                                   double lambda2) {
    return level2_scores(tape, model, g, ac_norm, label_static, lambda2 > 0.0, lambda2 < 1.0,
                         [&](Tape::NodeId zb, Tape::NodeId zp) {
                             if (lambda2 == 1.0) return zb;
                             if (lambda2 == 0.0) return zp;
                             return tape.blend(zb, zp, lambda2);
                         });
}

Tape::NodeId level2_forward_logits(Tape& tape, Level2Model& model, const GraphInputs& g,
                                   const SparseMatrix& ac_norm, const DenseMatrix& label_static,
                                   const std::vector<double>& lambda2) {
    return level2_scores(tape, model, g, ac_norm, label_static, true, true,
                         [&](Tape::NodeId zb, Tape::NodeId zp) {
                             return tape.blend_rows(zb, zp, lambda2);
                         });
}

sparse::DenseMatrix level2_forward(Level2Model& model, const GraphInputs& g,
                                   const SparseMatrix& ac_norm, const DenseMatrix& label_static,
                                   double lambda2) {
    Tape tape;
    Tape::NodeId logits = level2_forward_logits(tape, model, g, ac_norm, label_static, lambda2);
    DenseMatrix out = tape.value(logits);
    for (double& v : out.data()) v = sigmoid(v);
    return out;
}

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace higemine::gcn
