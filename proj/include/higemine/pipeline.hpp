#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "higemine/config.hpp"
#include "higemine/corpus.hpp"
#include "higemine/embeddings.hpp"
#include "higemine/hierarchy.hpp"
#include "higemine/labelgraph.hpp"
#include "higemine/metrics.hpp"
#include "higemine/review_filter.hpp"
#include "higemine/textgraph.hpp"
#include "higemine/training.hpp"

namespace higemine::pipeline {

// One Level-2 head's data: label machinery, features and gated targets.
struct BranchData {
    std::string tag;                  // "fiction", "nonfiction" or "flat"
    std::vector<std::string> labels;  // genre names in canonical order
    labelgraph::LabelGraph label_graph;
    sparse::SparseMatrix ac_norm;
    sparse::DenseMatrix label_static;        // X_e
    labelgraph::GenreWordEmbeddings words;   // genre-aware token features
    sparse::DenseMatrix blurb_features;      // (n_docs+m) x e
    sparse::DenseMatrix review_features;     // (n_docs+m) x e
    sparse::DenseMatrix targets;             // n_docs x k
    std::vector<double> doc_weights;         // true-Level-1 gate (1/0)
};

// Everything the deterministic preprocessing stages produce. Built once and
// shared by training, evaluation and prediction (transductive setting: every
// book has a document row).
struct Artifacts {
    corpus::Taxonomy taxonomy;
    std::vector<corpus::BookRecord> books;
    std::vector<std::string> doc_ids;  // file order == row order
    std::vector<std::string> blurbs_pp;
    std::map<std::string, review_filter::FilterResult> filter;
    corpus::DatasetSplit split;
    std::vector<std::uint8_t> train_mask, val_mask, test_mask;
    std::vector<std::uint8_t> level1_labels;  // 0 fiction, 1 nonfiction
    std::vector<std::size_t> blurb_token_counts, review_token_counts;
    std::vector<std::string> vocab;
    textgraph::TextGraph blurb_graph, review_graph;
    sparse::SparseMatrix ab_norm, ap_norm;
    sparse::DenseMatrix level1_blurb_features, level1_review_features;
    std::vector<BranchData> branches;  // fiction+nonfiction, or one flat head
    std::size_t n_docs = 0;
};

struct TrainedModels {
    std::optional<gcn::Level1Model> level1;
    std::vector<gcn::Level2Model> level2;  // aligned with Artifacts::branches
    std::vector<training::TrainReport> reports;
    training::TrainReport level1_report;
};

Artifacts build_artifacts(const config::PipelineConfig& cfg);

// Trains every head in scope and writes checkpoints plus per-head train
// reports under cfg.output_dir.
TrainedModels train_all(const config::PipelineConfig& cfg, const Artifacts& artifacts);

// Rebuilds model skeletons and loads checkpoint values from cfg.output_dir.
TrainedModels load_models(const config::PipelineConfig& cfg, const Artifacts& artifacts);

hierarchy::Predictor make_predictor(const config::PipelineConfig& cfg, const Artifacts& artifacts,
                                    const TrainedModels& models);

// Test-split evaluation. Per-branch Level-2 metrics cover books whose true
// Level-1 label is that branch; a book routed to the wrong branch predicts no
// genres of its true branch.
metrics::MetricReport evaluate(const config::PipelineConfig& cfg, const Artifacts& artifacts,
                               const TrainedModels& models);

// preprocess -> filter -> vocab -> graphs -> train -> evaluate; writes the
// filter sidecar, vocabulary, checkpoints, train reports and metrics.json.
metrics::MetricReport run_pipeline(const config::PipelineConfig& cfg);

void write_filter_sidecar(const Artifacts& artifacts, const std::string& path);

std::string graph_stats_text(const Artifacts& artifacts);

std::string train_report_json(const training::TrainReport& report, const std::string& tag);

}  // namespace higemine::pipeline
