#include "higemine/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "higemine/checkpoint.hpp"
#include "higemine/errors.hpp"
#include "higemine/rng.hpp"

namespace higemine::pipeline {

namespace fs = std::filesystem;
using corpus::Branch;
using sparse::DenseMatrix;
using sparse::SparseMatrix;

namespace {

std::unique_ptr<embeddings::EmbeddingProvider> make_provider(const config::PipelineConfig& cfg) {
    if (cfg.embedding_provider == "table") {
        return std::make_unique<embeddings::PrecomputedProvider>(
            embeddings::load_embedding_table(cfg.embedding_table));
    }
    return std::make_unique<embeddings::HashingEncoder>(cfg.embedding_dim);
}

// Word vectors for label names. Falls back to one-hot hashed vectors when no
// file is configured, which keeps the pipeline self-contained.
std::map<std::string, std::vector<double>> label_word_vectors(
    const config::PipelineConfig& cfg, const std::vector<std::string>& labels,
    std::size_t* dim_out) {
    if (!cfg.label_vectors.empty()) {
        auto vectors = embeddings::load_word_vectors(cfg.label_vectors);
        if (vectors.empty()) throw DataError("word vector file is empty: " + cfg.label_vectors);
        *dim_out = vectors.begin()->second.size();
        return vectors;
    }
    const std::size_t dim = cfg.label_embedding_dim;
    std::map<std::string, std::vector<double>> vectors;
    for (const std::string& label : labels) {
        for (const std::string& word : labelgraph::split_label_words(label)) {
            if (vectors.count(word)) continue;
            std::vector<double> v(dim, 0.0);
            v[embeddings::HashingEncoder::bucket(word, dim)] = 1.0;
            vectors[word] = std::move(v);
        }
    }
    *dim_out = dim;
    return vectors;
}

// Fixed random projection for document embeddings when the provider width j
// differs from the label embedding width e. Frozen, never trained.
DenseMatrix doc_projection(std::size_t from, std::size_t to, std::uint64_t seed) {
    Rng rng(seed ^ fnv1a64("doc_projection"));
    DenseMatrix p(from, to);
    const double scale = 1.0 / std::sqrt(static_cast<double>(from));
    for (double& v : p.data()) v = rng.normal() * scale;
    return p;
}

DenseMatrix project_rows(const DenseMatrix& docs, const DenseMatrix& projection) {
    return sparse::matmul(docs, projection);
}

// Node feature matrix: document rows on top, token rows below.
DenseMatrix stack_features(const DenseMatrix& doc_rows, const DenseMatrix& token_rows) {
    DenseMatrix out(doc_rows.rows() + token_rows.rows(), doc_rows.cols());
    for (std::size_t r = 0; r < doc_rows.rows(); ++r) {
        for (std::size_t c = 0; c < doc_rows.cols(); ++c) out.at(r, c) = doc_rows.at(r, c);
    }
    for (std::size_t r = 0; r < token_rows.rows(); ++r) {
        for (std::size_t c = 0; c < token_rows.cols(); ++c) {
            out.at(doc_rows.rows() + r, c) = token_rows.at(r, c);
        }
    }
    return out;
}

std::vector<corpus::BookRecord> branch_train_books(const Artifacts& a, Branch branch) {
    std::vector<corpus::BookRecord> out;
    for (std::size_t i = 0; i < a.books.size(); ++i) {
        if (a.train_mask[i] && a.books[i].level1 == branch) out.push_back(a.books[i]);
    }
    return out;
}

// Books with level2 padded to the concatenated 57-genre space (fiction block
// first), used by the flat ablation.
std::vector<corpus::BookRecord> flat_train_books(const Artifacts& a) {
    const std::size_t k1 = a.taxonomy.fiction_genres.size();
    const std::size_t k2 = a.taxonomy.nonfiction_genres.size();
    std::vector<corpus::BookRecord> out;
    for (std::size_t i = 0; i < a.books.size(); ++i) {
        if (!a.train_mask[i]) continue;
        corpus::BookRecord padded = a.books[i];
        std::vector<std::uint8_t> level2(k1 + k2, 0);
        const std::size_t offset = padded.level1 == Branch::fiction ? 0 : k1;
        for (std::size_t j = 0; j < padded.level2.size(); ++j) {
            level2[offset + j] = padded.level2[j];
        }
        padded.level2 = std::move(level2);
        out.push_back(std::move(padded));
    }
    return out;
}

BranchData build_branch(const config::PipelineConfig& cfg, const Artifacts& a,
                        const std::string& tag, const std::vector<std::string>& labels,
                        const std::vector<corpus::BookRecord>& train_books,
                        const DenseMatrix& blurb_docs, const DenseMatrix& review_docs) {
    BranchData branch;
    branch.tag = tag;
    branch.labels = labels;

    const DenseMatrix cooc = labelgraph::compute_cooccurrence(train_books, labels.size());
    branch.label_graph = labelgraph::threshold_cooccurrence(cooc, labels, cfg.psi1, cfg.psi2);
    branch.ac_norm = sparse::normalize_adjacency(branch.label_graph.adjacency);

    std::size_t embed_dim = 0;
    const auto vectors = label_word_vectors(cfg, labels, &embed_dim);
    branch.label_static = labelgraph::label_static_embeddings(labels, vectors, embed_dim);
    branch.words = labelgraph::genre_word_embeddings(train_books, a.filter, a.vocab,
                                                     branch.label_static);

    DenseMatrix token_rows = branch.words.embeddings;  // m x e
    if (cfg.ablate_word_features) token_rows.fill(0.0);

    // Document rows share the Level-1 embeddings, projected to the label
    // embedding width when the provider dimension differs.
    DenseMatrix blurb_rows = blurb_docs;
    DenseMatrix review_rows = review_docs;
    if (blurb_docs.cols() != embed_dim) {
        const DenseMatrix projection = doc_projection(blurb_docs.cols(), embed_dim, cfg.seed);
        blurb_rows = project_rows(blurb_docs, projection);
        review_rows = project_rows(review_docs, projection);
    }
    branch.blurb_features = stack_features(blurb_rows, token_rows);
    branch.review_features = stack_features(review_rows, token_rows);

    // Targets over all documents; the gate weight decides who contributes.
    branch.targets = DenseMatrix(a.n_docs, labels.size());
    branch.doc_weights.assign(a.n_docs, 0.0);
    const std::size_t k1 = a.taxonomy.fiction_genres.size();
    for (std::size_t i = 0; i < a.books.size(); ++i) {
        const corpus::BookRecord& book = a.books[i];
        if (tag == "flat") {
            branch.doc_weights[i] = 1.0;
            const std::size_t offset = book.level1 == Branch::fiction ? 0 : k1;
            for (std::size_t j = 0; j < book.level2.size(); ++j) {
                branch.targets.at(i, offset + j) = book.level2[j] ? 1.0 : 0.0;
            }
        } else {
            const Branch b = tag == "fiction" ? Branch::fiction : Branch::nonfiction;
            if (book.level1 != b) continue;
            branch.doc_weights[i] = 1.0;
            for (std::size_t j = 0; j < book.level2.size(); ++j) {
                branch.targets.at(i, j) = book.level2[j] ? 1.0 : 0.0;
            }
        }
    }
    return branch;
}

gcn::GraphInputs graph_inputs(const Artifacts& a, const DenseMatrix& xb, const DenseMatrix& xp) {
    gcn::GraphInputs g;
    g.blurb_adjacency = &a.ab_norm;
    g.review_adjacency = &a.ap_norm;
    g.blurb_features = &xb;
    g.review_features = &xp;
    g.n_docs = a.n_docs;
    return g;
}

double train_lambda(const hierarchy::LambdaSetting& setting, double fallback) {
    // Full-graph training uses one scalar fusion weight; the adaptive rule is
    // a per-book inference behaviour.
    return setting.adaptive ? fallback : setting.fixed_value;
}

std::string checkpoint_path(const config::PipelineConfig& cfg, const std::string& tag) {
    return (fs::path(cfg.output_dir) / (tag + ".ckpt")).string();
}

}  // namespace

Artifacts build_artifacts(const config::PipelineConfig& cfg) {
    if (cfg.dataset.empty() || cfg.taxonomy.empty()) {
        throw ConfigError("config needs dataset and taxonomy paths");
    }
    Artifacts a;
    a.taxonomy = corpus::load_taxonomy(cfg.taxonomy);
    a.books = corpus::load_dataset(cfg.dataset, a.taxonomy);
    a.n_docs = a.books.size();

    const auto provider = make_provider(cfg);

    review_filter::FilterConfig filter_cfg;
    filter_cfg.min_blurb_tokens = cfg.short_text_tokens;
    filter_cfg.floor = cfg.filter_floor;

    a.doc_ids.reserve(a.n_docs);
    a.blurbs_pp.reserve(a.n_docs);
    for (const corpus::BookRecord& book : a.books) {
        a.doc_ids.push_back(book.id);
        a.blurbs_pp.push_back(corpus::preprocess_text(book.blurb));
        std::vector<std::string> reviews_pp;
        reviews_pp.reserve(book.reviews.size());
        for (const std::string& r : book.reviews) {
            reviews_pp.push_back(corpus::preprocess_text(r));
        }
        a.filter[book.id] =
            review_filter::filter_reviews(a.blurbs_pp.back(), reviews_pp, *provider, filter_cfg);
    }

    a.split = corpus::split_dataset(a.books, cfg.seed);
    a.train_mask.assign(a.n_docs, 0);
    a.val_mask.assign(a.n_docs, 0);
    a.test_mask.assign(a.n_docs, 0);
    std::map<std::string, std::size_t> row_of;
    for (std::size_t i = 0; i < a.n_docs; ++i) row_of[a.doc_ids[i]] = i;
    for (const std::string& id : a.split.train) a.train_mask[row_of.at(id)] = 1;
    for (const std::string& id : a.split.val) a.val_mask[row_of.at(id)] = 1;
    for (const std::string& id : a.split.test) a.test_mask[row_of.at(id)] = 1;

    a.level1_labels.resize(a.n_docs);
    for (std::size_t i = 0; i < a.n_docs; ++i) {
        a.level1_labels[i] = a.books[i].level1 == Branch::nonfiction ? 1 : 0;
    }

    review_filter::VocabConfig vocab_cfg;
    vocab_cfg.min_df = cfg.vocab_min_df;
    vocab_cfg.max_df_ratio = cfg.vocab_max_df_ratio;
    {
        // build_vocabulary works on preprocessed text; hand it books whose
        // blurbs are already cleaned.
        std::vector<corpus::BookRecord> pp_books = a.books;
        for (std::size_t i = 0; i < pp_books.size(); ++i) pp_books[i].blurb = a.blurbs_pp[i];
        a.vocab = review_filter::build_vocabulary(pp_books, a.filter, vocab_cfg);
    }

    std::vector<std::pair<std::string, std::vector<std::string>>> blurb_docs, review_docs;
    a.blurb_token_counts.resize(a.n_docs);
    a.review_token_counts.resize(a.n_docs);
    for (std::size_t i = 0; i < a.n_docs; ++i) {
        auto blurb_tokens = corpus::tokenize(a.blurbs_pp[i]);
        auto review_tokens = corpus::tokenize(a.filter.at(a.doc_ids[i]).consolidated);
        a.blurb_token_counts[i] = blurb_tokens.size();
        a.review_token_counts[i] = review_tokens.size();
        blurb_docs.emplace_back(a.doc_ids[i], std::move(blurb_tokens));
        review_docs.emplace_back(a.doc_ids[i], std::move(review_tokens));
    }
    a.blurb_graph =
        textgraph::build_text_graph(blurb_docs, a.vocab, cfg.graph_window, textgraph::GraphKind::blurb);
    a.review_graph = textgraph::build_text_graph(review_docs, a.vocab, cfg.graph_window,
                                                 textgraph::GraphKind::review);
    a.ab_norm = sparse::normalize_adjacency(a.blurb_graph.adjacency);
    a.ap_norm = sparse::normalize_adjacency(a.review_graph.adjacency);

    // Level-1 node features: frozen document embeddings, zero token rows.
    const std::size_t j = provider->dim();
    DenseMatrix blurb_doc_rows(a.n_docs, j), review_doc_rows(a.n_docs, j);
    for (std::size_t i = 0; i < a.n_docs; ++i) {
        const auto bv = provider->embed(a.blurbs_pp[i]);
        const auto rv = provider->embed(a.filter.at(a.doc_ids[i]).consolidated);
        for (std::size_t c = 0; c < j; ++c) {
            blurb_doc_rows.at(i, c) = bv[c];
            review_doc_rows.at(i, c) = rv[c];
        }
    }
    const DenseMatrix zero_tokens(a.vocab.size(), j);
    a.level1_blurb_features = stack_features(blurb_doc_rows, zero_tokens);
    a.level1_review_features = stack_features(review_doc_rows, zero_tokens);

    if (cfg.flat) {
        std::vector<std::string> labels = a.taxonomy.fiction_genres;
        labels.insert(labels.end(), a.taxonomy.nonfiction_genres.begin(),
                      a.taxonomy.nonfiction_genres.end());
        a.branches.push_back(build_branch(cfg, a, "flat", labels, flat_train_books(a),
                                          blurb_doc_rows, review_doc_rows));
    } else {
        a.branches.push_back(build_branch(cfg, a, "fiction", a.taxonomy.fiction_genres,
                                          branch_train_books(a, Branch::fiction), blurb_doc_rows,
                                          review_doc_rows));
        a.branches.push_back(build_branch(cfg, a, "nonfiction", a.taxonomy.nonfiction_genres,
                                          branch_train_books(a, Branch::nonfiction),
                                          blurb_doc_rows, review_doc_rows));
    }
    return a;
}

std::string train_report_json(const training::TrainReport& report, const std::string& tag) {
    nlohmann::ordered_json j;
    j["head"] = tag;
    j["epochs_run"] = report.epochs_run;
    j["best_epoch"] = report.best_epoch;
    j["best_val_metric"] = report.best_val_metric;
    j["train_loss"] = report.train_loss;
    j["val_metric"] = report.val_metric;
    j["wall_time_seconds"] = report.wall_time_seconds;
    return j.dump(2);
}

TrainedModels train_all(const config::PipelineConfig& cfg, const Artifacts& a) {
    fs::create_directories(cfg.output_dir);
    TrainedModels models;
    const std::uint64_t config_hash = cfg.hash();

    training::TrainConfig base;
    base.optimizer = cfg.optimizer;
    base.epochs = cfg.epochs;
    base.patience = cfg.patience;

    auto write_report = [&](const training::TrainReport& report, const std::string& tag) {
        std::ofstream out(fs::path(cfg.output_dir) / ("train_report_" + tag + ".json"));
        out << train_report_json(report, tag) << "\n";
    };

    if (!cfg.flat) {
        training::TrainConfig l1_cfg = base;
        l1_cfg.seed = cfg.seed ^ fnv1a64("level1");
        l1_cfg.lambda = train_lambda(cfg.lambda1, 0.3);
        auto g = graph_inputs(a, a.level1_blurb_features, a.level1_review_features);
        auto [model, report] = training::train_level1(g, a.level1_labels, a.train_mask,
                                                      a.val_mask, cfg.dims, l1_cfg);
        models.level1 = std::move(model);
        models.level1_report = report;
        checkpoint::save(checkpoint_path(cfg, "level1"), config_hash, "level1",
                         checkpoint::freeze(models.level1->tensors()));
        write_report(report, "level1");
    }

    training::Level2Options options;
    options.use_label_network = !cfg.ablate_label_network;
    options.train_label_embeddings = !cfg.ablate_label_embeddings;

    for (const BranchData& branch : a.branches) {
        training::TrainConfig l2_cfg = base;
        l2_cfg.seed = cfg.seed ^ fnv1a64("level2." + branch.tag);
        l2_cfg.lambda = train_lambda(cfg.lambda2, 0.7);
        auto g = graph_inputs(a, branch.blurb_features, branch.review_features);
        auto [model, report] =
            training::train_level2(g, branch.ac_norm, branch.label_static, branch.targets,
                                   branch.doc_weights, a.train_mask, a.val_mask, cfg.dims, l2_cfg,
                                   options);
        checkpoint::save(checkpoint_path(cfg, "level2_" + branch.tag), config_hash,
                         "level2_" + branch.tag, checkpoint::freeze(model.tensors()));
        write_report(report, "level2_" + branch.tag);
        models.level2.push_back(std::move(model));
        models.reports.push_back(std::move(report));
    }
    return models;
}

TrainedModels load_models(const config::PipelineConfig& cfg, const Artifacts& a) {
    TrainedModels models;
    const std::uint64_t config_hash = cfg.hash();
    training::Level2Options options;
    options.use_label_network = !cfg.ablate_label_network;
    options.train_label_embeddings = !cfg.ablate_label_embeddings;

    if (!cfg.flat) {
        gcn::Level1Model skeleton = training::make_level1_model(
            a.level1_blurb_features.cols(), cfg.dims, cfg.seed ^ fnv1a64("level1"));
        checkpoint::load(checkpoint_path(cfg, "level1"), config_hash, "level1",
                         skeleton.tensors());
        models.level1 = std::move(skeleton);
    }
    for (const BranchData& branch : a.branches) {
        gcn::Level2Model skeleton = training::make_level2_model(
            branch.blurb_features.cols(), branch.labels.size(), branch.label_static.cols(),
            cfg.dims, options, cfg.seed ^ fnv1a64("level2." + branch.tag));
        checkpoint::load(checkpoint_path(cfg, "level2_" + branch.tag), config_hash,
                         "level2_" + branch.tag, skeleton.tensors());
        models.level2.push_back(std::move(skeleton));
    }
    return models;
}

hierarchy::Predictor make_predictor(const config::PipelineConfig& cfg, const Artifacts& a,
                                    const TrainedModels& models) {
    hierarchy::PredictorInputs inputs;
    inputs.blurb_adjacency = a.ab_norm;
    inputs.review_adjacency = a.ap_norm;
    inputs.level1 = models.level1;
    inputs.level1_blurb_features = a.level1_blurb_features;
    inputs.level1_review_features = a.level1_review_features;
    inputs.flat = cfg.flat;
    inputs.n_docs = a.n_docs;
    inputs.doc_ids = a.doc_ids;
    inputs.blurb_token_counts = a.blurb_token_counts;
    inputs.review_token_counts = a.review_token_counts;
    inputs.gate.short_text_tokens = cfg.short_text_tokens;
    inputs.gate.lambda1 = cfg.lambda1;
    inputs.gate.lambda2 = cfg.lambda2;
    inputs.gate.decision_threshold = cfg.decision_threshold;

    for (std::size_t b = 0; b < a.branches.size(); ++b) {
        hierarchy::HeadInputs head;
        head.model = models.level2.at(b);
        head.ac_norm = a.branches[b].ac_norm;
        head.label_static = a.branches[b].label_static;
        head.blurb_features = a.branches[b].blurb_features;
        head.review_features = a.branches[b].review_features;
        head.genre_names = a.branches[b].labels;
        inputs.heads.push_back(std::move(head));
    }
    return hierarchy::Predictor(std::move(inputs));
}

metrics::MetricReport evaluate(const config::PipelineConfig& cfg, const Artifacts& a,
                               const TrainedModels& models) {
    hierarchy::Predictor predictor = make_predictor(cfg, a, models);
    metrics::MetricReport report;

    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < a.n_docs; ++i) {
        if (a.test_mask[i]) test_rows.push_back(i);
    }

    std::vector<hierarchy::Prediction> predictions;
    predictions.reserve(test_rows.size());
    for (std::size_t row : test_rows) predictions.push_back(predictor.predict(a.doc_ids[row]));

    if (!cfg.flat) {
        metrics::Level1Metrics l1;
        std::size_t tp = 0, fp = 0, fn = 0, correct = 0;
        for (std::size_t t = 0; t < test_rows.size(); ++t) {
            const bool truth = a.level1_labels[test_rows[t]] != 0;
            const bool pred = predictions[t].level1 == Branch::nonfiction;
            if (pred == truth) ++correct;
            if (pred && truth) ++tp;
            if (pred && !truth) ++fp;
            if (!pred && truth) ++fn;
        }
        l1.count = test_rows.size();
        l1.accuracy = test_rows.empty()
                          ? 0.0
                          : static_cast<double>(correct) / static_cast<double>(test_rows.size());
        const double denom = static_cast<double>(2 * tp + fp + fn);
        l1.f1 = denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
        report.level1 = l1;
    }

    const std::size_t k1 = a.taxonomy.fiction_genres.size();
    auto collect_branch = [&](Branch branch) {
        metrics::BinaryMatrix pred, truth;
        const std::size_t k = a.taxonomy.genres(branch).size();
        for (std::size_t t = 0; t < test_rows.size(); ++t) {
            const corpus::BookRecord& book = a.books[test_rows[t]];
            if (book.level1 != branch) continue;
            truth.push_back(book.level2);
            std::vector<std::uint8_t> row(k, 0);
            const hierarchy::Prediction& p = predictions[t];
            if (cfg.flat) {
                const std::size_t offset = branch == Branch::fiction ? 0 : k1;
                for (std::size_t c = 0; c < k; ++c) row[c] = p.decisions[offset + c];
            } else if (p.level1 == branch) {
                row = p.decisions;
            }
            pred.push_back(std::move(row));
        }
        return metrics::branch_metrics(pred, truth);
    };
    report.fiction = collect_branch(Branch::fiction);
    report.nonfiction = collect_branch(Branch::nonfiction);
    return report;
}

metrics::MetricReport run_pipeline(const config::PipelineConfig& cfg) {
    Artifacts artifacts = build_artifacts(cfg);
    fs::create_directories(cfg.output_dir);

    write_filter_sidecar(artifacts, (fs::path(cfg.output_dir) / "filter.jsonl").string());
    {
        std::ofstream vocab_out(fs::path(cfg.output_dir) / "vocab.txt");
        for (const std::string& tok : artifacts.vocab) vocab_out << tok << "\n";
    }

    TrainedModels models = train_all(cfg, artifacts);
    metrics::MetricReport report = evaluate(cfg, artifacts, models);
    std::ofstream metrics_out(fs::path(cfg.output_dir) / "metrics.json");
    metrics_out << metrics::to_json(report) << "\n";
    return report;
}

void write_filter_sidecar(const Artifacts& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write filter sidecar: " + path);
    for (const std::string& id : a.doc_ids) {
        const review_filter::FilterResult& r = a.filter.at(id);
        nlohmann::ordered_json j;
        j["id"] = id;
        j["kept"] = r.kept_indices;
        j["similarities"] = r.similarities;
        j["threshold"] = r.threshold_used;
        j["bypass"] = r.bypass;
        out << j.dump() << "\n";
    }
}

namespace {

void describe_graph(std::ostringstream& os, const std::string& name, const textgraph::TextGraph& g,
                    std::size_t n_docs) {
    os << name << ": " << n_docs << " docs + " << g.n_tokens << " tokens, "
       << g.adjacency.nnz() << " edges\n";
    std::vector<double> doc_token, token_token;
    for (const sparse::Coord& e : g.adjacency.coords()) {
        if (e.row < n_docs && e.col >= n_docs) doc_token.push_back(e.value);
        if (e.row >= n_docs && e.col >= n_docs && e.row < e.col) token_token.push_back(e.value);
    }
    auto histogram = [&](const std::string& label, std::vector<double>& w) {
        os << "  " << label << ": " << w.size() << " edges";
        if (w.empty()) {
            os << "\n";
            return;
        }
        const auto [min_it, max_it] = std::minmax_element(w.begin(), w.end());
        os << ", min " << *min_it << ", max " << *max_it << "\n    hist:";
        const double lo = *min_it, hi = *max_it;
        std::array<std::size_t, 8> bins{};
        for (double v : w) {
            std::size_t b = hi == lo ? 0
                                     : std::min<std::size_t>(
                                           7, static_cast<std::size_t>((v - lo) / (hi - lo) * 8));
            ++bins[b];
        }
        for (std::size_t b : bins) os << " " << b;
        os << "\n";
    };
    histogram("doc-token (tfidf)", doc_token);
    histogram("token-token (ppmi)", token_token);
}

}  // namespace

std::string graph_stats_text(const Artifacts& a) {
    std::ostringstream os;
    os << "corpus: " << a.n_docs << " books, vocabulary " << a.vocab.size() << " tokens\n";
    describe_graph(os, "blurb graph", a.blurb_graph, a.n_docs);
    describe_graph(os, "review graph", a.review_graph, a.n_docs);
    for (const BranchData& b : a.branches) {
        os << "label graph [" << b.tag << "]: " << b.labels.size() << " labels, "
           << b.label_graph.adjacency.nnz() << " edges (psi1 " << b.label_graph.psi1 << ", psi2 "
           << b.label_graph.psi2 << ")\n";
    }
    return os.str();
}

}  // namespace higemine::pipeline
