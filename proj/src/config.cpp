#include "higemine/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "higemine/errors.hpp"
#include "higemine/rng.hpp"

namespace higemine::config {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key \"" + key + "\": expected a number, got \"" + value + "\"");
    }
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key \"" + key + "\": expected a non-negative integer, got \"" +
                          value + "\"");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config key \"" + key + "\": expected true/false, got \"" + value + "\"");
}

hierarchy::LambdaSetting parse_lambda(const std::string& key, const std::string& value) {
    hierarchy::LambdaSetting s;
    if (value == "adaptive") {
        s.adaptive = true;
        return s;
    }
    s.fixed_value = parse_double(key, value);
    if (s.fixed_value < 0.0 || s.fixed_value > 1.0) {
        throw ConfigError("config key \"" + key + "\": lambda must be in [0,1] or \"adaptive\"");
    }
    return s;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_lambda(const hierarchy::LambdaSetting& s) {
    return s.adaptive ? "adaptive" : fmt_double(s.fixed_value);
}

}  // namespace

PipelineConfig PipelineConfig::from_string(const std::string& text) {
    PipelineConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key = value, got \"" + stripped + "\"");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));

        if (key == "dataset") cfg.dataset = value;
        else if (key == "taxonomy") cfg.taxonomy = value;
        else if (key == "output_dir") cfg.output_dir = value;
        else if (key == "seed") cfg.seed = parse_uint(key, value);
        else if (key == "embedding.provider") {
            if (value != "hashing" && value != "table") {
                throw ConfigError("embedding.provider must be \"hashing\" or \"table\"");
            }
            cfg.embedding_provider = value;
        } else if (key == "embedding.dim") cfg.embedding_dim = parse_uint(key, value);
        else if (key == "embedding.table") cfg.embedding_table = value;
        else if (key == "label_vectors") cfg.label_vectors = value;
        else if (key == "label_embedding.dim") cfg.label_embedding_dim = parse_uint(key, value);
        else if (key == "filter.floor") cfg.filter_floor = parse_double(key, value);
        else if (key == "short_text_tokens") cfg.short_text_tokens = parse_uint(key, value);
        else if (key == "vocab.min_df") cfg.vocab_min_df = parse_uint(key, value);
        else if (key == "vocab.max_df_ratio") cfg.vocab_max_df_ratio = parse_double(key, value);
        else if (key == "graph.window") cfg.graph_window = parse_uint(key, value);
        else if (key == "label_graph.psi1") cfg.psi1 = parse_double(key, value);
        else if (key == "label_graph.psi2") cfg.psi2 = parse_double(key, value);
        else if (key == "model.gcn1_dim") cfg.dims.gcn1_out = parse_uint(key, value);
        else if (key == "model.gcn2_dim") cfg.dims.gcn2_out = parse_uint(key, value);
        else if (key == "model.dense_hidden") cfg.dims.dense_hidden = parse_uint(key, value);
        else if (key == "model.label_dim") cfg.dims.label_dim = parse_uint(key, value);
        else if (key == "train.optimizer") {
            if (value == "sgd") cfg.optimizer.kind = training::OptimizerKind::sgd;
            else if (value == "adam") cfg.optimizer.kind = training::OptimizerKind::adam;
            else throw ConfigError("train.optimizer must be \"sgd\" or \"adam\"");
        } else if (key == "train.lr") cfg.optimizer.learning_rate = parse_double(key, value);
        else if (key == "train.beta1") cfg.optimizer.beta1 = parse_double(key, value);
        else if (key == "train.beta2") cfg.optimizer.beta2 = parse_double(key, value);
        else if (key == "train.epsilon") cfg.optimizer.epsilon = parse_double(key, value);
        else if (key == "train.epochs") cfg.epochs = parse_uint(key, value);
        else if (key == "train.patience") cfg.patience = parse_uint(key, value);
        else if (key == "lambda1") cfg.lambda1 = parse_lambda(key, value);
        else if (key == "lambda2") cfg.lambda2 = parse_lambda(key, value);
        else if (key == "decision_threshold") cfg.decision_threshold = parse_double(key, value);
        else if (key == "ablation.no_label_network") cfg.ablate_label_network = parse_bool(key, value);
        else if (key == "ablation.no_word_features") cfg.ablate_word_features = parse_bool(key, value);
        else if (key == "ablation.freeze_label_embeddings")
            cfg.ablate_label_embeddings = parse_bool(key, value);
        else if (key == "ablation.flat") cfg.flat = parse_bool(key, value);
        else throw ConfigError("unknown config key \"" + key + "\"");
    }

    if (cfg.embedding_dim == 0) throw ConfigError("embedding.dim must be positive");
    if (cfg.label_embedding_dim == 0) throw ConfigError("label_embedding.dim must be positive");
    if (cfg.optimizer.learning_rate < 0.0) throw ConfigError("train.lr must be non-negative");
    if (cfg.epochs == 0) throw ConfigError("train.epochs must be positive");
    if (!(cfg.psi1 >= 0.0 && cfg.psi1 <= cfg.psi2 && cfg.psi2 <= 1.0)) {
        throw ConfigError("label_graph thresholds need 0 <= psi1 <= psi2 <= 1");
    }
    if (cfg.graph_window < 2) throw ConfigError("graph.window must be >= 2");
    if (cfg.embedding_provider == "table" && cfg.embedding_table.empty()) {
        throw ConfigError("embedding.provider=table requires embedding.table");
    }
    return cfg;
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

std::string PipelineConfig::canonical() const {
    std::map<std::string, std::string> kv;
    kv["dataset"] = dataset;
    kv["taxonomy"] = taxonomy;
    kv["output_dir"] = output_dir;
    kv["seed"] = std::to_string(seed);
    kv["embedding.provider"] = embedding_provider;
    kv["embedding.dim"] = std::to_string(embedding_dim);
    kv["embedding.table"] = embedding_table;
    kv["label_vectors"] = label_vectors;
    kv["label_embedding.dim"] = std::to_string(label_embedding_dim);
    kv["filter.floor"] = fmt_double(filter_floor);
    kv["short_text_tokens"] = std::to_string(short_text_tokens);
    kv["vocab.min_df"] = std::to_string(vocab_min_df);
    kv["vocab.max_df_ratio"] = fmt_double(vocab_max_df_ratio);
    kv["graph.window"] = std::to_string(graph_window);
    kv["label_graph.psi1"] = fmt_double(psi1);
    kv["label_graph.psi2"] = fmt_double(psi2);
    kv["model.gcn1_dim"] = std::to_string(dims.gcn1_out);
    kv["model.gcn2_dim"] = std::to_string(dims.gcn2_out);
    kv["model.dense_hidden"] = std::to_string(dims.dense_hidden);
    kv["model.label_dim"] = std::to_string(dims.label_dim);
    kv["train.optimizer"] = optimizer.kind == training::OptimizerKind::sgd ? "sgd" : "adam";
    kv["train.lr"] = fmt_double(optimizer.learning_rate);
    kv["train.beta1"] = fmt_double(optimizer.beta1);
    kv["train.beta2"] = fmt_double(optimizer.beta2);
    kv["train.epsilon"] = fmt_double(optimizer.epsilon);
    kv["train.epochs"] = std::to_string(epochs);
    kv["train.patience"] = std::to_string(patience);
    kv["lambda1"] = fmt_lambda(lambda1);
    kv["lambda2"] = fmt_lambda(lambda2);
    kv["decision_threshold"] = fmt_double(decision_threshold);
    kv["ablation.no_label_network"] = ablate_label_network ? "true" : "false";
    kv["ablation.no_word_features"] = ablate_word_features ? "true" : "false";
    kv["ablation.freeze_label_embeddings"] = ablate_label_embeddings ? "true" : "false";
    kv["ablation.flat"] = flat ? "true" : "false";

    std::string out;
    for (const auto& [k, v] : kv) {
        out += k;
        out += " = ";
        out += v;
        out += "\n";
    }
    return out;
}

std::uint64_t PipelineConfig::hash() const { return fnv1a64(canonical()); }

}  // namespace higemine::config
