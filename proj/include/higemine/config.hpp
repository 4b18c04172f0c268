#pragma once

#include <cstdint>
#include <string>

#include "higemine/hierarchy.hpp"
#include "higemine/training.hpp"

namespace higemine::config {

// Every knob of the pipeline, loadable from a flat "key = value" file.
// Unknown keys are a config error; all values have defaults.
struct PipelineConfig {
    std::string dataset;
    std::string taxonomy;
    std::string output_dir = "out";
    std::uint64_t seed = 42;

    std::string embedding_provider = "hashing";  // hashing | table
    std::size_t embedding_dim = 64;              // hashing encoder width j
    std::string embedding_table;                 // table provider path
    std::string label_vectors;                   // GloVe-style file; hashing fallback if empty
    std::size_t label_embedding_dim = 64;        // e when falling back to hashed word vectors

    double filter_floor = 0.35;
    std::size_t short_text_tokens = 20;  // blurb bypass + adaptive lambda rules

    std::size_t vocab_min_df = 1;
    double vocab_max_df_ratio = 1.0;
    std::size_t graph_window = 20;

    double psi1 = 0.1;
    double psi2 = 0.9;

    training::ModelDims dims;

    training::OptimizerConfig optimizer;
    std::size_t epochs = 200;
    std::size_t patience = 20;

    hierarchy::LambdaSetting lambda1{false, 0.3};
    hierarchy::LambdaSetting lambda2{false, 0.7};
    double decision_threshold = 0.5;

    bool ablate_label_network = false;     // replace label net with affine head
    bool ablate_word_features = false;     // zero Level-2 word features
    bool ablate_label_embeddings = false;  // freeze X_l at zero
    bool flat = false;                     // no hierarchy: one 57-way head

    static PipelineConfig from_file(const std::string& path);
    static PipelineConfig from_string(const std::string& text);

    // Canonical "key = value" rendering of every resolved setting, sorted by
    // key. Hashed into checkpoints so stale artifacts are rejected.
    std::string canonical() const;
    std::uint64_t hash() const;
};

}  // namespace higemine::config
