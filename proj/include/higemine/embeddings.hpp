#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace higemine::embeddings {

// Fixed document-embedding source. Implementations must be deterministic for
// equal input text and always return vectors of length dim(). Providers are
// read-only after construction; concurrent embed() calls are allowed.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::size_t dim() const = 0;
    virtual std::vector<double> embed(const std::string& text) const = 0;
};

// Token-hashing encoder: tokens are bucketed by FNV-1a 64 modulo dim, counts
// accumulated and L2-normalized. Empty text maps to the zero vector.
class HashingEncoder : public EmbeddingProvider {
public:
    explicit HashingEncoder(std::size_t dim);
    std::size_t dim() const override { return dim_; }
    std::vector<double> embed(const std::string& text) const override;

    static std::size_t bucket(const std::string& token, std::size_t dim);

private:
    std::size_t dim_;
};

struct EmbeddingTable {
    std::size_t dim = 0;
    std::map<std::string, std::vector<double>> vectors;
};

// TSV table: header "#dim=<j>", rows "key \t v1 \t v2 ...".
EmbeddingTable load_embedding_table(const std::string& path);
void save_embedding_table(const EmbeddingTable& table, const std::string& path);

// Precomputed provider backed by an EmbeddingTable. Lookups key on the FNV-1a
// hex digest of the text, so tables can be produced offline for arbitrary
// documents. A missing key is an explicit error.
class PrecomputedProvider : public EmbeddingProvider {
public:
    explicit PrecomputedProvider(EmbeddingTable table);
    std::size_t dim() const override { return table_.dim; }
    std::vector<double> embed(const std::string& text) const override;

    static std::string text_key(const std::string& text);

private:
    EmbeddingTable table_;
};

// GloVe-style text format: "token v1 v2 ..." per line. Duplicate tokens keep
// the last row and emit a warning on `warnings` when provided.
std::map<std::string, std::vector<double>> load_word_vectors(
    const std::string& path, std::vector<std::string>* warnings = nullptr);

}  // namespace higemine::embeddings
