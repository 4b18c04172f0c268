#include "higemine/embeddings.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "higemine/corpus.hpp"
#include "higemine/errors.hpp"
#include "higemine/rng.hpp"

namespace higemine::embeddings {

HashingEncoder::HashingEncoder(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw ConfigError("hashing encoder dim must be positive");
}

std::size_t HashingEncoder::bucket(const std::string& token, std::size_t dim) {
    return static_cast<std::size_t>(fnv1a64(token) % dim);
}

std::vector<double> HashingEncoder::embed(const std::string& text) const {
    std::vector<double> v(dim_, 0.0);
    for (const std::string& tok : corpus::tokenize(text)) {
        v[bucket(tok, dim_)] += 1.0;
    }
    double norm_sq = 0.0;
    for (double x : v) norm_sq += x * x;
    if (norm_sq > 0.0) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (double& x : v) x *= inv;
    }
    return v;
}

EmbeddingTable load_embedding_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open embedding table: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("#dim=", 0) != 0) {
        throw DataError("embedding table " + path + " missing #dim=<j> header");
    }
    EmbeddingTable table;
    try {
        table.dim = std::stoul(line.substr(5));
    } catch (const std::exception&) {
        throw DataError("embedding table " + path + " has invalid dim header: " + line);
    }
    if (table.dim == 0) throw DataError("embedding table dim must be positive");
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string key;
        std::getline(ss, key, '\t');
        std::vector<double> vec;
        std::string field;
        while (std::getline(ss, field, '\t')) {
            try {
                vec.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw DataError("embedding table " + path + " line " + std::to_string(line_no) +
                                ": bad float \"" + field + "\"");
            }
            if (!std::isfinite(vec.back())) {
                throw DataError("embedding table " + path + " line " + std::to_string(line_no) +
                                ": non-finite value");
            }
        }
        if (vec.size() != table.dim) {
            throw DataError("embedding table " + path + " line " + std::to_string(line_no) +
                            ": expected " + std::to_string(table.dim) + " values, got " +
                            std::to_string(vec.size()));
        }
        table.vectors[key] = std::move(vec);
    }
    return table;
}

void save_embedding_table(const EmbeddingTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << "#dim=" << table.dim << "\n";
    out.precision(17);
    for (const auto& [key, vec] : table.vectors) {
        out << key;
        for (double v : vec) out << '\t' << v;
        out << "\n";
    }
}

PrecomputedProvider::PrecomputedProvider(EmbeddingTable table) : table_(std::move(table)) {
    if (table_.dim == 0) throw DataError("precomputed provider needs a table with dim > 0");
}

std::string PrecomputedProvider::text_key(const std::string& text) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(text)));
    return std::string(buf);
}

std::vector<double> PrecomputedProvider::embed(const std::string& text) const {
    auto it = table_.vectors.find(text_key(text));
    if (it == table_.vectors.end()) {
        std::string preview = text.substr(0, 40);
        throw DataError("missing embedding for text key " + text_key(text) + " (text: \"" +
                        preview + (text.size() > 40 ? "..." : "") + "\")");
    }
    return it->second;
}

std::map<std::string, std::vector<double>> load_word_vectors(const std::string& path,
                                                             std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open word vector file: " + path);
    std::map<std::string, std::vector<double>> out;
    std::string line;
    int line_no = 0;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string token;
        ss >> token;
        std::vector<double> vec;
        double v;
        while (ss >> v) {
            if (!std::isfinite(v)) {
                throw DataError("word vector file " + path + " line " + std::to_string(line_no) +
                                ": non-finite value");
            }
            vec.push_back(v);
        }
        if (!ss.eof()) {
            throw DataError("word vector file " + path + " line " + std::to_string(line_no) +
                            ": unparseable value");
        }
        if (vec.empty()) {
            throw DataError("word vector file " + path + " line " + std::to_string(line_no) +
                            ": no values for token \"" + token + "\"");
        }
        if (dim == 0) {
            dim = vec.size();
        } else if (vec.size() != dim) {
            throw DataError("word vector file " + path + " line " + std::to_string(line_no) +
                            ": ragged row (expected " + std::to_string(dim) + " values, got " +
                            std::to_string(vec.size()) + ")");
        }
        if (out.count(token) && warnings) {
            warnings->push_back("duplicate token \"" + token + "\" at line " +
                                std::to_string(line_no) + "; keeping the last row");
        }
        out[token] = std::move(vec);
    }
    return out;
}

}  // namespace higemine::embeddings
