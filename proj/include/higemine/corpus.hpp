#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace higemine::corpus {

// Coarse Level-1 labels. Index order is fixed: fiction = 0, nonfiction = 1.
enum class Branch : int { fiction = 0, nonfiction = 1 };

inline const char* branch_name(Branch b) {
    return b == Branch::fiction ? "fiction" : "nonfiction";
}

struct Taxonomy {
    std::vector<std::string> fiction_genres;
    std::vector<std::string> nonfiction_genres;

    const std::vector<std::string>& genres(Branch b) const {
        return b == Branch::fiction ? fiction_genres : nonfiction_genres;
    }
    // Index of a genre within its branch, or -1 if unknown.
    int genre_index(Branch b, const std::string& name) const;
    void validate() const;  // names unique within and across branches
};

struct BookRecord {
    std::string id;
    std::string blurb;
    std::vector<std::string> reviews;
    Branch level1 = Branch::fiction;
    // Binary indicator vector over the genre list of the book's branch, in
    // taxonomy order. Always contains at least one 1.
    std::vector<std::uint8_t> level2;
};

struct DatasetSplit {
    std::vector<std::string> train;
    std::vector<std::string> val;
    std::vector<std::string> test;
};

Taxonomy load_taxonomy(const std::string& path);

// Reads a JSONL file (one book object per line), validating every record
// against the taxonomy. Record order equals file order.
std::vector<BookRecord> load_dataset(const std::string& path, const Taxonomy& taxonomy);

// Writes records back out in the same JSONL schema.
void save_dataset(const std::vector<BookRecord>& books, const Taxonomy& taxonomy,
                  const std::string& path);

// Text cleanup: strips emoji/pictograph codepoints and URLs, collapses any
// character repeated more than three times to three, collapses whitespace,
// trims. Total and idempotent.
std::string preprocess_text(const std::string& raw);

// Lowercase, split on non-alphanumeric boundaries, drop tokens shorter than
// two characters and stopwords. Expects preprocessed text.
std::vector<std::string> tokenize(const std::string& text);

bool is_stopword(const std::string& token);

// Deterministic 7:1:2 split stratified by the Level-1 label. Requires at
// least 10 books.
DatasetSplit split_dataset(const std::vector<BookRecord>& books, std::uint64_t seed);

}  // namespace higemine::corpus
