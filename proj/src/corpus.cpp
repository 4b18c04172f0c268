#include "higemine/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "higemine/errors.hpp"
#include "higemine/rng.hpp"

namespace higemine::corpus {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const std::unordered_set<std::string>& stopwords() {
    static const std::unordered_set<std::string> kStopwords = {
        "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any",
        "are", "as", "at", "be", "because", "been", "before", "being", "below", "between",
        "both", "but", "by", "can", "cannot", "could", "did", "do", "does", "doing", "down",
        "during", "each", "few", "for", "from", "further", "had", "has", "have", "having",
        "he", "her", "here", "hers", "herself", "him", "himself", "his", "how", "i", "if",
        "in", "into", "is", "it", "its", "itself", "me", "more", "most", "my", "myself",
        "no", "nor", "not", "of", "off", "on", "once", "only", "or", "other", "ought",
        "our", "ours", "ourselves", "out", "over", "own", "same", "she", "should", "so",
        "some", "such", "than", "that", "the", "their", "theirs", "them", "themselves",
        "then", "there", "these", "they", "this", "those", "through", "to", "too", "under",
        "until", "up", "very", "was", "we", "were", "what", "when", "where", "which",
        "while", "who", "whom", "why", "will", "with", "would", "you", "your", "yours",
        "yourself", "yourselves"};
    return kStopwords;
}

// Codepoint ranges stripped as emoji/pictographs. Pinned list; covers the
// emoticon, symbol/pictograph, transport, supplemental-symbol, dingbat and
// variation-selector blocks plus ZWJ and the combining keycap.
bool is_emoji_codepoint(char32_t cp) {
    return (cp >= 0x1F000 && cp <= 0x1FAFF) || (cp >= 0x2600 && cp <= 0x27BF) ||
           (cp >= 0x2B00 && cp <= 0x2B55) || (cp >= 0xFE00 && cp <= 0xFE0F) ||
           cp == 0x200D || cp == 0x20E3;
}

// Minimal UTF-8 decode; malformed bytes are passed through as single units so
// preprocessing stays total.
std::vector<std::pair<char32_t, std::string>> decode_utf8(const std::string& s) {
    std::vector<std::pair<char32_t, std::string>> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char b = static_cast<unsigned char>(s[i]);
        std::size_t len = 1;
        char32_t cp = b;
        if (b >= 0xF0) {
            len = 4;
            cp = b & 0x07u;
        } else if (b >= 0xE0) {
            len = 3;
            cp = b & 0x0Fu;
        } else if (b >= 0xC0) {
            len = 2;
            cp = b & 0x1Fu;
        }
        if (i + len > s.size()) len = 1, cp = b;
        bool valid = true;
        for (std::size_t k = 1; k < len; ++k) {
            const unsigned char cont = static_cast<unsigned char>(s[i + k]);
            if ((cont & 0xC0u) != 0x80u) {
                valid = false;
                break;
            }
            cp = (cp << 6) | (cont & 0x3Fu);
        }
        if (!valid) {
            len = 1;
            cp = b;
        }
        out.emplace_back(cp, s.substr(i, len));
        i += len;
    }
    return out;
}

bool is_space_codepoint(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f' ||
           cp == U'\v';
}

bool starts_url(const std::vector<std::pair<char32_t, std::string>>& cps, std::size_t i) {
    auto match = [&](const char* lit) {
        std::size_t n = std::string(lit).size();
        if (i + n > cps.size()) return false;
        for (std::size_t k = 0; k < n; ++k) {
            char32_t cp = cps[i + k].first;
            char32_t lower = (cp >= U'A' && cp <= U'Z') ? cp + 32 : cp;
            if (lower != static_cast<char32_t>(lit[k])) return false;
        }
        return true;
    };
    return match("http://") || match("https://") || match("www.");
}

Branch parse_branch(const std::string& s, int line_no) {
    if (s == "fiction") return Branch::fiction;
    if (s == "nonfiction") return Branch::nonfiction;
    throw DataError("line " + std::to_string(line_no) + ": unknown level1 value \"" + s +
                    "\" (expected \"fiction\" or \"nonfiction\")");
}

}  // namespace

int Taxonomy::genre_index(Branch b, const std::string& name) const {
    const auto& list = genres(b);
    auto it = std::find(list.begin(), list.end(), name);
    return it == list.end() ? -1 : static_cast<int>(it - list.begin());
}

void Taxonomy::validate() const {
    std::set<std::string> seen;
    for (const auto* list : {&fiction_genres, &nonfiction_genres}) {
        for (const std::string& g : *list) {
            if (!seen.insert(g).second) {
                throw DataError("taxonomy genre \"" + g + "\" is not unique");
            }
        }
    }
    if (fiction_genres.empty() || nonfiction_genres.empty()) {
        throw DataError("taxonomy must list at least one genre per branch");
    }
}

Taxonomy load_taxonomy(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open taxonomy file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("taxonomy parse error in " + path + ": " + e.what());
    }
    Taxonomy t;
    try {
        t.fiction_genres = j.at("fiction").get<std::vector<std::string>>();
        t.nonfiction_genres = j.at("nonfiction").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw DataError("taxonomy schema error in " + path + ": " + e.what());
    }
    t.validate();
    return t;
}

std::vector<BookRecord> load_dataset(const std::string& path, const Taxonomy& taxonomy) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file: " + path);
    std::vector<BookRecord> books;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw DataError("line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
        }
        BookRecord rec;
        try {
            rec.id = j.at("id").get<std::string>();
            rec.blurb = j.at("blurb").get<std::string>();
            rec.reviews = j.at("reviews").get<std::vector<std::string>>();
            rec.level1 = parse_branch(j.at("level1").get<std::string>(), line_no);
            const auto genre_names = j.at("level2").get<std::vector<std::string>>();
            const auto& branch_genres = taxonomy.genres(rec.level1);
            rec.level2.assign(branch_genres.size(), 0);
            for (const std::string& g : genre_names) {
                int idx = taxonomy.genre_index(rec.level1, g);
                if (idx < 0) {
                    throw DataError("line " + std::to_string(line_no) + ": genre \"" + g +
                                    "\" is not in the " + branch_name(rec.level1) + " branch");
                }
                rec.level2[static_cast<std::size_t>(idx)] = 1;
            }
        } catch (const json::exception& e) {
            throw DataError("line " + std::to_string(line_no) + ": schema error: " + e.what());
        }
        if (std::find(rec.level2.begin(), rec.level2.end(), 1) == rec.level2.end()) {
            throw DataError("line " + std::to_string(line_no) + ": book \"" + rec.id +
                            "\" has no level2 genre");
        }
        if (!seen_ids.insert(rec.id).second) {
            throw DataError("line " + std::to_string(line_no) + ": duplicate book id \"" +
                            rec.id + "\"");
        }
        books.push_back(std::move(rec));
    }
    return books;
}

void save_dataset(const std::vector<BookRecord>& books, const Taxonomy& taxonomy,
                  const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    for (const BookRecord& b : books) {
        ordered_json j;
        j["id"] = b.id;
        j["blurb"] = b.blurb;
        j["reviews"] = b.reviews;
        j["level1"] = branch_name(b.level1);
        std::vector<std::string> genres;
        const auto& branch_genres = taxonomy.genres(b.level1);
        for (std::size_t i = 0; i < b.level2.size(); ++i) {
            if (b.level2[i]) genres.push_back(branch_genres[i]);
        }
        j["level2"] = genres;
        out << j.dump() << "\n";
    }
}

std::string preprocess_text(const std::string& raw) {
    auto cps = decode_utf8(raw);

    // Pass 1: drop emoji and URLs. URLs are matched at token starts and eaten
    // until whitespace.
    std::vector<std::pair<char32_t, std::string>> kept;
    kept.reserve(cps.size());
    bool at_token_start = true;
    for (std::size_t i = 0; i < cps.size();) {
        const char32_t cp = cps[i].first;
        if (at_token_start && starts_url(cps, i)) {
            while (i < cps.size() && !is_space_codepoint(cps[i].first)) ++i;
            continue;
        }
        if (is_emoji_codepoint(cp)) {
            ++i;
            continue;
        }
        at_token_start = is_space_codepoint(cp);
        kept.push_back(cps[i]);
        ++i;
    }

    // Pass 2: collapse runs of the same codepoint longer than 3, collapse
    // whitespace to single spaces, trim.
    std::string out;
    out.reserve(raw.size());
    char32_t prev_cp = 0;
    int run = 0;
    bool pending_space = false;
    bool emitted = false;
    for (const auto& [cp, bytes] : kept) {
        if (is_space_codepoint(cp)) {
            pending_space = emitted;
            prev_cp = 0;
            run = 0;
            continue;
        }
        if (cp == prev_cp) {
            ++run;
        } else {
            prev_cp = cp;
            run = 1;
        }
        if (run > 3) continue;
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += bytes;
        emitted = true;
    }
    return out;
}

bool is_stopword(const std::string& token) { return stopwords().count(token) > 0; }

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&]() {
        if (current.size() >= 2 && !is_stopword(current)) tokens.push_back(current);
        current.clear();
    };
    // ASCII-only token characters, locale-independent. Non-ASCII bytes act as
    // boundaries.
    for (char ch : text) {
        const unsigned char uc = static_cast<unsigned char>(ch);
        if ((uc >= 'a' && uc <= 'z') || (uc >= '0' && uc <= '9')) {
            current += static_cast<char>(uc);
        } else if (uc >= 'A' && uc <= 'Z') {
            current += static_cast<char>(uc - 'A' + 'a');
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

DatasetSplit split_dataset(const std::vector<BookRecord>& books, std::uint64_t seed) {
    const std::size_t n = books.size();
    if (n < 10) throw DataError("split_dataset needs at least 10 books, got " + std::to_string(n));

    const std::size_t n_train = static_cast<std::size_t>(0.7 * static_cast<double>(n));
    const std::size_t n_val = static_cast<std::size_t>(0.1 * static_cast<double>(n));

    std::vector<std::vector<std::string>> strata(2);
    for (const BookRecord& b : books) strata[static_cast<int>(b.level1)].push_back(b.id);

    Rng rng(seed);
    for (auto& s : strata) rng.shuffle(s);

    // Per-stratum train/val counts: floor of the proportional share, with the
    // global remainder assigned by largest fractional part (stratum order
    // breaks ties).
    auto apportion = [](const std::vector<std::size_t>& sizes, std::size_t total) {
        std::vector<std::size_t> counts(sizes.size());
        std::vector<double> fractions(sizes.size());
        std::size_t assigned = 0;
        const std::size_t whole = [&] {
            std::size_t s = 0;
            for (std::size_t v : sizes) s += v;
            return s;
        }();
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            const double share =
                whole == 0 ? 0.0
                           : static_cast<double>(total) * static_cast<double>(sizes[i]) /
                                 static_cast<double>(whole);
            counts[i] = static_cast<std::size_t>(share);
            fractions[i] = share - static_cast<double>(counts[i]);
            assigned += counts[i];
        }
        std::vector<std::size_t> order(sizes.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fractions[a] > fractions[b]; });
        for (std::size_t k = 0; assigned < total; ++k) {
            const std::size_t i = order[k % order.size()];
            if (counts[i] < sizes[i]) {
                ++counts[i];
                ++assigned;
            }
        }
        return counts;
    };

    std::vector<std::size_t> stratum_sizes = {strata[0].size(), strata[1].size()};
    auto train_counts = apportion(stratum_sizes, n_train);
    std::vector<std::size_t> remaining = {stratum_sizes[0] - train_counts[0],
                                          stratum_sizes[1] - train_counts[1]};
    auto val_counts = apportion(remaining, n_val);

    DatasetSplit split;
    for (std::size_t s = 0; s < strata.size(); ++s) {
        const auto& ids = strata[s];
        std::size_t i = 0;
        for (; i < train_counts[s]; ++i) split.train.push_back(ids[i]);
        for (; i < train_counts[s] + val_counts[s]; ++i) split.val.push_back(ids[i]);
        for (; i < ids.size(); ++i) split.test.push_back(ids[i]);
    }
    return split;
}

}  // namespace higemine::corpus
