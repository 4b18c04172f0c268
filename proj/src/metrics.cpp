#include "higemine/metrics.hpp"

#include <nlohmann/json.hpp>

#include "higemine/errors.hpp"

namespace higemine::metrics {

namespace {

struct Counts {
    std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
};

std::size_t check_shapes(const BinaryMatrix& pred, const BinaryMatrix& truth) {
    if (pred.size() != truth.size()) throw DataError("metric shape mismatch: row counts differ");
    std::size_t k = pred.empty() ? 0 : pred.front().size();
    for (std::size_t r = 0; r < pred.size(); ++r) {
        if (pred[r].size() != k || truth[r].size() != k) {
            throw DataError("metric shape mismatch at row " + std::to_string(r));
        }
    }
    return k;
}

std::vector<Counts> per_label_counts(const BinaryMatrix& pred, const BinaryMatrix& truth,
                                     std::size_t k) {
    std::vector<Counts> counts(k);
    for (std::size_t r = 0; r < pred.size(); ++r) {
        for (std::size_t c = 0; c < k; ++c) {
            const bool p = pred[r][c] != 0;
            const bool t = truth[r][c] != 0;
            if (p && t) ++counts[c].tp;
            if (p && !t) ++counts[c].fp;
            if (!p && t) ++counts[c].fn;
            if (!p && !t) ++counts[c].tn;
        }
    }
    return counts;
}

double f1_from(std::size_t tp, std::size_t fp, std::size_t fn) {
    const double denom = static_cast<double>(2 * tp + fp + fn);
    return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
}

double ba_from(const Counts& c) {
    const double sens =
        c.tp + c.fn == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    const double spec =
        c.tn + c.fp == 0 ? 1.0 : static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
    return 0.5 * (sens + spec);
}

}  // namespace

std::pair<double, double> f1_scores(const BinaryMatrix& pred, const BinaryMatrix& truth) {
    const std::size_t k = check_shapes(pred, truth);
    const auto counts = per_label_counts(pred, truth, k);
    Counts pooled;
    double macro_sum = 0.0;
    for (const Counts& c : counts) {
        pooled.tp += c.tp;
        pooled.fp += c.fp;
        pooled.fn += c.fn;
        macro_sum += f1_from(c.tp, c.fp, c.fn);
    }
    const double micro = f1_from(pooled.tp, pooled.fp, pooled.fn);
    const double macro = k == 0 ? 0.0 : macro_sum / static_cast<double>(k);
    return {micro, macro};
}

std::pair<double, double> balanced_accuracy(const BinaryMatrix& pred, const BinaryMatrix& truth) {
    const std::size_t k = check_shapes(pred, truth);
    const auto counts = per_label_counts(pred, truth, k);
    Counts pooled;
    double macro_sum = 0.0;
    std::size_t macro_n = 0;
    for (const Counts& c : counts) {
        pooled.tp += c.tp;
        pooled.tn += c.tn;
        pooled.fp += c.fp;
        pooled.fn += c.fn;
        if (c.tp + c.tn + c.fp + c.fn == 0) continue;  // label with no cells
        macro_sum += ba_from(c);
        ++macro_n;
    }
    const double micro = ba_from(pooled);
    const double macro = macro_n == 0 ? 0.0 : macro_sum / static_cast<double>(macro_n);
    return {micro, macro};
}

double hamming_loss(const BinaryMatrix& pred, const BinaryMatrix& truth) {
    const std::size_t k = check_shapes(pred, truth);
    const std::size_t cells = pred.size() * k;
    if (cells == 0) return 0.0;
    std::size_t wrong = 0;
    for (std::size_t r = 0; r < pred.size(); ++r) {
        for (std::size_t c = 0; c < k; ++c) {
            if ((pred[r][c] != 0) != (truth[r][c] != 0)) ++wrong;
        }
    }
    return static_cast<double>(wrong) / static_cast<double>(cells);
}

BranchMetrics branch_metrics(const BinaryMatrix& pred, const BinaryMatrix& truth) {
    BranchMetrics out;
    auto [f1u, f1m] = f1_scores(pred, truth);
    auto [bau, bam] = balanced_accuracy(pred, truth);
    out.f1_micro = f1u;
    out.f1_macro = f1m;
    out.ba_micro = bau;
    out.ba_macro = bam;
    out.hamming = hamming_loss(pred, truth);
    out.count = pred.size();
    return out;
}

std::string to_json(const MetricReport& report) {
    nlohmann::ordered_json j;
    j["schema_version"] = report.schema_version;
    if (report.level1) {
        j["level1"] = {{"f1", report.level1->f1},
                       {"accuracy", report.level1->accuracy},
                       {"count", report.level1->count}};
    }
    auto branch_json = [](const BranchMetrics& m) {
        return nlohmann::ordered_json{{"f1_micro", m.f1_micro},   {"f1_macro", m.f1_macro},
                                      {"ba_micro", m.ba_micro},   {"ba_macro", m.ba_macro},
                                      {"hamming_loss", m.hamming}, {"count", m.count}};
    };
    if (report.fiction) j["fiction"] = branch_json(*report.fiction);
    if (report.nonfiction) j["nonfiction"] = branch_json(*report.nonfiction);
    j["metadata"] = {{"macro_f1_zero_division", "zero"},
                     {"micro_balanced_accuracy", "pooled-counts"},
                     {"level1_positive_class", "nonfiction"}};
    return j.dump(2);
}

}  // namespace higemine::metrics
