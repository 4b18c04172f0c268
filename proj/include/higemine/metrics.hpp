#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace higemine::metrics {

// Binary label matrix, n rows x k labels, entries 0/1.
using BinaryMatrix = std::vector<std::vector<std::uint8_t>>;

// (micro, macro) F1. Micro pools TP/FP/FN over all cells. Macro averages
// per-label F1 with the pinned zero-division convention: a label with no
// positives in either matrix scores 0.
std::pair<double, double> f1_scores(const BinaryMatrix& pred, const BinaryMatrix& truth);

// (micro, macro) balanced accuracy. Per-label BA = (sensitivity +
// specificity)/2 with vacuous components scored 1; labels with no cells are
// skipped in the macro mean. Micro is BA over pooled TP/TN/FP/FN.
std::pair<double, double> balanced_accuracy(const BinaryMatrix& pred, const BinaryMatrix& truth);

// Fraction of label cells predicted incorrectly.
double hamming_loss(const BinaryMatrix& pred, const BinaryMatrix& truth);

struct BranchMetrics {
    double f1_micro = 0.0;
    double f1_macro = 0.0;
    double ba_micro = 0.0;
    double ba_macro = 0.0;
    double hamming = 0.0;
    std::size_t count = 0;  // books evaluated
};

struct Level1Metrics {
    double f1 = 0.0;  // positive class: nonfiction
    double accuracy = 0.0;
    std::size_t count = 0;
};

struct MetricReport {
    int schema_version = 1;
    std::optional<Level1Metrics> level1;  // absent in flat (no-hierarchy) mode
    std::optional<BranchMetrics> fiction;
    std::optional<BranchMetrics> nonfiction;
};

BranchMetrics branch_metrics(const BinaryMatrix& pred, const BinaryMatrix& truth);

std::string to_json(const MetricReport& report);

}  // namespace higemine::metrics
