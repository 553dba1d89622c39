#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "molembed/errors.hpp"

namespace molembed::eval {

enum class TaskKind { classification, regression };

// Subset of fields is populated per task kind; aggregate() produces
// mean/std companions over folds or repeats.
struct MetricReport {
    std::optional<double> roc_auc;
    std::optional<double> aupr;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> rmse;
};

struct MetricAggregate {
    MetricReport mean;
    MetricReport stddev;
    size_t count = 0;
};

// Rank-statistic ROC-AUC; tied scores contribute 1/2 per positive-negative
// pair. Requires both classes present.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

// Average precision (no interpolation): mean of precision@k over the
// positions of positives in the descending-score ranking (ties broken by
// original index, ascending).
double average_precision(std::span<const double> scores, std::span<const int> labels);

// Precision/recall at a fixed decision threshold (score >= threshold).
std::pair<double, double> precision_recall_at(std::span<const double> scores,
                                              std::span<const int> labels, double threshold);

double rmse(std::span<const double> predictions, std::span<const double> targets);

MetricReport compute_metrics(std::span<const double> scores, std::span<const int> labels,
                             TaskKind kind, double threshold = 0.5);
MetricReport compute_regression_metrics(std::span<const double> predictions,
                                        std::span<const double> targets);

MetricAggregate aggregate(const std::vector<MetricReport>& reports);

} // namespace molembed::eval
