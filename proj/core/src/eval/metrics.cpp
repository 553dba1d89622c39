#include "molembed/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace molembed::eval {

namespace {

void check_binary(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) {
        throw InvalidInputError("metrics: scores and labels length mismatch");
    }
    if (scores.empty()) throw InvalidInputError("metrics: empty input");
    size_t pos = 0;
    for (const int y : labels) {
        if (y != 0 && y != 1) {
            throw InvalidInputError("metrics: classification labels must be 0/1");
        }
        pos += static_cast<size_t>(y);
    }
    if (pos == 0 || pos == labels.size()) {
        throw DegenerateInputError("metrics: both classes required, got single-class labels");
    }
}

} // namespace

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
    check_binary(scores, labels);
    const size_t n = scores.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return scores[a] < scores[b]; });

    // Average ranks over tied score groups, then the Mann-Whitney statistic.
    std::vector<double> rank(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }

    double rank_sum_pos = 0.0;
    size_t n_pos = 0;
    for (size_t k = 0; k < n; ++k) {
        if (labels[k] == 1) {
            rank_sum_pos += rank[k];
            ++n_pos;
        }
    }
    const size_t n_neg = n - n_pos;
    const double u = rank_sum_pos - static_cast<double>(n_pos) * (n_pos + 1) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double average_precision(std::span<const double> scores, std::span<const int> labels) {
    check_binary(scores, labels);
    const size_t n = scores.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });

    size_t tp = 0, n_pos = 0;
    for (const int y : labels) n_pos += static_cast<size_t>(y);
    double ap = 0.0;
    for (size_t k = 0; k < n; ++k) {
        if (labels[order[k]] == 1) {
            ++tp;
            ap += static_cast<double>(tp) / static_cast<double>(k + 1);
        }
    }
    return ap / static_cast<double>(n_pos);
}

std::pair<double, double> precision_recall_at(std::span<const double> scores,
                                              std::span<const int> labels, double threshold) {
    check_binary(scores, labels);
    size_t tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
        const bool pred = scores[i] >= threshold;
        if (pred && labels[i] == 1) ++tp;
        if (pred && labels[i] == 0) ++fp;
        if (!pred && labels[i] == 1) ++fn;
    }
    const double precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    const double recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    return {precision, recall};
}

double rmse(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size()) {
        throw InvalidInputError("rmse: length mismatch");
    }
    if (predictions.empty()) throw InvalidInputError("rmse: empty input");
    double sum = 0.0;
    for (size_t i = 0; i < predictions.size(); ++i) {
        const double d = predictions[i] - targets[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(predictions.size()));
}

MetricReport compute_metrics(std::span<const double> scores, std::span<const int> labels,
                             TaskKind kind, double threshold) {
    MetricReport report;
    if (kind == TaskKind::regression) {
        std::vector<double> targets(labels.size());
        for (size_t i = 0; i < labels.size(); ++i) targets[i] = labels[i];
        report.rmse = rmse(scores, targets);
        return report;
    }
    report.roc_auc = roc_auc(scores, labels);
    report.aupr = average_precision(scores, labels);
    const auto [p, r] = precision_recall_at(scores, labels, threshold);
    report.precision = p;
    report.recall = r;
    return report;
}

MetricReport compute_regression_metrics(std::span<const double> predictions,
                                        std::span<const double> targets) {
    MetricReport report;
    report.rmse = rmse(predictions, targets);
    return report;
}

MetricAggregate aggregate(const std::vector<MetricReport>& reports) {
    MetricAggregate agg;
    agg.count = reports.size();
    const auto combine = [&](auto field) {
        std::vector<double> values;
        for (const auto& r : reports) {
            if ((r.*field).has_value()) values.push_back(*(r.*field));
        }
        if (values.empty()) return std::pair<std::optional<double>, std::optional<double>>{};
        double mean = 0.0;
        for (const double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (const double v : values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(values.size());
        return std::pair<std::optional<double>, std::optional<double>>{mean, std::sqrt(var)};
    };
    std::tie(agg.mean.roc_auc, agg.stddev.roc_auc) = combine(&MetricReport::roc_auc);
    std::tie(agg.mean.aupr, agg.stddev.aupr) = combine(&MetricReport::aupr);
    std::tie(agg.mean.precision, agg.stddev.precision) = combine(&MetricReport::precision);
    std::tie(agg.mean.recall, agg.stddev.recall) = combine(&MetricReport::recall);
    std::tie(agg.mean.rmse, agg.stddev.rmse) = combine(&MetricReport::rmse);
    return agg;
}

} // namespace molembed::eval
