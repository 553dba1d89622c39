#include "molembed/eval/finetune.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "molembed/eval/splits.hpp"
#include "molembed/nn/adamw.hpp"

namespace molembed::eval {

TaskHead TaskHead::init(int d_proj, int num_outputs, TaskKind kind, uint64_t seed) {
    if (num_outputs < 1) throw InvalidInputError("task head: num_outputs must be >= 1");
    Rng rng(seed);
    TaskHead head;
    head.weight = nn::Param("head.w", nn::Tensor::randn(static_cast<size_t>(d_proj),
                                                        static_cast<size_t>(num_outputs), rng, 0.02));
    head.bias = nn::Param("head.b", nn::Tensor(1, static_cast<size_t>(num_outputs)));
    head.kind = kind;
    return head;
}

void LabeledDataset::validate() const {
    if (sequences.empty()) throw InvalidInputError("finetune: empty dataset");
    if (labels.rows() != sequences.size()) {
        throw InvalidInputError("finetune: labels rows != example count");
    }
    if (labels.cols() == 0) throw InvalidInputError("finetune: no label columns");
    if (ids.size() != sequences.size()) throw InvalidInputError("finetune: ids length mismatch");
    if (kind == TaskKind::classification) {
        for (size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] != 0.0f && labels[i] != 1.0f) {
                throw InvalidInputError("finetune: classification labels must be 0/1");
            }
        }
    }
}

namespace {

struct CellModel {
    encoder::EncoderWeights weights; // copy owned by the cell
    TaskHead head;
};

// Logits for a subset of examples under the current cell model.
nn::Tensor predict_logits(const encoder::EncoderConfig& cfg, CellModel& model,
                          const LabeledDataset& data, const std::vector<size_t>& rows) {
    nn::Tensor out(rows.size(), data.labels.cols());
    for (size_t i = 0; i < rows.size(); ++i) {
        nn::Tape tape;
        const int z = encoder::encode_on_tape<float>(tape, cfg, model.weights,
                                                     data.sequences[rows[i]]);
        const int logits = nn::add_row_bias(tape, nn::matmul(tape, z, tape.parameter(model.head.weight)),
                                            tape.parameter(model.head.bias));
        const auto& row = tape.value(logits);
        for (size_t j = 0; j < row.cols(); ++j) out(i, j) = row(0, j);
    }
    return out;
}

// Mean per-column ROC-AUC (classification) or RMSE (regression) of the
// model on the given rows.
double validation_metric(const encoder::EncoderConfig& cfg, CellModel& model,
                         const LabeledDataset& data, const std::vector<size_t>& rows) {
    const nn::Tensor logits = predict_logits(cfg, model, data, rows);
    if (data.kind == TaskKind::regression) {
        std::vector<double> preds(rows.size()), targets(rows.size());
        for (size_t i = 0; i < rows.size(); ++i) {
            preds[i] = logits(i, 0);
            targets[i] = data.labels(rows[i], 0);
        }
        return rmse(preds, targets);
    }
    double auc_sum = 0.0;
    size_t cols_used = 0;
    for (size_t c = 0; c < data.labels.cols(); ++c) {
        std::vector<double> scores(rows.size());
        std::vector<int> labels(rows.size());
        for (size_t i = 0; i < rows.size(); ++i) {
            scores[i] = 1.0 / (1.0 + std::exp(-static_cast<double>(logits(i, c))));
            labels[i] = static_cast<int>(data.labels(rows[i], c));
        }
        const bool has_both = std::count(labels.begin(), labels.end(), 1) > 0 &&
                              std::count(labels.begin(), labels.end(), 0) > 0;
        if (!has_both) continue; // column degenerate in this slice
        auc_sum += roc_auc(scores, labels);
        ++cols_used;
    }
    if (cols_used == 0) {
        throw DegenerateInputError("finetune: every label column is single-class in this split");
    }
    return auc_sum / static_cast<double>(cols_used);
}

MetricReport test_metrics(const encoder::EncoderConfig& cfg, CellModel& model,
                          const LabeledDataset& data, const std::vector<size_t>& rows,
                          double threshold) {
    const nn::Tensor logits = predict_logits(cfg, model, data, rows);
    if (data.kind == TaskKind::regression) {
        std::vector<double> preds(rows.size()), targets(rows.size());
        for (size_t i = 0; i < rows.size(); ++i) {
            preds[i] = logits(i, 0);
            targets[i] = data.labels(rows[i], 0);
        }
        return compute_regression_metrics(preds, targets);
    }
    // Multi-column sets report column-averaged metrics.
    std::vector<MetricReport> per_column;
    for (size_t c = 0; c < data.labels.cols(); ++c) {
        std::vector<double> scores(rows.size());
        std::vector<int> labels(rows.size());
        for (size_t i = 0; i < rows.size(); ++i) {
            scores[i] = 1.0 / (1.0 + std::exp(-static_cast<double>(logits(i, c))));
            labels[i] = static_cast<int>(data.labels(rows[i], c));
        }
        const bool has_both = std::count(labels.begin(), labels.end(), 1) > 0 &&
                              std::count(labels.begin(), labels.end(), 0) > 0;
        if (!has_both) continue;
        per_column.push_back(compute_metrics(scores, labels, TaskKind::classification, threshold));
    }
    if (per_column.empty()) {
        throw DegenerateInputError("finetune: test slice has single-class labels everywhere");
    }
    return aggregate(per_column).mean;
}

bool better(TaskKind kind, double a, double b) {
    return kind == TaskKind::regression ? a < b : a > b;
}

// "Worse than keep_fraction of the best" under either metric direction.
bool should_terminate(TaskKind kind, double current, double best, double keep_fraction) {
    if (kind == TaskKind::regression) return current > best / keep_fraction;
    return current < best * keep_fraction;
}

} // namespace

FinetuneResult finetune(const encoder::EncoderConfig& cfg, const encoder::EncoderWeights& pretrained,
                        const LabeledDataset& dataset, const HyperGrid& grid,
                        const FinetuneOptions& options) {
    dataset.validate();
    cfg.validate();
    if (grid.learning_rates.empty() || grid.batch_sizes.empty()) {
        throw InvalidInputError("finetune: empty hyperparameter grid");
    }
    if (grid.max_epochs < 1) throw InvalidInputError("finetune: max_epochs must be >= 1");
    for (const auto& seq : dataset.sequences) {
        if (seq.length() > static_cast<size_t>(cfg.l_max)) {
            throw LengthError("finetune: sequence longer than l_max");
        }
    }

    FinetuneResult result;
    for (int repeat = 0; repeat < options.repeats; ++repeat) {
        const uint64_t run_seed =
            substream_seed(options.seed, "finetune/repeat" + std::to_string(repeat));
        const TrainValTest split = TrainValTest::random_split(dataset.size(), run_seed);

        FinetuneRun run;
        run.split_seed = run_seed;
        double best_val = 0.0;
        bool have_best = false;
        CellModel best_model;

        for (const double lr : grid.learning_rates) {
            for (const int batch_size : grid.batch_sizes) {
                const std::string cell_label =
                    "cell/" + std::to_string(lr) + "/" + std::to_string(batch_size);
                CellModel model{pretrained,
                                TaskHead::init(cfg.d_proj, static_cast<int>(dataset.labels.cols()),
                                               dataset.kind,
                                               substream_seed(run_seed, cell_label + "/head"))};

                std::vector<nn::Param*> params = {&model.head.weight, &model.head.bias};
                if (!options.freeze_encoder) {
                    for (nn::Param* p : model.weights.all_params()) params.push_back(p);
                }
                nn::AdamW opt(params, nn::AdamWConfig{.lr = lr});

                CellOutcome outcome;
                outcome.lr = lr;
                outcome.batch_size = batch_size;
                double cell_best_val = 0.0;
                bool cell_has_best = false;
                CellModel cell_best_model = model;

                Rng shuffle_rng = make_rng(run_seed, cell_label + "/shuffle");
                std::vector<size_t> train_rows = split.train;
                for (int epoch = 0; epoch < grid.max_epochs; ++epoch) {
                    shuffle_rng.shuffle(train_rows);
                    for (size_t start = 0; start < train_rows.size();
                         start += static_cast<size_t>(batch_size)) {
                        const size_t end =
                            std::min(train_rows.size(), start + static_cast<size_t>(batch_size));
                        nn::Tape tape;
                        std::vector<int> zs;
                        nn::Tensor targets(end - start, dataset.labels.cols());
                        for (size_t i = start; i < end; ++i) {
                            zs.push_back(encoder::encode_on_tape<float>(
                                tape, cfg, model.weights, dataset.sequences[train_rows[i]]));
                            for (size_t c = 0; c < dataset.labels.cols(); ++c) {
                                targets(i - start, c) = dataset.labels(train_rows[i], c);
                            }
                        }
                        const int z = nn::concat_rows(tape, zs);
                        const int logits =
                            nn::add_row_bias(tape, nn::matmul(tape, z, tape.parameter(model.head.weight)),
                                             tape.parameter(model.head.bias));
                        int loss;
                        if (dataset.kind == TaskKind::classification) {
                            loss = nn::mean_all(tape, nn::bce_with_logits(tape, logits,
                                                                          std::move(targets)));
                        } else {
                            const int neg = nn::scale(tape, tape.constant(std::move(targets)), -1.0);
                            const int diff = nn::add(tape, logits, neg);
                            loss = nn::mean_all(tape, nn::mul(tape, diff, diff));
                        }
                        if (!std::isfinite(tape.value(loss)(0, 0))) {
                            throw NumericError("finetune: non-finite loss in " + cell_label);
                        }
                        opt.zero_grad();
                        tape.backward(loss);
                        opt.step();
                    }

                    const double val = validation_metric(cfg, model, dataset, split.val);
                    if (!cell_has_best || better(dataset.kind, val, cell_best_val)) {
                        cell_best_val = val;
                        cell_best_model = model;
                        cell_has_best = true;
                    }
                    if (epoch + 1 == options.check_epoch && have_best &&
                        should_terminate(dataset.kind, cell_best_val, best_val,
                                         options.keep_fraction)) {
                        outcome.terminated_early = true;
                        break;
                    }
                }

                outcome.val_metric = cell_best_val;
                run.cells.push_back(outcome);
                if (!have_best || better(dataset.kind, cell_best_val, best_val)) {
                    best_val = cell_best_val;
                    best_model = std::move(cell_best_model);
                    run.best_lr = lr;
                    run.best_batch = batch_size;
                    have_best = true;
                }
            }
        }

        run.test_report = test_metrics(cfg, best_model, dataset, split.test, 0.5);
        result.runs.push_back(std::move(run));
    }

    std::vector<MetricReport> test_reports;
    for (const auto& run : result.runs) test_reports.push_back(run.test_report);
    result.aggregate = aggregate(test_reports);
    return result;
}

} // namespace molembed::eval
