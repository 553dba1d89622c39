#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "molembed/encoder/encoder.hpp"
#include "molembed/eval/metrics.hpp"

namespace molembed::eval {

// Linear task head on top of a branch fingerprint.
struct TaskHead {
    nn::Param weight; // d_proj x num_outputs
    nn::Param bias;
    TaskKind kind = TaskKind::classification;

    static TaskHead init(int d_proj, int num_outputs, TaskKind kind, uint64_t seed);
};

// Pre-tokenized labeled examples; multi-column labels support averaged
// per-task metrics for multi-task classification sets.
struct LabeledDataset {
    std::vector<std::string> ids;
    std::vector<tokenize::TokenSequence> sequences;
    nn::Tensor labels; // n x num_outputs
    TaskKind kind = TaskKind::classification;

    size_t size() const { return sequences.size(); }
    void validate() const;
};

struct HyperGrid {
    std::vector<double> learning_rates = {1e-6, 5e-6, 1e-5, 5e-5, 1e-4};
    std::vector<int> batch_sizes = {2, 4, 8, 12, 24};
    int max_epochs = 20;
};

struct FinetuneOptions {
    bool freeze_encoder = false;
    int repeats = 3; // independent data-split seeds, reported as mean/std
    uint64_t seed = 0;
    // A cell is abandoned when, after `check_epoch` epochs, its validation
    // metric is worse than `keep_fraction` of the best completed cell.
    int check_epoch = 5;
    double keep_fraction = 0.8;
};

struct CellOutcome {
    double lr = 0.0;
    int batch_size = 0;
    double val_metric = 0.0;
    bool terminated_early = false;
};

struct FinetuneRun {
    uint64_t split_seed = 0;
    std::vector<CellOutcome> cells;
    double best_lr = 0.0;
    int best_batch = 0;
    MetricReport test_report;
};

struct FinetuneResult {
    std::vector<FinetuneRun> runs;
    MetricAggregate aggregate;
};

// Grid search over lr x batch with seeded 0.8/0.1/0.1 splits; the best
// validation cell's snapshot is evaluated on the test slice. Classification
// selects on mean per-column ROC-AUC (higher better), regression on RMSE
// (lower better).
FinetuneResult finetune(const encoder::EncoderConfig& cfg, const encoder::EncoderWeights& pretrained,
                        const LabeledDataset& dataset, const HyperGrid& grid,
                        const FinetuneOptions& options);

} // namespace molembed::eval
