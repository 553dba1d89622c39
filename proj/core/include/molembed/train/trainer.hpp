#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "molembed/encoder/encoder.hpp"
#include "molembed/nn/adamw.hpp"
#include "molembed/train/infonce.hpp"

namespace molembed::train {

struct TrainConfig {
    double tau = 0.07;
    double lr = 1e-6;
    double weight_decay = 0.01;
    int batch_size = 16;
    int epochs = 10;
    uint64_t seed = 0;
    int checkpoint_every = 0; // steps between checkpoints; 0 = final only

    void validate() const {
        if (!(tau > 0.0)) throw ConfigError("train config: tau must be > 0");
        if (lr < 0.0) throw ConfigError("train config: lr must be >= 0");
        if (batch_size < 1) throw ConfigError("train config: batch_size must be >= 1");
        if (epochs < 0) throw ConfigError("train config: epochs must be >= 0");
        if (checkpoint_every < 0) throw ConfigError("train config: checkpoint cadence >= 0");
    }

    bool operator==(const TrainConfig&) const = default;
};

// Aligned, pre-tokenized corpus; index i on both sides is the same molecule.
struct TokenizedPairs {
    std::vector<std::string> ids;
    std::vector<tokenize::TokenSequence> smiles;
    std::vector<tokenize::TokenSequence> iupac;

    size_t size() const { return ids.size(); }
    void validate() const;
};

struct StepLog {
    int64_t step = 0;
    int epoch = 0;
    double loss = 0.0;
    double loss_smiles = 0.0;
    double loss_iupac = 0.0;
};

struct TrainResult {
    std::vector<StepLog> curve;
    int64_t steps = 0;
    double final_epoch_mean_loss = 0.0;
};

// Single-process symmetric InfoNCE training of the two branches. Batch
// assembly runs on a producer thread feeding a bounded queue; the model
// update itself is single-threaded and deterministic given the seed.
class ContrastiveTrainer {
public:
    ContrastiveTrainer(const encoder::EncoderConfig& smiles_cfg, encoder::EncoderWeights& smiles,
                       const encoder::EncoderConfig& iupac_cfg, encoder::EncoderWeights& iupac,
                       TrainConfig cfg);

    // checkpoint_sink, when set, is invoked every cfg.checkpoint_every steps
    // and once after the final step.
    TrainResult train(const TokenizedPairs& pairs,
                      const std::function<void(int64_t step)>& checkpoint_sink = {});

    nn::AdamW& optimizer() { return optimizer_; }

private:
    const encoder::EncoderConfig smiles_cfg_;
    const encoder::EncoderConfig iupac_cfg_;
    encoder::EncoderWeights& smiles_;
    encoder::EncoderWeights& iupac_;
    TrainConfig cfg_;
    std::vector<nn::Param*> params_;
    nn::AdamW optimizer_;
};

} // namespace molembed::train
