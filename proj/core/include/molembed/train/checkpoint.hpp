#pragma once

#include <optional>
#include <string>
#include <vector>

#include "molembed/encoder/weights.hpp"
#include "molembed/train/trainer.hpp"

namespace molembed::train {

struct OptimizerState {
    int64_t step_count = 0;
    std::vector<nn::Tensor> first_moments;
    std::vector<nn::Tensor> second_moments;
};

// Everything needed to resume or reuse a pretraining run: both branch
// configs and weights, the train config, and (optionally) AdamW state.
struct Checkpoint {
    encoder::EncoderConfig smiles_cfg;
    encoder::EncoderConfig iupac_cfg;
    encoder::EncoderWeights smiles;
    encoder::EncoderWeights iupac;
    TrainConfig train_cfg;
    std::optional<OptimizerState> optimizer;
};

// JSON manifest (name -> shape/dtype/offset plus configs) alongside one
// little-endian float32 blob. Loading validates the manifest against the
// blob size before touching any tensor, so a truncated file never yields a
// partial model.
void save_checkpoint(const std::string& manifest_path, const std::string& blob_path,
                     const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& manifest_path, const std::string& blob_path);

// Validates a loaded checkpoint against externally expected configs;
// throws CheckpointError naming the first mismatching field.
void require_matching_config(const encoder::EncoderConfig& loaded,
                             const encoder::EncoderConfig& expected, const std::string& branch);

} // namespace molembed::train
