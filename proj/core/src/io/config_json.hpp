#pragma once

// Internal JSON <-> config converters shared by checkpoint and run-config
// code. Not installed; keeps the vendored json out of public headers.

#include <json.hpp>

#include "molembed/encoder/config.hpp"
#include "molembed/train/trainer.hpp"

namespace molembed::io {

inline nlohmann::json to_json(const encoder::EncoderConfig& cfg) {
    return {
        {"num_layers", cfg.num_layers}, {"num_heads", cfg.num_heads},
        {"d_model", cfg.d_model},       {"d_ff", cfg.d_ff},
        {"l_max", cfg.l_max},           {"d_proj", cfg.d_proj},
        {"vocab_size", cfg.vocab_size}, {"layernorm_eps", cfg.layernorm_eps},
        {"dropout", cfg.dropout},
    };
}

inline encoder::EncoderConfig encoder_config_from_json(const nlohmann::json& j) {
    encoder::EncoderConfig cfg;
    cfg.num_layers = j.value("num_layers", cfg.num_layers);
    cfg.num_heads = j.value("num_heads", cfg.num_heads);
    cfg.d_model = j.value("d_model", cfg.d_model);
    cfg.d_ff = j.value("d_ff", cfg.d_ff);
    cfg.l_max = j.value("l_max", cfg.l_max);
    cfg.d_proj = j.value("d_proj", cfg.d_proj);
    cfg.vocab_size = j.value("vocab_size", cfg.vocab_size);
    cfg.layernorm_eps = j.value("layernorm_eps", cfg.layernorm_eps);
    cfg.dropout = j.value("dropout", cfg.dropout);
    return cfg;
}

inline nlohmann::json to_json(const train::TrainConfig& cfg) {
    return {
        {"tau", cfg.tau},
        {"lr", cfg.lr},
        {"weight_decay", cfg.weight_decay},
        {"batch_size", cfg.batch_size},
        {"epochs", cfg.epochs},
        {"seed", cfg.seed},
        {"checkpoint_every", cfg.checkpoint_every},
    };
}

inline train::TrainConfig train_config_from_json(const nlohmann::json& j) {
    train::TrainConfig cfg;
    cfg.tau = j.value("tau", cfg.tau);
    cfg.lr = j.value("lr", cfg.lr);
    cfg.weight_decay = j.value("weight_decay", cfg.weight_decay);
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.epochs = j.value("epochs", cfg.epochs);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.checkpoint_every = j.value("checkpoint_every", cfg.checkpoint_every);
    return cfg;
}

} // namespace molembed::io
