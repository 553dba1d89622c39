#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "molembed/analysis/cka.hpp"
#include "molembed/encoder/config.hpp"
#include "molembed/train/trainer.hpp"

namespace molembed::io {

// Merged configuration consumed by the CLI. Every section has desk-scale
// defaults; a config file overrides fields selectively and is validated in
// full before any command starts writing artifacts.
struct RunConfig {
    uint64_t seed = 0;

    struct TokenizerSection {
        int smiles_vocab_size = 128;
        int l_max = 64;
    } tokenizer;

    encoder::EncoderConfig smiles_encoder; // vocab_size filled from tokenizer at run time
    encoder::EncoderConfig iupac_encoder;
    train::TrainConfig train;
    std::vector<size_t> retrieval_ks = {1, 5};
    analysis::CkaConfig cka;

    void validate() const;

    static RunConfig from_json_text(const std::string& text);
    static RunConfig from_file(const std::string& path);
    std::string to_json() const;
};

} // namespace molembed::io
