#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "molembed/io/run_config.hpp"
#include "molembed/tokenize/bpe.hpp"
#include "molembed/tokenize/iupac.hpp"
#include "molembed/train/checkpoint.hpp"
#include "molembed/train/trainer.hpp"

namespace molembed::cli {

// Flags shared by every subcommand; --seed overrides the config seed.
struct CommonOptions {
    std::string config_path;
    std::optional<uint64_t> seed;

    void attach(CLI::App& cmd) {
        cmd.add_option("--config", config_path, "JSON run configuration");
        cmd.add_option("--seed", seed, "Seed overriding the config seed");
    }

    io::RunConfig resolve() const {
        io::RunConfig cfg =
            config_path.empty() ? io::RunConfig{} : io::RunConfig::from_file(config_path);
        if (seed.has_value()) cfg.seed = *seed;
        cfg.validate();
        return cfg;
    }
};

// Artifacts written by `pretrain` and consumed by the downstream commands.
struct ModelBundle {
    tokenize::BpeModel bpe;
    tokenize::IupacRuleSet rules;
    train::Checkpoint checkpoint;
};

inline std::filesystem::path bundle_file(const std::string& dir, const char* name) {
    return std::filesystem::path(dir) / name;
}

ModelBundle load_model_bundle(const std::string& model_dir);

// Tokenizes an aligned pair corpus with the bundle's tokenizers.
train::TokenizedPairs tokenize_pairs(const io::PairCorpus& corpus, const tokenize::BpeModel& bpe,
                                     const tokenize::IupacRuleSet& rules, size_t l_max);

void ensure_directory(const std::string& dir);

} // namespace molembed::cli
