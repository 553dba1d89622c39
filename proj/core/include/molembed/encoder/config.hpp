#pragma once

#include <string>

#include "molembed/errors.hpp"

namespace molembed::encoder {

enum class Branch { smiles, iupac };

inline const char* to_string(Branch b) { return b == Branch::smiles ? "smiles" : "iupac"; }

inline Branch branch_from_string(const std::string& s) {
    if (s == "smiles") return Branch::smiles;
    if (s == "iupac") return Branch::iupac;
    throw InvalidInputError("branch: expected 'smiles' or 'iupac', got '" + s + "'");
}

// Shape hyperparameters of one language branch.
struct EncoderConfig {
    int num_layers = 2;
    int num_heads = 4;
    int d_model = 64;
    int d_ff = 256;
    int l_max = 64;
    int d_proj = 32;
    int vocab_size = 0;
    double layernorm_eps = 1e-5;
    double dropout = 0.0; // kept at 0 by default so runs are deterministic

    // Desk-scale defaults above train in minutes on a CPU; this is the
    // 6-layer/768-wide configuration for full-scale runs.
    static EncoderConfig full_scale() {
        EncoderConfig cfg;
        cfg.num_layers = 6;
        cfg.num_heads = 12;
        cfg.d_model = 768;
        cfg.d_ff = 3072;
        cfg.l_max = 512;
        cfg.d_proj = 512;
        return cfg;
    }

    void validate() const {
        if (num_layers < 1) throw ConfigError("encoder config: num_layers must be >= 1");
        if (num_heads < 1) throw ConfigError("encoder config: num_heads must be >= 1");
        if (d_model < 1 || d_ff < 1 || d_proj < 1) {
            throw ConfigError("encoder config: dims must be positive");
        }
        if (d_model % num_heads != 0) {
            throw ConfigError("encoder config: d_model " + std::to_string(d_model) +
                              " not divisible by num_heads " + std::to_string(num_heads));
        }
        if (l_max < 2) throw ConfigError("encoder config: l_max must be >= 2");
        if (vocab_size < 4) {
            throw ConfigError("encoder config: vocab_size must cover the 4 special tokens");
        }
        if (dropout < 0.0 || dropout >= 1.0) {
            throw ConfigError("encoder config: dropout must be in [0,1)");
        }
    }

    bool operator==(const EncoderConfig&) const = default;
};

} // namespace molembed::encoder
