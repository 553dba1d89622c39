#include "molembed/io/run_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "config_json.hpp"

namespace molembed::io {

using nlohmann::json;

void RunConfig::validate() const {
    if (tokenizer.smiles_vocab_size < 4) {
        throw ConfigError("config: tokenizer.smiles_vocab_size must be >= 4");
    }
    if (tokenizer.l_max < 2) throw ConfigError("config: tokenizer.l_max must be >= 2");
    // Encoders are validated with vocab_size patched in, since that is
    // only known once a tokenizer exists.
    auto sm = smiles_encoder;
    sm.vocab_size = std::max(sm.vocab_size, 4);
    sm.validate();
    auto ip = iupac_encoder;
    ip.vocab_size = std::max(ip.vocab_size, 4);
    ip.validate();
    train.validate();
    if (retrieval_ks.empty()) throw ConfigError("config: retrieval.ks must be non-empty");
    for (const size_t k : retrieval_ks) {
        if (k == 0) throw ConfigError("config: retrieval.ks entries must be >= 1");
    }
    cka.validate();
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }

    RunConfig cfg;
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("tokenizer")) {
        const auto& t = j["tokenizer"];
        cfg.tokenizer.smiles_vocab_size =
            t.value("smiles_vocab_size", cfg.tokenizer.smiles_vocab_size);
        cfg.tokenizer.l_max = t.value("l_max", cfg.tokenizer.l_max);
    }
    if (j.contains("encoder")) {
        // One shared section, with optional per-branch overrides.
        cfg.smiles_encoder = encoder_config_from_json(j["encoder"]);
        cfg.iupac_encoder = cfg.smiles_encoder;
    }
    if (j.contains("smiles_encoder")) {
        cfg.smiles_encoder = encoder_config_from_json(j["smiles_encoder"]);
    }
    if (j.contains("iupac_encoder")) {
        cfg.iupac_encoder = encoder_config_from_json(j["iupac_encoder"]);
    }
    if (j.contains("train")) cfg.train = train_config_from_json(j["train"]);
    if (j.contains("retrieval")) {
        cfg.retrieval_ks = j["retrieval"].value("ks", cfg.retrieval_ks);
    }
    if (j.contains("cka")) {
        const auto& c = j["cka"];
        const std::string kernel = c.value("kernel", std::string("rbf"));
        if (kernel == "rbf") {
            cfg.cka.kernel = analysis::KernelKind::rbf;
        } else if (kernel == "linear") {
            cfg.cka.kernel = analysis::KernelKind::linear;
        } else {
            throw ConfigError("config: cka.kernel must be 'rbf' or 'linear'");
        }
        cfg.cka.bandwidth_scale = c.value("bandwidth_scale", cfg.cka.bandwidth_scale);
        cfg.cka.sample_size = c.value("sample_size", cfg.cka.sample_size);
        cfg.cka.seed = c.value("seed", cfg.cka.seed);
    }
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("config: cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string RunConfig::to_json() const {
    json j;
    j["seed"] = seed;
    j["tokenizer"] = {{"smiles_vocab_size", tokenizer.smiles_vocab_size},
                      {"l_max", tokenizer.l_max}};
    j["smiles_encoder"] = io::to_json(smiles_encoder);
    j["iupac_encoder"] = io::to_json(iupac_encoder);
    j["train"] = io::to_json(train);
    j["retrieval"] = {{"ks", retrieval_ks}};
    j["cka"] = {{"kernel", cka.kernel == analysis::KernelKind::rbf ? "rbf" : "linear"},
                {"bandwidth_scale", cka.bandwidth_scale},
                {"sample_size", cka.sample_size},
                {"seed", cka.seed}};
    return j.dump(2);
}

} // namespace molembed::io
