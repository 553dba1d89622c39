#include "molembed/train/checkpoint.hpp"

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "../io/config_json.hpp"

namespace molembed::train {

namespace {

using nlohmann::json;

struct TensorRecord {
    std::string name;
    size_t rows = 0;
    size_t cols = 0;
    size_t offset = 0;
};

class BlobWriter {
public:
    void add(const std::string& name, const nn::Tensor& t) {
        TensorRecord rec{name, t.rows(), t.cols(), bytes_.size()};
        const auto* raw = reinterpret_cast<const char*>(t.data());
        bytes_.insert(bytes_.end(), raw, raw + t.size() * sizeof(float));
        records_.push_back(std::move(rec));
    }

    json manifest() const {
        auto arr = json::array();
        for (const auto& r : records_) {
            arr.push_back({{"name", r.name},
                           {"shape", {r.rows, r.cols}},
                           {"dtype", "f32"},
                           {"offset", r.offset}});
        }
        return arr;
    }

    const std::string& bytes() const { return bytes_; }

private:
    std::vector<TensorRecord> records_;
    std::string bytes_;
};

class BlobReader {
public:
    BlobReader(const json& tensors, std::string blob) : blob_(std::move(blob)) {
        for (const auto& entry : tensors) {
            TensorRecord rec;
            rec.name = entry.at("name").get<std::string>();
            const auto& shape = entry.at("shape");
            if (!shape.is_array() || shape.size() != 2) {
                throw CheckpointError("checkpoint: tensor '" + rec.name + "' has malformed shape");
            }
            rec.rows = shape[0].get<size_t>();
            rec.cols = shape[1].get<size_t>();
            rec.offset = entry.at("offset").get<size_t>();
            if (entry.at("dtype").get<std::string>() != "f32") {
                throw CheckpointError("checkpoint: tensor '" + rec.name + "' has unsupported dtype");
            }
            const size_t end = rec.offset + rec.rows * rec.cols * sizeof(float);
            if (end > blob_.size()) {
                throw CheckpointError("checkpoint: blob truncated for tensor '" + rec.name +
                                      "' (need " + std::to_string(end) + " bytes, have " +
                                      std::to_string(blob_.size()) + ")");
            }
            records_.emplace(rec.name, rec);
        }
    }

    nn::Tensor read(const std::string& name, size_t rows, size_t cols) const {
        auto it = records_.find(name);
        if (it == records_.end()) {
            throw CheckpointError("checkpoint: missing tensor '" + name + "'");
        }
        const TensorRecord& rec = it->second;
        if (rec.rows != rows || rec.cols != cols) {
            throw CheckpointError("checkpoint: shape mismatch for '" + name + "': stored " +
                                  std::to_string(rec.rows) + "x" + std::to_string(rec.cols) +
                                  ", expected " + std::to_string(rows) + "x" +
                                  std::to_string(cols));
        }
        nn::Tensor t(rows, cols);
        std::memcpy(t.data(), blob_.data() + rec.offset, rows * cols * sizeof(float));
        return t;
    }

private:
    std::string blob_;
    std::map<std::string, TensorRecord> records_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("checkpoint: cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

void save_checkpoint(const std::string& manifest_path, const std::string& blob_path,
                     const Checkpoint& ckpt) {
    BlobWriter blob;
    // const_cast is localized: all_params() is non-const but save only reads.
    auto& smiles = const_cast<encoder::EncoderWeights&>(ckpt.smiles);
    auto& iupac = const_cast<encoder::EncoderWeights&>(ckpt.iupac);
    std::vector<nn::Param*> params = smiles.all_params();
    for (nn::Param* p : iupac.all_params()) params.push_back(p);
    for (const nn::Param* p : params) blob.add(p->name, p->value);

    json opt;
    if (ckpt.optimizer.has_value()) {
        const OptimizerState& st = *ckpt.optimizer;
        if (st.first_moments.size() != params.size() ||
            st.second_moments.size() != params.size()) {
            throw CheckpointError("checkpoint: optimizer state count mismatch");
        }
        for (size_t i = 0; i < params.size(); ++i) {
            blob.add("opt.m." + params[i]->name, st.first_moments[i]);
            blob.add("opt.v." + params[i]->name, st.second_moments[i]);
        }
        opt = {{"present", true}, {"step_count", st.step_count}};
    } else {
        opt = {{"present", false}};
    }

    json manifest = {
        {"version", 1},
        {"branches", {{"smiles", io::to_json(ckpt.smiles_cfg)}, {"iupac", io::to_json(ckpt.iupac_cfg)}}},
        {"train", io::to_json(ckpt.train_cfg)},
        {"tensors", blob.manifest()},
        {"optimizer", opt},
    };

    std::ofstream bin(blob_path, std::ios::binary);
    if (!bin) throw IoError("checkpoint: cannot open for write: " + blob_path);
    bin.write(blob.bytes().data(), static_cast<std::streamsize>(blob.bytes().size()));
    if (!bin) throw IoError("checkpoint: write failed: " + blob_path);

    std::ofstream out(manifest_path, std::ios::binary);
    if (!out) throw IoError("checkpoint: cannot open for write: " + manifest_path);
    out << manifest.dump(2) << "\n";
}

Checkpoint load_checkpoint(const std::string& manifest_path, const std::string& blob_path) {
    json manifest;
    try {
        manifest = json::parse(slurp(manifest_path));
    } catch (const json::exception& e) {
        throw CheckpointError(std::string("checkpoint: invalid manifest JSON: ") + e.what());
    }
    for (const char* field : {"version", "branches", "train", "tensors", "optimizer"}) {
        if (!manifest.contains(field)) {
            throw CheckpointError(std::string("checkpoint: manifest missing field '") + field +
                                  "'");
        }
    }
    if (manifest["version"].get<int>() != 1) {
        throw CheckpointError("checkpoint: unsupported version " +
                              manifest["version"].dump());
    }

    Checkpoint ckpt;
    try {
        ckpt.smiles_cfg = io::encoder_config_from_json(manifest["branches"].at("smiles"));
        ckpt.iupac_cfg = io::encoder_config_from_json(manifest["branches"].at("iupac"));
        ckpt.train_cfg = io::train_config_from_json(manifest["train"]);
    } catch (const json::exception& e) {
        throw CheckpointError(std::string("checkpoint: malformed config section: ") + e.what());
    }
    ckpt.smiles_cfg.validate();
    ckpt.iupac_cfg.validate();

    const BlobReader blob(manifest["tensors"], slurp(blob_path));

    Rng scratch(0);
    ckpt.smiles = encoder::EncoderWeights::init(ckpt.smiles_cfg, scratch, "smiles");
    ckpt.iupac = encoder::EncoderWeights::init(ckpt.iupac_cfg, scratch, "iupac");
    std::vector<nn::Param*> params = ckpt.smiles.all_params();
    for (nn::Param* p : ckpt.iupac.all_params()) params.push_back(p);
    for (nn::Param* p : params) {
        p->value = blob.read(p->name, p->value.rows(), p->value.cols());
    }

    const json& opt = manifest["optimizer"];
    if (opt.value("present", false)) {
        OptimizerState st;
        st.step_count = opt.at("step_count").get<int64_t>();
        for (const nn::Param* p : params) {
            st.first_moments.push_back(blob.read("opt.m." + p->name, p->value.rows(),
                                                 p->value.cols()));
            st.second_moments.push_back(blob.read("opt.v." + p->name, p->value.rows(),
                                                  p->value.cols()));
        }
        ckpt.optimizer = std::move(st);
    }
    return ckpt;
}

void require_matching_config(const encoder::EncoderConfig& loaded,
                             const encoder::EncoderConfig& expected, const std::string& branch) {
    const auto mismatch = [&](const std::string& field, auto a, auto b) {
        std::ostringstream msg;
        msg << "checkpoint: " << branch << "." << field << " mismatch: checkpoint has " << a
            << ", expected " << b;
        throw CheckpointError(msg.str());
    };
    if (loaded.num_layers != expected.num_layers)
        mismatch("num_layers", loaded.num_layers, expected.num_layers);
    if (loaded.num_heads != expected.num_heads)
        mismatch("num_heads", loaded.num_heads, expected.num_heads);
    if (loaded.d_model != expected.d_model) mismatch("d_model", loaded.d_model, expected.d_model);
    if (loaded.d_ff != expected.d_ff) mismatch("d_ff", loaded.d_ff, expected.d_ff);
    if (loaded.l_max != expected.l_max) mismatch("l_max", loaded.l_max, expected.l_max);
    if (loaded.d_proj != expected.d_proj) mismatch("d_proj", loaded.d_proj, expected.d_proj);
    if (loaded.vocab_size != expected.vocab_size)
        mismatch("vocab_size", loaded.vocab_size, expected.vocab_size);
}

} // namespace molembed::train
