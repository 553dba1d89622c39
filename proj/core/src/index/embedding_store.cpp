#include "molembed/index/embedding_store.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace molembed::index {

namespace {
constexpr char kMagic[4] = {'M', 'M', 'F', 'P'};
constexpr uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in, const std::string& what) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw IoError("embedding store: truncated while reading " + what);
    return value;
}
} // namespace

EmbeddingStore::EmbeddingStore(size_t dim, std::string branch_tag)
    : dim_(dim), branch_(std::move(branch_tag)) {
    if (dim_ == 0) throw InvalidInputError("embedding store: dim must be positive");
}

EmbeddingStore EmbeddingStore::build(const std::vector<encoder::Fingerprint>& fingerprints,
                                     std::string branch_tag) {
    if (fingerprints.empty()) throw InvalidInputError("embedding store: no fingerprints");
    EmbeddingStore store(fingerprints.front().values.size(), std::move(branch_tag));
    for (const auto& fp : fingerprints) store.add(fp.id, fp.values);
    return store;
}

void EmbeddingStore::add(const std::string& id, std::span<const float> vector) {
    if (vector.size() != dim_) {
        throw ShapeError("embedding store: vector dim " + std::to_string(vector.size()) +
                         " != store dim " + std::to_string(dim_));
    }
    if (!row_of_.emplace(id, ids_.size()).second) {
        throw InvalidInputError("embedding store: duplicate id '" + id + "'");
    }
    ids_.push_back(id);
    data_.insert(data_.end(), vector.begin(), vector.end());
    norms_.clear();
}

size_t EmbeddingStore::row_of(const std::string& id) const {
    auto it = row_of_.find(id);
    if (it == row_of_.end()) {
        throw InvalidInputError("embedding store: unknown id '" + id + "'");
    }
    return it->second;
}

const std::vector<double>& EmbeddingStore::norms() const {
    if (norms_.size() != ids_.size()) {
        norms_.resize(ids_.size());
        for (size_t i = 0; i < ids_.size(); ++i) {
            double s = 0.0;
            const float* r = data_.data() + i * dim_;
            for (size_t j = 0; j < dim_; ++j) s += static_cast<double>(r[j]) * r[j];
            norms_[i] = std::sqrt(s);
        }
    }
    return norms_;
}

void EmbeddingStore::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("embedding store: cannot open for write: " + path);
    out.write(kMagic, 4);
    write_pod<uint32_t>(out, kVersion);
    write_pod<uint64_t>(out, static_cast<uint64_t>(count()));
    write_pod<uint32_t>(out, static_cast<uint32_t>(dim_));
    out.write(reinterpret_cast<const char*>(data_.data()),
              static_cast<std::streamsize>(data_.size() * sizeof(float)));
    if (!out) throw IoError("embedding store: write failed: " + path);

    std::ofstream ids(path + ".ids", std::ios::binary);
    if (!ids) throw IoError("embedding store: cannot open for write: " + path + ".ids");
    for (const auto& id : ids_) ids << id << "\n";
}

EmbeddingStore EmbeddingStore::load(const std::string& path, std::string branch_tag) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("embedding store: cannot open: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw ParseError("embedding store: bad magic in " + path);
    }
    const auto version = read_pod<uint32_t>(in, "version");
    if (version != kVersion) {
        throw ParseError("embedding store: unsupported version " + std::to_string(version));
    }
    const auto count = read_pod<uint64_t>(in, "count");
    const auto dim = read_pod<uint32_t>(in, "dim");
    if (dim == 0) throw ParseError("embedding store: zero dim in " + path);

    std::vector<float> data(static_cast<size_t>(count) * dim);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(float)));
    if (!in) throw ParseError("embedding store: matrix truncated in " + path);

    std::ifstream ids_in(path + ".ids", std::ios::binary);
    if (!ids_in) throw IoError("embedding store: cannot open: " + path + ".ids");
    std::vector<std::string> ids;
    std::string line;
    while (std::getline(ids_in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) ids.push_back(line);
    }
    if (ids.size() != count) {
        throw ParseError("embedding store: ids file has " + std::to_string(ids.size()) +
                         " entries, matrix has " + std::to_string(count));
    }

    EmbeddingStore store(dim, std::move(branch_tag));
    for (size_t i = 0; i < ids.size(); ++i) {
        store.add(ids[i], {data.data() + i * dim, dim});
    }
    return store;
}

} // namespace molembed::index
