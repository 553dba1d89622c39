#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "molembed/encoder/weights.hpp"

namespace molembed::index {

// Immutable-after-build matrix of fingerprints with id-addressed rows.
// Persisted as magic "MMFP", version u32, count u64, dim u32, then the
// little-endian float32 matrix, plus a companion "<path>.ids" text file
// with one id per line in row order.
class EmbeddingStore {
public:
    EmbeddingStore(size_t dim, std::string branch_tag = "");

    static EmbeddingStore build(const std::vector<encoder::Fingerprint>& fingerprints,
                                std::string branch_tag = "");

    void add(const std::string& id, std::span<const float> vector);

    size_t count() const noexcept { return ids_.size(); }
    size_t dim() const noexcept { return dim_; }
    const std::string& branch_tag() const noexcept { return branch_; }

    std::span<const float> row(size_t i) const { return {data_.data() + i * dim_, dim_}; }
    const std::string& id(size_t i) const { return ids_[i]; }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    bool has_id(const std::string& id) const { return row_of_.count(id) > 0; }
    size_t row_of(const std::string& id) const;

    // Cached L2 norms (double accumulation) for cosine queries.
    const std::vector<double>& norms() const;

    void save(const std::string& path) const;
    static EmbeddingStore load(const std::string& path, std::string branch_tag = "");

private:
    size_t dim_;
    std::string branch_;
    std::vector<std::string> ids_;
    std::vector<float> data_;
    std::unordered_map<std::string, size_t> row_of_;
    mutable std::vector<double> norms_;
};

} // namespace molembed::index
