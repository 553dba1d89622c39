#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "molembed/errors.hpp"
#include "molembed/rng.hpp"

namespace molembed::nn {

// Dense row-major 2-D tensor. float is the training dtype; double is the
// verification dtype used by gradient checks and analysis code. Vectors are
// 1xN or Nx1, scalars 1x1.
template <typename T>
class TensorT {
public:
    TensorT() = default;
    TensorT(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
    TensorT(size_t rows, size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw ShapeError("tensor: data length " + std::to_string(data_.size()) +
                             " does not match shape " + shape_str());
        }
    }

    static TensorT full(size_t rows, size_t cols, T value) {
        TensorT t(rows, cols);
        for (auto& x : t.data_) x = value;
        return t;
    }

    static TensorT randn(size_t rows, size_t cols, Rng& rng, double stddev = 1.0) {
        TensorT t(rows, cols);
        for (auto& x : t.data_) x = static_cast<T>(rng.next_normal(0.0, stddev));
        return t;
    }

    size_t rows() const noexcept { return rows_; }
    size_t cols() const noexcept { return cols_; }
    size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }
    T& operator[](size_t i) { return data_[i]; }
    const T& operator[](size_t i) const { return data_[i]; }

    T* data() noexcept { return data_.data(); }
    const T* data() const noexcept { return data_.data(); }
    std::span<T> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(size_t r) const { return {data_.data() + r * cols_, cols_}; }
    const std::vector<T>& storage() const noexcept { return data_; }

    bool same_shape(const TensorT& o) const noexcept {
        return rows_ == o.rows_ && cols_ == o.cols_;
    }

    std::string shape_str() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

    void fill(T value) {
        for (auto& x : data_) x = value;
    }

    template <typename U>
    TensorT<U> cast() const {
        TensorT<U> out(rows_, cols_);
        for (size_t i = 0; i < data_.size(); ++i) out[i] = static_cast<U>(data_[i]);
        return out;
    }

    bool all_finite() const {
        for (const T x : data_) {
            if (!std::isfinite(static_cast<double>(x))) return false;
        }
        return true;
    }

private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<T> data_;
};

using Tensor = TensorT<float>;
using Tensor64 = TensorT<double>;

} // namespace molembed::nn
