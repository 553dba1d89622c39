#pragma once

#include <cstdint>
#include <string>

#include "molembed/nn/tensor.hpp"

namespace molembed::analysis {

enum class KernelKind { rbf, linear };

struct CkaConfig {
    KernelKind kernel = KernelKind::rbf;
    // RBF bandwidth sigma = bandwidth_scale * median pairwise distance,
    // recomputed per input matrix.
    double bandwidth_scale = 0.5;
    size_t sample_size = 512;
    uint64_t seed = 0;

    void validate() const;
};

// Median of the upper-triangle pairwise Euclidean distances between rows.
double median_pairwise_distance(const nn::Tensor64& x);

nn::Tensor64 rbf_kernel(const nn::Tensor64& x, double sigma);
nn::Tensor64 linear_kernel(const nn::Tensor64& x);

// HSIC(K, L) with double-centered kernels (biased estimator; the
// normalization cancels inside CKA).
double hsic(const nn::Tensor64& k, const nn::Tensor64& l);

// CKA(X, Y) = HSIC(K,L) / sqrt(HSIC(K,K) * HSIC(L,L)) in [0, 1]. Rows are
// samples (n >= 3, same n on both sides).
double cka(const nn::Tensor64& x, const nn::Tensor64& y, const CkaConfig& cfg);

} // namespace molembed::analysis
