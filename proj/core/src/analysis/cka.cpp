#include "molembed/analysis/cka.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace molembed::analysis {

void CkaConfig::validate() const {
    if (!(bandwidth_scale > 0.0)) throw ConfigError("cka: bandwidth scale must be > 0");
    if (sample_size < 3) throw ConfigError("cka: sample size must be >= 3");
}

double median_pairwise_distance(const nn::Tensor64& x) {
    const size_t n = x.rows();
    std::vector<double> dists;
    dists.reserve(n * (n - 1) / 2);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (size_t c = 0; c < x.cols(); ++c) {
                const double d = x(i, c) - x(j, c);
                s += d * d;
            }
            dists.push_back(std::sqrt(s));
        }
    }
    std::sort(dists.begin(), dists.end());
    const size_t m = dists.size();
    return m % 2 == 1 ? dists[m / 2] : 0.5 * (dists[m / 2 - 1] + dists[m / 2]);
}

nn::Tensor64 rbf_kernel(const nn::Tensor64& x, double sigma) {
    const size_t n = x.rows();
    nn::Tensor64 k(n, n);
    const double denom = 2.0 * sigma * sigma;
    for (size_t i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (size_t c = 0; c < x.cols(); ++c) {
                const double d = x(i, c) - x(j, c);
                s += d * d;
            }
            const double v = std::exp(-s / denom);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

nn::Tensor64 linear_kernel(const nn::Tensor64& x) {
    const size_t n = x.rows();
    nn::Tensor64 k(n, n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (size_t c = 0; c < x.cols(); ++c) s += x(i, c) * x(j, c);
            k(i, j) = s;
            k(j, i) = s;
        }
    }
    return k;
}

namespace {

nn::Tensor64 double_center(const nn::Tensor64& k) {
    const size_t n = k.rows();
    std::vector<double> row_mean(n, 0.0);
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) row_mean[i] += k(i, j);
        total += row_mean[i];
        row_mean[i] /= static_cast<double>(n);
    }
    total /= static_cast<double>(n) * static_cast<double>(n);
    nn::Tensor64 out(n, n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            out(i, j) = k(i, j) - row_mean[i] - row_mean[j] + total;
        }
    }
    return out;
}

nn::Tensor64 make_kernel(const nn::Tensor64& x, const CkaConfig& cfg) {
    if (cfg.kernel == KernelKind::linear) return linear_kernel(x);
    const double median = median_pairwise_distance(x);
    if (median <= 0.0) {
        throw DegenerateInputError("cka: zero median pairwise distance (all rows identical)");
    }
    return rbf_kernel(x, cfg.bandwidth_scale * median);
}

} // namespace

double hsic(const nn::Tensor64& k, const nn::Tensor64& l) {
    if (k.rows() != l.rows() || k.rows() != k.cols() || l.rows() != l.cols()) {
        throw ShapeError("hsic: kernel matrices must be square with equal n, got " +
                         k.shape_str() + " and " + l.shape_str());
    }
    const size_t n = k.rows();
    const nn::Tensor64 kc = double_center(k);
    const nn::Tensor64 lc = double_center(l);
    double frob = 0.0;
    for (size_t i = 0; i < kc.size(); ++i) frob += kc[i] * lc[i];
    const double scale = static_cast<double>(n - 1);
    return frob / (scale * scale);
}

double cka(const nn::Tensor64& x, const nn::Tensor64& y, const CkaConfig& cfg) {
    cfg.validate();
    if (x.rows() != y.rows()) {
        throw ShapeError("cka: sample counts differ, " + x.shape_str() + " vs " + y.shape_str());
    }
    if (x.rows() < 3) throw InvalidInputError("cka: need at least 3 samples");
    if (!x.all_finite() || !y.all_finite()) throw NumericError("cka: non-finite activations");

    const nn::Tensor64 k = make_kernel(x, cfg);
    const nn::Tensor64 l = make_kernel(y, cfg);
    const double cross = hsic(k, l);
    const double kk = hsic(k, k);
    const double ll = hsic(l, l);
    if (kk <= 0.0 || ll <= 0.0) {
        throw DegenerateInputError("cka: zero self-HSIC (constant representation)");
    }
    return cross / std::sqrt(kk * ll);
}

} // namespace molembed::analysis
