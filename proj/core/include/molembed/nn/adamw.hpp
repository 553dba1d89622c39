#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "molembed/nn/tape.hpp"

namespace molembed::nn {

struct AdamWConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
};

// Decoupled-weight-decay Adam with bias correction:
//   m ← β1·m + (1−β1)·g,   v ← β2·v + (1−β2)·g²
//   p ← p − lr·( m̂/(√v̂+ε) + wd·p )
template <typename T>
class AdamWT {
public:
    AdamWT(std::vector<ParamT<T>*> params, AdamWConfig cfg)
        : params_(std::move(params)), cfg_(cfg) {
        if (cfg_.lr <= 0.0 && cfg_.lr != 0.0) {
            throw InvalidInputError("adamw: learning rate must be >= 0");
        }
        for (const ParamT<T>* p : params_) {
            m_.emplace_back(p->value.rows(), p->value.cols());
            v_.emplace_back(p->value.rows(), p->value.cols());
        }
    }

    void step() {
        ++t_;
        const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
        for (size_t k = 0; k < params_.size(); ++k) {
            ParamT<T>& p = *params_[k];
            if (!p.value.same_shape(p.grad)) {
                throw ShapeError("adamw: grad " + p.grad.shape_str() + " vs param " +
                                 p.value.shape_str() + " for " + p.name);
            }
            TensorT<T>& m = m_[k];
            TensorT<T>& v = v_[k];
            for (size_t i = 0; i < p.value.size(); ++i) {
                const double g = static_cast<double>(p.grad[i]);
                const double mi = cfg_.beta1 * static_cast<double>(m[i]) + (1.0 - cfg_.beta1) * g;
                const double vi =
                    cfg_.beta2 * static_cast<double>(v[i]) + (1.0 - cfg_.beta2) * g * g;
                m[i] = static_cast<T>(mi);
                v[i] = static_cast<T>(vi);
                const double mhat = mi / bc1;
                const double vhat = vi / bc2;
                double x = static_cast<double>(p.value[i]);
                x -= cfg_.lr * (mhat / (std::sqrt(vhat) + cfg_.eps) + cfg_.weight_decay * x);
                p.value[i] = static_cast<T>(x);
            }
        }
    }

    void zero_grad() {
        for (ParamT<T>* p : params_) p->zero_grad();
    }

    int64_t step_count() const noexcept { return t_; }
    const AdamWConfig& config() const noexcept { return cfg_; }

    // Snapshot access for checkpointing.
    const std::vector<TensorT<T>>& first_moments() const noexcept { return m_; }
    const std::vector<TensorT<T>>& second_moments() const noexcept { return v_; }
    void restore(int64_t t, std::vector<TensorT<T>> m, std::vector<TensorT<T>> v) {
        if (m.size() != params_.size() || v.size() != params_.size()) {
            throw CheckpointError("adamw: optimizer state count mismatch");
        }
        for (size_t k = 0; k < params_.size(); ++k) {
            if (!m[k].same_shape(params_[k]->value) || !v[k].same_shape(params_[k]->value)) {
                throw CheckpointError("adamw: optimizer state shape mismatch for " +
                                      params_[k]->name);
            }
        }
        t_ = t;
        m_ = std::move(m);
        v_ = std::move(v);
    }

private:
    std::vector<ParamT<T>*> params_;
    AdamWConfig cfg_;
    std::vector<TensorT<T>> m_;
    std::vector<TensorT<T>> v_;
    int64_t t_ = 0;
};

using AdamW = AdamWT<float>;

} // namespace molembed::nn
