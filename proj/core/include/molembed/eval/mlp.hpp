#pragma once

#include <cstdint>
#include <vector>

#include "molembed/nn/adamw.hpp"
#include "molembed/nn/ops.hpp"

namespace molembed::eval {

// One-hidden-layer perceptron with ReLU and a sigmoid output, trained with
// AdamW on binary cross-entropy. Used for frozen-fingerprint prediction.
class MlpClassifier {
public:
    struct Options {
        int hidden = 200;
        double lr = 1e-3;
        double weight_decay = 0.0;
        int max_epochs = 200;
        int patience = 10; // early stop on validation loss
        int batch_size = 128;
        double val_fraction = 0.1;
        uint64_t seed = 0;
    };

    MlpClassifier(size_t input_dim, Options options);

    void fit(const nn::Tensor& features, const std::vector<int>& labels);
    std::vector<double> predict_proba(const nn::Tensor& features) const;

    size_t input_dim() const noexcept { return input_dim_; }

private:
    int forward(nn::Tape& tape, int x) const;

    size_t input_dim_;
    Options options_;
    mutable nn::Param w1_, b1_, w2_, b2_;
};

} // namespace molembed::eval
