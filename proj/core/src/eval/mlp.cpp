#include "molembed/eval/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace molembed::eval {

namespace {

nn::Tensor gather_rows(const nn::Tensor& x, const std::vector<size_t>& rows) {
    nn::Tensor out(rows.size(), x.cols());
    for (size_t i = 0; i < rows.size(); ++i) {
        for (size_t j = 0; j < x.cols(); ++j) out(i, j) = x(rows[i], j);
    }
    return out;
}

} // namespace

MlpClassifier::MlpClassifier(size_t input_dim, Options options)
    : input_dim_(input_dim), options_(options) {
    if (input_dim_ == 0) throw InvalidInputError("mlp: input dim must be positive");
    if (options_.hidden < 1) throw InvalidInputError("mlp: hidden units must be >= 1");
    Rng rng = make_rng(options_.seed, "mlp/init");
    const auto h = static_cast<size_t>(options_.hidden);
    // He-scaled init for the ReLU layer, small output layer.
    w1_ = nn::Param("mlp.w1", nn::Tensor::randn(input_dim_, h, rng,
                                                std::sqrt(2.0 / static_cast<double>(input_dim_))));
    b1_ = nn::Param("mlp.b1", nn::Tensor(1, h));
    w2_ = nn::Param("mlp.w2", nn::Tensor::randn(h, 1, rng, 0.05));
    b2_ = nn::Param("mlp.b2", nn::Tensor(1, 1));
}

int MlpClassifier::forward(nn::Tape& tape, int x) const {
    int h = nn::add_row_bias(tape, nn::matmul(tape, x, tape.parameter(w1_)), tape.parameter(b1_));
    h = nn::relu(tape, h);
    return nn::add_row_bias(tape, nn::matmul(tape, h, tape.parameter(w2_)), tape.parameter(b2_));
}

void MlpClassifier::fit(const nn::Tensor& features, const std::vector<int>& labels) {
    if (features.rows() != labels.size()) {
        throw InvalidInputError("mlp: features/labels length mismatch");
    }
    if (features.cols() != input_dim_) {
        throw ShapeError("mlp: features dim " + std::to_string(features.cols()) +
                         " != input dim " + std::to_string(input_dim_));
    }

    // Carve a validation slice out of the training data for early stopping.
    std::vector<size_t> order(features.rows());
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng = make_rng(options_.seed, "mlp/val-split");
    rng.shuffle(order);
    size_t n_val = static_cast<size_t>(options_.val_fraction * static_cast<double>(order.size()));
    n_val = std::min(std::max<size_t>(n_val, 1), order.size() - 1);
    const std::vector<size_t> val_rows(order.begin(), order.begin() + static_cast<ptrdiff_t>(n_val));
    std::vector<size_t> train_rows(order.begin() + static_cast<ptrdiff_t>(n_val), order.end());

    const nn::Tensor val_x = gather_rows(features, val_rows);
    nn::Tensor val_y(val_rows.size(), 1);
    for (size_t i = 0; i < val_rows.size(); ++i) val_y(i, 0) = static_cast<float>(labels[val_rows[i]]);

    std::vector<nn::Param*> params = {&w1_, &b1_, &w2_, &b2_};
    nn::AdamW opt(params, nn::AdamWConfig{.lr = options_.lr,
                                          .weight_decay = options_.weight_decay});

    const auto val_loss = [&]() {
        nn::Tape tape;
        const int logits = forward(tape, tape.constant(val_x));
        const int loss = nn::mean_all(tape, nn::bce_with_logits(tape, logits, val_y));
        return static_cast<double>(tape.value(loss)(0, 0));
    };

    double best_val = std::numeric_limits<double>::infinity();
    std::vector<nn::Tensor> best_weights;
    int stale = 0;
    Rng epoch_rng = make_rng(options_.seed, "mlp/epochs");
    const size_t batch = static_cast<size_t>(std::max(1, options_.batch_size));

    for (int epoch = 0; epoch < options_.max_epochs; ++epoch) {
        epoch_rng.shuffle(train_rows);
        for (size_t start = 0; start < train_rows.size(); start += batch) {
            const size_t end = std::min(train_rows.size(), start + batch);
            const std::vector<size_t> rows(train_rows.begin() + static_cast<ptrdiff_t>(start),
                                           train_rows.begin() + static_cast<ptrdiff_t>(end));
            nn::Tape tape;
            const int x = tape.constant(gather_rows(features, rows));
            nn::Tensor y(rows.size(), 1);
            for (size_t i = 0; i < rows.size(); ++i) y(i, 0) = static_cast<float>(labels[rows[i]]);
            const int loss = nn::mean_all(tape, nn::bce_with_logits(tape, forward(tape, x), y));
            if (!std::isfinite(tape.value(loss)(0, 0))) {
                throw NumericError("mlp: non-finite training loss at epoch " +
                                   std::to_string(epoch));
            }
            opt.zero_grad();
            tape.backward(loss);
            opt.step();
        }

        const double v = val_loss();
        if (v < best_val - 1e-9) {
            best_val = v;
            best_weights = {w1_.value, b1_.value, w2_.value, b2_.value};
            stale = 0;
        } else if (++stale > options_.patience) {
            break;
        }
    }

    if (!best_weights.empty()) {
        w1_.value = best_weights[0];
        b1_.value = best_weights[1];
        w2_.value = best_weights[2];
        b2_.value = best_weights[3];
    }
}

std::vector<double> MlpClassifier::predict_proba(const nn::Tensor& features) const {
    if (features.cols() != input_dim_) {
        throw ShapeError("mlp: features dim " + std::to_string(features.cols()) +
                         " != input dim " + std::to_string(input_dim_));
    }
    nn::Tape tape;
    const int logits = forward(tape, tape.constant(features));
    const auto& L = tape.value(logits);
    std::vector<double> probs(L.rows());
    for (size_t i = 0; i < L.rows(); ++i) {
        probs[i] = 1.0 / (1.0 + std::exp(-static_cast<double>(L(i, 0))));
    }
    return probs;
}

} // namespace molembed::eval
