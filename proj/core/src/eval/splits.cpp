#include "molembed/eval/splits.hpp"

#include <numeric>

namespace molembed::eval {

CvSplit CvSplit::stratified(const std::vector<int>& labels, int k, uint64_t seed) {
    if (k < 2) throw InvalidInputError("cv split: k must be >= 2");
    if (labels.size() < static_cast<size_t>(k)) {
        throw InvalidInputError("cv split: fewer examples than folds");
    }
    std::vector<size_t> pos, neg;
    for (size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1) {
            throw InvalidInputError("cv split: stratification needs binary labels");
        }
        (labels[i] == 1 ? pos : neg).push_back(i);
    }

    CvSplit split;
    split.k = k;
    split.seed = seed;
    split.fold_of.assign(labels.size(), -1);
    Rng rng = make_rng(seed, "cv/stratified");
    int next_fold = 0;
    for (auto* group : {&pos, &neg}) {
        rng.shuffle(*group);
        for (const size_t idx : *group) {
            split.fold_of[idx] = next_fold;
            next_fold = (next_fold + 1) % k;
        }
    }
    return split;
}

std::vector<size_t> CvSplit::fold_indices(int fold) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < fold_of.size(); ++i) {
        if (fold_of[i] == fold) out.push_back(i);
    }
    return out;
}

std::vector<size_t> CvSplit::complement_indices(int fold) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < fold_of.size(); ++i) {
        if (fold_of[i] != fold) out.push_back(i);
    }
    return out;
}

TrainValTest TrainValTest::random_split(size_t n, uint64_t seed, double train_frac,
                                        double val_frac) {
    if (n < 3) throw InvalidInputError("random split: need at least 3 examples");
    if (train_frac <= 0.0 || val_frac <= 0.0 || train_frac + val_frac >= 1.0) {
        throw InvalidInputError("random split: fractions must be positive and sum below 1");
    }
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng = make_rng(seed, "split/random");
    rng.shuffle(order);

    size_t n_train = static_cast<size_t>(train_frac * static_cast<double>(n));
    size_t n_val = static_cast<size_t>(val_frac * static_cast<double>(n));
    n_train = std::max<size_t>(1, std::min(n_train, n - 2));
    n_val = std::max<size_t>(1, std::min(n_val, n - n_train - 1));

    TrainValTest split;
    split.train.assign(order.begin(), order.begin() + static_cast<ptrdiff_t>(n_train));
    split.val.assign(order.begin() + static_cast<ptrdiff_t>(n_train),
                     order.begin() + static_cast<ptrdiff_t>(n_train + n_val));
    split.test.assign(order.begin() + static_cast<ptrdiff_t>(n_train + n_val), order.end());
    return split;
}

} // namespace molembed::eval
