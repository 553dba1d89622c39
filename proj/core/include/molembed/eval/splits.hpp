#pragma once

#include <cstdint>
#include <vector>

#include "molembed/errors.hpp"
#include "molembed/rng.hpp"

namespace molembed::eval {

// Stratified k-fold assignment: positives and negatives are shuffled
// separately and dealt round-robin, so each fold's class ratio is within
// one sample of the global ratio and the folds partition the data.
struct CvSplit {
    std::vector<int> fold_of; // fold index per example
    int k = 5;
    uint64_t seed = 0;

    static CvSplit stratified(const std::vector<int>& labels, int k, uint64_t seed);

    std::vector<size_t> fold_indices(int fold) const;
    std::vector<size_t> complement_indices(int fold) const;
};

// Seeded random 0.8/0.1/0.1 partition.
struct TrainValTest {
    std::vector<size_t> train, val, test;

    static TrainValTest random_split(size_t n, uint64_t seed, double train_frac = 0.8,
                                     double val_frac = 0.1);
};

} // namespace molembed::eval
