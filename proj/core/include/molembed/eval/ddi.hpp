#pragma once

#include <string>
#include <vector>

#include "molembed/eval/metrics.hpp"
#include "molembed/eval/mlp.hpp"
#include "molembed/eval/splits.hpp"
#include "molembed/index/embedding_store.hpp"

namespace molembed::eval {

enum class FingerprintSource { smiles, iupac, concat };

FingerprintSource fingerprint_source_from_string(const std::string& s);
const char* to_string(FingerprintSource source);

struct DdiPair {
    std::string id_a;
    std::string id_b;
    int label = 0;
};

struct DdiOptions {
    int folds = 5;
    double threshold = 0.5;
    size_t top_false_positives = 20;
    uint64_t seed = 0;
    MlpClassifier::Options mlp; // hidden 200, lr 1e-3 defaults
};

struct DdiResult {
    std::vector<MetricReport> fold_reports;
    MetricAggregate aggregate;
    double positive_prevalence = 0.0;

    struct RankedPair {
        std::string id_a;
        std::string id_b;
        double score = 0.0;
    };
    // Non-interaction pairs ranked by predicted score: the most likely
    // undiscovered interactions.
    std::vector<RankedPair> top_false_positives;
};

// Frozen-fingerprint DDI prediction: per-pair features are the two drugs'
// fingerprints concatenated (source picks the branch, or both concatenated
// first), classified by the MLP under stratified k-fold CV.
DdiResult ddi_train_eval(const index::EmbeddingStore* smiles, const index::EmbeddingStore* iupac,
                         FingerprintSource source, const std::vector<DdiPair>& pairs,
                         const DdiOptions& options);

} // namespace molembed::eval
