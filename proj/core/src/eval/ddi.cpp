#include "molembed/eval/ddi.hpp"

#include <algorithm>
#include <set>

namespace molembed::eval {

FingerprintSource fingerprint_source_from_string(const std::string& s) {
    if (s == "smiles") return FingerprintSource::smiles;
    if (s == "iupac") return FingerprintSource::iupac;
    if (s == "concat") return FingerprintSource::concat;
    throw InvalidInputError("ddi: unknown fingerprint source '" + s + "'");
}

const char* to_string(FingerprintSource source) {
    switch (source) {
        case FingerprintSource::smiles: return "smiles";
        case FingerprintSource::iupac: return "iupac";
        default: return "concat";
    }
}

namespace {

// Fingerprint of one drug under the chosen source.
std::vector<float> drug_vector(const index::EmbeddingStore* smiles,
                               const index::EmbeddingStore* iupac, FingerprintSource source,
                               const std::string& id) {
    const auto fetch = [&](const index::EmbeddingStore* store,
                           const char* tag) -> std::span<const float> {
        if (store == nullptr) {
            throw InvalidInputError(std::string("ddi: source needs the ") + tag + " store");
        }
        if (!store->has_id(id)) {
            throw InvalidInputError("ddi: no fingerprint for drug id '" + id + "'");
        }
        return store->row(store->row_of(id));
    };
    std::vector<float> out;
    if (source == FingerprintSource::smiles || source == FingerprintSource::concat) {
        const auto row = fetch(smiles, "smiles");
        out.insert(out.end(), row.begin(), row.end());
    }
    if (source == FingerprintSource::iupac || source == FingerprintSource::concat) {
        const auto row = fetch(iupac, "iupac");
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

} // namespace

DdiResult ddi_train_eval(const index::EmbeddingStore* smiles, const index::EmbeddingStore* iupac,
                         FingerprintSource source, const std::vector<DdiPair>& pairs,
                         const DdiOptions& options) {
    if (pairs.empty()) throw InvalidInputError("ddi: no pairs");
    for (const auto& p : pairs) {
        if (p.label != 0 && p.label != 1) {
            throw InvalidInputError("ddi: labels must be binary, pair " + p.id_a + "," + p.id_b);
        }
    }

    // Pair-level features: concat(drug_a, drug_b).
    std::vector<int> labels(pairs.size());
    const std::vector<float> probe = drug_vector(smiles, iupac, source, pairs.front().id_a);
    const size_t dim = probe.size() * 2;
    nn::Tensor features(pairs.size(), dim);
    for (size_t i = 0; i < pairs.size(); ++i) {
        const auto a = drug_vector(smiles, iupac, source, pairs[i].id_a);
        const auto b = drug_vector(smiles, iupac, source, pairs[i].id_b);
        for (size_t j = 0; j < a.size(); ++j) features(i, j) = a[j];
        for (size_t j = 0; j < b.size(); ++j) features(i, a.size() + j) = b[j];
        labels[i] = pairs[i].label;
    }

    const CvSplit split = CvSplit::stratified(labels, options.folds, options.seed);

    DdiResult result;
    size_t n_pos = 0;
    for (const int y : labels) n_pos += static_cast<size_t>(y);
    result.positive_prevalence = static_cast<double>(n_pos) / static_cast<double>(labels.size());

    std::vector<double> pair_scores(pairs.size(), 0.0);
    for (int fold = 0; fold < options.folds; ++fold) {
        const auto train_idx = split.complement_indices(fold);
        const auto test_idx = split.fold_indices(fold);

        nn::Tensor train_x(train_idx.size(), dim);
        std::vector<int> train_y(train_idx.size());
        for (size_t i = 0; i < train_idx.size(); ++i) {
            for (size_t j = 0; j < dim; ++j) train_x(i, j) = features(train_idx[i], j);
            train_y[i] = labels[train_idx[i]];
        }

        auto mlp_opts = options.mlp;
        mlp_opts.seed = substream_seed(options.seed, "ddi/fold" + std::to_string(fold));
        MlpClassifier mlp(dim, mlp_opts);
        mlp.fit(train_x, train_y);

        nn::Tensor test_x(test_idx.size(), dim);
        std::vector<int> test_y(test_idx.size());
        for (size_t i = 0; i < test_idx.size(); ++i) {
            for (size_t j = 0; j < dim; ++j) test_x(i, j) = features(test_idx[i], j);
            test_y[i] = labels[test_idx[i]];
        }
        const auto scores = mlp.predict_proba(test_x);
        for (size_t i = 0; i < test_idx.size(); ++i) pair_scores[test_idx[i]] = scores[i];

        result.fold_reports.push_back(
            compute_metrics(scores, test_y, TaskKind::classification, options.threshold));
    }
    result.aggregate = aggregate(result.fold_reports);

    // Rank non-interaction pairs by their held-out prediction.
    std::vector<size_t> negatives;
    for (size_t i = 0; i < pairs.size(); ++i) {
        if (labels[i] == 0) negatives.push_back(i);
    }
    std::sort(negatives.begin(), negatives.end(), [&](size_t a, size_t b) {
        if (pair_scores[a] != pair_scores[b]) return pair_scores[a] > pair_scores[b];
        return a < b;
    });
    const size_t keep = std::min(options.top_false_positives, negatives.size());
    for (size_t i = 0; i < keep; ++i) {
        const size_t idx = negatives[i];
        result.top_false_positives.push_back(
            {pairs[idx].id_a, pairs[idx].id_b, pair_scores[idx]});
    }
    return result;
}

} // namespace molembed::eval
