#include "molembed/index/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace molembed::index {

namespace {

// Rows with zero norm score 0 against any query.
void score_range(const EmbeddingStore& store, std::span<const float> query, double query_norm,
                 size_t begin, size_t end, std::vector<double>& scores) {
    const auto& norms = store.norms();
    for (size_t i = begin; i < end; ++i) {
        const auto row = store.row(i);
        double dot = 0.0;
        for (size_t j = 0; j < row.size(); ++j) {
            dot += static_cast<double>(query[j]) * static_cast<double>(row[j]);
        }
        scores[i] = norms[i] > 0.0 ? dot / (query_norm * norms[i]) : 0.0;
    }
}

constexpr size_t kParallelThreshold = 8192;

} // namespace

RetrievalResult topk_query(const EmbeddingStore& store, std::span<const float> query, size_t k,
                           std::string query_id) {
    if (query.size() != store.dim()) {
        throw ShapeError("topk_query: query dim " + std::to_string(query.size()) +
                         " != store dim " + std::to_string(store.dim()));
    }
    if (k == 0) throw InvalidInputError("topk_query: K must be >= 1");

    double qn = 0.0;
    for (const float x : query) qn += static_cast<double>(x) * static_cast<double>(x);
    qn = std::sqrt(qn);
    if (qn == 0.0) throw DegenerateInputError("topk_query: zero-norm query");

    const size_t n = store.count();
    std::vector<double> scores(n);
    const unsigned hw = std::thread::hardware_concurrency();
    if (n >= kParallelThreshold && hw > 1) {
        const size_t workers = std::min<size_t>(hw, 8);
        const size_t chunk = (n + workers - 1) / workers;
        std::vector<std::thread> threads;
        for (size_t w = 0; w < workers; ++w) {
            const size_t begin = w * chunk;
            const size_t end = std::min(n, begin + chunk);
            if (begin >= end) break;
            threads.emplace_back(
                [&, begin, end] { score_range(store, query, qn, begin, end, scores); });
        }
        for (auto& t : threads) t.join();
    } else {
        score_range(store, query, qn, 0, n, scores);
    }

    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    const size_t keep = std::min(k, n);
    std::partial_sort(order.begin(), order.begin() + static_cast<ptrdiff_t>(keep), order.end(),
                      [&](size_t a, size_t b) {
                          if (scores[a] != scores[b]) return scores[a] > scores[b];
                          return a < b;
                      });

    RetrievalResult result;
    result.query_id = std::move(query_id);
    result.hits.reserve(keep);
    for (size_t i = 0; i < keep; ++i) {
        result.hits.push_back({store.id(order[i]), scores[order[i]], order[i]});
    }
    return result;
}

RecallReport recall_eval(const EmbeddingStore& queries, const EmbeddingStore& candidates,
                         const std::map<std::string, std::string>& ground_truth,
                         const std::vector<size_t>& ks, std::string direction) {
    if (ks.empty()) throw InvalidInputError("recall_eval: no K values");
    for (size_t i = 0; i < queries.count(); ++i) {
        const auto it = ground_truth.find(queries.id(i));
        if (it == ground_truth.end()) {
            throw InvalidInputError("recall_eval: no ground truth for query id '" +
                                    queries.id(i) + "'");
        }
        if (!candidates.has_id(it->second)) {
            throw InvalidInputError("recall_eval: ground-truth id '" + it->second +
                                    "' missing from candidate store");
        }
    }

    const size_t k_max = *std::max_element(ks.begin(), ks.end());
    std::vector<size_t> hits_at(ks.size(), 0);
    for (size_t i = 0; i < queries.count(); ++i) {
        const auto result = topk_query(candidates, queries.row(i), k_max, queries.id(i));
        const std::string& truth = ground_truth.at(queries.id(i));
        size_t rank = k_max; // first position of the truth, if retrieved
        for (size_t r = 0; r < result.hits.size(); ++r) {
            if (result.hits[r].id == truth) {
                rank = r;
                break;
            }
        }
        for (size_t ki = 0; ki < ks.size(); ++ki) {
            if (rank < ks[ki]) ++hits_at[ki];
        }
    }

    RecallReport report;
    report.direction = std::move(direction);
    report.ks = ks;
    report.query_count = queries.count();
    for (const size_t h : hits_at) {
        report.recall.push_back(queries.count() > 0
                                    ? static_cast<double>(h) / static_cast<double>(queries.count())
                                    : 0.0);
    }
    return report;
}

RecallReport recall_eval_identity(const EmbeddingStore& queries, const EmbeddingStore& candidates,
                                  const std::vector<size_t>& ks, std::string direction) {
    std::map<std::string, std::string> truth;
    for (const auto& id : queries.ids()) truth[id] = id;
    return recall_eval(queries, candidates, truth, ks, std::move(direction));
}

} // namespace molembed::index
