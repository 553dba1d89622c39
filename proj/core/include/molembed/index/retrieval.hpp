#pragma once

#include <map>
#include <string>
#include <vector>

#include "molembed/index/embedding_store.hpp"

namespace molembed::index {

struct RetrievalHit {
    std::string id;
    double score = 0.0;
    size_t row = 0;
};

// Ranked exact-cosine matches, scores non-increasing, ties broken by
// ascending store row.
struct RetrievalResult {
    std::string query_id;
    std::vector<RetrievalHit> hits;
};

// Exact top-K scan (parallel over row chunks for large stores). K is
// clamped to the store size. Scores are cosines accumulated in double.
RetrievalResult topk_query(const EmbeddingStore& store, std::span<const float> query, size_t k,
                           std::string query_id = "");

struct RecallReport {
    std::string direction;
    std::vector<size_t> ks;
    std::vector<double> recall; // aligned with ks
    size_t query_count = 0;
};

// recall@K = fraction of queries whose ground-truth counterpart appears in
// the top K. Every query id must map to a candidate id present in the
// candidate store.
RecallReport recall_eval(const EmbeddingStore& queries, const EmbeddingStore& candidates,
                         const std::map<std::string, std::string>& ground_truth,
                         const std::vector<size_t>& ks, std::string direction);

// Identity ground truth: each query id is its own counterpart.
RecallReport recall_eval_identity(const EmbeddingStore& queries, const EmbeddingStore& candidates,
                                  const std::vector<size_t>& ks, std::string direction);

} // namespace molembed::index
