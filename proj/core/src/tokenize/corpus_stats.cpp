#include "molembed/tokenize/corpus_stats.hpp"

#include <algorithm>
#include <cctype>

namespace molembed::tokenize {

namespace {

template <typename Tokenizer>
CorpusStats stats_impl(const std::vector<std::string>& corpus, const Tokenizer& tokenizer) {
    if (corpus.empty()) throw InvalidInputError("corpus_stats: empty corpus");
    CorpusStats stats;
    stats.corpus_size = corpus.size();
    for (const auto& line : corpus) {
        const auto tokens = tokenizer.tokenize(line);
        ++stats.length_histogram[tokens.size()];
        for (const auto& tok : tokens) ++stats.token_frequency[tok];
    }
    return stats;
}

bool is_alphabetic(const std::string& token) {
    if (token.empty()) return false;
    return std::all_of(token.begin(), token.end(), [](unsigned char c) {
        return std::isalpha(c) != 0;
    });
}

} // namespace

std::vector<CorpusStats::TokenCount> CorpusStats::top_k(size_t k, bool alphabetic_only) const {
    std::vector<TokenCount> all;
    for (const auto& [token, count] : token_frequency) {
        if (alphabetic_only && !is_alphabetic(token)) continue;
        all.push_back({token, count});
    }
    std::sort(all.begin(), all.end(), [](const TokenCount& a, const TokenCount& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.token < b.token;
    });
    if (all.size() > k) all.resize(k);
    return all;
}

CorpusStats corpus_stats(const std::vector<std::string>& corpus, const BpeModel& tokenizer) {
    return stats_impl(corpus, tokenizer);
}

CorpusStats corpus_stats(const std::vector<std::string>& corpus, const IupacRuleSet& tokenizer) {
    return stats_impl(corpus, tokenizer);
}

} // namespace molembed::tokenize
