#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "molembed/tokenize/bpe.hpp"
#include "molembed/tokenize/iupac.hpp"

namespace molembed::tokenize {

// Exact token statistics over a corpus: per-string token-count histogram
// (content tokens, specials excluded) and token frequencies.
struct CorpusStats {
    std::map<size_t, size_t> length_histogram;
    std::map<std::string, size_t> token_frequency;
    size_t corpus_size = 0;

    struct TokenCount {
        std::string token;
        size_t count;
    };

    // Top-k by count descending, ties by token ascending. alphabetic_only
    // restricts to tokens made of ASCII letters.
    std::vector<TokenCount> top_k(size_t k, bool alphabetic_only = false) const;
};

CorpusStats corpus_stats(const std::vector<std::string>& corpus, const BpeModel& tokenizer);
CorpusStats corpus_stats(const std::vector<std::string>& corpus, const IupacRuleSet& tokenizer);

} // namespace molembed::tokenize
