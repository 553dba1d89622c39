#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "molembed/tokenize/vocabulary.hpp"

namespace molembed::tokenize {

// Byte-pair encoder over Unicode scalar values of the raw string (no case
// folding; SMILES is case-sensitive). Training greedily merges the most
// frequent adjacent pair until the vocabulary budget is reached or no pair
// occurs at least twice; equal counts break to the lexicographically
// smaller (left, right) pair, which makes training deterministic.
class BpeModel {
public:
    // target_vocab_size counts specials + base alphabet + merged tokens.
    static BpeModel train(const std::vector<std::string>& corpus, size_t target_vocab_size);

    // Total on arbitrary bytes: characters outside the base alphabet encode
    // as UNK. BOS/EOS are added and truncation keeps the prefix plus a
    // terminal EOS.
    TokenSequence encode(std::string_view s, size_t l_max) const;

    // Content-token strings (unknown characters appear as the UNK literal).
    std::vector<std::string> tokenize(std::string_view s) const;

    // Concatenation of non-special tokens; reproduces the input exactly for
    // untruncated sequences without UNK.
    std::string decode(const TokenSequence& seq) const;

    const Vocabulary& vocab() const noexcept { return vocab_; }
    const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
    const std::vector<std::pair<std::string, std::string>>& merges() const noexcept {
        return merges_;
    }

    std::string to_json() const;
    static BpeModel from_json(const std::string& text);
    void save(const std::string& path) const;
    static BpeModel load(const std::string& path);

private:
    BpeModel() = default;

    std::vector<std::string> apply_merges(std::vector<std::string> tokens) const;

    std::vector<std::string> alphabet_;
    std::unordered_set<std::string> alphabet_set_;
    std::vector<std::pair<std::string, std::string>> merges_;
    Vocabulary vocab_;
};

} // namespace molembed::tokenize
