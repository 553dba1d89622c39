#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "molembed/tokenize/vocabulary.hpp"

namespace molembed::tokenize {

// Rule-driven splitter for IUPAC-style names. The table is an ordered list
// of (pattern class, literal set); scanning is longest-match over all
// classes with equal lengths resolved by class priority, and a fallback
// single-character rule makes tokenization total. Every character of the
// input is consumed exactly once, so concatenating the tokens reproduces
// the input byte-exactly.
class IupacRuleSet {
public:
    struct Rule {
        std::string pattern_class;
        std::vector<std::string> literals;
    };

    static const std::vector<std::string>& known_classes();

    // The rule table shipped with the toolkit (~90 literals: multipliers,
    // substituent prefixes, root/trivial names, locant digits, suffixes,
    // punctuation).
    static IupacRuleSet builtin();
    static IupacRuleSet from_rules(std::vector<Rule> rules);

    std::vector<std::string> tokenize(std::string_view s) const;
    TokenSequence encode(std::string_view s, size_t l_max) const;
    std::string decode(const TokenSequence& seq) const;

    const std::vector<Rule>& rules() const noexcept { return rules_; }
    const Vocabulary& vocab() const noexcept { return vocab_; }

    std::string to_json() const;
    static IupacRuleSet from_json(const std::string& text);
    void save(const std::string& path) const;
    static IupacRuleSet load(const std::string& path);

private:
    IupacRuleSet() = default;
    void build_vocab();

    std::vector<Rule> rules_;
    Vocabulary vocab_;
};

} // namespace molembed::tokenize
