#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "molembed/io/pair_corpus.hpp"

namespace molembed::io {

// Synthetic two-rendering grammar standing in for real molecule pairs. A
// latent "molecule" is a sequence of symbols from a small alphabet; the
// terse rendering concatenates one-character codes (SMILES analog) and the
// wordy rendering joins morphemes with '-' (IUPAC analog). The morphemes
// are all literals of the builtin IUPAC rule table, and the morpheme->code
// map is the planted ground truth for token-alignment evaluation.
struct SynthGrammar {
    struct Symbol {
        std::string code;     // single character, terse rendering
        std::string morpheme; // rule-table literal, wordy rendering
    };

    static const std::vector<Symbol>& symbols();
    static constexpr size_t min_length = 4;
    static constexpr size_t max_length = 9;
};

struct SynthCorpus {
    PairCorpus pairs;
    // morpheme -> code, one row per grammar symbol.
    std::vector<std::pair<std::string, std::string>> correspondence;
};

// Deterministic in (seed, size); latent sequences are globally unique so
// every rendering is distinct.
SynthCorpus synth_corpus(uint64_t seed, size_t size);

void write_correspondence(const std::string& path,
                          const std::vector<std::pair<std::string, std::string>>& rows);
std::vector<std::pair<std::string, std::string>> read_correspondence(const std::string& path);

} // namespace molembed::io
