#pragma once

#include <string>
#include <vector>

#include "molembed/errors.hpp"

namespace molembed::io {

struct PairRecord {
    std::string id;
    std::string smiles;
    std::string iupac;
};

// Aligned SMILES/IUPAC corpus. File form is strict TSV with header
// id<TAB>smiles<TAB>iupac; CRLF is accepted and a trailing blank line is
// ignored. Parse failures carry 1-based line numbers.
struct PairCorpus {
    std::vector<PairRecord> records;

    size_t size() const { return records.size(); }

    std::vector<std::string> smiles_column() const;
    std::vector<std::string> iupac_column() const;
};

PairCorpus parse_pair_corpus_text(const std::string& text);
PairCorpus parse_pair_corpus(const std::string& path);
void write_pair_corpus(const std::string& path, const PairCorpus& corpus);

// Corpus file: UTF-8 text, one string per line (used by train-bpe/stats).
std::vector<std::string> read_lines(const std::string& path);

} // namespace molembed::io
