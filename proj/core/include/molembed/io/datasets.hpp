#pragma once

#include <string>
#include <vector>

#include "molembed/errors.hpp"
#include "molembed/eval/ddi.hpp"

namespace molembed::io {

// Labeled molecule table from CSV with header id,smiles[,iupac],<label...>;
// every column after smiles (and the optional iupac) is a label column.
struct LabeledTable {
    std::vector<std::string> ids;
    std::vector<std::string> smiles;
    std::vector<std::string> iupac; // empty when the column is absent
    std::vector<std::string> label_names;
    std::vector<std::vector<double>> labels; // row-major, one row per molecule

    size_t size() const { return ids.size(); }
};

LabeledTable parse_labeled_csv_text(const std::string& text);
LabeledTable parse_labeled_csv(const std::string& path);

// DDI pairs from CSV with header id_a,id_b,label.
std::vector<eval::DdiPair> parse_ddi_pairs_text(const std::string& text);
std::vector<eval::DdiPair> parse_ddi_pairs(const std::string& path);
void write_ddi_pairs(const std::string& path, const std::vector<eval::DdiPair>& pairs);

} // namespace molembed::io
