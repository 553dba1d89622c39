#pragma once

#include <string>
#include <vector>

#include "molembed/analysis/cka.hpp"
#include "molembed/encoder/encoder.hpp"

namespace molembed::analysis {

// Labeled score grid; rows/cols carry layer or token labels for CSV/SVG.
struct LabeledMatrix {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    nn::Tensor64 values;
};

// One side of a layer-CKA comparison: a branch (or standalone model) plus
// the probe sequences to drive through it.
struct ProbeSide {
    const encoder::EncoderConfig* cfg = nullptr;
    encoder::EncoderWeights* weights = nullptr;
    const std::vector<tokenize::TokenSequence>* sequences = nullptr;
    std::string label; // e.g. "sl" or "ip"
};

// Per-sequence masked-mean activations at each layer's post-layernorm
// output plus the projection; rows are molecules. Result element (i, j) is
// CKA(side_a layer i, side_b layer j); labels are "<side>.L1".."<side>.proj".
LabeledMatrix layer_cka_report(const ProbeSide& side_a, const ProbeSide& side_b,
                               const CkaConfig& cfg);

// Cosine matrix between single-token fingerprints: each token is embedded
// as [BOS, token, EOS] through its branch. Unknown tokens are rejected by
// name.
LabeledMatrix token_alignment(const encoder::EncoderConfig& iupac_cfg,
                              encoder::EncoderWeights& iupac_weights,
                              const tokenize::Vocabulary& iupac_vocab,
                              const std::vector<std::string>& iupac_tokens,
                              const encoder::EncoderConfig& smiles_cfg,
                              encoder::EncoderWeights& smiles_weights,
                              const tokenize::Vocabulary& smiles_vocab,
                              const std::vector<std::string>& smiles_tokens);

// CSV with a leading header row/column of labels.
std::string matrix_to_csv(const LabeledMatrix& m);

// Minimal self-contained SVG heat map (blue = low, red = high).
std::string matrix_to_svg(const LabeledMatrix& m);

} // namespace molembed::analysis
