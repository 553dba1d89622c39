#pragma once

#include <numeric>
#include <vector>

#include "molembed/encoder/weights.hpp"
#include "molembed/nn/ops.hpp"

namespace molembed::train {

// Loss and diagnostics for one batch. `similarity` holds
// S[i][j] = cos(z_sl_i, z_ip_j) / tau.
struct InfoNceOutput {
    double loss = 0.0;
    double loss_smiles = 0.0; // mean over rows (SMILES -> IUPAC direction)
    double loss_iupac = 0.0;  // mean over columns
    nn::Tensor64 similarity;
    double tau = 0.0;
};

// Nodes returned by the on-tape construction so the trainer can log the
// direction components from the same graph that produces gradients.
struct InfoNceNodes {
    int loss = -1;
    int loss_smiles = -1;
    int loss_iupac = -1;
    int similarity = -1;
};

// Symmetric InfoNCE over in-batch negatives. Both fingerprint lists are
// row-stacked, L2-normalized inside the loss (the stored fingerprints stay
// unnormalized), and scored with cosine/tau; row i's positive is column i.
template <typename T>
InfoNceNodes infonce_on_tape(nn::TapeT<T>& tape, const std::vector<int>& z_smiles,
                             const std::vector<int>& z_iupac, double tau) {
    if (z_smiles.empty() || z_smiles.size() != z_iupac.size()) {
        throw InvalidInputError("infonce: need N >= 1 aligned fingerprint pairs, got " +
                                std::to_string(z_smiles.size()) + "/" +
                                std::to_string(z_iupac.size()));
    }
    if (!(tau > 0.0)) throw InvalidInputError("infonce: tau must be > 0");

    const int sl = nn::l2_normalize_rows(tape, nn::concat_rows(tape, z_smiles));
    const int ip = nn::l2_normalize_rows(tape, nn::concat_rows(tape, z_iupac));
    const int logits = nn::scale(tape, nn::matmul(tape, sl, nn::transpose(tape, ip)), 1.0 / tau);

    std::vector<int32_t> diagonal(z_smiles.size());
    std::iota(diagonal.begin(), diagonal.end(), 0);

    InfoNceNodes nodes;
    nodes.similarity = logits;
    nodes.loss_smiles = nn::mean_all(tape, nn::cross_entropy_rows(tape, logits, diagonal));
    nodes.loss_iupac = nn::mean_all(
        tape, nn::cross_entropy_rows(tape, nn::transpose(tape, logits), diagonal));
    const int sum = nn::add(tape, nodes.loss_smiles, nodes.loss_iupac);
    nodes.loss = nn::scale(tape, sum, 0.5);
    return nodes;
}

// Convenience evaluation from plain fingerprints (no gradient consumers).
InfoNceOutput infonce_batch(const std::vector<encoder::Fingerprint>& z_smiles,
                            const std::vector<encoder::Fingerprint>& z_iupac, double tau);

} // namespace molembed::train
