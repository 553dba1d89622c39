#include "molembed/train/infonce.hpp"

namespace molembed::train {

InfoNceOutput infonce_batch(const std::vector<encoder::Fingerprint>& z_smiles,
                            const std::vector<encoder::Fingerprint>& z_iupac, double tau) {
    if (z_smiles.empty() || z_smiles.size() != z_iupac.size()) {
        throw InvalidInputError("infonce: need N >= 1 aligned fingerprint pairs, got " +
                                std::to_string(z_smiles.size()) + "/" +
                                std::to_string(z_iupac.size()));
    }
    const size_t dim = z_smiles.front().values.size();
    for (const auto& list : {&z_smiles, &z_iupac}) {
        for (const auto& fp : *list) {
            if (fp.values.size() != dim) {
                throw ShapeError("infonce: fingerprint dim " + std::to_string(fp.values.size()) +
                                 " != " + std::to_string(dim));
            }
        }
    }

    nn::Tape64 tape;
    std::vector<int> sl_nodes, ip_nodes;
    for (const auto& fp : z_smiles) {
        nn::Tensor64 row(1, dim);
        for (size_t j = 0; j < dim; ++j) row(0, j) = fp.values[j];
        sl_nodes.push_back(tape.constant(std::move(row)));
    }
    for (const auto& fp : z_iupac) {
        nn::Tensor64 row(1, dim);
        for (size_t j = 0; j < dim; ++j) row(0, j) = fp.values[j];
        ip_nodes.push_back(tape.constant(std::move(row)));
    }

    const InfoNceNodes nodes = infonce_on_tape(tape, sl_nodes, ip_nodes, tau);
    InfoNceOutput out;
    out.loss = tape.value(nodes.loss)(0, 0);
    out.loss_smiles = tape.value(nodes.loss_smiles)(0, 0);
    out.loss_iupac = tape.value(nodes.loss_iupac)(0, 0);
    out.similarity = tape.value(nodes.similarity);
    out.tau = tau;
    return out;
}

} // namespace molembed::train
