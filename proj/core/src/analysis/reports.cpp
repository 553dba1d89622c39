#include "molembed/analysis/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace molembed::analysis {

namespace {

// molecules x d activation matrix per capture point (layers then proj).
std::vector<nn::Tensor64> capture_activations(const ProbeSide& side,
                                              const std::vector<size_t>& rows) {
    const size_t n = rows.size();
    const size_t layers = static_cast<size_t>(side.cfg->num_layers);
    std::vector<nn::Tensor64> points;
    for (size_t l = 0; l < layers; ++l) {
        points.emplace_back(n, static_cast<size_t>(side.cfg->d_model));
    }
    points.emplace_back(n, static_cast<size_t>(side.cfg->d_proj));

    for (size_t i = 0; i < n; ++i) {
        const auto acts = encoder::encode_layer_activations(*side.cfg, *side.weights,
                                                            (*side.sequences)[rows[i]]);
        for (size_t p = 0; p < acts.size(); ++p) {
            for (size_t j = 0; j < acts[p].size(); ++j) {
                points[p](i, j) = static_cast<double>(acts[p][j]);
            }
        }
    }
    return points;
}

std::vector<std::string> point_labels(const ProbeSide& side) {
    std::vector<std::string> labels;
    for (int l = 1; l <= side.cfg->num_layers; ++l) {
        labels.push_back(side.label + ".L" + std::to_string(l));
    }
    labels.push_back(side.label + ".proj");
    return labels;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

encoder::Fingerprint single_token_fingerprint(const encoder::EncoderConfig& cfg,
                                              encoder::EncoderWeights& weights,
                                              const tokenize::Vocabulary& vocab,
                                              const std::string& token) {
    const auto id = vocab.id_of(token);
    if (!id.has_value()) {
        throw InvalidInputError("token_alignment: token '" + token + "' not in vocabulary");
    }
    tokenize::TokenSequence seq;
    seq.l_max = static_cast<size_t>(cfg.l_max);
    seq.ids = {tokenize::kBosId, *id, tokenize::kEosId};
    seq.mask = {1, 1, 1};
    return encoder::encode_sequence(cfg, weights, seq);
}

double cosine(const std::vector<float>& a, const std::vector<float>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0) {
        throw DegenerateInputError("token_alignment: zero-norm fingerprint");
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

} // namespace

LabeledMatrix layer_cka_report(const ProbeSide& side_a, const ProbeSide& side_b,
                               const CkaConfig& cfg) {
    cfg.validate();
    for (const ProbeSide* side : {&side_a, &side_b}) {
        if (!side->cfg || !side->weights || !side->sequences) {
            throw InvalidInputError("layer_cka_report: incomplete probe side");
        }
        if (side->sequences->size() < 3) {
            throw InvalidInputError("layer_cka_report: probe set smaller than 3");
        }
    }
    if (side_a.sequences->size() != side_b.sequences->size()) {
        throw InvalidInputError("layer_cka_report: probe sides must pair the same molecules");
    }

    // Same seeded subsample on both sides so row i keeps pairing molecules.
    std::vector<size_t> rows(side_a.sequences->size());
    for (size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    if (rows.size() > cfg.sample_size) {
        Rng rng = make_rng(cfg.seed, "cka/probe-sample");
        rng.shuffle(rows);
        rows.resize(cfg.sample_size);
        std::sort(rows.begin(), rows.end());
    }

    const auto acts_a = capture_activations(side_a, rows);
    const auto acts_b = capture_activations(side_b, rows);

    LabeledMatrix out;
    out.row_labels = point_labels(side_a);
    out.col_labels = point_labels(side_b);
    out.values = nn::Tensor64(acts_a.size(), acts_b.size());
    for (size_t i = 0; i < acts_a.size(); ++i) {
        for (size_t j = 0; j < acts_b.size(); ++j) {
            try {
                out.values(i, j) = cka(acts_a[i], acts_b[j], cfg);
            } catch (const Error& e) {
                throw Error(e.kind(), std::string(e.what()) + " (at grid cell " +
                                          out.row_labels[i] + " x " + out.col_labels[j] + ")");
            }
        }
    }
    return out;
}

LabeledMatrix token_alignment(const encoder::EncoderConfig& iupac_cfg,
                              encoder::EncoderWeights& iupac_weights,
                              const tokenize::Vocabulary& iupac_vocab,
                              const std::vector<std::string>& iupac_tokens,
                              const encoder::EncoderConfig& smiles_cfg,
                              encoder::EncoderWeights& smiles_weights,
                              const tokenize::Vocabulary& smiles_vocab,
                              const std::vector<std::string>& smiles_tokens) {
    if (iupac_tokens.empty() || smiles_tokens.empty()) {
        throw InvalidInputError("token_alignment: empty token list");
    }
    std::vector<encoder::Fingerprint> rows, cols;
    for (const auto& tok : iupac_tokens) {
        rows.push_back(single_token_fingerprint(iupac_cfg, iupac_weights, iupac_vocab, tok));
    }
    for (const auto& tok : smiles_tokens) {
        cols.push_back(single_token_fingerprint(smiles_cfg, smiles_weights, smiles_vocab, tok));
    }

    LabeledMatrix out;
    out.row_labels = iupac_tokens;
    out.col_labels = smiles_tokens;
    out.values = nn::Tensor64(rows.size(), cols.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        for (size_t j = 0; j < cols.size(); ++j) {
            out.values(i, j) = cosine(rows[i].values, cols[j].values);
        }
    }
    return out;
}

std::string matrix_to_csv(const LabeledMatrix& m) {
    std::ostringstream out;
    out << "";
    for (const auto& label : m.col_labels) out << "," << csv_quote(label);
    out << "\n";
    for (size_t i = 0; i < m.values.rows(); ++i) {
        out << csv_quote(m.row_labels[i]);
        for (size_t j = 0; j < m.values.cols(); ++j) out << "," << format_value(m.values(i, j));
        out << "\n";
    }
    return out.str();
}

std::string matrix_to_svg(const LabeledMatrix& m) {
    const size_t cell = 24, margin = 90;
    const size_t width = margin + cell * m.values.cols() + 10;
    const size_t height = margin + cell * m.values.rows() + 10;

    double lo = m.values.size() ? m.values[0] : 0.0;
    double hi = lo;
    for (size_t i = 0; i < m.values.size(); ++i) {
        lo = std::min(lo, m.values[i]);
        hi = std::max(hi, m.values[i]);
    }
    const double span = hi - lo > 1e-12 ? hi - lo : 1.0;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    for (size_t j = 0; j < m.col_labels.size(); ++j) {
        svg << "<text x=\"" << margin + j * cell + cell / 2 << "\" y=\"" << margin - 6
            << "\" font-size=\"9\" text-anchor=\"end\" transform=\"rotate(-60 "
            << margin + j * cell + cell / 2 << " " << margin - 6 << ")\">" << m.col_labels[j]
            << "</text>\n";
    }
    for (size_t i = 0; i < m.values.rows(); ++i) {
        svg << "<text x=\"" << margin - 6 << "\" y=\"" << margin + i * cell + cell / 2 + 4
            << "\" font-size=\"9\" text-anchor=\"end\">" << m.row_labels[i] << "</text>\n";
        for (size_t j = 0; j < m.values.cols(); ++j) {
            const double t = (m.values(i, j) - lo) / span;
            const int r = static_cast<int>(255 * t);
            const int b = static_cast<int>(255 * (1.0 - t));
            svg << "<rect x=\"" << margin + j * cell << "\" y=\"" << margin + i * cell
                << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"rgb(" << r << ","
                << std::min(r, b) << "," << b << ")\"><title>" << m.row_labels[i] << " x "
                << m.col_labels[j] << " = " << format_value(m.values(i, j))
                << "</title></rect>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace molembed::analysis
