#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "molembed/encoder/config.hpp"
#include "molembed/encoder/weights.hpp"
#include "molembed/nn/ops.hpp"
#include "molembed/tokenize/vocabulary.hpp"

namespace molembed::encoder {

// Additive pre-softmax attention mask: 0 on real key columns, a large
// negative on padded ones (exp underflows to exactly 0, so pads never
// receive attention weight).
template <typename T>
nn::TensorT<T> attention_mask_bias(const std::vector<uint8_t>& mask) {
    const size_t n = mask.size();
    nn::TensorT<T> bias(n, n);
    for (size_t j = 0; j < n; ++j) {
        if (mask[j]) continue;
        for (size_t i = 0; i < n; ++i) bias(i, j) = static_cast<T>(-1e9);
    }
    return bias;
}

// Scaled dot-product attention, heads concatenated, before the output
// projection: a single real token attends only to itself, so the result
// equals its V projection.
template <typename T>
int attention_core(nn::TapeT<T>& tape, const EncoderConfig& cfg, AttentionWeightsT<T>& w,
                   int hidden, const std::vector<uint8_t>& mask) {
    const size_t d_model = static_cast<size_t>(cfg.d_model);
    const size_t heads = static_cast<size_t>(cfg.num_heads);
    const size_t d_head = d_model / heads;
    const auto& H = tape.value(hidden);
    if (H.cols() != d_model) {
        throw ShapeError("attention: hidden " + H.shape_str() + " vs d_model " +
                         std::to_string(cfg.d_model));
    }

    const int q = nn::add_row_bias(tape, nn::matmul(tape, hidden, tape.parameter(w.wq)),
                                   tape.parameter(w.bq));
    const int k = nn::add_row_bias(tape, nn::matmul(tape, hidden, tape.parameter(w.wk)),
                                   tape.parameter(w.bk));
    const int v = nn::add_row_bias(tape, nn::matmul(tape, hidden, tape.parameter(w.wv)),
                                   tape.parameter(w.bv));

    const int mask_bias = tape.constant(attention_mask_bias<T>(mask));
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(d_head));

    std::vector<int> head_outputs;
    head_outputs.reserve(heads);
    for (size_t h = 0; h < heads; ++h) {
        const size_t c0 = h * d_head, c1 = (h + 1) * d_head;
        const int qh = nn::slice_cols(tape, q, c0, c1);
        const int kh = nn::slice_cols(tape, k, c0, c1);
        const int vh = nn::slice_cols(tape, v, c0, c1);
        int scores = nn::matmul(tape, qh, nn::transpose(tape, kh));
        scores = nn::scale(tape, scores, inv_sqrt);
        scores = nn::add(tape, scores, mask_bias);
        const int attn = nn::softmax_rows(tape, scores);
        head_outputs.push_back(nn::matmul(tape, attn, vh));
    }
    return nn::concat_cols(tape, head_outputs);
}

// Full attention sub-layer: core -> output projection -> residual ->
// layernorm with affine (post-LN ordering).
template <typename T>
int multi_head_attention(nn::TapeT<T>& tape, const EncoderConfig& cfg, EncoderLayerWeightsT<T>& w,
                         int hidden, const std::vector<uint8_t>& mask, Rng* dropout_rng = nullptr) {
    const int core = attention_core(tape, cfg, w.attn, hidden, mask);
    int out = nn::add_row_bias(tape, nn::matmul(tape, core, tape.parameter(w.attn.wo)),
                               tape.parameter(w.attn.bo));
    if (dropout_rng && cfg.dropout > 0.0) out = nn::dropout(tape, out, cfg.dropout, *dropout_rng);
    const int residual = nn::add(tape, hidden, out);
    const int normed = nn::layernorm_rows(tape, residual, cfg.layernorm_eps);
    return nn::add_row_bias(tape, nn::mul_row_vec(tape, normed, tape.parameter(w.ln1_gain)),
                            tape.parameter(w.ln1_bias));
}

template <typename T>
int feed_forward_block(nn::TapeT<T>& tape, const EncoderConfig& cfg, EncoderLayerWeightsT<T>& w,
                       int hidden, Rng* dropout_rng = nullptr) {
    int ff = nn::add_row_bias(tape, nn::matmul(tape, hidden, tape.parameter(w.ffn_w1)),
                              tape.parameter(w.ffn_b1));
    ff = nn::gelu(tape, ff);
    ff = nn::add_row_bias(tape, nn::matmul(tape, ff, tape.parameter(w.ffn_w2)),
                          tape.parameter(w.ffn_b2));
    if (dropout_rng && cfg.dropout > 0.0) ff = nn::dropout(tape, ff, cfg.dropout, *dropout_rng);
    const int residual = nn::add(tape, hidden, ff);
    const int normed = nn::layernorm_rows(tape, residual, cfg.layernorm_eps);
    return nn::add_row_bias(tape, nn::mul_row_vec(tape, normed, tape.parameter(w.ln2_gain)),
                            tape.parameter(w.ln2_bias));
}

// Per-layer pooled activations captured for representation analysis:
// masked mean of each layer's post-layernorm output, then the projection.
template <typename T>
struct EncodeCapture {
    std::vector<int> layer_pooled; // one node per encoder layer
    int projection = -1;
};

// Builds z = project(masked_mean(encoder_layers(tok_emb[ids] + pos_emb)))
// on the tape and returns the 1 x d_proj node.
template <typename T>
int encode_on_tape(nn::TapeT<T>& tape, const EncoderConfig& cfg, EncoderWeightsT<T>& w,
                   const tokenize::TokenSequence& seq, EncodeCapture<T>* capture = nullptr,
                   Rng* dropout_rng = nullptr) {
    if (seq.ids.empty()) throw InvalidInputError("encode: empty sequence");
    if (seq.ids.size() > static_cast<size_t>(cfg.l_max)) {
        throw LengthError("encode: sequence length " + std::to_string(seq.ids.size()) +
                          " exceeds l_max " + std::to_string(cfg.l_max));
    }
    for (const int32_t id : seq.ids) {
        if (id < 0 || id >= cfg.vocab_size) {
            throw VocabError("encode: token id " + std::to_string(id) + " outside vocab of " +
                             std::to_string(cfg.vocab_size));
        }
    }

    std::vector<int32_t> positions(seq.ids.size());
    std::iota(positions.begin(), positions.end(), 0);

    const int tok = nn::embedding_lookup(tape, tape.parameter(w.token_embedding), seq.ids);
    const int pos = nn::embedding_lookup(tape, tape.parameter(w.position_embedding), positions);
    int hidden = nn::add(tape, tok, pos);

    for (auto& layer : w.layers) {
        hidden = multi_head_attention(tape, cfg, layer, hidden, seq.mask, dropout_rng);
        hidden = feed_forward_block(tape, cfg, layer, hidden, dropout_rng);
        if (capture) {
            capture->layer_pooled.push_back(nn::masked_mean_rows(tape, hidden, seq.mask));
        }
    }

    const int pooled = nn::masked_mean_rows(tape, hidden, seq.mask);
    const int z = nn::add_row_bias(tape, nn::matmul(tape, pooled, tape.parameter(w.proj_w)),
                                   tape.parameter(w.proj_b));
    if (capture) capture->projection = z;
    return z;
}

// Inference-only convenience: fresh tape, no gradients.
inline Fingerprint encode_sequence(const EncoderConfig& cfg, EncoderWeights& w,
                                   const tokenize::TokenSequence& seq, std::string id = "",
                                   Branch branch = Branch::smiles) {
    nn::Tape tape;
    const int z = encode_on_tape<float>(tape, cfg, w, seq);
    const auto& v = tape.value(z);
    Fingerprint fp;
    fp.values.assign(v.data(), v.data() + v.size());
    fp.id = std::move(id);
    fp.branch = branch;
    return fp;
}

// Pooled activations per layer plus the projection output (num_layers + 1
// rows of a layer-major matrix list).
inline std::vector<std::vector<float>> encode_layer_activations(const EncoderConfig& cfg,
                                                                EncoderWeights& w,
                                                                const tokenize::TokenSequence& seq) {
    nn::Tape tape;
    EncodeCapture<float> capture;
    encode_on_tape<float>(tape, cfg, w, seq, &capture);
    std::vector<std::vector<float>> out;
    for (const int node : capture.layer_pooled) {
        const auto& v = tape.value(node);
        out.emplace_back(v.data(), v.data() + v.size());
    }
    const auto& z = tape.value(capture.projection);
    out.emplace_back(z.data(), z.data() + z.size());
    return out;
}

} // namespace molembed::encoder
