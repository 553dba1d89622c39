#pragma once

#include <string>
#include <vector>

#include "molembed/encoder/config.hpp"
#include "molembed/nn/tape.hpp"
#include "molembed/rng.hpp"

namespace molembed::encoder {

// The projected embedding z of one molecule string.
struct Fingerprint {
    std::vector<float> values;
    std::string id;
    Branch branch = Branch::smiles;
};

template <typename T>
struct AttentionWeightsT {
    nn::ParamT<T> wq, bq, wk, bk, wv, bv, wo, bo;
};

template <typename T>
struct EncoderLayerWeightsT {
    AttentionWeightsT<T> attn;
    nn::ParamT<T> ln1_gain, ln1_bias;
    nn::ParamT<T> ffn_w1, ffn_b1, ffn_w2, ffn_b2;
    nn::ParamT<T> ln2_gain, ln2_bias;
};

// All learnable state of one branch. Matrices init normal(0, 0.02), biases
// zero, layernorm affines identity; BOS/EOS rows train like any token.
template <typename T>
struct EncoderWeightsT {
    nn::ParamT<T> token_embedding; // vocab_size x d_model
    nn::ParamT<T> position_embedding; // l_max x d_model
    std::vector<EncoderLayerWeightsT<T>> layers;
    nn::ParamT<T> proj_w; // d_model x d_proj
    nn::ParamT<T> proj_b;

    static EncoderWeightsT init(const EncoderConfig& cfg, Rng& rng, const std::string& prefix) {
        cfg.validate();
        constexpr double kStd = 0.02;
        const auto vs = static_cast<size_t>(cfg.vocab_size);
        const auto dm = static_cast<size_t>(cfg.d_model);
        const auto dff = static_cast<size_t>(cfg.d_ff);
        const auto lm = static_cast<size_t>(cfg.l_max);
        const auto dp = static_cast<size_t>(cfg.d_proj);

        EncoderWeightsT w;
        w.token_embedding =
            nn::ParamT<T>(prefix + ".tok_emb", nn::TensorT<T>::randn(vs, dm, rng, kStd));
        w.position_embedding =
            nn::ParamT<T>(prefix + ".pos_emb", nn::TensorT<T>::randn(lm, dm, rng, kStd));
        for (int l = 0; l < cfg.num_layers; ++l) {
            const std::string lp = prefix + ".layer" + std::to_string(l);
            EncoderLayerWeightsT<T> layer;
            layer.attn.wq = nn::ParamT<T>(lp + ".attn.wq", nn::TensorT<T>::randn(dm, dm, rng, kStd));
            layer.attn.bq = nn::ParamT<T>(lp + ".attn.bq", nn::TensorT<T>(1, dm));
            layer.attn.wk = nn::ParamT<T>(lp + ".attn.wk", nn::TensorT<T>::randn(dm, dm, rng, kStd));
            layer.attn.bk = nn::ParamT<T>(lp + ".attn.bk", nn::TensorT<T>(1, dm));
            layer.attn.wv = nn::ParamT<T>(lp + ".attn.wv", nn::TensorT<T>::randn(dm, dm, rng, kStd));
            layer.attn.bv = nn::ParamT<T>(lp + ".attn.bv", nn::TensorT<T>(1, dm));
            layer.attn.wo = nn::ParamT<T>(lp + ".attn.wo", nn::TensorT<T>::randn(dm, dm, rng, kStd));
            layer.attn.bo = nn::ParamT<T>(lp + ".attn.bo", nn::TensorT<T>(1, dm));
            layer.ln1_gain = nn::ParamT<T>(lp + ".ln1.gain", nn::TensorT<T>::full(1, dm, T(1)));
            layer.ln1_bias = nn::ParamT<T>(lp + ".ln1.bias", nn::TensorT<T>(1, dm));
            layer.ffn_w1 = nn::ParamT<T>(lp + ".ffn.w1", nn::TensorT<T>::randn(dm, dff, rng, kStd));
            layer.ffn_b1 = nn::ParamT<T>(lp + ".ffn.b1", nn::TensorT<T>(1, dff));
            layer.ffn_w2 = nn::ParamT<T>(lp + ".ffn.w2", nn::TensorT<T>::randn(dff, dm, rng, kStd));
            layer.ffn_b2 = nn::ParamT<T>(lp + ".ffn.b2", nn::TensorT<T>(1, dm));
            layer.ln2_gain = nn::ParamT<T>(lp + ".ln2.gain", nn::TensorT<T>::full(1, dm, T(1)));
            layer.ln2_bias = nn::ParamT<T>(lp + ".ln2.bias", nn::TensorT<T>(1, dm));
            w.layers.push_back(std::move(layer));
        }
        w.proj_w = nn::ParamT<T>(prefix + ".proj.w", nn::TensorT<T>::randn(dm, dp, rng, kStd));
        w.proj_b = nn::ParamT<T>(prefix + ".proj.b", nn::TensorT<T>(1, dp));
        return w;
    }

    std::vector<nn::ParamT<T>*> all_params() {
        std::vector<nn::ParamT<T>*> out = {&token_embedding, &position_embedding};
        for (auto& layer : layers) {
            for (nn::ParamT<T>* p :
                 {&layer.attn.wq, &layer.attn.bq, &layer.attn.wk, &layer.attn.bk, &layer.attn.wv,
                  &layer.attn.bv, &layer.attn.wo, &layer.attn.bo, &layer.ln1_gain, &layer.ln1_bias,
                  &layer.ffn_w1, &layer.ffn_b1, &layer.ffn_w2, &layer.ffn_b2, &layer.ln2_gain,
                  &layer.ln2_bias}) {
                out.push_back(p);
            }
        }
        out.push_back(&proj_w);
        out.push_back(&proj_b);
        return out;
    }

    void zero_grads() {
        for (auto* p : all_params()) p->zero_grad();
    }

    template <typename U>
    EncoderWeightsT<U> cast() const {
        EncoderWeightsT<U> out;
        out.token_embedding = token_embedding.template cast<U>();
        out.position_embedding = position_embedding.template cast<U>();
        for (const auto& layer : layers) {
            EncoderLayerWeightsT<U> l;
            l.attn.wq = layer.attn.wq.template cast<U>();
            l.attn.bq = layer.attn.bq.template cast<U>();
            l.attn.wk = layer.attn.wk.template cast<U>();
            l.attn.bk = layer.attn.bk.template cast<U>();
            l.attn.wv = layer.attn.wv.template cast<U>();
            l.attn.bv = layer.attn.bv.template cast<U>();
            l.attn.wo = layer.attn.wo.template cast<U>();
            l.attn.bo = layer.attn.bo.template cast<U>();
            l.ln1_gain = layer.ln1_gain.template cast<U>();
            l.ln1_bias = layer.ln1_bias.template cast<U>();
            l.ffn_w1 = layer.ffn_w1.template cast<U>();
            l.ffn_b1 = layer.ffn_b1.template cast<U>();
            l.ffn_w2 = layer.ffn_w2.template cast<U>();
            l.ffn_b2 = layer.ffn_b2.template cast<U>();
            l.ln2_gain = layer.ln2_gain.template cast<U>();
            l.ln2_bias = layer.ln2_bias.template cast<U>();
            out.layers.push_back(std::move(l));
        }
        out.proj_w = proj_w.template cast<U>();
        out.proj_b = proj_b.template cast<U>();
        return out;
    }
};

using EncoderWeights = EncoderWeightsT<float>;

} // namespace molembed::encoder
