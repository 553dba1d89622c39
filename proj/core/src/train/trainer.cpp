#include "molembed/train/trainer.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "molembed/train/batch_queue.hpp"

namespace molembed::train {

namespace {

std::vector<nn::Param*> collect_params(encoder::EncoderWeights& smiles,
                                       encoder::EncoderWeights& iupac) {
    std::vector<nn::Param*> params = smiles.all_params();
    for (nn::Param* p : iupac.all_params()) params.push_back(p);
    return params;
}

struct Batch {
    int epoch = 0;
    std::vector<size_t> indices;
};

} // namespace

void TokenizedPairs::validate() const {
    if (ids.size() != smiles.size() || ids.size() != iupac.size()) {
        throw InvalidInputError("pair corpus: ids/smiles/iupac lengths differ");
    }
    if (ids.empty()) throw InvalidInputError("pair corpus: empty");
}

ContrastiveTrainer::ContrastiveTrainer(const encoder::EncoderConfig& smiles_cfg,
                                       encoder::EncoderWeights& smiles,
                                       const encoder::EncoderConfig& iupac_cfg,
                                       encoder::EncoderWeights& iupac, TrainConfig cfg)
    : smiles_cfg_(smiles_cfg),
      iupac_cfg_(iupac_cfg),
      smiles_(smiles),
      iupac_(iupac),
      cfg_(cfg),
      params_(collect_params(smiles, iupac)),
      optimizer_(params_, nn::AdamWConfig{.lr = cfg.lr, .weight_decay = cfg.weight_decay}) {
    cfg_.validate();
    smiles_cfg_.validate();
    iupac_cfg_.validate();
    if (smiles_cfg_.d_proj != iupac_cfg_.d_proj) {
        throw ConfigError("train: branches must share d_proj (" +
                          std::to_string(smiles_cfg_.d_proj) + " vs " +
                          std::to_string(iupac_cfg_.d_proj) + ")");
    }
}

TrainResult ContrastiveTrainer::train(const TokenizedPairs& pairs,
                                      const std::function<void(int64_t)>& checkpoint_sink) {
    pairs.validate();
    const size_t n = pairs.size();
    const size_t batch = static_cast<size_t>(cfg_.batch_size);
    const size_t batches_per_epoch = n / batch; // drop-last policy

    TrainResult result;
    if (batches_per_epoch == 0 || cfg_.epochs == 0) {
        if (checkpoint_sink) checkpoint_sink(0);
        return result;
    }

    // Producer: seeded shuffles, fixed-size batches, two slots of lookahead.
    BoundedQueue<Batch> queue(2);
    std::thread producer([&] {
        for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
            std::vector<size_t> order(n);
            std::iota(order.begin(), order.end(), size_t{0});
            Rng rng = make_rng(cfg_.seed, "shuffle/epoch" + std::to_string(epoch));
            rng.shuffle(order);
            for (size_t b = 0; b < batches_per_epoch; ++b) {
                Batch item;
                item.epoch = epoch;
                item.indices.assign(order.begin() + static_cast<ptrdiff_t>(b * batch),
                                    order.begin() + static_cast<ptrdiff_t>((b + 1) * batch));
                queue.push(std::move(item));
            }
        }
        queue.close();
    });

    int64_t step = 0;
    double epoch_loss_sum = 0.0;
    size_t epoch_loss_count = 0;
    int current_epoch = 0;

    while (auto item = queue.pop()) {
        const Batch& b = *item;
        if (b.epoch != current_epoch) {
            current_epoch = b.epoch;
            epoch_loss_sum = 0.0;
            epoch_loss_count = 0;
        }

        nn::Tape tape;
        std::vector<int> z_sl, z_ip;
        z_sl.reserve(b.indices.size());
        z_ip.reserve(b.indices.size());
        for (const size_t i : b.indices) {
            z_sl.push_back(encoder::encode_on_tape<float>(tape, smiles_cfg_, smiles_,
                                                          pairs.smiles[i]));
            z_ip.push_back(encoder::encode_on_tape<float>(tape, iupac_cfg_, iupac_,
                                                          pairs.iupac[i]));
        }
        const InfoNceNodes nodes = infonce_on_tape(tape, z_sl, z_ip, cfg_.tau);

        StepLog log;
        log.step = step;
        log.epoch = b.epoch;
        log.loss = tape.value(nodes.loss)(0, 0);
        log.loss_smiles = tape.value(nodes.loss_smiles)(0, 0);
        log.loss_iupac = tape.value(nodes.loss_iupac)(0, 0);

        if (!std::isfinite(log.loss)) {
            std::ostringstream msg;
            msg << "train: non-finite loss at step " << step << " (epoch " << b.epoch
                << "), components sl=" << log.loss_smiles << " ip=" << log.loss_iupac
                << ", batch ids:";
            for (const size_t i : b.indices) msg << " " << pairs.ids[i];
            queue.close();
            producer.join();
            throw NumericError(msg.str());
        }

        optimizer_.zero_grad();
        tape.backward(nodes.loss);
        optimizer_.step();

        result.curve.push_back(log);
        epoch_loss_sum += log.loss;
        ++epoch_loss_count;
        ++step;

        if (checkpoint_sink && cfg_.checkpoint_every > 0 && step % cfg_.checkpoint_every == 0) {
            checkpoint_sink(step);
        }
    }
    producer.join();

    result.steps = step;
    result.final_epoch_mean_loss =
        epoch_loss_count > 0 ? epoch_loss_sum / static_cast<double>(epoch_loss_count) : 0.0;
    if (checkpoint_sink) checkpoint_sink(step);
    return result;
}

} // namespace molembed::train
