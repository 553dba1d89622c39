#include "molembed/tokenize/bpe.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "molembed/tokenize/utf8.hpp"

namespace molembed::tokenize {

namespace {

using Pair = std::pair<std::string, std::string>;

bool is_special_token(const std::string& s) {
    return s == kPadToken || s == kUnkToken || s == kBosToken || s == kEosToken;
}

// One non-overlapping left-to-right pass replacing (l, r) with l+r.
std::vector<std::string> merge_once(const std::vector<std::string>& tokens, const Pair& pair,
                                    const std::string& joined) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    size_t i = 0;
    while (i < tokens.size()) {
        if (i + 1 < tokens.size() && tokens[i] == pair.first && tokens[i + 1] == pair.second) {
            out.push_back(joined);
            i += 2;
        } else {
            out.push_back(tokens[i]);
            ++i;
        }
    }
    return out;
}

} // namespace

BpeModel BpeModel::train(const std::vector<std::string>& corpus, size_t target_vocab_size) {
    if (corpus.empty()) throw InvalidInputError("train_bpe: empty corpus");

    std::set<std::string> chars;
    std::vector<std::vector<std::string>> lines;
    lines.reserve(corpus.size());
    for (const std::string& s : corpus) {
        auto pieces = utf8_split(s);
        for (const auto& p : pieces) chars.insert(p);
        lines.push_back(std::move(pieces));
    }

    BpeModel model;
    model.alphabet_.assign(chars.begin(), chars.end());
    model.alphabet_set_ = {chars.begin(), chars.end()};
    for (const auto& c : model.alphabet_) model.vocab_.add_or_get(c);

    if (target_vocab_size < model.vocab_.size()) {
        throw InvalidInputError("train_bpe: target vocab size " +
                                std::to_string(target_vocab_size) + " below base alphabet + 4 (" +
                                std::to_string(model.vocab_.size()) + ")");
    }

    while (model.vocab_.size() < target_vocab_size) {
        std::map<Pair, size_t> counts;
        for (const auto& line : lines) {
            for (size_t i = 0; i + 1 < line.size(); ++i) {
                if (line[i] == kUnkToken || line[i + 1] == kUnkToken) continue;
                ++counts[{line[i], line[i + 1]}];
            }
        }
        // std::map iteration is ordered by pair, so the first max-count hit
        // is the lexicographic tie-break winner.
        const Pair* best = nullptr;
        size_t best_count = 1;
        for (const auto& [pair, count] : counts) {
            if (count <= best_count) continue;
            if (is_special_token(pair.first + pair.second)) continue;
            best = &pair;
            best_count = count;
        }
        if (best == nullptr) break;

        const Pair merged_pair = *best;
        const std::string joined = merged_pair.first + merged_pair.second;
        for (auto& line : lines) line = merge_once(line, merged_pair, joined);
        model.merges_.push_back(merged_pair);
        model.vocab_.add_or_get(joined);
    }
    return model;
}

std::vector<std::string> BpeModel::apply_merges(std::vector<std::string> tokens) const {
    for (const auto& m : merges_) {
        const std::string joined = m.first + m.second;
        tokens = merge_once(tokens, m, joined);
    }
    return tokens;
}

std::vector<std::string> BpeModel::tokenize(std::string_view s) const {
    std::vector<std::string> tokens;
    for (auto& piece : utf8_split(s)) {
        tokens.push_back(alphabet_set_.count(piece) ? std::move(piece) : std::string(kUnkToken));
    }
    return apply_merges(std::move(tokens));
}

TokenSequence BpeModel::encode(std::string_view s, size_t l_max) const {
    return sequence_from_tokens(vocab_, tokenize(s), l_max);
}

std::string BpeModel::decode(const TokenSequence& seq) const {
    std::string out;
    for (size_t i = 0; i < seq.ids.size(); ++i) {
        if (!seq.mask[i] || Vocabulary::is_special(seq.ids[i])) continue;
        out += vocab_.token_of(seq.ids[i]);
    }
    return out;
}

std::string BpeModel::to_json() const {
    nlohmann::json j;
    j["alphabet"] = alphabet_;
    auto merges = nlohmann::json::array();
    for (const auto& m : merges_) merges.push_back({m.first, m.second});
    j["merges"] = std::move(merges);
    nlohmann::json vocab = nlohmann::json::object();
    for (int32_t id = 0; id < static_cast<int32_t>(vocab_.size()); ++id) {
        vocab[vocab_.token_of(id)] = id;
    }
    j["vocab"] = std::move(vocab);
    return j.dump(2);
}

BpeModel BpeModel::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bpe model: invalid JSON: ") + e.what());
    }
    if (!j.contains("alphabet") || !j.contains("merges") || !j.contains("vocab")) {
        throw ParseError("bpe model: missing one of alphabet/merges/vocab");
    }

    BpeModel model;
    model.alphabet_ = j["alphabet"].get<std::vector<std::string>>();
    model.alphabet_set_ = {model.alphabet_.begin(), model.alphabet_.end()};

    std::set<std::string> derivable(model.alphabet_.begin(), model.alphabet_.end());
    for (const auto& m : j["merges"]) {
        if (!m.is_array() || m.size() != 2) throw ParseError("bpe model: malformed merge entry");
        const auto left = m[0].get<std::string>();
        const auto right = m[1].get<std::string>();
        if (!derivable.count(left) || !derivable.count(right)) {
            throw ParseError("bpe model: merge (" + left + "," + right +
                             ") not derivable from earlier merges or alphabet");
        }
        derivable.insert(left + right);
        model.merges_.emplace_back(left, right);
    }

    // The vocab map must be the dense bijection the trainer would produce.
    std::vector<std::string> by_id(j["vocab"].size());
    for (const auto& [token, id] : j["vocab"].items()) {
        const auto i = id.get<int64_t>();
        if (i < 0 || static_cast<size_t>(i) >= by_id.size() || !by_id[static_cast<size_t>(i)].empty()) {
            throw ParseError("bpe model: vocab ids are not dense 0..V-1");
        }
        by_id[static_cast<size_t>(i)] = token;
    }
    const char* specials[4] = {kPadToken, kUnkToken, kBosToken, kEosToken};
    for (int32_t i = 0; i < 4; ++i) {
        if (by_id.size() <= static_cast<size_t>(i) || by_id[static_cast<size_t>(i)] != specials[i]) {
            throw ParseError("bpe model: special tokens missing or misplaced");
        }
    }
    for (size_t i = 4; i < by_id.size(); ++i) model.vocab_.add(by_id[i]);
    return model;
}

void BpeModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("bpe model: cannot open for write: " + path);
    out << to_json() << "\n";
}

BpeModel BpeModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("bpe model: cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

} // namespace molembed::tokenize
