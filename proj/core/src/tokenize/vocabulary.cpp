#include "molembed/tokenize/vocabulary.hpp"

namespace molembed::tokenize {

Vocabulary::Vocabulary() {
    add(kPadToken);
    add(kUnkToken);
    add(kBosToken);
    add(kEosToken);
}

int32_t Vocabulary::add(const std::string& token) {
    if (token_to_id_.count(token)) {
        throw InvalidInputError("vocabulary: duplicate token '" + token + "'");
    }
    const int32_t id = static_cast<int32_t>(id_to_token_.size());
    token_to_id_.emplace(token, id);
    id_to_token_.push_back(token);
    return id;
}

int32_t Vocabulary::add_or_get(const std::string& token) {
    auto it = token_to_id_.find(token);
    if (it != token_to_id_.end()) return it->second;
    return add(token);
}

std::optional<int32_t> Vocabulary::id_of(const std::string& token) const {
    auto it = token_to_id_.find(token);
    if (it == token_to_id_.end()) return std::nullopt;
    return it->second;
}

int32_t Vocabulary::id_or_unk(const std::string& token) const {
    auto it = token_to_id_.find(token);
    return it == token_to_id_.end() ? kUnkId : it->second;
}

const std::string& Vocabulary::token_of(int32_t id) const {
    if (id < 0 || static_cast<size_t>(id) >= id_to_token_.size()) {
        throw VocabError("vocabulary: id " + std::to_string(id) + " out of range (size " +
                         std::to_string(id_to_token_.size()) + ")");
    }
    return id_to_token_[static_cast<size_t>(id)];
}

TokenSequence sequence_from_tokens(const Vocabulary& vocab,
                                   const std::vector<std::string>& tokens, size_t l_max) {
    if (l_max < 2) throw InvalidInputError("tokenize: l_max must be >= 2");
    TokenSequence seq;
    seq.l_max = l_max;
    seq.ids.push_back(kBosId);
    for (const auto& tok : tokens) {
        if (seq.ids.size() + 1 >= l_max) break; // reserve the terminal EOS slot
        seq.ids.push_back(vocab.id_or_unk(tok));
    }
    seq.ids.push_back(kEosId);
    seq.mask.assign(seq.ids.size(), 1);
    return seq;
}

size_t TokenSequence::real_length() const {
    size_t n = 0;
    for (const uint8_t m : mask) n += m ? 1 : 0;
    return n;
}

void TokenSequence::pad_to(size_t target) {
    while (ids.size() < target) {
        ids.push_back(kPadId);
        mask.push_back(0);
    }
}

void TokenSequence::validate() const {
    if (ids.size() != mask.size()) {
        throw InvalidInputError("token sequence: ids/mask length mismatch");
    }
    if (l_max > 0 && ids.size() > l_max) {
        throw InvalidInputError("token sequence: length " + std::to_string(ids.size()) +
                                " exceeds l_max " + std::to_string(l_max));
    }
    if (ids.empty() || ids.front() != kBosId || !mask.front()) {
        throw InvalidInputError("token sequence: must start with BOS");
    }
    bool saw_pad = false;
    bool saw_eos = false;
    for (size_t i = 0; i < ids.size(); ++i) {
        const bool real = mask[i] != 0;
        if (saw_pad && real) {
            throw InvalidInputError("token sequence: real token after pad at position " +
                                    std::to_string(i));
        }
        if (!real) {
            if (ids[i] != kPadId) {
                throw InvalidInputError("token sequence: masked position " + std::to_string(i) +
                                        " is not PAD");
            }
            if (!saw_eos) {
                throw InvalidInputError("token sequence: pad before EOS at position " +
                                        std::to_string(i));
            }
            saw_pad = true;
        } else if (ids[i] == kEosId) {
            saw_eos = true;
        }
    }
    if (!saw_eos) throw InvalidInputError("token sequence: missing EOS");
}

} // namespace molembed::tokenize
