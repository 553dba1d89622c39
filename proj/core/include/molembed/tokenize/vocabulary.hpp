#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "molembed/errors.hpp"

namespace molembed::tokenize {

// Fixed special-token inventory shared by both tokenizers.
inline constexpr int32_t kPadId = 0;
inline constexpr int32_t kUnkId = 1;
inline constexpr int32_t kBosId = 2;
inline constexpr int32_t kEosId = 3;
inline constexpr const char* kPadToken = "<pad>";
inline constexpr const char* kUnkToken = "<unk>";
inline constexpr const char* kBosToken = "<bos>";
inline constexpr const char* kEosToken = "<eos>";

// Bijective token<->id map with dense ids 0..V-1 and the four specials
// always at their fixed slots.
class Vocabulary {
public:
    Vocabulary();

    // Appends a token with the next dense id. Duplicate tokens are rejected.
    int32_t add(const std::string& token);
    // add() that tolerates existing tokens, returning the existing id.
    int32_t add_or_get(const std::string& token);

    std::optional<int32_t> id_of(const std::string& token) const;
    int32_t id_or_unk(const std::string& token) const;
    const std::string& token_of(int32_t id) const;
    bool contains(const std::string& token) const { return token_to_id_.count(token) > 0; }
    size_t size() const noexcept { return id_to_token_.size(); }

    static bool is_special(int32_t id) noexcept { return id >= 0 && id <= 3; }

    const std::vector<std::string>& tokens() const noexcept { return id_to_token_; }

private:
    std::unordered_map<std::string, int32_t> token_to_id_;
    std::vector<std::string> id_to_token_;
};

struct TokenSequence;

// Wraps content tokens in BOS/EOS, maps them to ids (unknown -> UNK), and
// truncates to l_max keeping the prefix and a terminal EOS.
TokenSequence sequence_from_tokens(const Vocabulary& vocab,
                                   const std::vector<std::string>& tokens, size_t l_max);

// One tokenized molecule string: ids plus a parallel real/pad mask.
// Invariants (checked by validate): equal lengths <= l_max, BOS first,
// EOS before the first pad, trailing pads only.
struct TokenSequence {
    std::vector<int32_t> ids;
    std::vector<uint8_t> mask; // 1 = real token, 0 = pad
    size_t l_max = 0;

    size_t length() const noexcept { return ids.size(); }
    size_t real_length() const;

    // Appends pads up to `target` positions.
    void pad_to(size_t target);

    // Throws InvalidInputError describing the first violated invariant.
    void validate() const;
};

} // namespace molembed::tokenize
