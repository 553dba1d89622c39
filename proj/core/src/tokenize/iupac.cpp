#include "molembed/tokenize/iupac.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "molembed/tokenize/utf8.hpp"

namespace molembed::tokenize {

namespace {
constexpr const char* kFallbackClass = "fallback-char";
} // namespace

const std::vector<std::string>& IupacRuleSet::known_classes() {
    static const std::vector<std::string> classes = {
        "multiplier-prefix", "substituent-prefix", "trivial-name", "locant",
        "suffix",            "punctuation",        kFallbackClass,
    };
    return classes;
}

IupacRuleSet IupacRuleSet::builtin() {
    std::vector<Rule> rules;
    rules.push_back({"multiplier-prefix",
                     {"mono", "di", "tri", "tetra", "penta", "hexa", "hepta", "octa", "nona",
                      "deca", "bis", "tris"}});
    rules.push_back({"substituent-prefix",
                     {"methyl",  "ethyl",   "propyl", "butyl",   "phenyl",  "benzyl", "hydroxy",
                      "amino",   "nitro",   "chloro", "fluoro",  "bromo",   "iodo",   "oxo",
                      "cyano",   "methoxy", "ethoxy", "acetyl",  "formyl",  "carboxy",
                      "sulfanyl", "thio",   "cyclo",  "iso",     "hydro",   "oxy"}});
    rules.push_back({"trivial-name",
                     {"methan", "ethan",  "propan",   "butan",    "pentan",    "hexan",
                      "heptan", "octan",  "nonan",    "decan",    "meth",      "eth",
                      "prop",   "but",    "pent",     "hex",      "hept",      "oct",
                      "non",    "dec",    "benz",     "furan",    "pyridin",   "pyrimidin",
                      "imidazol", "indol", "naphthalen", "quinolin", "thiophen", "pyrrol",
                      "piperidin", "morpholin", "piperazin", "phenol"}});
    rules.push_back({"locant", {"0", "1", "2", "3", "4", "5", "6", "7", "8", "9"}});
    rules.push_back({"suffix",
                     {"ylidene", "nitrile", "amide", "amine", "imine", "acid", "oate", "ane",
                      "ene",     "yne",     "one",   "oic",   "ol",    "al",   "yl",   "an",
                      "en",      "yn",      "ate",   "ic",    "ium",   "ide"}});
    rules.push_back({"punctuation", {"-", ",", "(", ")", "[", "]", "'", ".", " "}});
    rules.push_back({kFallbackClass, {}});
    return from_rules(std::move(rules));
}

IupacRuleSet IupacRuleSet::from_rules(std::vector<Rule> rules) {
    const auto& classes = known_classes();
    std::unordered_set<std::string> seen_literals;
    bool saw_fallback = false;
    for (const auto& rule : rules) {
        if (std::find(classes.begin(), classes.end(), rule.pattern_class) == classes.end()) {
            throw InvalidInputError("iupac rules: unknown pattern class '" + rule.pattern_class +
                                    "'");
        }
        if (rule.pattern_class == kFallbackClass) {
            saw_fallback = true;
            if (!rule.literals.empty()) {
                throw InvalidInputError("iupac rules: fallback-char takes no literals");
            }
            continue;
        }
        for (const auto& lit : rule.literals) {
            if (lit.empty()) throw InvalidInputError("iupac rules: empty literal");
            if (!seen_literals.insert(lit).second) {
                throw InvalidInputError("iupac rules: literal '" + lit +
                                        "' appears in more than one rule");
            }
        }
    }
    if (!saw_fallback) rules.push_back({kFallbackClass, {}});

    IupacRuleSet set;
    set.rules_ = std::move(rules);
    set.build_vocab();
    return set;
}

void IupacRuleSet::build_vocab() {
    for (const auto& rule : rules_) {
        for (const auto& lit : rule.literals) vocab_.add_or_get(lit);
    }
    // Printable ASCII singles keep fallback tokens in-vocabulary, so the
    // round-trip property holds for plain-ASCII inputs.
    for (char c = 0x21; c < 0x7f; ++c) vocab_.add_or_get(std::string(1, c));
}

std::vector<std::string> IupacRuleSet::tokenize(std::string_view s) const {
    std::vector<std::string> tokens;
    size_t pos = 0;
    while (pos < s.size()) {
        const std::string_view rest = s.substr(pos);
        const std::string* best = nullptr;
        for (const auto& rule : rules_) {
            for (const auto& lit : rule.literals) {
                if (best && lit.size() <= best->size()) continue;
                if (rest.substr(0, lit.size()) == lit) best = &lit;
            }
        }
        if (best) {
            tokens.push_back(*best);
            pos += best->size();
        } else {
            // fallback-char: one Unicode scalar (or one byte if malformed).
            const auto pieces = utf8_split(rest.substr(0, 4));
            tokens.push_back(pieces.front());
            pos += pieces.front().size();
        }
    }
    return tokens;
}

TokenSequence IupacRuleSet::encode(std::string_view s, size_t l_max) const {
    return sequence_from_tokens(vocab_, tokenize(s), l_max);
}

std::string IupacRuleSet::decode(const TokenSequence& seq) const {
    std::string out;
    for (size_t i = 0; i < seq.ids.size(); ++i) {
        if (!seq.mask[i] || Vocabulary::is_special(seq.ids[i])) continue;
        out += vocab_.token_of(seq.ids[i]);
    }
    return out;
}

std::string IupacRuleSet::to_json() const {
    auto arr = nlohmann::json::array();
    for (const auto& rule : rules_) {
        arr.push_back({{"class", rule.pattern_class}, {"literals", rule.literals}});
    }
    return arr.dump(2);
}

IupacRuleSet IupacRuleSet::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("iupac rules: invalid JSON: ") + e.what());
    }
    if (!j.is_array()) throw ParseError("iupac rules: expected a JSON array");
    std::vector<Rule> rules;
    for (const auto& entry : j) {
        if (!entry.contains("class") || !entry.contains("literals")) {
            throw ParseError("iupac rules: entry missing class/literals");
        }
        rules.push_back(
            {entry["class"].get<std::string>(), entry["literals"].get<std::vector<std::string>>()});
    }
    return from_rules(std::move(rules));
}

void IupacRuleSet::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("iupac rules: cannot open for write: " + path);
    out << to_json() << "\n";
}

IupacRuleSet IupacRuleSet::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("iupac rules: cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

} // namespace molembed::tokenize
