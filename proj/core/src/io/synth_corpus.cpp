#include "molembed/io/synth_corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "molembed/rng.hpp"

namespace molembed::io {

const std::vector<SynthGrammar::Symbol>& SynthGrammar::symbols() {
    static const std::vector<Symbol> table = {
        {"C", "meth"},   {"c", "phenyl"},  {"N", "amino"},  {"n", "nitro"},
        {"O", "hydroxy"}, {"o", "oxo"},    {"F", "fluoro"}, {"S", "thio"},
        {"=", "en"},     {"#", "yn"},      {"l", "chloro"}, {"B", "bromo"},
    };
    return table;
}

SynthCorpus synth_corpus(uint64_t seed, size_t size) {
    if (size < 1) throw InvalidInputError("synth_corpus: size must be >= 1");
    const auto& symbols = SynthGrammar::symbols();

    SynthCorpus out;
    for (const auto& sym : symbols) out.correspondence.emplace_back(sym.morpheme, sym.code);

    Rng rng = make_rng(seed, "synth-corpus");
    std::set<std::vector<size_t>> seen;
    size_t attempts = 0;
    while (out.pairs.records.size() < size) {
        if (++attempts > size * 1000 + 1000) {
            throw InvalidInputError("synth_corpus: alphabet too small for requested size");
        }
        const size_t len = SynthGrammar::min_length +
                           rng.next_index(SynthGrammar::max_length - SynthGrammar::min_length + 1);
        std::vector<size_t> latent(len);
        for (auto& s : latent) s = rng.next_index(symbols.size());
        if (!seen.insert(latent).second) continue;

        std::string terse, wordy;
        for (size_t i = 0; i < latent.size(); ++i) {
            terse += symbols[latent[i]].code;
            if (i > 0) wordy += '-';
            wordy += symbols[latent[i]].morpheme;
        }
        char id[16];
        std::snprintf(id, sizeof(id), "m%06zu", out.pairs.records.size());
        out.pairs.records.push_back({id, terse, wordy});
    }
    return out;
}

void write_correspondence(const std::string& path,
                          const std::vector<std::pair<std::string, std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("correspondence: cannot open for write: " + path);
    out << "iupac_token\tsmiles_token\n";
    for (const auto& [morpheme, code] : rows) out << morpheme << "\t" << code << "\n";
}

std::vector<std::pair<std::string, std::string>> read_correspondence(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("correspondence: cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("correspondence: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "iupac_token\tsmiles_token") {
        throw ParseError("correspondence: bad header");
    }
    std::vector<std::pair<std::string, std::string>> rows;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ParseError("correspondence: line " + std::to_string(line_no) + ": missing tab");
        }
        rows.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    return rows;
}

} // namespace molembed::io
