#include "molembed/io/pair_corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

namespace molembed::io {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
        const size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

} // namespace

std::vector<std::string> PairCorpus::smiles_column() const {
    std::vector<std::string> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.smiles);
    return out;
}

std::vector<std::string> PairCorpus::iupac_column() const {
    std::vector<std::string> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.iupac);
    return out;
}

PairCorpus parse_pair_corpus_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;

    if (!std::getline(in, line)) throw ParseError("pair corpus: empty file");
    ++line_no;
    if (strip_cr(line) != "id\tsmiles\tiupac") {
        throw ParseError("pair corpus: line 1: expected header 'id<TAB>smiles<TAB>iupac'");
    }

    PairCorpus corpus;
    std::unordered_set<std::string> seen;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) {
            // only a trailing blank line is tolerated
            if (in.peek() != EOF) {
                throw ParseError("pair corpus: line " + std::to_string(line_no) +
                                 ": blank line inside data");
            }
            break;
        }
        const auto fields = split_tabs(line);
        if (fields.size() != 3) {
            throw ParseError("pair corpus: line " + std::to_string(line_no) + ": expected 3 " +
                             "tab-separated columns, got " + std::to_string(fields.size()));
        }
        for (size_t c = 0; c < 3; ++c) {
            if (fields[c].empty()) {
                static const char* names[3] = {"id", "smiles", "iupac"};
                throw ParseError("pair corpus: line " + std::to_string(line_no) + ": empty " +
                                 names[c] + " field");
            }
        }
        if (!seen.insert(fields[0]).second) {
            throw ParseError("pair corpus: line " + std::to_string(line_no) + ": duplicate id '" +
                             fields[0] + "'");
        }
        corpus.records.push_back({fields[0], fields[1], fields[2]});
    }
    return corpus;
}

PairCorpus parse_pair_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("pair corpus: cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_pair_corpus_text(ss.str());
}

void write_pair_corpus(const std::string& path, const PairCorpus& corpus) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("pair corpus: cannot open for write: " + path);
    out << "id\tsmiles\tiupac\n";
    for (const auto& r : corpus.records) {
        out << r.id << "\t" << r.smiles << "\t" << r.iupac << "\n";
    }
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("corpus: cannot open: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

} // namespace molembed::io
