#include "molembed/io/datasets.hpp"

#include <fstream>
#include <sstream>

#include "molembed/io/csv.hpp"

namespace molembed::io {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

namespace {

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

double parse_number(const std::string& s, size_t line_no, const std::string& column) {
    try {
        size_t consumed = 0;
        const double v = std::stod(s, &consumed);
        if (consumed != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("labeled csv: line " + std::to_string(line_no) + ": column '" + column +
                         "' is not a number: '" + s + "'");
    }
}

std::string slurp(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(std::string(what) + ": cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

LabeledTable parse_labeled_csv_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("labeled csv: empty file");
    const auto header = split_csv_line(strip_cr(line));
    if (header.size() < 3 || header[0] != "id" || header[1] != "smiles") {
        throw ParseError("labeled csv: header must start with id,smiles");
    }
    const bool has_iupac = header[2] == "iupac";
    const size_t first_label = has_iupac ? 3 : 2;
    if (header.size() <= first_label) {
        throw ParseError("labeled csv: no label columns in header");
    }

    LabeledTable table;
    table.label_names.assign(header.begin() + static_cast<ptrdiff_t>(first_label), header.end());

    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ParseError("labeled csv: line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " columns, got " +
                             std::to_string(fields.size()));
        }
        table.ids.push_back(fields[0]);
        table.smiles.push_back(fields[1]);
        if (has_iupac) table.iupac.push_back(fields[2]);
        std::vector<double> row;
        for (size_t c = first_label; c < fields.size(); ++c) {
            row.push_back(parse_number(fields[c], line_no, header[c]));
        }
        table.labels.push_back(std::move(row));
    }
    if (table.ids.empty()) throw ParseError("labeled csv: no data rows");
    return table;
}

LabeledTable parse_labeled_csv(const std::string& path) {
    return parse_labeled_csv_text(slurp(path, "labeled csv"));
}

std::vector<eval::DdiPair> parse_ddi_pairs_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("ddi pairs: empty file");
    if (strip_cr(line) != "id_a,id_b,label") {
        throw ParseError("ddi pairs: expected header 'id_a,id_b,label'");
    }
    std::vector<eval::DdiPair> pairs;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) {
            throw ParseError("ddi pairs: line " + std::to_string(line_no) +
                             ": expected 3 columns");
        }
        const double label = parse_number(fields[2], line_no, "label");
        if (label != 0.0 && label != 1.0) {
            throw ParseError("ddi pairs: line " + std::to_string(line_no) +
                             ": label must be 0 or 1");
        }
        pairs.push_back({fields[0], fields[1], static_cast<int>(label)});
    }
    if (pairs.empty()) throw ParseError("ddi pairs: no data rows");
    return pairs;
}

std::vector<eval::DdiPair> parse_ddi_pairs(const std::string& path) {
    return parse_ddi_pairs_text(slurp(path, "ddi pairs"));
}

void write_ddi_pairs(const std::string& path, const std::vector<eval::DdiPair>& pairs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("ddi pairs: cannot open for write: " + path);
    out << "id_a,id_b,label\n";
    for (const auto& p : pairs) {
        out << csv_quote(p.id_a) << "," << csv_quote(p.id_b) << "," << p.label << "\n";
    }
}

} // namespace molembed::io
