#include <fstream>
#include <sstream>

#include "cli_common.hpp"
#include "molembed/io/csv.hpp"
#include "molembed/io/pair_corpus.hpp"
#include "molembed/io/synth_corpus.hpp"
#include "molembed/tokenize/corpus_stats.hpp"

namespace molembed::cli {

namespace {

// Input selection shared by tokenize/stats: a raw line corpus or one
// column of a pair corpus.
struct CorpusInput {
    std::string input_path;
    std::string pairs_path;
    std::string column = "smiles";

    void attach(CLI::App& cmd) {
        cmd.add_option("--input", input_path, "Corpus file, one string per line");
        cmd.add_option("--pairs", pairs_path, "Pair corpus TSV; uses --column");
        cmd.add_option("--column", column, "Pair corpus column: smiles or iupac")
            ->check(CLI::IsMember({"smiles", "iupac"}));
    }

    std::vector<std::string> read() const {
        if (input_path.empty() == pairs_path.empty()) {
            throw InvalidInputError("exactly one of --input or --pairs is required");
        }
        if (!input_path.empty()) return io::read_lines(input_path);
        const auto corpus = io::parse_pair_corpus(pairs_path);
        return column == "smiles" ? corpus.smiles_column() : corpus.iupac_column();
    }
};

struct TokenizerChoice {
    std::string bpe_path;
    bool iupac = false;
    std::string rules_path;

    void attach(CLI::App& cmd) {
        cmd.add_option("--bpe", bpe_path, "BPE model JSON");
        cmd.add_flag("--iupac", iupac, "Use the rule-based IUPAC tokenizer");
        cmd.add_option("--rules", rules_path, "IUPAC rule table JSON (default: builtin)");
    }

    void require_one() const {
        if (bpe_path.empty() == !iupac) {
            throw InvalidInputError("exactly one of --bpe or --iupac is required");
        }
    }

    tokenize::IupacRuleSet load_rules() const {
        return rules_path.empty() ? tokenize::IupacRuleSet::builtin()
                                  : tokenize::IupacRuleSet::load(rules_path);
    }
};

void run_train_bpe(const CommonOptions& common, const CorpusInput& input, int vocab_size,
                   const std::string& out_path) {
    const auto cfg = common.resolve();
    const auto corpus = input.read();
    const int target = vocab_size > 0 ? vocab_size : cfg.tokenizer.smiles_vocab_size;
    const auto model = tokenize::BpeModel::train(corpus, static_cast<size_t>(target));
    model.save(out_path);
}

void run_tokenize(const CommonOptions& common, const CorpusInput& input,
                  const TokenizerChoice& tok, int l_max_flag, const std::string& out_path) {
    const auto cfg = common.resolve();
    tok.require_one();
    const auto corpus = input.read();
    const size_t l_max =
        static_cast<size_t>(l_max_flag > 0 ? l_max_flag : cfg.tokenizer.l_max);

    std::ostringstream out;
    const auto emit = [&](size_t index, const std::vector<std::string>& tokens,
                          const tokenize::TokenSequence& seq) {
        out << index << "\t";
        for (size_t i = 0; i < tokens.size(); ++i) out << (i ? " " : "") << tokens[i];
        out << "\t";
        for (size_t i = 0; i < seq.ids.size(); ++i) out << (i ? " " : "") << seq.ids[i];
        out << "\n";
    };
    if (!tok.bpe_path.empty()) {
        const auto model = tokenize::BpeModel::load(tok.bpe_path);
        for (size_t i = 0; i < corpus.size(); ++i) {
            emit(i, model.tokenize(corpus[i]), model.encode(corpus[i], l_max));
        }
    } else {
        const auto rules = tok.load_rules();
        for (size_t i = 0; i < corpus.size(); ++i) {
            emit(i, rules.tokenize(corpus[i]), rules.encode(corpus[i], l_max));
        }
    }
    io::write_text_file(out_path, out.str());
}

void run_stats(const CommonOptions& common, const CorpusInput& input, const TokenizerChoice& tok,
               size_t top_k, bool alphabetic_only, const std::string& out_dir) {
    (void)common.resolve();
    tok.require_one();
    const auto corpus = input.read();

    tokenize::CorpusStats stats;
    if (!tok.bpe_path.empty()) {
        stats = tokenize::corpus_stats(corpus, tokenize::BpeModel::load(tok.bpe_path));
    } else {
        stats = tokenize::corpus_stats(corpus, tok.load_rules());
    }

    ensure_directory(out_dir);
    {
        std::ostringstream lengths;
        lengths << "length,count\n";
        for (const auto& [len, count] : stats.length_histogram) {
            lengths << len << "," << count << "\n";
        }
        io::write_text_file((std::filesystem::path(out_dir) / "lengths.csv").string(),
                            lengths.str());
    }
    {
        std::ostringstream tokens;
        tokens << "token,count\n";
        for (const auto& tc : stats.top_k(top_k, alphabetic_only)) {
            tokens << io::csv_quote(tc.token) << "," << tc.count << "\n";
        }
        io::write_text_file((std::filesystem::path(out_dir) / "top_tokens.csv").string(),
                            tokens.str());
    }
}

void run_synth_corpus(const CommonOptions& common, size_t size, const std::string& out_path,
                      const std::string& truth_path) {
    const auto cfg = common.resolve();
    const auto corpus = io::synth_corpus(cfg.seed, size);
    io::write_pair_corpus(out_path, corpus.pairs);
    if (!truth_path.empty()) io::write_correspondence(truth_path, corpus.correspondence);
}

} // namespace

void register_tokenizer_commands(CLI::App& app) {
    {
        auto* cmd = app.add_subcommand("train-bpe", "Train a BPE tokenizer on a corpus");
        auto common = std::make_shared<CommonOptions>();
        auto input = std::make_shared<CorpusInput>();
        auto vocab_size = std::make_shared<int>(0);
        auto out = std::make_shared<std::string>();
        common->attach(*cmd);
        input->attach(*cmd);
        cmd->add_option("--vocab-size", *vocab_size, "Target vocab size incl. specials");
        cmd->add_option("--out", *out, "Output model JSON")->required();
        cmd->callback([=] { run_train_bpe(*common, *input, *vocab_size, *out); });
    }
    {
        auto* cmd = app.add_subcommand("tokenize", "Tokenize a corpus to tokens and ids");
        auto common = std::make_shared<CommonOptions>();
        auto input = std::make_shared<CorpusInput>();
        auto tok = std::make_shared<TokenizerChoice>();
        auto l_max = std::make_shared<int>(0);
        auto out = std::make_shared<std::string>();
        common->attach(*cmd);
        input->attach(*cmd);
        tok->attach(*cmd);
        cmd->add_option("--l-max", *l_max, "Maximum sequence length");
        cmd->add_option("--out", *out, "Output TSV")->required();
        cmd->callback([=] { run_tokenize(*common, *input, *tok, *l_max, *out); });
    }
    {
        auto* cmd = app.add_subcommand("stats", "Corpus length histogram and top tokens");
        auto common = std::make_shared<CommonOptions>();
        auto input = std::make_shared<CorpusInput>();
        auto tok = std::make_shared<TokenizerChoice>();
        auto top_k = std::make_shared<size_t>(20);
        auto alpha = std::make_shared<bool>(false);
        auto out_dir = std::make_shared<std::string>();
        common->attach(*cmd);
        input->attach(*cmd);
        tok->attach(*cmd);
        cmd->add_option("--top-k", *top_k, "Number of top tokens to emit");
        cmd->add_flag("--alphabetic-only", *alpha, "Restrict top tokens to alphabetic ones");
        cmd->add_option("--out-dir", *out_dir, "Output directory")->required();
        cmd->callback([=] { run_stats(*common, *input, *tok, *top_k, *alpha, *out_dir); });
    }
    {
        auto* cmd = app.add_subcommand("synth-corpus",
                                       "Generate a synthetic two-rendering pair corpus");
        auto common = std::make_shared<CommonOptions>();
        auto size = std::make_shared<size_t>(0);
        auto out = std::make_shared<std::string>();
        auto truth = std::make_shared<std::string>();
        common->attach(*cmd);
        cmd->add_option("--size", *size, "Number of molecules")->required();
        cmd->add_option("--out", *out, "Output pair corpus TSV")->required();
        cmd->add_option("--truth-out", *truth, "Planted token correspondence TSV");
        cmd->callback([=] { run_synth_corpus(*common, *size, *out, *truth); });
    }
}

} // namespace molembed::cli
