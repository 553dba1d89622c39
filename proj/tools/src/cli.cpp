#include "cli.hpp"

#include <iostream>

#include "cli_common.hpp"
#include "molembed/io/pair_corpus.hpp"

namespace molembed::cli {

void register_tokenizer_commands(CLI::App& app);
void register_pretrain_commands(CLI::App& app);
void register_retrieval_commands(CLI::App& app);
void register_downstream_commands(CLI::App& app);
void register_analysis_commands(CLI::App& app);

ModelBundle load_model_bundle(const std::string& model_dir) {
    namespace fs = std::filesystem;
    const auto bpe_path = bundle_file(model_dir, "bpe.json");
    const auto rules_path = bundle_file(model_dir, "iupac_rules.json");
    const auto manifest_path = bundle_file(model_dir, "checkpoint.json");
    const auto blob_path = bundle_file(model_dir, "checkpoint.bin");
    for (const auto& p : {bpe_path, rules_path, manifest_path, blob_path}) {
        if (!fs::exists(p)) {
            throw IoError("model dir: missing " + p.string());
        }
    }
    return ModelBundle{tokenize::BpeModel::load(bpe_path.string()),
                       tokenize::IupacRuleSet::load(rules_path.string()),
                       train::load_checkpoint(manifest_path.string(), blob_path.string())};
}

train::TokenizedPairs tokenize_pairs(const io::PairCorpus& corpus, const tokenize::BpeModel& bpe,
                                     const tokenize::IupacRuleSet& rules, size_t l_max) {
    train::TokenizedPairs out;
    for (const auto& rec : corpus.records) {
        out.ids.push_back(rec.id);
        out.smiles.push_back(bpe.encode(rec.smiles, l_max));
        out.iupac.push_back(rules.encode(rec.iupac, l_max));
    }
    return out;
}

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory: " + dir + " (" + ec.message() + ")");
}

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Dual-encoder molecular embedding toolkit"};
    app.require_subcommand(1);

    register_tokenizer_commands(app);
    register_pretrain_commands(app);
    register_retrieval_commands(app);
    register_downstream_commands(app);
    register_analysis_commands(app);

    // CLI11 wants argv-style reversed args without the program name.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << nlohmann::json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << nlohmann::json{{"error", e.kind()}, {"message", e.what()}}.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

} // namespace molembed::cli
