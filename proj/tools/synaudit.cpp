#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "synaudit/errors.hpp"
#include "synaudit/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitDataError = 3;
constexpr int kExitInternalError = 4;

void emit_error(const std::string& kind, const std::string& message) {
    nlohmann::json err{{"error", kind}, {"message", message}};
    std::cerr << err.dump() << "\n";
}

void add_common_options(CLI::App* cmd, synaudit::RunConfig& config) {
    cmd->add_option("--schema", config.schema_path, "Schema JSON file");
    cmd->add_option("--synthetic", config.synthetic_path, "Synthetic table CSV");
    cmd->add_option("--seed", config.seed, "Master RNG seed");
    cmd->add_option("--output-dir", config.output_dir, "Directory for report files");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace synaudit;

    CLI::App app{"Re-identification risk audit for tabular synthetic data"};
    app.require_subcommand(1);

    // --config supplies defaults; explicit flags override them. The config is
    // loaded before CLI11 parses, so bound fields start from its values.
    RunConfig config;
    std::string config_path;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    }
    try {
        if (!config_path.empty()) config = load_run_config(config_path);
    } catch (const ConfigError& e) {
        emit_error("config", e.what());
        return kExitConfigError;
    }
    app.add_option("--config", config_path, "Config JSON file supplying defaults");

    std::string level_text;
    std::string predictor_text;
    std::vector<double> weight_pair;
    std::string train_path;
    std::string external_path;
    std::string predictor_file;

    auto* attack = app.add_subcommand("attack", "Run the selection/reconstruction attack");
    add_common_options(attack, config);
    attack->add_option("--train", train_path, "Training table CSV (adds the metric block)");
    attack->add_option("--level", level_text, "Attack level: level-1, level-2 or level-3");
    attack->add_option("--external-samples", external_path, "Level-3 external sample CSV");
    attack->add_option("-k,--neighbors", config.k, "Nearest neighbors per query");
    attack->add_option("--tau", config.tau, "Recovered fraction of the training set");
    attack->add_option("--weights", weight_pair, "Weight pair w_distance w_loss")->expected(2);
    attack->add_flag("--evolve,!--no-evolve", config.evolution, "Enable NSGA-II reconstruction");
    attack->add_option("--n-gen", config.evolution_config.n_gen, "Evolution generations");
    attack->add_option("--pop-size", config.evolution_config.pop_size, "Evolution population size");
    attack->add_option("--crossover-prob", config.evolution_config.crossover_prob,
                       "Crossover probability");
    attack->add_option("--mutation-prob", config.evolution_config.mutation_prob,
                       "Per-gene mutation probability (negative: 1/#features)");
    attack->add_option("--eta-m", config.evolution_config.eta_m,
                       "Polynomial mutation distribution index");
    attack->add_option("--predictor", predictor_text,
                       "Predictor source: none, builtin-on-synthetic or external-file");
    attack->add_option("--predictor-file", predictor_file, "External oracle CSV (id,prediction)");
    attack->add_option("--multiplier", config.multiplier, "Level-2/3 oversampling multiplier");
    attack->add_option("--cluster-threshold", config.cluster_threshold,
                       "Per-feature clustering threshold for the hit rate");
    attack->add_option("--n-train", [&config](const std::vector<std::string>& v) {
        config.n_train = std::stoull(v.at(0));
        return true;
    }, "Training set size, when it differs from |synthetic|");

    std::string report_path;
    auto* evaluate = app.add_subcommand("evaluate", "Evaluate an attack report against training data");
    evaluate->add_option("--report", report_path, "Attack report JSON")->required();
    evaluate->add_option("--train", train_path, "Training table CSV")->required();
    evaluate->add_option("--schema", config.schema_path, "Schema JSON file");
    evaluate->add_option("--cluster-threshold", config.cluster_threshold,
                         "Per-feature clustering threshold");
    evaluate->add_option("--output-dir", config.output_dir, "Directory for report files");
    evaluate->add_option("--n-train", [&config](const std::vector<std::string>& v) {
        config.n_train = std::stoull(v.at(0));
        return true;
    }, "Training set size override");

    auto* generate = app.add_subcommand("generate", "Fit the copula and emit an oversampled table");
    add_common_options(generate, config);
    generate->add_option("--multiplier", config.multiplier, "Output size multiplier");

    std::string render_format = "text";
    auto* render = app.add_subcommand("report", "Render a report file as a summary");
    render->add_option("--report", report_path, "Report JSON file")->required();
    render->add_option("--format", render_format, "Output format: text or json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!level_text.empty()) config.level = parse_attack_level(level_text);
        if (!train_path.empty()) config.train_path = train_path;
        if (!external_path.empty()) config.external_samples_path = external_path;
        if (!predictor_file.empty()) config.predictor_file = predictor_file;
        if (!weight_pair.empty()) config.weights = {weight_pair[0], weight_pair[1]};
        if (!predictor_text.empty()) {
            nlohmann::json patch{{"predictor", predictor_text}};
            apply_config_json(patch, config);
        }

        if (attack->parsed()) {
            const auto report = cmd_attack(config);
            const auto path = write_report_file(report, config.output_dir, "attack_report.json");
            std::cerr << "attack report written to " << path << "\n";
        } else if (evaluate->parsed()) {
            const auto report = cmd_evaluate(report_path, *config.train_path, config);
            const auto path =
                write_report_file(report, config.output_dir, "evaluation_report.json");
            std::cerr << "evaluation report written to " << path << "\n";
        } else if (generate->parsed()) {
            const auto path = cmd_generate(config);
            std::cerr << "generated table written to " << path << "\n";
        } else if (render->parsed()) {
            std::ifstream in(report_path);
            if (!in) throw ConfigError("cannot open report file '" + report_path + "'");
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw DataError("corrupt report file: " + std::string(e.what()));
            }
            std::cout << render_report(j, render_format);
        }
    } catch (const ConfigError& e) {
        emit_error("config", e.what());
        return kExitConfigError;
    } catch (const DataError& e) {
        emit_error("data", e.what());
        return kExitDataError;
    } catch (const InternalError& e) {
        emit_error("internal", e.what());
        return kExitInternalError;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return kExitInternalError;
    }
    return kExitOk;
}
