#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "synaudit/nsga2.hpp"
#include "synaudit/provider.hpp"
#include "synaudit/selection.hpp"

namespace synaudit {

enum class PredictorSource { None, BuiltinOnSynthetic, ExternalFile };

// Effective configuration of one run. Defaults follow the attack defaults
// documented in the README: k=5, tau=0.05, multiplier=10, threshold=0.025,
// weights {1.0, 0.0}.
struct RunConfig {
    std::string schema_path;
    std::string synthetic_path;
    std::optional<std::string> train_path;
    std::optional<std::string> external_samples_path;  // level-3 input
    AttackLevel level = AttackLevel::Level1;
    std::size_t k = 5;
    double tau = 0.05;
    WeightVector weights{1.0, 0.0};
    bool evolution = false;
    EvolutionConfig evolution_config;
    PredictorSource predictor = PredictorSource::None;
    std::optional<std::string> predictor_file;
    std::size_t multiplier = 10;
    double cluster_threshold = 0.025;
    std::uint64_t seed = 0;
    std::optional<std::size_t> n_train;  // defaults to |synthetic|
    std::string output_dir = ".";

    void validate() const;
};

RunConfig load_run_config(const std::string& path);
nlohmann::json run_config_to_json(const RunConfig& config);
void apply_config_json(const nlohmann::json& j, RunConfig& config);

// Fixed 6-decimal formatting used for every metric scalar in reports.
std::string format_scalar(double v);

nlohmann::json cmd_attack(const RunConfig& config);
nlohmann::json cmd_evaluate(const std::string& report_path, const std::string& train_path,
                            const RunConfig& config);
std::string cmd_generate(const RunConfig& config);  // returns the output path
std::string render_report(const nlohmann::json& report, const std::string& format);

// Write `j` to `<output_dir>/<name>` with a stable byte layout.
std::string write_report_file(const nlohmann::json& j, const std::string& output_dir,
                              const std::string& name);

}  // namespace synaudit
