#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dawin/databench.hpp"
#include "dawin/merge_engine.hpp"

namespace dawin {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr std::size_t kHistogramBins = 50;

// Seed for a named training run, derived from the root seed.
std::uint64_t role_seed(std::uint64_t root_seed, const std::string& role);

struct ExpertSetConfig {
    MlpArchitecture arch{};
    TrainConfig pretrain{};
    TrainConfig finetune{};
    // Extra fine-tuned ingredients for the soup baselines (learning rates
    // cycled from soup_learning_rates, each with its own seed).
    std::size_t soup_variants = 4;
    std::vector<double> soup_learning_rates{0.05, 0.02, 0.1, 0.03};
    bool train_tasks = true;

    nlohmann::json to_json() const;
};

// Every model the experiments need. zs is the generalist trained on the
// pretraining mix; ft and the task experts are fine-tuned from it.
struct ExpertSet {
    MlpArchitecture arch;
    Checkpoint zs;
    Checkpoint ft;
    double zs_temperature = 1.0;  // calibrated on id_val
    double ft_temperature = 1.0;
    std::vector<Checkpoint> soup_ingredients;  // ft first
    std::vector<Checkpoint> task_experts;
    std::vector<double> task_temperatures;     // calibrated on each task's train split

    Expert zs_expert() const;
    Expert ft_expert() const;
    std::vector<Expert> task_expert_list() const;
};

ExpertSet train_experts(const BenchmarkSuite& suite, std::uint64_t seed, const ExpertSetConfig& config = {});

// Builds an ExpertSet from existing checkpoints and calibrates temperatures
// the same way train_experts does. `soups` excludes ft.
ExpertSet assemble_experts(const BenchmarkSuite& suite, Checkpoint zs, Checkpoint ft, std::vector<Checkpoint> soups = {},
                           std::vector<Checkpoint> tasks = {});

struct DomainMetrics {
    std::string domain;
    std::size_t samples = 0;
    double accuracy = 0.0;
    double mean_entropy = 0.0;
    std::size_t merge_count = 0;
    double wall_ms = 0.0;  // non-deterministic
};

struct StrategyRow {
    std::string strategy;
    std::vector<DomainMetrics> domains;
    // Unweighted mean over every domain except the first (ID) one; for the
    // multi-task rows, the mean over all task domains.
    double average = 0.0;
    std::string average_kind = "ood_average";
    nlohmann::json details = nlohmann::json::object();

    const DomainMetrics& at(const std::string& domain) const;
};

struct SplitStats {
    std::string domain;
    std::array<std::size_t, 4> counts{};
    RatioCorrelation correlation;
    // Mean entropy per split for ZS, FT, WA(0.5), DaWin; nullopt on empty splits.
    std::vector<std::string> models;
    std::vector<std::array<std::optional<double>, 4>> mean_entropy;
};

struct Histogram {
    std::string name;
    std::string domain;
    std::vector<std::size_t> counts;  // kHistogramBins uniform bins on [0,1]
};

Histogram make_histogram(const std::string& name, const std::string& domain, std::span<const double> values);

struct PropertyCheck {
    std::string name;
    std::size_t samples = 0;     // precondition-satisfying samples examined
    std::size_t violations = 0;
    double tolerance = 0.0;
    double measured = 0.0;
    bool passed = false;
    std::string detail;
};

struct EvalReport {
    std::uint64_t seed = 0;
    nlohmann::json config = nlohmann::json::object();
    std::vector<StrategyRow> strategies;
    std::vector<SplitStats> splits;
    std::vector<Histogram> histograms;
    std::vector<PropertyCheck> properties;
    nlohmann::json extras = nlohmann::json::object();

    const StrategyRow& row(const std::string& strategy) const;
    void append(EvalReport&& other);
};

// ZS, FT, best static (by ID-val), oracle-domain and oracle-sample on the ID
// test domain and every OOD domain.
EvalReport run_pilot(const BenchmarkSuite& suite, const ExpertSet& experts, std::span<const double> grid);

// Pair strategies run on id_test + OOD domains with (zs, ft); dawin_task_arith
// runs on the task test domains together with a static task-arithmetic row.
// `on_result` (optional) sees every per-domain result, e.g. for predictions export.
using ResultSink = std::function<void(const std::string& row, const Domain& domain, const EvalResult& result)>;
EvalReport run_main(const BenchmarkSuite& suite, const ExpertSet& experts, std::span<const MergeStrategy> strategies,
                    const ResultSink& on_result = {});

// Split statistics, ratio correlations, coefficient histograms (oracle, entropy
// with and without offset) and per-split mean entropies.
EvalReport run_analysis(const BenchmarkSuite& suite, const ExpertSet& experts, const DawinOptions& options = {});

struct PropertySuiteOptions {
    std::size_t synthetic_cases = 100000;
    std::size_t em_datasets = 50;
    std::vector<std::size_t> batch_sizes{32, 64, 128, 256, 512, 1024, 2048, 0};
    std::size_t k = 3;
    double lambda0 = 0.3;
    DawinOptions options{};
};

std::vector<PropertyCheck> run_property_suite(const BenchmarkSuite& suite, const ExpertSet& experts,
                                              const PropertySuiteOptions& options = {});

// True-expert check on one entropy vector: `correct` marks the models whose
// prediction is right. Returns nullopt when the precondition (every correct
// model has entropy <= every incorrect one, at least one correct) fails,
// otherwise whether every correct model got weight >= 1/M.
std::optional<bool> true_expert_weight_floor(const Eigen::VectorXd& h, const std::vector<bool>& correct);
// Same precondition; checks min over correct >= max over incorrect and that the
// largest correct weight is >= 1/M.
std::optional<bool> true_expert_dominance(const Eigen::VectorXd& h, const std::vector<bool>& correct);

nlohmann::json to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);
// Copy of a report JSON with every wall-clock field removed.
nlohmann::json strip_timing(const nlohmann::json& report_json);
// strategy,domain,samples,accuracy,mean_entropy,merge_count,wall_ms
std::string report_to_csv(const EvalReport& report);

enum class ReportFormat { Json, Csv };
void emit_report(const EvalReport& report, const std::filesystem::path& path, ReportFormat format);

}  // namespace dawin
