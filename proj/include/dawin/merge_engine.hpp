#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dawin/classifier.hpp"
#include "dawin/databench.hpp"
#include "dawin/expertise.hpp"
#include "dawin/mixture.hpp"
#include "dawin/param_space.hpp"

namespace dawin {

// A model taking part in merging. `temperature` only affects expertise
// (entropy) estimates, never the reported prediction probabilities.
struct Expert {
    MlpArchitecture arch;
    ParamVector theta;
    double temperature = 1.0;
    std::string name;

    static Expert from_checkpoint(const Checkpoint& c, std::string name = {}, double temperature = 1.0);
};

struct Prediction {
    std::size_t sample_index = 0;
    ProbVector prob;
    Eigen::VectorXd chosen_lambda;
    std::string strategy;

    int argmax() const { return prob.argmax(); }
};

struct EvalResult {
    std::string strategy;
    std::vector<Prediction> predictions;
    std::size_t merge_count = 0;
    double wall_ms = 0.0;
    nlohmann::json diagnostics = nlohmann::json::object();

    Eigen::MatrixXd prob_matrix() const;
    double accuracy(const std::vector<int>& labels) const;
    double mean_entropy() const;
};

struct DawinOptions {
    bool offset = true;              // per-domain offset adjustment (two-model only)
    bool calibrate = false;          // apply experts' temperatures to entropy
    std::size_t batch_size = 0;      // 0: offset terms over the whole domain
    double scale = 1.0;              // lambda(x) * scale, clamped to [0,1]
    bool posterior_membership = false;
    MixtureOptions mixture{};
};

// Default WiSE-FT style grid {0.1, ..., 0.9}.
std::vector<double> default_grid();
// Values in [0,1], strictly increasing, non-empty.
void validate_grid(std::span<const double> grid);

EvalResult static_eval(const Expert& m0, const Expert& m1, double lambda, const LabeledData& domain);

struct WiseSweepRow {
    double lambda = 0.0;
    double id_val_accuracy = 0.0;
    std::vector<double> test_accuracy;  // one per test domain
};

struct WiseSweepTable {
    std::vector<WiseSweepRow> rows;
    double best_lambda = 0.0;  // argmax ID-val accuracy, ties to the smaller lambda
};

WiseSweepTable wise_sweep(const Expert& m0, const Expert& m1, std::span<const double> grid, const LabeledData& id_val,
                          std::span<const LabeledData* const> tests);

ParamVector uniform_soup(std::span<const ParamVector> ingredients);

struct GreedySoup {
    ParamVector soup;
    std::vector<std::size_t> used;  // ingredient indices in the order added
    double val_accuracy = 0.0;
};

// Candidates sorted by ID-val accuracy (descending); each is kept only if the
// running average's ID-val accuracy does not drop.
GreedySoup greedy_soup(const MlpArchitecture& arch, std::span<const ParamVector> ingredients, const LabeledData& id_val);

EvalResult params_eval(const MlpArchitecture& arch, const ParamVector& theta, const LabeledData& domain,
                       const std::string& strategy);

// Entropy-ratio coefficients (weight on m1) for every row of `x`, with optional
// per-batch offset adjustment.
CoefficientBatch dawin_pair_coefficients(const Expert& m0, const Expert& m1, const Eigen::MatrixXd& x,
                                         const DawinOptions& options);

EvalResult dawin_sample_eval(const Expert& m0, const Expert& m1, const LabeledData& domain, const DawinOptions& options);

// Fits a Beta mixture on the coefficients, merges once per component at its
// mean and routes each sample by membership. merge_count == K.
EvalResult dawin_clustered_eval(const Expert& m0, const Expert& m1, const LabeledData& domain, std::size_t k,
                                const DawinOptions& options);

// theta_0 + lambda_0 * sum_j lambda_j(x) tau_j. With k >= 1 the coefficient
// rows are compressed by a Dirichlet mixture; k == 0 merges per sample.
EvalResult dawin_task_arith_eval(const Expert& base, std::span<const Expert> experts, const LabeledData& domain,
                                 double lambda0, std::size_t k, const DawinOptions& options);

// theta_0 + lambda_0 * sum_j tau_j.
EvalResult static_task_arith_eval(const Expert& base, std::span<const Expert> experts, const LabeledData& domain,
                                  double lambda0);

Eigen::MatrixXd multi_coefficients(std::span<const Expert> experts, const Eigen::MatrixXd& x, bool calibrate);

EvalResult dcs_eval(std::span<const Expert> models, const LabeledData& domain, bool calibrate = false);
EvalResult doe_eval(std::span<const Expert> models, const LabeledData& domain, bool calibrate = false);

EvalResult oracle_sample_eval(const Expert& m0, const Expert& m1, const LabeledData& domain);

struct OracleDomainResult {
    double best_lambda = 0.0;
    double accuracy = 0.0;
    std::vector<std::pair<double, double>> table;  // (lambda, accuracy)
};

OracleDomainResult oracle_domain_search(const Expert& m0, const Expert& m1, const LabeledData& domain,
                                        std::span<const double> grid);

enum class StrategyKind {
    Static,
    WiseSweep,
    UniformSoup,
    GreedySoup,
    DawinSample,
    DawinClustered,
    DawinTaskArith,
    Dcs,
    Doe,
    OracleSample,
    OracleDomain,
};

struct MergeStrategy {
    StrategyKind kind = StrategyKind::DawinSample;
    double lambda = 0.5;
    std::vector<double> grid = default_grid();
    std::size_t k = 3;
    double lambda0 = 0.3;
    DawinOptions options{};

    void validate() const;
    std::string name() const;
    static MergeStrategy parse(const std::string& name);
};

std::string to_string(StrategyKind kind);

// Predictions CSV: sample_index,argmax,chosen_lambda_json,strategy
std::string predictions_to_csv(const EvalResult& result);

}  // namespace dawin
