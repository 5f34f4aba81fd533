#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

namespace dawin {

inline constexpr double kMixtureClip = 1e-6;      // values clipped to [clip, 1 - clip]
inline constexpr double kShapeEpsilon = 1e-6;     // added to method-of-moments shapes
inline constexpr double kMinPrecision = 1e-2;     // fallback precision C_min
inline constexpr double kFrozenMassFraction = 1e-8;
inline constexpr double kPiFloor = 1e-12;

struct BetaShape {
    double a = 1.0;
    double b = 1.0;
};

struct BetaComponent {
    double a = 1.0;
    double b = 1.0;
    double pi = 1.0;
};

struct MixtureOptions {
    std::size_t k = 3;
    double tol = 1e-6;
    std::size_t max_iter = 200;
    std::uint64_t seed = 0;
};

struct BetaMixtureModel {
    std::vector<BetaComponent> components;
    std::vector<double> loglik_trace;
    bool converged = false;
    std::size_t iterations = 0;
    std::uint64_t seed = 0;

    bool fitted() const noexcept { return !components.empty(); }
    std::size_t k() const noexcept { return components.size(); }
};

struct DirichletComponent {
    Eigen::VectorXd alpha;
    double pi = 1.0;
};

struct DirichletMixtureModel {
    std::vector<DirichletComponent> components;
    std::vector<double> loglik_trace;
    bool converged = false;
    std::size_t iterations = 0;
    std::uint64_t seed = 0;

    bool fitted() const noexcept { return !components.empty(); }
    std::size_t k() const noexcept { return components.size(); }
};

// Lloyd's algorithm on scalars; centers start at evenly spaced sample quantiles,
// so the result is independent of `seed` and of input order. Ties go to the
// lower cluster index.
std::vector<int> kmeans_1d(std::span<const double> values, std::size_t k, std::uint64_t seed = 0);

// Same on rows of `points`; initial centers are rows at evenly spaced quantiles
// of the highest-variance coordinate.
std::vector<int> kmeans_rows(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed = 0);

// Weighted method-of-moments Beta shapes: C = m(1-m)/s^2 - 1, a = C m + eps,
// b = C (1-m) + eps. Degenerate variance or C <= 0 falls back to C = C_min.
BetaShape mom_estimate(std::span<const double> values, std::span<const double> responsibilities);

double beta_log_pdf(double x, double a, double b);
double dirichlet_log_pdf(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& alpha);

BetaMixtureModel em_fit(std::span<const double> values, const MixtureOptions& options);

// N x K posterior responsibilities under the model.
Eigen::MatrixXd responsibilities(const BetaMixtureModel& model, std::span<const double> values);

// argmax_k Beta(lambda; a_k, b_k); with `posterior` the argmax includes ln pi_k.
std::size_t infer_membership(const BetaMixtureModel& model, double lambda, bool posterior = false);
double component_mean(const BetaMixtureModel& model, std::size_t k);

// Rows must lie on the simplex within 1e-6.
DirichletMixtureModel dirichlet_em_fit(const Eigen::MatrixXd& rows, const MixtureOptions& options);
Eigen::MatrixXd responsibilities(const DirichletMixtureModel& model, const Eigen::MatrixXd& rows);
std::size_t dirichlet_infer_membership(const DirichletMixtureModel& model, const Eigen::Ref<const Eigen::VectorXd>& row,
                                       bool posterior = false);
Eigen::VectorXd dirichlet_component_mean(const DirichletMixtureModel& model, std::size_t k);

nlohmann::json to_json(const BetaMixtureModel& model);
BetaMixtureModel beta_mixture_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DirichletMixtureModel& model);
DirichletMixtureModel dirichlet_mixture_from_json(const nlohmann::json& j);

}  // namespace dawin
