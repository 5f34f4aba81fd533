#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dawin/classifier.hpp"
#include "dawin/error.hpp"

namespace dawin {

// Probabilities are clipped to this floor before any logarithm.
inline constexpr double kProbEpsilon = 1e-12;

// Shannon entropy in nats, with 0 ln 0 := 0.
template <typename Derived>
typename Derived::Scalar entropy(const Eigen::MatrixBase<Derived>& p) {
    using Scalar = typename Derived::Scalar;
    Scalar h(0);
    for (Eigen::Index c = 0; c < p.size(); ++c) {
        const Scalar v = p.derived().coeff(c);
        if (v > Scalar(0)) h -= v * std::log(v);
    }
    return h < Scalar(0) ? Scalar(0) : h;
}

inline double entropy(const ProbVector& p) { return entropy(p.probs()); }

// -ln max(p_y, eps).
template <typename Derived>
typename Derived::Scalar xentropy(const Eigen::MatrixBase<Derived>& p, int y) {
    if (y < 0 || y >= p.size()) throw Error(ErrorCode::InvalidArgument, "label " + std::to_string(y) + " out of range");
    using Scalar = typename Derived::Scalar;
    return -std::log(std::max(p.derived().coeff(y), Scalar(kProbEpsilon)));
}

inline double xentropy(const ProbVector& p, int y) { return xentropy(p.probs(), y); }

// -sum_c q_c ln max(p_c, eps): X-entropy against a soft target q.
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar soft_xentropy(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q) {
    using Scalar = typename DerivedP::Scalar;
    Scalar l(0);
    for (Eigen::Index c = 0; c < p.size(); ++c) {
        const Scalar qc = q.derived().coeff(c);
        if (qc != Scalar(0)) l -= qc * std::log(std::max(p.derived().coeff(c), Scalar(kProbEpsilon)));
    }
    return l;
}

// Entropy-ratio interpolation coefficient for the (theta_0, theta_1) pair:
// exp(-H1) / (exp(-H0) + exp(-H1)) = sigmoid(H0 - H1).
double coeff_pair(double h0, double h1);

// exp(-H_j) / sum_k exp(-H_k), computed with a max shift.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> coeff_multi(const Eigen::MatrixBase<Derived>& h) {
    using Scalar = typename Derived::Scalar;
    if (h.size() < 2) throw Error(ErrorCode::InvalidArgument, "coeff_multi needs at least two models");
    if (!h.allFinite()) throw Error(ErrorCode::Domain, "non-finite entropy");
    const Scalar lowest = h.minCoeff();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w = (-(h.derived().array() - lowest)).exp().matrix();
    w /= w.sum();
    return w;
}

// Per-domain terms of the offset-adjusted coefficient.
struct DomainOffset {
    double offset = 0.0;         // O: mean coefficient of variation of both models' entropies
    double relative_expertise = 1.0;  // T: (mean H0 + mean H1) / mean H0
};

// Population mean/std. Throws InsufficientData for < 2 samples and
// DegenerateDomain when either mean entropy is 0.
DomainOffset domain_offset(std::span<const double> h0, std::span<const double> h1);

// (exp(-H1) + O/T) / (exp(-H0) + exp(-H1) + O)
double coeff_pair_offset(double h0, double h1, const DomainOffset& offset);

// p1_y / (p0_y + p1_y) with both probabilities clipped below by eps.
double oracle_coeff(double p0_y, double p1_y);

enum class PseudoLabel { AvgSoft, AvgHard, MidSoft, MidHard };
std::string to_string(PseudoLabel v);
PseudoLabel pseudo_label_from_string(const std::string& s);

// Coefficient from X-entropies against a pseudo label built from the average
// prediction (avg_*) or the weight-midpoint prediction (mid_*).
double pseudo_label_coeff(PseudoLabel variant, const ProbVector& p0, const ProbVector& p1,
                          const ProbVector* p_mid = nullptr);

enum class Split { TrueTrue = 0, TrueFalse = 1, FalseTrue = 2, FalseFalse = 3 };
std::string to_string(Split s);
Split correctness_split(int pred0, int pred1, int y);

struct ExpertiseRecord {
    std::size_t sample_index = 0;
    Eigen::VectorXd entropies;                  // one per model, nats
    std::optional<Eigen::VectorXd> xentropies;  // when labels are available
    std::vector<int> predicted;
    std::optional<int> label;
};

// Builds records from per-model N x C probability matrices.
std::vector<ExpertiseRecord> make_records(std::span<const Eigen::MatrixXd> probs, const std::vector<int>& labels);

enum class CoefficientMode { Plain, OffsetAdjusted, Oracle, PseudoLabel };
std::string to_string(CoefficientMode m);
CoefficientMode coefficient_mode_from_string(const std::string& s);

struct CoefficientBatch {
    Eigen::MatrixXd coefficients;  // N x M, rows on the simplex
    CoefficientMode mode = CoefficientMode::Plain;
    std::optional<PseudoLabel> pseudo_label;
    std::vector<std::string> source_ids;

    Eigen::Index size() const noexcept { return coefficients.rows(); }
    // Two-model shorthand: weight on model 1.
    double lambda(Eigen::Index i) const { return coefficients(i, coefficients.cols() - 1); }
    // Throws Domain if any row is off the simplex by more than 1e-9.
    void validate() const;

    static CoefficientBatch from_pair(const Eigen::VectorXd& lambdas, CoefficientMode mode);
};

CoefficientBatch coeff_pair_batch(std::span<const ExpertiseRecord> records);
CoefficientBatch coeff_pair_offset_batch(std::span<const ExpertiseRecord> records);

// CSV: sample_index,lambda_0..lambda_{M-1},mode
std::string coefficients_to_csv(const CoefficientBatch& batch);
CoefficientBatch coefficients_from_csv(const std::string& text);

// Pearson correlation; nullopt when fewer than 2 samples or zero variance.
// Single pass, Welford co-moment updates.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct RatioCorrelation {
    std::optional<double> overall;
    std::array<std::optional<double>, 4> per_split;
    std::array<std::size_t, 4> counts{};
};

// Correlation between H0/(H0+H1) and l0/(l0+l1); a zero denominator maps the
// ratio to 0.5. Records must carry labels.
RatioCorrelation ratio_correlation(std::span<const ExpertiseRecord> records);

}  // namespace dawin
