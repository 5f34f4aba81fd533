#include "dawin/expertise.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

namespace dawin {

double coeff_pair(double h0, double h1) {
    if (!std::isfinite(h0) || !std::isfinite(h1)) throw Error(ErrorCode::Domain, "non-finite entropy");
    const double d = h0 - h1;
    if (d >= 0.0) return 1.0 / (1.0 + std::exp(-d));
    const double e = std::exp(d);
    return e / (1.0 + e);
}

DomainOffset domain_offset(std::span<const double> h0, std::span<const double> h1) {
    if (h0.size() != h1.size()) throw Error(ErrorCode::InvalidArgument, "entropy lists differ in length");
    const std::size_t n = h0.size();
    if (n < 2) throw Error(ErrorCode::InsufficientData, "offset adjustment needs at least 2 samples");
    const auto stats = [n](std::span<const double> h) {
        double mean = 0.0;
        for (double v : h) mean += v;
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (double v : h) var += (v - mean) * (v - mean);
        var /= static_cast<double>(n);
        return std::pair{mean, std::sqrt(var)};
    };
    const auto [m0, s0] = stats(h0);
    const auto [m1, s1] = stats(h1);
    if (!(m0 > 0.0) || !(m1 > 0.0)) throw Error(ErrorCode::DegenerateDomain, "mean entropy of a model is zero");
    return DomainOffset{0.5 * (s0 / m0 + s1 / m1), (m0 + m1) / m0};
}

double coeff_pair_offset(double h0, double h1, const DomainOffset& offset) {
    if (!std::isfinite(h0) || !std::isfinite(h1)) throw Error(ErrorCode::Domain, "non-finite entropy");
    const double e0 = std::exp(-h0);
    const double e1 = std::exp(-h1);
    return (e1 + offset.offset / offset.relative_expertise) / (e0 + e1 + offset.offset);
}

double oracle_coeff(double p0_y, double p1_y) {
    if (!(p0_y >= 0.0 && p0_y <= 1.0 && p1_y >= 0.0 && p1_y <= 1.0)) {
        throw Error(ErrorCode::Domain, "oracle probabilities must lie in [0,1]");
    }
    if (p0_y <= 0.0 && p1_y <= 0.0) throw Error(ErrorCode::UndefinedOracle, "both true-label probabilities are zero");
    const double a = std::max(p0_y, kProbEpsilon);
    const double b = std::max(p1_y, kProbEpsilon);
    return b / (a + b);
}

std::string to_string(PseudoLabel v) {
    switch (v) {
        case PseudoLabel::AvgSoft: return "avg_soft";
        case PseudoLabel::AvgHard: return "avg_hard";
        case PseudoLabel::MidSoft: return "mid_soft";
        case PseudoLabel::MidHard: return "mid_hard";
    }
    return "avg_soft";
}

PseudoLabel pseudo_label_from_string(const std::string& s) {
    if (s == "avg_soft") return PseudoLabel::AvgSoft;
    if (s == "avg_hard") return PseudoLabel::AvgHard;
    if (s == "mid_soft") return PseudoLabel::MidSoft;
    if (s == "mid_hard") return PseudoLabel::MidHard;
    throw Error(ErrorCode::InvalidArgument, "unknown pseudo-label variant '" + s + "'");
}

double pseudo_label_coeff(PseudoLabel variant, const ProbVector& p0, const ProbVector& p1, const ProbVector* p_mid) {
    if (p0.size() != p1.size()) throw Error(ErrorCode::InvalidArgument, "probability vectors differ in length");
    Eigen::VectorXd target;
    switch (variant) {
        case PseudoLabel::AvgSoft:
        case PseudoLabel::AvgHard: target = 0.5 * (p0.probs() + p1.probs()); break;
        case PseudoLabel::MidSoft:
        case PseudoLabel::MidHard:
            if (p_mid == nullptr) throw Error(ErrorCode::InvalidArgument, "mid-point prediction required for " + to_string(variant));
            if (p_mid->size() != p0.size()) throw Error(ErrorCode::InvalidArgument, "mid-point prediction has wrong length");
            target = p_mid->probs();
            break;
    }
    if (variant == PseudoLabel::AvgHard || variant == PseudoLabel::MidHard) {
        const int y = row_argmax(target);
        return coeff_pair(xentropy(p0.probs(), y), xentropy(p1.probs(), y));
    }
    return coeff_pair(soft_xentropy(p0.probs(), target), soft_xentropy(p1.probs(), target));
}

std::string to_string(Split s) {
    switch (s) {
        case Split::TrueTrue: return "TrueTrue";
        case Split::TrueFalse: return "TrueFalse";
        case Split::FalseTrue: return "FalseTrue";
        case Split::FalseFalse: return "FalseFalse";
    }
    return "TrueTrue";
}

Split correctness_split(int pred0, int pred1, int y) {
    const bool c0 = pred0 == y;
    const bool c1 = pred1 == y;
    if (c0) return c1 ? Split::TrueTrue : Split::TrueFalse;
    return c1 ? Split::FalseTrue : Split::FalseFalse;
}

std::vector<ExpertiseRecord> make_records(std::span<const Eigen::MatrixXd> probs, const std::vector<int>& labels) {
    if (probs.empty()) return {};
    const Eigen::Index n = probs.front().rows();
    for (const auto& p : probs) {
        if (p.rows() != n) throw Error(ErrorCode::InvalidArgument, "models scored different sample counts");
    }
    if (!labels.empty() && labels.size() != static_cast<std::size_t>(n)) {
        throw Error(ErrorCode::InvalidArgument, "label count differs from sample count");
    }
    const auto m = static_cast<Eigen::Index>(probs.size());
    std::vector<ExpertiseRecord> out(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        auto& r = out[static_cast<std::size_t>(i)];
        r.sample_index = static_cast<std::size_t>(i);
        r.entropies.resize(m);
        r.predicted.resize(static_cast<std::size_t>(m));
        if (!labels.empty()) {
            r.label = labels[static_cast<std::size_t>(i)];
            r.xentropies = Eigen::VectorXd(m);
        }
        for (Eigen::Index j = 0; j < m; ++j) {
            const auto row = probs[static_cast<std::size_t>(j)].row(i).transpose();
            r.entropies[j] = entropy(row);
            r.predicted[static_cast<std::size_t>(j)] = row_argmax(row);
            if (r.label) (*r.xentropies)[j] = xentropy(row, *r.label);
        }
    }
    return out;
}

std::string to_string(CoefficientMode m) {
    switch (m) {
        case CoefficientMode::Plain: return "plain";
        case CoefficientMode::OffsetAdjusted: return "offset_adjusted";
        case CoefficientMode::Oracle: return "oracle";
        case CoefficientMode::PseudoLabel: return "pseudo_label";
    }
    return "plain";
}

CoefficientMode coefficient_mode_from_string(const std::string& s) {
    if (s == "plain") return CoefficientMode::Plain;
    if (s == "offset_adjusted") return CoefficientMode::OffsetAdjusted;
    if (s == "oracle") return CoefficientMode::Oracle;
    if (s.rfind("pseudo_label", 0) == 0) return CoefficientMode::PseudoLabel;
    throw Error(ErrorCode::Format, "unknown coefficient mode '" + s + "'");
}

void CoefficientBatch::validate() const {
    for (Eigen::Index i = 0; i < coefficients.rows(); ++i) {
        const auto row = coefficients.row(i);
        if ((row.array() < 0.0).any() || std::abs(row.sum() - 1.0) > 1e-9) {
            throw Error(ErrorCode::Domain, "coefficient row " + std::to_string(i) + " is off the simplex");
        }
    }
}

CoefficientBatch CoefficientBatch::from_pair(const Eigen::VectorXd& lambdas, CoefficientMode mode) {
    CoefficientBatch b;
    b.mode = mode;
    b.coefficients.resize(lambdas.size(), 2);
    b.coefficients.col(0) = (1.0 - lambdas.array()).matrix();
    b.coefficients.col(1) = lambdas;
    return b;
}

CoefficientBatch coeff_pair_batch(std::span<const ExpertiseRecord> records) {
    Eigen::VectorXd lambdas(static_cast<Eigen::Index>(records.size()));
    for (std::size_t i = 0; i < records.size(); ++i) {
        lambdas[static_cast<Eigen::Index>(i)] = coeff_pair(records[i].entropies[0], records[i].entropies[1]);
    }
    return CoefficientBatch::from_pair(lambdas, CoefficientMode::Plain);
}

CoefficientBatch coeff_pair_offset_batch(std::span<const ExpertiseRecord> records) {
    std::vector<double> h0(records.size());
    std::vector<double> h1(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].entropies.size() != 2) throw Error(ErrorCode::InvalidArgument, "offset adjustment is two-model only");
        h0[i] = records[i].entropies[0];
        h1[i] = records[i].entropies[1];
    }
    const DomainOffset off = domain_offset(h0, h1);
    Eigen::VectorXd lambdas(static_cast<Eigen::Index>(records.size()));
    for (std::size_t i = 0; i < records.size(); ++i) lambdas[static_cast<Eigen::Index>(i)] = coeff_pair_offset(h0[i], h1[i], off);
    return CoefficientBatch::from_pair(lambdas, CoefficientMode::OffsetAdjusted);
}

std::string coefficients_to_csv(const CoefficientBatch& batch) {
    std::string out = "sample_index";
    for (Eigen::Index j = 0; j < batch.coefficients.cols(); ++j) out += ",lambda_" + std::to_string(j);
    out += ",mode\n";
    std::string mode = to_string(batch.mode);
    if (batch.mode == CoefficientMode::PseudoLabel && batch.pseudo_label) mode += ":" + to_string(*batch.pseudo_label);
    char buf[40];
    for (Eigen::Index i = 0; i < batch.coefficients.rows(); ++i) {
        out += std::to_string(i);
        for (Eigen::Index j = 0; j < batch.coefficients.cols(); ++j) {
            std::snprintf(buf, sizeof buf, ",%.17g", batch.coefficients(i, j));
            out += buf;
        }
        out += "," + mode + "\n";
    }
    return out;
}

CoefficientBatch coefficients_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("sample_index", 0) != 0) {
        throw Error(ErrorCode::Format, "missing coefficient CSV header");
    }
    const auto cols = static_cast<Eigen::Index>(std::count(line.begin(), line.end(), ',')) - 1;
    if (cols < 2) throw Error(ErrorCode::Format, "coefficient CSV needs at least two lambda columns");
    std::vector<double> values;
    std::string mode;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (static_cast<Eigen::Index>(fields.size()) != cols + 2) {
            throw Error(ErrorCode::Format, "row " + std::to_string(row) + ": wrong field count");
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
            const auto& s = fields[static_cast<std::size_t>(j + 1)];
            double v = 0.0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || p != s.data() + s.size()) {
                throw Error(ErrorCode::Format, "row " + std::to_string(row) + ": malformed coefficient");
            }
            values.push_back(v);
        }
        mode = fields.back();
        ++row;
    }
    if (row == 0) throw Error(ErrorCode::EmptyDataset, "coefficient file has no rows");
    CoefficientBatch b;
    b.coefficients.resize(static_cast<Eigen::Index>(row), cols);
    for (std::size_t i = 0; i < row; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            b.coefficients(static_cast<Eigen::Index>(i), j) = values[i * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)];
        }
    }
    const auto colon = mode.find(':');
    b.mode = coefficient_mode_from_string(mode.substr(0, colon));
    if (colon != std::string::npos) b.pseudo_label = pseudo_label_from_string(mode.substr(colon + 1));
    b.validate();
    return b;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "pearson inputs differ in length");
    if (x.size() < 2) return std::nullopt;
    double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        mx += dx / n;
        my += dy / n;
        sxx += dx * (x[i] - mx);
        syy += dy * (y[i] - my);
        sxy += dx * (y[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

RatioCorrelation ratio_correlation(std::span<const ExpertiseRecord> records) {
    const auto ratio = [](double a, double b) { return a + b > 0.0 ? a / (a + b) : 0.5; };
    std::vector<double> hx, lx;
    std::array<std::vector<double>, 4> split_h, split_l;
    for (const auto& r : records) {
        if (!r.xentropies || !r.label) throw Error(ErrorCode::MissingLabels, "correlation analysis needs labels");
        if (r.entropies.size() != 2) throw Error(ErrorCode::InvalidArgument, "correlation analysis is two-model only");
        const double h = ratio(r.entropies[0], r.entropies[1]);
        const double l = ratio((*r.xentropies)[0], (*r.xentropies)[1]);
        hx.push_back(h);
        lx.push_back(l);
        const auto s = static_cast<std::size_t>(correctness_split(r.predicted[0], r.predicted[1], *r.label));
        split_h[s].push_back(h);
        split_l[s].push_back(l);
    }
    RatioCorrelation out;
    out.overall = pearson(hx, lx);
    for (std::size_t s = 0; s < 4; ++s) {
        out.counts[s] = split_h[s].size();
        out.per_split[s] = pearson(split_h[s], split_l[s]);
    }
    return out;
}

}  // namespace dawin
