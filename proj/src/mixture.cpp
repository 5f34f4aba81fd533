#include "dawin/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dawin/error.hpp"

namespace dawin {

namespace {

double clip_unit(double x) { return std::clamp(x, kMixtureClip, 1.0 - kMixtureClip); }

// Row-wise log-sum-exp; returns total and overwrites `logp` with normalized
// responsibilities.
double normalize_log_rows(Eigen::MatrixXd& logp) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < logp.rows(); ++i) {
        const double m = logp.row(i).maxCoeff();
        const double lse = m + std::log((logp.row(i).array() - m).exp().sum());
        total += lse;
        logp.row(i) = (logp.row(i).array() - lse).exp();
    }
    return total;
}

void floor_and_normalize(std::vector<double>& pi) {
    for (double& p : pi) p = std::max(p, kPiFloor);
    const double s = std::accumulate(pi.begin(), pi.end(), 0.0);
    for (double& p : pi) p /= s;
}

// M-step for the mixing weights. Components whose mass drops below the
// threshold freeze, keeping their last weight; the active ones share the rest
// in proportion to their mass. Returns the per-component masses.
Eigen::VectorXd update_weights(std::vector<double>& pi, const Eigen::MatrixXd& resp, std::vector<bool>& frozen, double frozen_mass) {
    const Eigen::VectorXd mass = resp.colwise().sum().transpose();
    double held = 0.0, active = 0.0;
    for (std::size_t c = 0; c < pi.size(); ++c) {
        if (!frozen[c] && mass[static_cast<Eigen::Index>(c)] < frozen_mass) frozen[c] = true;
        if (frozen[c]) {
            pi[c] = std::max(pi[c], kPiFloor);
            held += pi[c];
        } else {
            active += mass[static_cast<Eigen::Index>(c)];
        }
    }
    for (std::size_t c = 0; c < pi.size(); ++c) {
        if (!frozen[c]) pi[c] = (1.0 - held) * mass[static_cast<Eigen::Index>(c)] / active;
    }
    return mass;
}

// Expected complete-data log-likelihood of one Beta component, up to a
// constant: sufficient statistics are W = sum r, s1 = sum r ln x, s2 = sum r ln(1-x).
double beta_q(double a, double b, double w, double s1, double s2) {
    return (a - 1.0) * s1 + (b - 1.0) * s2 + w * (std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b));
}

double dirichlet_q(const Eigen::VectorXd& alpha, double w, const Eigen::VectorXd& s) {
    double q = w * std::lgamma(alpha.sum());
    for (Eigen::Index j = 0; j < alpha.size(); ++j) q += (alpha[j] - 1.0) * s[j] - w * std::lgamma(alpha[j]);
    return q;
}

// Generalized-EM safeguard: the moment-matched shapes are taken when they do
// not lower the component's expected log-likelihood; otherwise step back
// toward the current shapes in log space. Keeps the likelihood trace monotone.
template <typename Shape, typename Q, typename Blend>
Shape accept_shape(const Shape& current, const Shape& candidate, Q&& q, Blend&& blend) {
    const double q_old = q(current);
    if (q(candidate) >= q_old) return candidate;
    double t = 0.5;
    for (int step = 0; step < 30; ++step, t *= 0.5) {
        Shape trial = blend(current, candidate, t);
        if (q(trial) >= q_old) return trial;
    }
    return current;
}

Eigen::VectorXd dirichlet_mom(const Eigen::MatrixXd& rows, const Eigen::Ref<const Eigen::VectorXd>& r) {
    const double w = r.sum();
    if (!(w > 0.0)) throw Error(ErrorCode::InsufficientData, "zero effective weight in method-of-moments");
    const Eigen::VectorXd mean = (rows.transpose() * r) / w;
    const Eigen::VectorXd d = rows.col(0).array() - mean[0];
    const double var = (r.array() * d.array().square()).sum() / w;
    double precision = var >= 1e-12 ? mean[0] * (1.0 - mean[0]) / var - 1.0 : 0.0;
    if (var < 1e-12 || precision <= 0.0) return (kMinPrecision * mean).cwiseMax(kShapeEpsilon);
    return (precision * mean).array() + kShapeEpsilon;
}

}  // namespace

std::vector<int> kmeans_rows(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t /*seed*/) {
    const auto n = static_cast<std::size_t>(points.rows());
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "K must be >= 1");
    if (n < k) throw Error(ErrorCode::InsufficientData, "K-means needs at least K samples");
    if (!points.allFinite()) throw Error(ErrorCode::Domain, "non-finite K-means input");

    Eigen::Index axis = 0;
    double best_var = -1.0;
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
        const double v = (points.col(j).array() - points.col(j).mean()).square().mean();
        if (v > best_var) {
            best_var = v;
            axis = j;
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return points(static_cast<Eigen::Index>(a), axis) < points(static_cast<Eigen::Index>(b), axis);
    });
    Eigen::MatrixXd centers(static_cast<Eigen::Index>(k), points.cols());
    for (std::size_t c = 0; c < k; ++c) {
        const auto pos = static_cast<std::size_t>((static_cast<double>(c) + 0.5) * static_cast<double>(n) / static_cast<double>(k));
        centers.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(order[std::min(pos, n - 1)]));
    }

    std::vector<int> assign(n, -1);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (Eigen::Index c = 0; c < centers.rows(); ++c) {
                const double d = (points.row(static_cast<Eigen::Index>(i)) - centers.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(c);
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        if (!changed) break;
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(centers.rows(), centers.cols());
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            sums.row(assign[i]) += points.row(static_cast<Eigen::Index>(i));
            ++counts[static_cast<std::size_t>(assign[i])];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) centers.row(static_cast<Eigen::Index>(c)) = sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(counts[c]);
        }
    }
    return assign;
}

std::vector<int> kmeans_1d(std::span<const double> values, std::size_t k, std::uint64_t seed) {
    const Eigen::Map<const Eigen::VectorXd> v(values.data(), static_cast<Eigen::Index>(values.size()));
    return kmeans_rows(Eigen::MatrixXd(v), k, seed);
}

BetaShape mom_estimate(std::span<const double> values, std::span<const double> responsibilities) {
    if (values.size() != responsibilities.size()) throw Error(ErrorCode::InvalidArgument, "values and weights differ in length");
    double w = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        w += responsibilities[i];
        sum += responsibilities[i] * values[i];
    }
    if (!(w > 0.0)) throw Error(ErrorCode::InsufficientData, "zero effective weight in method-of-moments");
    const double mean = sum / w;
    double var = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) var += responsibilities[i] * (values[i] - mean) * (values[i] - mean);
    var /= w;
    const double c = var >= 1e-12 ? mean * (1.0 - mean) / var - 1.0 : 0.0;
    if (var < 1e-12 || c <= 0.0) {
        return BetaShape{std::max(kMinPrecision * mean, kShapeEpsilon), std::max(kMinPrecision * (1.0 - mean), kShapeEpsilon)};
    }
    return BetaShape{c * mean + kShapeEpsilon, c * (1.0 - mean) + kShapeEpsilon};
}

double beta_log_pdf(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::Domain, "Beta shapes must be positive");
    const double xc = clip_unit(x);
    return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + (a - 1.0) * std::log(xc) + (b - 1.0) * std::log1p(-xc);
}

double dirichlet_log_pdf(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& alpha) {
    if (x.size() != alpha.size()) throw Error(ErrorCode::InvalidArgument, "Dirichlet dimension mismatch");
    if ((alpha.array() <= 0.0).any()) throw Error(ErrorCode::Domain, "Dirichlet concentrations must be positive");
    Eigen::VectorXd xc = x.unaryExpr([](double v) { return clip_unit(v); });
    xc /= xc.sum();
    double lp = std::lgamma(alpha.sum());
    for (Eigen::Index j = 0; j < x.size(); ++j) lp += (alpha[j] - 1.0) * std::log(xc[j]) - std::lgamma(alpha[j]);
    return lp;
}

namespace {

struct BetaState {
    std::vector<BetaShape> shapes;
    std::vector<double> pi;
};

double beta_e_step(const BetaState& s, const Eigen::VectorXd& lx, const Eigen::VectorXd& l1x, Eigen::MatrixXd& resp) {
    const auto k = static_cast<Eigen::Index>(s.shapes.size());
    resp.resize(lx.size(), k);
    for (Eigen::Index c = 0; c < k; ++c) {
        const auto& sh = s.shapes[static_cast<std::size_t>(c)];
        const double norm = std::lgamma(sh.a + sh.b) - std::lgamma(sh.a) - std::lgamma(sh.b) + std::log(s.pi[static_cast<std::size_t>(c)]);
        resp.col(c) = ((sh.a - 1.0) * lx.array() + (sh.b - 1.0) * l1x.array() + norm).matrix();
    }
    return normalize_log_rows(resp);
}

}  // namespace

BetaMixtureModel em_fit(std::span<const double> values, const MixtureOptions& options) {
    const std::size_t k = options.k;
    const std::size_t n = values.size();
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "K must be >= 1");
    if (n < std::max<std::size_t>(k, 2)) throw Error(ErrorCode::InsufficientData, "EM needs at least max(K, 2) samples");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(values[i])) throw Error(ErrorCode::Domain, "non-finite coefficient");
        x[i] = clip_unit(values[i]);
    }
    Eigen::VectorXd lx(static_cast<Eigen::Index>(n)), l1x(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        lx[static_cast<Eigen::Index>(i)] = std::log(x[i]);
        l1x[static_cast<Eigen::Index>(i)] = std::log1p(-x[i]);
    }
    const double frozen_mass = kFrozenMassFraction * static_cast<double>(n);

    const auto memberships = kmeans_1d(x, k, options.seed);
    Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < n; ++i) resp(static_cast<Eigen::Index>(i), memberships[i]) = 1.0;

    BetaState state;
    state.shapes.resize(k);
    state.pi.resize(k);
    std::vector<bool> frozen(k, false);
    for (std::size_t c = 0; c < k; ++c) {
        const Eigen::VectorXd r = resp.col(static_cast<Eigen::Index>(c));
        const double w = r.sum();
        state.pi[c] = w / static_cast<double>(n);
        if (w < frozen_mass || w <= 0.0) {
            frozen[c] = true;
        } else {
            state.shapes[c] = mom_estimate(x, std::span<const double>(r.data(), n));
        }
    }
    floor_and_normalize(state.pi);

    BetaMixtureModel model;
    model.seed = options.seed;
    double prev = beta_e_step(state, lx, l1x, resp);
    model.loglik_trace.push_back(prev);

    for (std::size_t it = 1; it <= options.max_iter; ++it) {
        const Eigen::VectorXd mass = update_weights(state.pi, resp, frozen, frozen_mass);
        for (std::size_t c = 0; c < k; ++c) {
            if (frozen[c]) continue;
            const Eigen::VectorXd r = resp.col(static_cast<Eigen::Index>(c));
            const double w = mass[static_cast<Eigen::Index>(c)];
            const double s1 = r.dot(lx);
            const double s2 = r.dot(l1x);
            const BetaShape candidate = mom_estimate(x, std::span<const double>(r.data(), n));
            state.shapes[c] = accept_shape(
                state.shapes[c], candidate, [&](const BetaShape& s) { return beta_q(s.a, s.b, w, s1, s2); },
                [](const BetaShape& from, const BetaShape& to, double t) {
                    return BetaShape{std::exp((1.0 - t) * std::log(from.a) + t * std::log(to.a)),
                                     std::exp((1.0 - t) * std::log(from.b) + t * std::log(to.b))};
                });
        }
        const double ll = beta_e_step(state, lx, l1x, resp);
        model.loglik_trace.push_back(ll);
        model.iterations = it;
        if (std::abs(ll - prev) < options.tol) {
            model.converged = true;
            break;
        }
        prev = ll;
    }
    for (std::size_t c = 0; c < k; ++c) model.components.push_back({state.shapes[c].a, state.shapes[c].b, state.pi[c]});
    return model;
}

Eigen::MatrixXd responsibilities(const BetaMixtureModel& model, std::span<const double> values) {
    if (!model.fitted()) throw Error(ErrorCode::Unfitted, "mixture model has no components");
    BetaState s;
    for (const auto& c : model.components) {
        s.shapes.push_back({c.a, c.b});
        s.pi.push_back(std::max(c.pi, std::numeric_limits<double>::min()));
    }
    Eigen::VectorXd lx(static_cast<Eigen::Index>(values.size())), l1x(lx.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double xc = clip_unit(values[i]);
        lx[static_cast<Eigen::Index>(i)] = std::log(xc);
        l1x[static_cast<Eigen::Index>(i)] = std::log1p(-xc);
    }
    Eigen::MatrixXd resp;
    beta_e_step(s, lx, l1x, resp);
    return resp;
}

std::size_t infer_membership(const BetaMixtureModel& model, double lambda, bool posterior) {
    if (!model.fitted()) throw Error(ErrorCode::Unfitted, "mixture model has no components");
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < model.components.size(); ++c) {
        const auto& comp = model.components[c];
        double score = beta_log_pdf(lambda, comp.a, comp.b);
        if (posterior) score += std::log(comp.pi);
        if (score > best_score) {
            best_score = score;
            best = c;
        }
    }
    return best;
}

double component_mean(const BetaMixtureModel& model, std::size_t k) {
    if (k >= model.components.size()) throw Error(ErrorCode::InvalidArgument, "component index out of range");
    const auto& c = model.components[k];
    return c.a / (c.a + c.b);
}

namespace {

struct DirichletState {
    std::vector<Eigen::VectorXd> alpha;
    std::vector<double> pi;
};

double dirichlet_e_step(const DirichletState& s, const Eigen::MatrixXd& logx, Eigen::MatrixXd& resp) {
    const auto k = static_cast<Eigen::Index>(s.alpha.size());
    resp.resize(logx.rows(), k);
    for (Eigen::Index c = 0; c < k; ++c) {
        const auto& a = s.alpha[static_cast<std::size_t>(c)];
        double norm = std::lgamma(a.sum()) + std::log(s.pi[static_cast<std::size_t>(c)]);
        for (Eigen::Index j = 0; j < a.size(); ++j) norm -= std::lgamma(a[j]);
        resp.col(c) = (logx * (a.array() - 1.0).matrix()).array() + norm;
    }
    return normalize_log_rows(resp);
}

Eigen::MatrixXd prepare_simplex_rows(const Eigen::MatrixXd& rows) {
    Eigen::MatrixXd x = rows;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        if (!x.row(i).allFinite() || (x.row(i).array() < -1e-6).any() || std::abs(x.row(i).sum() - 1.0) > 1e-6) {
            throw Error(ErrorCode::Domain, "row " + std::to_string(i) + " is off the simplex");
        }
        x.row(i) = x.row(i).unaryExpr([](double v) { return clip_unit(v); });
        x.row(i) /= x.row(i).sum();
    }
    return x;
}

}  // namespace

DirichletMixtureModel dirichlet_em_fit(const Eigen::MatrixXd& rows, const MixtureOptions& options) {
    const std::size_t k = options.k;
    const auto n = static_cast<std::size_t>(rows.rows());
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "K must be >= 1");
    if (rows.cols() < 2) throw Error(ErrorCode::InvalidArgument, "Dirichlet rows need at least two coordinates");
    if (n < std::max<std::size_t>(k, 2)) throw Error(ErrorCode::InsufficientData, "EM needs at least max(K, 2) samples");
    const Eigen::MatrixXd x = prepare_simplex_rows(rows);
    const Eigen::MatrixXd logx = x.array().log().matrix();
    const double frozen_mass = kFrozenMassFraction * static_cast<double>(n);

    const auto memberships = kmeans_rows(x, k, options.seed);
    Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < n; ++i) resp(static_cast<Eigen::Index>(i), memberships[i]) = 1.0;

    DirichletState state;
    state.alpha.assign(k, Eigen::VectorXd::Ones(x.cols()));
    state.pi.resize(k);
    std::vector<bool> frozen(k, false);
    for (std::size_t c = 0; c < k; ++c) {
        const double w = resp.col(static_cast<Eigen::Index>(c)).sum();
        state.pi[c] = w / static_cast<double>(n);
        if (w < frozen_mass || w <= 0.0) frozen[c] = true;
        else state.alpha[c] = dirichlet_mom(x, resp.col(static_cast<Eigen::Index>(c)));
    }
    floor_and_normalize(state.pi);

    DirichletMixtureModel model;
    model.seed = options.seed;
    double prev = dirichlet_e_step(state, logx, resp);
    model.loglik_trace.push_back(prev);
    for (std::size_t it = 1; it <= options.max_iter; ++it) {
        const Eigen::VectorXd mass = update_weights(state.pi, resp, frozen, frozen_mass);
        for (std::size_t c = 0; c < k; ++c) {
            if (frozen[c]) continue;
            const Eigen::VectorXd r = resp.col(static_cast<Eigen::Index>(c));
            const double w = mass[static_cast<Eigen::Index>(c)];
            const Eigen::VectorXd s = logx.transpose() * r;
            state.alpha[c] = accept_shape(
                state.alpha[c], dirichlet_mom(x, r), [&](const Eigen::VectorXd& a) { return dirichlet_q(a, w, s); },
                [](const Eigen::VectorXd& from, const Eigen::VectorXd& to, double t) -> Eigen::VectorXd {
                    return ((1.0 - t) * from.array().log() + t * to.array().log()).exp().matrix();
                });
        }
        const double ll = dirichlet_e_step(state, logx, resp);
        model.loglik_trace.push_back(ll);
        model.iterations = it;
        if (std::abs(ll - prev) < options.tol) {
            model.converged = true;
            break;
        }
        prev = ll;
    }
    for (std::size_t c = 0; c < k; ++c) model.components.push_back({state.alpha[c], state.pi[c]});
    return model;
}

Eigen::MatrixXd responsibilities(const DirichletMixtureModel& model, const Eigen::MatrixXd& rows) {
    if (!model.fitted()) throw Error(ErrorCode::Unfitted, "mixture model has no components");
    DirichletState s;
    for (const auto& c : model.components) {
        s.alpha.push_back(c.alpha);
        s.pi.push_back(std::max(c.pi, std::numeric_limits<double>::min()));
    }
    const Eigen::MatrixXd logx = prepare_simplex_rows(rows).array().log().matrix();
    Eigen::MatrixXd resp;
    dirichlet_e_step(s, logx, resp);
    return resp;
}

std::size_t dirichlet_infer_membership(const DirichletMixtureModel& model, const Eigen::Ref<const Eigen::VectorXd>& row,
                                       bool posterior) {
    if (!model.fitted()) throw Error(ErrorCode::Unfitted, "mixture model has no components");
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < model.components.size(); ++c) {
        double score = dirichlet_log_pdf(row, model.components[c].alpha);
        if (posterior) score += std::log(model.components[c].pi);
        if (score > best_score) {
            best_score = score;
            best = c;
        }
    }
    return best;
}

Eigen::VectorXd dirichlet_component_mean(const DirichletMixtureModel& model, std::size_t k) {
    if (k >= model.components.size()) throw Error(ErrorCode::InvalidArgument, "component index out of range");
    const auto& a = model.components[k].alpha;
    return a / a.sum();
}

namespace {

nlohmann::json constants_json() {
    return {{"clip", kMixtureClip}, {"shape_epsilon", kShapeEpsilon}, {"min_precision", kMinPrecision}, {"pi_floor", kPiFloor}};
}

template <typename Model>
void read_diagnostics(const nlohmann::json& j, Model& m) {
    m.loglik_trace = j.at("loglik_trace").get<std::vector<double>>();
    m.converged = j.at("converged").get<bool>();
    m.iterations = j.at("iterations").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
}

}  // namespace

nlohmann::json to_json(const BetaMixtureModel& model) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : model.components) comps.push_back({{"a", c.a}, {"b", c.b}, {"pi", c.pi}});
    return {{"family", "beta"},
            {"components", comps},
            {"loglik_trace", model.loglik_trace},
            {"converged", model.converged},
            {"iterations", model.iterations},
            {"seed", model.seed},
            {"constants", constants_json()}};
}

BetaMixtureModel beta_mixture_from_json(const nlohmann::json& j) {
    BetaMixtureModel m;
    try {
        if (j.at("family").get<std::string>() != "beta") throw Error(ErrorCode::Format, "not a Beta mixture");
        for (const auto& c : j.at("components")) {
            BetaComponent comp{c.at("a").get<double>(), c.at("b").get<double>(), c.at("pi").get<double>()};
            if (!(comp.a > 0.0 && comp.b > 0.0 && comp.pi >= 0.0 && comp.pi <= 1.0)) {
                throw Error(ErrorCode::Format, "invalid Beta component");
            }
            m.components.push_back(comp);
        }
        read_diagnostics(j, m);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Format, std::string("malformed mixture JSON: ") + e.what());
    }
    return m;
}

nlohmann::json to_json(const DirichletMixtureModel& model) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : model.components) {
        comps.push_back({{"alpha", std::vector<double>(c.alpha.data(), c.alpha.data() + c.alpha.size())}, {"pi", c.pi}});
    }
    return {{"family", "dirichlet"},
            {"components", comps},
            {"loglik_trace", model.loglik_trace},
            {"converged", model.converged},
            {"iterations", model.iterations},
            {"seed", model.seed},
            {"constants", constants_json()}};
}

DirichletMixtureModel dirichlet_mixture_from_json(const nlohmann::json& j) {
    DirichletMixtureModel m;
    try {
        if (j.at("family").get<std::string>() != "dirichlet") throw Error(ErrorCode::Format, "not a Dirichlet mixture");
        for (const auto& c : j.at("components")) {
            const auto alpha = c.at("alpha").get<std::vector<double>>();
            DirichletComponent comp{Eigen::Map<const Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(alpha.size())),
                                    c.at("pi").get<double>()};
            if ((comp.alpha.array() <= 0.0).any()) throw Error(ErrorCode::Format, "invalid Dirichlet component");
            m.components.push_back(std::move(comp));
        }
        read_diagnostics(j, m);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Format, std::string("malformed mixture JSON: ") + e.what());
    }
    return m;
}

}  // namespace dawin
