#include "dawin/merge_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>

#include "dawin/error.hpp"

namespace dawin {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void require_same_arch(const Expert& a, const Expert& b) {
    if (!(a.arch == b.arch)) throw Error(ErrorCode::IncompatibleModels, "experts use different architectures");
    require_compatible(a.theta, b.theta);
}

void require_labels(const LabeledData& d) {
    if (!d.has_labels()) throw Error(ErrorCode::MissingLabels, "strategy requires labeled samples");
}

Eigen::MatrixXd expert_proba(const Expert& e, const Eigen::MatrixXd& x, double temperature) {
    return predict_proba(e.arch, e.theta.values(), x, temperature);
}

Eigen::VectorXd row_entropies(const Eigen::MatrixXd& probs) {
    Eigen::VectorXd h(probs.rows());
    for (Eigen::Index i = 0; i < probs.rows(); ++i) h[i] = entropy(probs.row(i).transpose());
    return h;
}

Eigen::VectorXd expert_entropies(const Expert& e, const Eigen::MatrixXd& x, bool calibrate) {
    return row_entropies(expert_proba(e, x, calibrate ? e.temperature : 1.0));
}

Prediction make_prediction(std::size_t i, Eigen::VectorXd prob, Eigen::VectorXd lambda, const std::string& strategy) {
    return Prediction{i, ProbVector(std::move(prob)), std::move(lambda), strategy};
}

Eigen::VectorXd pair_row(double lambda) {
    Eigen::VectorXd r(2);
    r << 1.0 - lambda, lambda;
    return r;
}

EvalResult batch_result(const std::string& strategy, const Eigen::MatrixXd& probs, const Eigen::VectorXd& lambda_row) {
    EvalResult out;
    out.strategy = strategy;
    out.predictions.reserve(static_cast<std::size_t>(probs.rows()));
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
        out.predictions.push_back(make_prediction(static_cast<std::size_t>(i), probs.row(i).transpose(), lambda_row, strategy));
    }
    return out;
}

// Per-sample merge with a single reused parameter buffer.
EvalResult per_sample_pair_eval(const Expert& m0, const Expert& m1, const LabeledData& domain,
                                const Eigen::VectorXd& lambdas, const std::string& strategy) {
    EvalResult out;
    out.strategy = strategy;
    out.predictions.reserve(static_cast<std::size_t>(domain.size()));
    Eigen::VectorXd merged(m0.theta.size());
    for (Eigen::Index i = 0; i < domain.size(); ++i) {
        interpolate_into(m0.theta.values(), m1.theta.values(), lambdas[i], merged);
        ++out.merge_count;
        ProbVector p = forward_raw(m0.arch, merged, domain.features.row(i).transpose());
        out.predictions.push_back(Prediction{static_cast<std::size_t>(i), std::move(p), pair_row(lambdas[i]), strategy});
    }
    return out;
}

}  // namespace

Expert Expert::from_checkpoint(const Checkpoint& c, std::string name, double temperature) {
    if (!(temperature > 0.0)) throw Error(ErrorCode::Domain, "temperature must be positive");
    return Expert{c.arch, c.payload, temperature, name.empty() ? c.meta.role : std::move(name)};
}

Eigen::MatrixXd EvalResult::prob_matrix() const {
    if (predictions.empty()) return {};
    Eigen::MatrixXd p(static_cast<Eigen::Index>(predictions.size()), predictions.front().prob.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) p.row(static_cast<Eigen::Index>(i)) = predictions[i].prob.probs().transpose();
    return p;
}

double EvalResult::accuracy(const std::vector<int>& labels) const {
    if (labels.size() != predictions.size()) throw Error(ErrorCode::MissingLabels, "accuracy needs one label per prediction");
    if (labels.empty()) return 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) correct += predictions[i].argmax() == labels[i];
    return static_cast<double>(correct) / static_cast<double>(labels.size());
}

double EvalResult::mean_entropy() const {
    if (predictions.empty()) return 0.0;
    double total = 0.0;
    for (const auto& p : predictions) total += entropy(p.prob);
    return total / static_cast<double>(predictions.size());
}

std::vector<double> default_grid() { return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}; }

void validate_grid(std::span<const double> grid) {
    if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "coefficient grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) throw Error(ErrorCode::Domain, "grid values must lie in [0,1]");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "grid must be strictly increasing");
    }
}

EvalResult params_eval(const MlpArchitecture& arch, const ParamVector& theta, const LabeledData& domain,
                       const std::string& strategy) {
    const auto start = Clock::now();
    const Eigen::MatrixXd probs = predict_proba(arch, theta.values(), domain.features);
    EvalResult out = batch_result(strategy, probs, Eigen::VectorXd());
    out.merge_count = 0;
    out.wall_ms = elapsed_ms(start);
    return out;
}

EvalResult static_eval(const Expert& m0, const Expert& m1, double lambda, const LabeledData& domain) {
    require_same_arch(m0, m1);
    const auto start = Clock::now();
    const ParamVector merged = interpolate_pair(m0.theta, m1.theta, lambda);
    const Eigen::MatrixXd probs = predict_proba(m0.arch, merged.values(), domain.features);
    EvalResult out = batch_result("static", probs, pair_row(lambda));
    out.merge_count = 1;
    out.wall_ms = elapsed_ms(start);
    return out;
}

WiseSweepTable wise_sweep(const Expert& m0, const Expert& m1, std::span<const double> grid, const LabeledData& id_val,
                          std::span<const LabeledData* const> tests) {
    validate_grid(grid);
    require_labels(id_val);
    if (id_val.size() == 0) throw Error(ErrorCode::EmptyDataset, "ID validation set is empty");
    require_same_arch(m0, m1);
    WiseSweepTable table;
    double best_acc = -1.0;
    for (double lambda : grid) {
        const ParamVector merged = interpolate_pair(m0.theta, m1.theta, lambda);
        WiseSweepRow row;
        row.lambda = lambda;
        row.id_val_accuracy = accuracy(predict_proba(m0.arch, merged.values(), id_val.features), id_val.labels);
        for (const LabeledData* t : tests) {
            require_labels(*t);
            row.test_accuracy.push_back(accuracy(predict_proba(m0.arch, merged.values(), t->features), t->labels));
        }
        if (row.id_val_accuracy > best_acc) {
            best_acc = row.id_val_accuracy;
            table.best_lambda = lambda;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

ParamVector uniform_soup(std::span<const ParamVector> ingredients) {
    if (ingredients.size() < 2) throw Error(ErrorCode::InvalidArgument, "a soup needs at least two checkpoints");
    Eigen::VectorXd sum = ingredients.front().values();
    for (std::size_t i = 1; i < ingredients.size(); ++i) {
        require_compatible(ingredients.front(), ingredients[i]);
        sum += ingredients[i].values();
    }
    return ParamVector(sum / static_cast<double>(ingredients.size()), ingredients.front().layout_id());
}

GreedySoup greedy_soup(const MlpArchitecture& arch, std::span<const ParamVector> ingredients, const LabeledData& id_val) {
    if (ingredients.size() < 2) throw Error(ErrorCode::InvalidArgument, "a soup needs at least two checkpoints");
    require_labels(id_val);
    for (const auto& p : ingredients) require_compatible(ingredients.front(), p);
    const auto val_acc = [&](const Eigen::VectorXd& theta) {
        return accuracy(predict_proba(arch, theta, id_val.features), id_val.labels);
    };
    std::vector<double> scores;
    for (const auto& p : ingredients) scores.push_back(val_acc(p.values()));
    std::vector<std::size_t> order(ingredients.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    GreedySoup out;
    Eigen::VectorXd sum = ingredients[order[0]].values();
    out.used.push_back(order[0]);
    out.val_accuracy = scores[order[0]];
    for (std::size_t r = 1; r < order.size(); ++r) {
        const Eigen::VectorXd trial_sum = sum + ingredients[order[r]].values();
        const Eigen::VectorXd trial = trial_sum / static_cast<double>(out.used.size() + 1);
        const double acc = val_acc(trial);
        if (acc >= out.val_accuracy) {
            sum = trial_sum;
            out.used.push_back(order[r]);
            out.val_accuracy = acc;
        }
    }
    out.soup = ParamVector(sum / static_cast<double>(out.used.size()), ingredients.front().layout_id());
    return out;
}

CoefficientBatch dawin_pair_coefficients(const Expert& m0, const Expert& m1, const Eigen::MatrixXd& x,
                                         const DawinOptions& options) {
    require_same_arch(m0, m1);
    const Eigen::VectorXd h0 = expert_entropies(m0, x, options.calibrate);
    const Eigen::VectorXd h1 = expert_entropies(m1, x, options.calibrate);
    const Eigen::Index n = x.rows();
    Eigen::VectorXd lambdas(n);
    if (!options.offset || n < 2) {
        for (Eigen::Index i = 0; i < n; ++i) lambdas[i] = coeff_pair(h0[i], h1[i]);
    } else {
        const Eigen::Index batch = options.batch_size == 0 ? n : static_cast<Eigen::Index>(options.batch_size);
        DomainOffset off;
        for (Eigen::Index start = 0; start < n; start += batch) {
            const Eigen::Index m = std::min(batch, n - start);
            // A trailing batch too small for a standard deviation reuses the previous offset.
            if (m >= 2 || start == 0) {
                off = domain_offset(std::span<const double>(h0.data() + start, static_cast<std::size_t>(m)),
                                    std::span<const double>(h1.data() + start, static_cast<std::size_t>(m)));
            }
            for (Eigen::Index i = start; i < start + m; ++i) lambdas[i] = coeff_pair_offset(h0[i], h1[i], off);
        }
    }
    if (options.scale != 1.0) lambdas = (lambdas * options.scale).cwiseMax(0.0).cwiseMin(1.0);
    auto batch = CoefficientBatch::from_pair(lambdas, options.offset ? CoefficientMode::OffsetAdjusted : CoefficientMode::Plain);
    batch.source_ids = {m0.name, m1.name};
    return batch;
}

EvalResult dawin_sample_eval(const Expert& m0, const Expert& m1, const LabeledData& domain, const DawinOptions& options) {
    const auto start = Clock::now();
    const CoefficientBatch coeffs = dawin_pair_coefficients(m0, m1, domain.features, options);
    EvalResult out = per_sample_pair_eval(m0, m1, domain, coeffs.coefficients.col(1), "dawin_sample");
    out.wall_ms = elapsed_ms(start);
    return out;
}

EvalResult dawin_clustered_eval(const Expert& m0, const Expert& m1, const LabeledData& domain, std::size_t k,
                                const DawinOptions& options) {
    const auto start = Clock::now();
    const auto n = static_cast<std::size_t>(domain.size());
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "K must be >= 1");
    if (n < k) throw Error(ErrorCode::InsufficientData, "fewer samples than mixture components");
    const CoefficientBatch coeffs = dawin_pair_coefficients(m0, m1, domain.features, options);
    const Eigen::VectorXd lambdas = coeffs.coefficients.col(1);
    MixtureOptions mo = options.mixture;
    mo.k = k;
    const BetaMixtureModel bmm = em_fit(std::span<const double>(lambdas.data(), n), mo);

    std::vector<std::vector<Eigen::Index>> members(k);
    for (std::size_t i = 0; i < n; ++i) {
        members[infer_membership(bmm, lambdas[static_cast<Eigen::Index>(i)], options.posterior_membership)].push_back(
            static_cast<Eigen::Index>(i));
    }
    EvalResult out;
    out.strategy = "dawin_clustered";
    std::vector<std::optional<Prediction>> slots(n);
    Eigen::VectorXd merged(m0.theta.size());
    for (std::size_t c = 0; c < k; ++c) {
        const double lambda = component_mean(bmm, c);
        interpolate_into(m0.theta.values(), m1.theta.values(), lambda, merged);
        ++out.merge_count;
        if (members[c].empty()) continue;
        Eigen::MatrixXd xs(static_cast<Eigen::Index>(members[c].size()), domain.dim());
        for (std::size_t r = 0; r < members[c].size(); ++r) xs.row(static_cast<Eigen::Index>(r)) = domain.features.row(members[c][r]);
        const Eigen::MatrixXd probs = predict_proba(m0.arch, merged, xs);
        for (std::size_t r = 0; r < members[c].size(); ++r) {
            const auto i = static_cast<std::size_t>(members[c][r]);
            slots[i] = make_prediction(i, probs.row(static_cast<Eigen::Index>(r)).transpose(), pair_row(lambda), out.strategy);
        }
    }
    out.predictions.reserve(n);
    for (auto& s : slots) out.predictions.push_back(std::move(*s));
    out.diagnostics["mixture"] = to_json(bmm);
    out.wall_ms = elapsed_ms(start);
    return out;
}

Eigen::MatrixXd multi_coefficients(std::span<const Expert> experts, const Eigen::MatrixXd& x, bool calibrate) {
    if (experts.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two experts");
    Eigen::MatrixXd h(x.rows(), static_cast<Eigen::Index>(experts.size()));
    for (std::size_t j = 0; j < experts.size(); ++j) {
        require_same_arch(experts.front(), experts[j]);
        h.col(static_cast<Eigen::Index>(j)) = expert_entropies(experts[j], x, calibrate);
    }
    Eigen::MatrixXd w(h.rows(), h.cols());
    for (Eigen::Index i = 0; i < h.rows(); ++i) w.row(i) = coeff_multi(h.row(i).transpose()).transpose();
    return w;
}

EvalResult dawin_task_arith_eval(const Expert& base, std::span<const Expert> experts, const LabeledData& domain,
                                 double lambda0, std::size_t k, const DawinOptions& options) {
    const auto start = Clock::now();
    if (!(lambda0 >= 0.0)) throw Error(ErrorCode::Domain, "lambda0 must be non-negative");
    std::vector<TaskVector> taus;
    for (const auto& e : experts) {
        require_same_arch(base, e);
        taus.push_back(make_task_vector(e.theta, base.theta));
    }
    const Eigen::MatrixXd weights = multi_coefficients(experts, domain.features, options.calibrate);
    const auto n = static_cast<std::size_t>(domain.size());
    const auto m = static_cast<std::size_t>(weights.cols());
    EvalResult out;
    out.strategy = "dawin_task_arith";
    Eigen::VectorXd merged(base.theta.size());

    if (k == 0) {
        out.predictions.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::VectorXd w = weights.row(static_cast<Eigen::Index>(i)).transpose();
            combine_task_vectors_into(base.theta.values(), lambda0, std::span<const double>(w.data(), m), taus, merged);
            ++out.merge_count;
            ProbVector p = forward_raw(base.arch, merged, domain.features.row(static_cast<Eigen::Index>(i)).transpose());
            out.predictions.push_back(Prediction{i, std::move(p), w, out.strategy});
        }
    } else {
        if (n < k) throw Error(ErrorCode::InsufficientData, "fewer samples than mixture components");
        MixtureOptions mo = options.mixture;
        mo.k = k;
        const DirichletMixtureModel dmm = dirichlet_em_fit(weights, mo);
        std::vector<std::vector<Eigen::Index>> members(k);
        for (std::size_t i = 0; i < n; ++i) {
            members[dirichlet_infer_membership(dmm, weights.row(static_cast<Eigen::Index>(i)).transpose(),
                                               options.posterior_membership)]
                .push_back(static_cast<Eigen::Index>(i));
        }
        std::vector<std::optional<Prediction>> slots(n);
        for (std::size_t c = 0; c < k; ++c) {
            const Eigen::VectorXd w = dirichlet_component_mean(dmm, c);
            combine_task_vectors_into(base.theta.values(), lambda0, std::span<const double>(w.data(), m), taus, merged);
            ++out.merge_count;
            if (members[c].empty()) continue;
            Eigen::MatrixXd xs(static_cast<Eigen::Index>(members[c].size()), domain.dim());
            for (std::size_t r = 0; r < members[c].size(); ++r) xs.row(static_cast<Eigen::Index>(r)) = domain.features.row(members[c][r]);
            const Eigen::MatrixXd probs = predict_proba(base.arch, merged, xs);
            for (std::size_t r = 0; r < members[c].size(); ++r) {
                const auto i = static_cast<std::size_t>(members[c][r]);
                slots[i] = make_prediction(i, probs.row(static_cast<Eigen::Index>(r)).transpose(), w, out.strategy);
            }
        }
        out.predictions.reserve(n);
        for (auto& s : slots) out.predictions.push_back(std::move(*s));
        out.diagnostics["mixture"] = to_json(dmm);
    }
    const Eigen::RowVectorXd mean_w = weights.colwise().mean();
    out.diagnostics["mean_coefficients"] = std::vector<double>(mean_w.data(), mean_w.data() + mean_w.size());
    out.wall_ms = elapsed_ms(start);
    return out;
}

EvalResult static_task_arith_eval(const Expert& base, std::span<const Expert> experts, const LabeledData& domain,
                                  double lambda0) {
    const auto start = Clock::now();
    std::vector<TaskVector> taus;
    for (const auto& e : experts) {
        require_same_arch(base, e);
        taus.push_back(make_task_vector(e.theta, base.theta));
    }
    const std::vector<double> ones(experts.size(), 1.0);
    const ParamVector merged = combine_task_vectors(base.theta, lambda0, ones, taus);
    EvalResult out = batch_result("task_arith", predict_proba(base.arch, merged.values(), domain.features),
                                  Eigen::VectorXd::Ones(static_cast<Eigen::Index>(experts.size())));
    out.merge_count = 1;
    out.wall_ms = elapsed_ms(start);
    return out;
}

EvalResult dcs_eval(std::span<const Expert> models, const LabeledData& domain, bool calibrate) {
    const auto start = Clock::now();
    if (models.size() < 2) throw Error(ErrorCode::InvalidArgument, "selection needs at least two models");
    std::vector<Eigen::MatrixXd> probs;
    Eigen::MatrixXd h(domain.size(), static_cast<Eigen::Index>(models.size()));
    for (std::size_t j = 0; j < models.size(); ++j) {
        require_same_arch(models.front(), models[j]);
        probs.push_back(expert_proba(models[j], domain.features, 1.0));
        h.col(static_cast<Eigen::Index>(j)) =
            calibrate ? expert_entropies(models[j], domain.features, true) : row_entropies(probs.back());
    }
    EvalResult out;
    out.strategy = "dcs";
    for (Eigen::Index i = 0; i < domain.size(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index j = 1; j < h.cols(); ++j) {
            if (h(i, j) < h(i, best)) best = j;
        }
        Eigen::VectorXd onehot = Eigen::VectorXd::Zero(h.cols());
        onehot[best] = 1.0;
        out.predictions.push_back(
            make_prediction(static_cast<std::size_t>(i), probs[static_cast<std::size_t>(best)].row(i).transpose(), onehot, out.strategy));
    }
    out.wall_ms = elapsed_ms(start);
    return out;
}

EvalResult doe_eval(std::span<const Expert> models, const LabeledData& domain, bool calibrate) {
    const auto start = Clock::now();
    if (models.size() < 2) throw Error(ErrorCode::InvalidArgument, "ensembling needs at least two models");
    const Eigen::MatrixXd weights = multi_coefficients(models, domain.features, calibrate);
    std::vector<Eigen::MatrixXd> probs;
    for (const auto& m : models) probs.push_back(expert_proba(m, domain.features, 1.0));
    EvalResult out;
    out.strategy = "doe";
    for (Eigen::Index i = 0; i < domain.size(); ++i) {
        Eigen::VectorXd p = Eigen::VectorXd::Zero(probs.front().cols());
        for (std::size_t j = 0; j < probs.size(); ++j) p += weights(i, static_cast<Eigen::Index>(j)) * probs[j].row(i).transpose();
        p /= p.sum();
        out.predictions.push_back(make_prediction(static_cast<std::size_t>(i), std::move(p), weights.row(i).transpose(), out.strategy));
    }
    out.wall_ms = elapsed_ms(start);
    return out;
}

EvalResult oracle_sample_eval(const Expert& m0, const Expert& m1, const LabeledData& domain) {
    require_labels(domain);
    require_same_arch(m0, m1);
    const auto start = Clock::now();
    const Eigen::MatrixXd p0 = expert_proba(m0, domain.features, 1.0);
    const Eigen::MatrixXd p1 = expert_proba(m1, domain.features, 1.0);
    Eigen::VectorXd lambdas(domain.size());
    for (Eigen::Index i = 0; i < domain.size(); ++i) {
        const int y = domain.labels[static_cast<std::size_t>(i)];
        lambdas[i] = oracle_coeff(p0(i, y), p1(i, y));
    }
    EvalResult out = per_sample_pair_eval(m0, m1, domain, lambdas, "oracle_sample");
    out.wall_ms = elapsed_ms(start);
    return out;
}

OracleDomainResult oracle_domain_search(const Expert& m0, const Expert& m1, const LabeledData& domain,
                                        std::span<const double> grid) {
    validate_grid(grid);
    require_labels(domain);
    require_same_arch(m0, m1);
    OracleDomainResult out;
    out.accuracy = -1.0;
    for (double lambda : grid) {
        const ParamVector merged = interpolate_pair(m0.theta, m1.theta, lambda);
        const double acc = accuracy(predict_proba(m0.arch, merged.values(), domain.features), domain.labels);
        out.table.emplace_back(lambda, acc);
        if (acc > out.accuracy) {
            out.accuracy = acc;
            out.best_lambda = lambda;
        }
    }
    return out;
}

std::string to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::Static: return "static";
        case StrategyKind::WiseSweep: return "wise_sweep";
        case StrategyKind::UniformSoup: return "uniform_soup";
        case StrategyKind::GreedySoup: return "greedy_soup";
        case StrategyKind::DawinSample: return "dawin_sample";
        case StrategyKind::DawinClustered: return "dawin_clustered";
        case StrategyKind::DawinTaskArith: return "dawin_task_arith";
        case StrategyKind::Dcs: return "dcs";
        case StrategyKind::Doe: return "doe";
        case StrategyKind::OracleSample: return "oracle_sample";
        case StrategyKind::OracleDomain: return "oracle_domain";
    }
    return "static";
}

void MergeStrategy::validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorCode::Domain, "static lambda must lie in [0,1]");
    validate_grid(grid);
    // dawin_task_arith accepts K = 0 for per-sample merging.
    if (k < 1 && kind != StrategyKind::DawinTaskArith) throw Error(ErrorCode::InvalidArgument, "K must be >= 1");
    if (!(lambda0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda0 must be positive");
    if (options.batch_size == 1) throw Error(ErrorCode::InvalidArgument, "offset batches need at least 2 samples");
}

std::string MergeStrategy::name() const { return to_string(kind); }

MergeStrategy MergeStrategy::parse(const std::string& name) {
    static const StrategyKind kinds[] = {StrategyKind::Static,        StrategyKind::WiseSweep,      StrategyKind::UniformSoup,
                                         StrategyKind::GreedySoup,    StrategyKind::DawinSample,    StrategyKind::DawinClustered,
                                         StrategyKind::DawinTaskArith, StrategyKind::Dcs,           StrategyKind::Doe,
                                         StrategyKind::OracleSample,  StrategyKind::OracleDomain};
    for (StrategyKind k : kinds) {
        if (to_string(k) == name) {
            MergeStrategy s;
            s.kind = k;
            if (k == StrategyKind::DawinTaskArith) s.k = 1;
            return s;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown strategy '" + name + "'");
}

std::string predictions_to_csv(const EvalResult& result) {
    std::string out = "sample_index,argmax,chosen_lambda_json,strategy\n";
    char buf[40];
    for (const auto& p : result.predictions) {
        out += std::to_string(p.sample_index) + "," + std::to_string(p.argmax()) + ",\"[";
        for (Eigen::Index j = 0; j < p.chosen_lambda.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%s%.17g", j ? "," : "", p.chosen_lambda[j]);
            out += buf;
        }
        out += "]\"," + p.strategy + "\n";
    }
    return out;
}

}  // namespace dawin
