#include "dawin/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "dawin/error.hpp"
#include "dawin/rng.hpp"

namespace dawin {

namespace {

constexpr std::array<Split, 4> kSplits{Split::TrueTrue, Split::TrueFalse, Split::FalseTrue, Split::FalseFalse};

DomainMetrics metrics_from(const EvalResult& r, const Domain& d) {
    DomainMetrics m;
    m.domain = d.name;
    m.samples = static_cast<std::size_t>(d.data.size());
    m.accuracy = r.accuracy(d.data.labels);
    m.mean_entropy = r.mean_entropy();
    m.merge_count = r.merge_count;
    m.wall_ms = r.wall_ms;
    return m;
}

StrategyRow make_row(std::string name) {
    StrategyRow row;
    row.strategy = std::move(name);
    return row;
}

void finish_row(StrategyRow& row) {
    const std::size_t first = row.average_kind == "ood_average" ? 1 : 0;
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = first; i < row.domains.size(); ++i, ++n) sum += row.domains[i].accuracy;
    row.average = n ? sum / static_cast<double>(n) : 0.0;
}

std::vector<const LabeledData*> domain_data(const std::vector<const Domain*>& domains) {
    std::vector<const LabeledData*> out;
    for (const auto* d : domains) out.push_back(&d->data);
    return out;
}

std::vector<const Domain*> task_domains(const BenchmarkSuite& suite) {
    std::vector<const Domain*> out;
    for (const auto& t : suite.mtl_tasks) out.push_back(&t.test);
    return out;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string row_label(const MergeStrategy& s) {
    switch (s.kind) {
        case StrategyKind::Static: return "static(" + format_number(s.lambda) + ")";
        case StrategyKind::DawinClustered: return "dawin_clustered(K=" + std::to_string(s.k) + ")";
        case StrategyKind::DawinTaskArith: return "dawin_task_arith(K=" + std::to_string(s.k) + ")";
        default: return s.name();
    }
}

nlohmann::json sweep_json(const WiseSweepTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) rows.push_back({{"lambda", r.lambda}, {"id_val_accuracy", r.id_val_accuracy}, {"test_accuracy", r.test_accuracy}});
    return {{"best_lambda", t.best_lambda}, {"rows", rows}};
}

Eigen::VectorXd column_of(const EvalResult& r, Eigen::Index col) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(r.predictions.size()));
    for (std::size_t i = 0; i < r.predictions.size(); ++i) v[static_cast<Eigen::Index>(i)] = r.predictions[i].chosen_lambda[col];
    return v;
}

std::pair<double, double> mean_std(const Eigen::VectorXd& v) {
    if (v.size() == 0) return {0.0, 0.0};
    const double m = v.mean();
    return {m, std::sqrt((v.array() - m).square().mean())};
}

PropertyCheck make_check(std::string name, std::size_t samples, std::size_t violations, double tolerance, double measured,
                         std::string detail = {}) {
    PropertyCheck c;
    c.name = std::move(name);
    c.samples = samples;
    c.violations = violations;
    c.tolerance = tolerance;
    c.measured = measured;
    c.passed = violations == 0;
    c.detail = std::move(detail);
    return c;
}

std::optional<double> opt_from_json(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

nlohmann::json opt_to_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

std::uint64_t role_seed(std::uint64_t root_seed, const std::string& role) {
    return Rng::substream(root_seed, "train/" + role).next_u64();
}

nlohmann::json ExpertSetConfig::to_json() const {
    const auto cfg = [](const TrainConfig& c) {
        return nlohmann::json{{"epochs", c.epochs},       {"batch_size", c.batch_size}, {"learning_rate", c.learning_rate},
                              {"momentum", c.momentum},   {"weight_decay", c.weight_decay}};
    };
    return {{"arch", arch.layout_id()},         {"pretrain", cfg(pretrain)},
            {"finetune", cfg(finetune)},        {"soup_variants", soup_variants},
            {"soup_learning_rates", soup_learning_rates}, {"train_tasks", train_tasks}};
}

Expert ExpertSet::zs_expert() const { return Expert::from_checkpoint(zs, "zs", zs_temperature); }
Expert ExpertSet::ft_expert() const { return Expert::from_checkpoint(ft, "ft", ft_temperature); }

std::vector<Expert> ExpertSet::task_expert_list() const {
    std::vector<Expert> out;
    for (std::size_t t = 0; t < task_experts.size(); ++t) {
        out.push_back(Expert::from_checkpoint(task_experts[t], "task" + std::to_string(t),
                                              t < task_temperatures.size() ? task_temperatures[t] : 1.0));
    }
    return out;
}

ExpertSet train_experts(const BenchmarkSuite& suite, std::uint64_t seed, const ExpertSetConfig& config) {
    ExpertSet set;
    set.arch = config.arch;
    TrainConfig pre = config.pretrain;
    pre.seed = role_seed(seed, "pretrain");
    set.zs = train(config.arch, suite.pretrain_mix.data, std::nullopt, pre, suite.pretrain_mix.name);
    set.zs.meta.role = "zs";

    TrainConfig fine = config.finetune;
    fine.seed = role_seed(seed, "finetune");
    set.ft = train(config.arch, suite.id_train.data, set.zs, fine, suite.id_train.name);
    set.ft.meta.role = "ft";
    set.zs_temperature = calibrate_temperature(config.arch, set.zs.payload, suite.id_val.data);
    set.ft_temperature = calibrate_temperature(config.arch, set.ft.payload, suite.id_val.data);

    set.soup_ingredients.push_back(set.ft);
    for (std::size_t i = 0; i < config.soup_variants; ++i) {
        TrainConfig c = config.finetune;
        c.seed = role_seed(seed, "soup/" + std::to_string(i));
        if (!config.soup_learning_rates.empty()) c.learning_rate = config.soup_learning_rates[i % config.soup_learning_rates.size()];
        Checkpoint ck = train(config.arch, suite.id_train.data, set.zs, c, suite.id_train.name);
        ck.meta.role = "soup" + std::to_string(i);
        set.soup_ingredients.push_back(std::move(ck));
    }

    if (config.train_tasks) {
        for (std::size_t t = 0; t < suite.mtl_tasks.size(); ++t) {
            TrainConfig c = config.finetune;
            c.seed = role_seed(seed, "task/" + std::to_string(t));
            const Domain& train_dom = suite.mtl_tasks[t].train;
            Checkpoint ck = train(config.arch, train_dom.data, set.zs, c, train_dom.name);
            ck.meta.role = "task" + std::to_string(t);
            set.task_temperatures.push_back(calibrate_temperature(config.arch, ck.payload, train_dom.data));
            set.task_experts.push_back(std::move(ck));
        }
    }
    return set;
}

ExpertSet assemble_experts(const BenchmarkSuite& suite, Checkpoint zs, Checkpoint ft, std::vector<Checkpoint> soups,
                           std::vector<Checkpoint> tasks) {
    if (!(zs.arch == ft.arch)) throw Error(ErrorCode::IncompatibleModels, "zs and ft use different architectures");
    if (!tasks.empty() && tasks.size() != suite.mtl_tasks.size()) {
        throw Error(ErrorCode::InvalidArgument, "expected one task checkpoint per suite task");
    }
    ExpertSet set;
    set.arch = zs.arch;
    set.zs_temperature = calibrate_temperature(set.arch, zs.payload, suite.id_val.data);
    set.ft_temperature = calibrate_temperature(set.arch, ft.payload, suite.id_val.data);
    set.zs = std::move(zs);
    set.ft = std::move(ft);
    set.soup_ingredients.push_back(set.ft);
    for (auto& c : soups) set.soup_ingredients.push_back(std::move(c));
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        set.task_temperatures.push_back(calibrate_temperature(set.arch, tasks[t].payload, suite.mtl_tasks[t].train.data));
        set.task_experts.push_back(std::move(tasks[t]));
    }
    return set;
}

const DomainMetrics& StrategyRow::at(const std::string& domain) const {
    for (const auto& d : domains) {
        if (d.domain == domain) return d;
    }
    throw Error(ErrorCode::InvalidArgument, "strategy row " + strategy + " has no domain " + domain);
}

const StrategyRow& EvalReport::row(const std::string& strategy) const {
    for (const auto& r : strategies) {
        if (r.strategy == strategy) return r;
    }
    throw Error(ErrorCode::InvalidArgument, "report has no strategy " + strategy);
}

void EvalReport::append(EvalReport&& other) {
    for (auto& r : other.strategies) strategies.push_back(std::move(r));
    for (auto& s : other.splits) splits.push_back(std::move(s));
    for (auto& h : other.histograms) histograms.push_back(std::move(h));
    for (auto& p : other.properties) properties.push_back(std::move(p));
    for (auto& [k, v] : other.extras.items()) extras[k] = v;
}

Histogram make_histogram(const std::string& name, const std::string& domain, std::span<const double> values) {
    Histogram h{name, domain, std::vector<std::size_t>(kHistogramBins, 0)};
    for (double v : values) {
        if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::Domain, "histogram value outside [0,1]");
        const auto bin = std::min(static_cast<std::size_t>(v * static_cast<double>(kHistogramBins)), kHistogramBins - 1);
        ++h.counts[bin];
    }
    return h;
}

EvalReport run_pilot(const BenchmarkSuite& suite, const ExpertSet& experts, std::span<const double> grid) {
    validate_grid(grid);
    const auto domains = suite.eval_domains();
    for (const auto* d : domains) {
        if (!d->data.has_labels()) throw Error(ErrorCode::MissingLabels, "pilot needs labeled domains");
    }
    const Expert zs = experts.zs_expert();
    const Expert ft = experts.ft_expert();
    EvalReport report;
    report.seed = suite.seed;

    StrategyRow zs_row = make_row("zs"), ft_row = make_row("ft"), static_row = make_row("best_static"),
                od_row = make_row("oracle_domain"), os_row = make_row("oracle_sample");
    const auto data = domain_data(domains);
    const WiseSweepTable sweep = wise_sweep(zs, ft, grid, suite.id_val.data, data);
    static_row.details = sweep_json(sweep);
    nlohmann::json od_lambdas = nlohmann::json::object();
    for (const auto* d : domains) {
        zs_row.domains.push_back(metrics_from(params_eval(experts.arch, zs.theta, d->data, "zs"), *d));
        ft_row.domains.push_back(metrics_from(params_eval(experts.arch, ft.theta, d->data, "ft"), *d));
        static_row.domains.push_back(metrics_from(static_eval(zs, ft, sweep.best_lambda, d->data), *d));

        const OracleDomainResult od = oracle_domain_search(zs, ft, d->data, grid);
        DomainMetrics m = metrics_from(static_eval(zs, ft, od.best_lambda, d->data), *d);
        m.accuracy = od.accuracy;
        m.merge_count = grid.size();
        od_row.domains.push_back(m);
        od_lambdas[d->name] = od.best_lambda;

        os_row.domains.push_back(metrics_from(oracle_sample_eval(zs, ft, d->data), *d));
    }
    od_row.details["best_lambda"] = od_lambdas;
    for (StrategyRow* r : {&zs_row, &ft_row, &static_row, &od_row, &os_row}) {
        finish_row(*r);
        report.strategies.push_back(std::move(*r));
    }
    report.config["grid"] = std::vector<double>(grid.begin(), grid.end());
    return report;
}

namespace {

std::pair<StrategyRow, StrategyRow> run_task_arith(const BenchmarkSuite& suite, const ExpertSet& experts,
                                                   const MergeStrategy& s, const ResultSink& on_result = {}) {
    if (experts.task_experts.empty()) throw Error(ErrorCode::InvalidArgument, "no task experts were trained");
    const Expert base = experts.zs_expert();
    const std::vector<Expert> task = experts.task_expert_list();
    StrategyRow st = make_row("task_arith(" + format_number(s.lambda0) + ")");
    StrategyRow dyn = make_row(row_label(s));
    st.average_kind = dyn.average_kind = "task_average";
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto* d : task_domains(suite)) {
        const EvalResult sr = static_task_arith_eval(base, task, d->data, s.lambda0);
        st.domains.push_back(metrics_from(sr, *d));
        const EvalResult r = dawin_task_arith_eval(base, task, d->data, s.lambda0, s.k, s.options);
        dyn.domains.push_back(metrics_from(r, *d));
        if (on_result) {
            on_result(st.strategy, *d, sr);
            on_result(dyn.strategy, *d, r);
        }
        coeffs.push_back(r.diagnostics.at("mean_coefficients"));
    }
    dyn.details["mean_coefficients"] = coeffs;
    dyn.details["lambda0"] = s.lambda0;
    finish_row(st);
    finish_row(dyn);
    return {std::move(st), std::move(dyn)};
}

}  // namespace

EvalReport run_main(const BenchmarkSuite& suite, const ExpertSet& experts, std::span<const MergeStrategy> strategies,
                    const ResultSink& on_result) {
    const auto domains = suite.eval_domains();
    const Expert zs = experts.zs_expert();
    const Expert ft = experts.ft_expert();
    EvalReport report;
    report.seed = suite.seed;
    nlohmann::json strategy_cfg = nlohmann::json::array();

    for (const MergeStrategy& s : strategies) {
        s.validate();
        strategy_cfg.push_back({{"kind", s.name()},
                                {"lambda", s.lambda},
                                {"grid", s.grid},
                                {"k", s.k},
                                {"lambda0", s.lambda0},
                                {"offset", s.options.offset},
                                {"calibrate", s.options.calibrate},
                                {"batch_size", s.options.batch_size},
                                {"scale", s.options.scale},
                                {"posterior_membership", s.options.posterior_membership}});
        if (s.kind == StrategyKind::DawinTaskArith) {
            auto [st, dyn] = run_task_arith(suite, experts, s, on_result);
            report.strategies.push_back(std::move(st));
            report.strategies.push_back(std::move(dyn));
            continue;
        }

        StrategyRow row = make_row(row_label(s));
        std::optional<ParamVector> soup;
        double soup_lambda = 0.0;
        if (s.kind == StrategyKind::UniformSoup || s.kind == StrategyKind::GreedySoup) {
            std::vector<ParamVector> ingredients;
            for (const auto& c : experts.soup_ingredients) ingredients.push_back(c.payload);
            if (s.kind == StrategyKind::UniformSoup) {
                soup = uniform_soup(ingredients);
            } else {
                GreedySoup g = greedy_soup(experts.arch, ingredients, suite.id_val.data);
                row.details["used"] = g.used;
                row.details["id_val_accuracy"] = g.val_accuracy;
                soup = std::move(g.soup);
            }
        } else if (s.kind == StrategyKind::WiseSweep) {
            const WiseSweepTable t = wise_sweep(zs, ft, s.grid, suite.id_val.data, domain_data(domains));
            row.details = sweep_json(t);
            soup_lambda = t.best_lambda;
        }

        const std::vector<Expert> pair{zs, ft};
        nlohmann::json per_domain = nlohmann::json::object();
        for (const auto* d : domains) {
            EvalResult r;
            switch (s.kind) {
                case StrategyKind::Static: r = static_eval(zs, ft, s.lambda, d->data); break;
                case StrategyKind::WiseSweep: r = static_eval(zs, ft, soup_lambda, d->data); break;
                case StrategyKind::UniformSoup:
                case StrategyKind::GreedySoup:
                    r = params_eval(experts.arch, *soup, d->data, s.name());
                    r.merge_count = 1;
                    break;
                case StrategyKind::DawinSample: r = dawin_sample_eval(zs, ft, d->data, s.options); break;
                case StrategyKind::DawinClustered: r = dawin_clustered_eval(zs, ft, d->data, s.k, s.options); break;
                case StrategyKind::Dcs: r = dcs_eval(pair, d->data, s.options.calibrate); break;
                case StrategyKind::Doe: r = doe_eval(pair, d->data, s.options.calibrate); break;
                case StrategyKind::OracleSample: r = oracle_sample_eval(zs, ft, d->data); break;
                case StrategyKind::OracleDomain: {
                    const OracleDomainResult od = oracle_domain_search(zs, ft, d->data, s.grid);
                    r = static_eval(zs, ft, od.best_lambda, d->data);
                    r.merge_count = s.grid.size();
                    per_domain[d->name] = {{"best_lambda", od.best_lambda}};
                    break;
                }
                case StrategyKind::DawinTaskArith: break;
            }
            if (s.kind == StrategyKind::DawinSample || s.kind == StrategyKind::DawinClustered) {
                const auto [mean, sd] = mean_std(column_of(r, 1));
                nlohmann::json entry{{"lambda_mean", mean}, {"lambda_std", sd}};
                if (r.diagnostics.contains("mixture")) entry["mixture"] = r.diagnostics["mixture"];
                per_domain[d->name] = entry;
            }
            row.domains.push_back(metrics_from(r, *d));
            if (on_result) on_result(row.strategy, *d, r);
        }
        if (!per_domain.empty()) row.details["domains"] = per_domain;
        finish_row(row);
        report.strategies.push_back(std::move(row));
    }
    report.config["strategies"] = strategy_cfg;
    return report;
}

EvalReport run_analysis(const BenchmarkSuite& suite, const ExpertSet& experts, const DawinOptions& options) {
    const Expert zs = experts.zs_expert();
    const Expert ft = experts.ft_expert();
    EvalReport report;
    report.seed = suite.seed;
    nlohmann::json grids = nlohmann::json::object();
    nlohmann::json offset_effect = nlohmann::json::object();
    nlohmann::json mixture_k = nlohmann::json::object();

    std::vector<double> full_grid{0.0};
    for (double g : default_grid()) full_grid.push_back(g);
    full_grid.push_back(1.0);

    for (const auto* d : suite.eval_domains()) {
        const LabeledData& data = d->data;
        const std::array<Eigen::MatrixXd, 2> probs{predict_proba(experts.arch, zs.theta.values(), data.features),
                                                   predict_proba(experts.arch, ft.theta.values(), data.features)};
        const auto records = make_records(probs, data.labels);

        SplitStats stats;
        stats.domain = d->name;
        stats.correlation = ratio_correlation(records);
        stats.counts = stats.correlation.counts;

        std::vector<std::size_t> split_of(records.size());
        for (std::size_t i = 0; i < records.size(); ++i) {
            split_of[i] = static_cast<std::size_t>(correctness_split(records[i].predicted[0], records[i].predicted[1], *records[i].label));
        }
        const EvalResult wa = static_eval(zs, ft, 0.5, data);
        const EvalResult dw = dawin_sample_eval(zs, ft, data, options);
        const auto per_split = [&](const auto& entropy_of) {
            std::array<double, 4> sum{};
            std::array<std::size_t, 4> n{};
            for (std::size_t i = 0; i < records.size(); ++i) {
                sum[split_of[i]] += entropy_of(i);
                ++n[split_of[i]];
            }
            std::array<std::optional<double>, 4> out;
            for (std::size_t s = 0; s < 4; ++s) {
                if (n[s]) out[s] = sum[s] / static_cast<double>(n[s]);
            }
            return out;
        };
        stats.models = {"zs", "ft", "wa_0.5", "dawin"};
        stats.mean_entropy.push_back(per_split([&](std::size_t i) { return records[i].entropies[0]; }));
        stats.mean_entropy.push_back(per_split([&](std::size_t i) { return records[i].entropies[1]; }));
        stats.mean_entropy.push_back(per_split([&](std::size_t i) { return entropy(wa.predictions[i].prob); }));
        stats.mean_entropy.push_back(per_split([&](std::size_t i) { return entropy(dw.predictions[i].prob); }));
        report.splits.push_back(std::move(stats));

        std::vector<double> oracle(records.size());
        for (std::size_t i = 0; i < records.size(); ++i) {
            const int y = data.labels[i];
            oracle[i] = oracle_coeff(probs[0](static_cast<Eigen::Index>(i), y), probs[1](static_cast<Eigen::Index>(i), y));
        }
        DawinOptions with_offset = options;
        with_offset.offset = true;
        DawinOptions plain = options;
        plain.offset = false;
        const Eigen::VectorXd lam_off = dawin_pair_coefficients(zs, ft, data.features, with_offset).coefficients.col(1);
        const Eigen::VectorXd lam_plain = dawin_pair_coefficients(zs, ft, data.features, plain).coefficients.col(1);
        report.histograms.push_back(make_histogram("oracle", d->name, oracle));
        report.histograms.push_back(make_histogram("entropy_offset", d->name, std::span<const double>(lam_off.data(), lam_off.size())));
        report.histograms.push_back(make_histogram("entropy_plain", d->name, std::span<const double>(lam_plain.data(), lam_plain.size())));

        const auto [m_off, s_off] = mean_std(lam_off);
        const auto [m_plain, s_plain] = mean_std(lam_plain);
        offset_effect[d->name] = {{"offset_mean", m_off},
                                  {"offset_std", s_off},
                                  {"plain_mean", m_plain},
                                  {"plain_std", s_plain},
                                  {"max_abs_change", (lam_off - lam_plain).cwiseAbs().maxCoeff()}};

        nlohmann::json g = nlohmann::json::array();
        for (double lambda : full_grid) {
            const EvalResult r = static_eval(zs, ft, lambda, data);
            g.push_back({{"lambda", lambda}, {"mean_entropy", r.mean_entropy()}, {"accuracy", r.accuracy(data.labels)}});
        }
        grids[d->name] = {{"grid", g}, {"dawin_mean_entropy", dw.mean_entropy()}, {"dawin_accuracy", dw.accuracy(data.labels)}};

        // Final log-likelihood per K; no selection rule is applied.
        const Eigen::VectorXd& lam_used = options.offset ? lam_off : lam_plain;
        nlohmann::json by_k = nlohmann::json::array();
        for (std::size_t k = 1; k <= 5; ++k) {
            MixtureOptions mo;
            mo.k = k;
            const BetaMixtureModel m = em_fit(std::span<const double>(lam_used.data(), static_cast<std::size_t>(lam_used.size())), mo);
            by_k.push_back({{"k", k}, {"loglik", m.loglik_trace.back()}, {"iterations", m.iterations}, {"converged", m.converged}});
        }
        mixture_k[d->name] = by_k;
    }
    report.extras["entropy_path"] = grids;
    report.extras["offset_effect"] = offset_effect;
    report.extras["mixture_loglik_by_k"] = mixture_k;
    return report;
}

std::optional<bool> true_expert_weight_floor(const Eigen::VectorXd& h, const std::vector<bool>& correct) {
    if (static_cast<std::size_t>(h.size()) != correct.size()) throw Error(ErrorCode::InvalidArgument, "size mismatch");
    double max_true = -std::numeric_limits<double>::infinity();
    double min_false = std::numeric_limits<double>::infinity();
    bool any = false;
    for (Eigen::Index j = 0; j < h.size(); ++j) {
        if (correct[static_cast<std::size_t>(j)]) {
            any = true;
            max_true = std::max(max_true, h[j]);
        } else {
            min_false = std::min(min_false, h[j]);
        }
    }
    if (!any || max_true > min_false) return std::nullopt;
    const Eigen::VectorXd w = coeff_multi(h);
    const double bound = 1.0 / static_cast<double>(h.size());
    for (Eigen::Index j = 0; j < h.size(); ++j) {
        if (correct[static_cast<std::size_t>(j)] && w[j] < bound - 1e-12) return false;
    }
    return true;
}

std::optional<bool> true_expert_dominance(const Eigen::VectorXd& h, const std::vector<bool>& correct) {
    if (static_cast<std::size_t>(h.size()) != correct.size()) throw Error(ErrorCode::InvalidArgument, "size mismatch");
    double max_true = -std::numeric_limits<double>::infinity();
    double min_false = std::numeric_limits<double>::infinity();
    bool any = false;
    for (Eigen::Index j = 0; j < h.size(); ++j) {
        if (correct[static_cast<std::size_t>(j)]) {
            any = true;
            max_true = std::max(max_true, h[j]);
        } else {
            min_false = std::min(min_false, h[j]);
        }
    }
    if (!any || max_true > min_false) return std::nullopt;
    const Eigen::VectorXd w = coeff_multi(h);
    double min_wt = 1.0, max_wt = 0.0, max_wf = 0.0;
    for (Eigen::Index j = 0; j < h.size(); ++j) {
        if (correct[static_cast<std::size_t>(j)]) {
            min_wt = std::min(min_wt, w[j]);
            max_wt = std::max(max_wt, w[j]);
        } else {
            max_wf = std::max(max_wf, w[j]);
        }
    }
    return min_wt >= max_wf - 1e-12 && max_wt >= 1.0 / static_cast<double>(h.size()) - 1e-12;
}

namespace {

struct ExpertTally {
    std::size_t samples = 0;
    std::size_t all_true_violations = 0;
    std::size_t dominance_violations = 0;
    std::string first_counterexample;

    void add(const Eigen::VectorXd& h, const std::vector<bool>& correct) {
        const auto all = true_expert_weight_floor(h, correct);
        if (!all) return;
        ++samples;
        if (!*all) {
            ++all_true_violations;
            if (first_counterexample.empty()) {
                const Eigen::VectorXd w = coeff_multi(h);
                first_counterexample = "H=(";
                for (Eigen::Index j = 0; j < h.size(); ++j) first_counterexample += (j ? "," : "") + format_number(h[j]);
                first_counterexample += ") correct=(";
                for (std::size_t j = 0; j < correct.size(); ++j) first_counterexample += (j ? "," : "") + std::to_string(correct[j] ? 1 : 0);
                first_counterexample += ") lambda=(";
                for (Eigen::Index j = 0; j < w.size(); ++j) first_counterexample += (j ? "," : "") + format_number(w[j]);
                first_counterexample += ")";
            }
        }
        if (!*true_expert_dominance(h, correct)) ++dominance_violations;
    }
};

void tally_models(ExpertTally& tally, const std::vector<Expert>& models, const LabeledData& data) {
    std::vector<Eigen::MatrixXd> probs;
    for (const auto& m : models) probs.push_back(predict_proba(m.arch, m.theta.values(), data.features));
    Eigen::VectorXd h(static_cast<Eigen::Index>(models.size()));
    std::vector<bool> correct(models.size());
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        for (std::size_t j = 0; j < models.size(); ++j) {
            h[static_cast<Eigen::Index>(j)] = entropy(probs[j].row(i).transpose());
            correct[j] = row_argmax(probs[j].row(i).transpose()) == data.labels[static_cast<std::size_t>(i)];
        }
        tally.add(h, correct);
    }
}

// Random Beta-mixture sample used by the EM checks.
std::vector<double> beta_mixture_sample(Rng& rng, const std::vector<BetaComponent>& comps, std::size_t n) {
    const auto gamma = [&rng](double shape) {
        // Marsaglia-Tsang, boosted for shape < 1.
        const double boost = shape < 1.0 ? std::pow(rng.uniform(), 1.0 / shape) : 1.0;
        const double a = shape < 1.0 ? shape + 1.0 : shape;
        const double d = a - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = rng.normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            const double u = rng.uniform();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v * boost;
        }
    };
    std::vector<double> out(n);
    for (auto& v : out) {
        double u = rng.uniform();
        std::size_t k = 0;
        while (k + 1 < comps.size() && u > comps[k].pi) u -= comps[k++].pi;
        const double x = gamma(comps[k].a);
        const double y = gamma(comps[k].b);
        v = x / (x + y);
    }
    return out;
}

}  // namespace

std::vector<PropertyCheck> run_property_suite(const BenchmarkSuite& suite, const ExpertSet& experts,
                                              const PropertySuiteOptions& opt) {
    std::vector<PropertyCheck> checks;
    const Expert zs = experts.zs_expert();
    const Expert ft = experts.ft_expert();
    const auto domains = suite.eval_domains();
    const std::vector<double> grid = default_grid();

    {
        Rng rng = Rng::substream(suite.seed, "property/algebra");
        std::size_t bad = 0;
        double worst = 0.0;
        for (std::size_t t = 0; t < opt.synthetic_cases; ++t) {
            const std::size_t m = 2 + rng.index(7);
            Eigen::VectorXd h(static_cast<Eigen::Index>(m));
            for (auto& v : h) v = rng.uniform(0.0, std::log(10.0));
            const Eigen::VectorXd w = coeff_multi(h);
            const Eigen::VectorXd ws = coeff_multi((h.array() + rng.uniform(-50.0, 50.0)).matrix());
            const double l = coeff_pair(h[0], h[1]);
            const double err = std::max({std::abs(w.sum() - 1.0), (w - ws).cwiseAbs().maxCoeff(),
                                         std::abs(l + coeff_pair(h[1], h[0]) - 1.0),
                                         std::abs(l - 1.0 / (1.0 + std::exp(h[1] - h[0])))});
            const bool in_range = (w.array() >= 0.0).all() && (w.array() <= 1.0).all();
            worst = std::max(worst, err);
            if (err > 1e-12 || !in_range) ++bad;
        }
        checks.push_back(make_check("coefficient_algebra", opt.synthetic_cases, bad, 1e-12, worst));
    }

    {
        ExpertTally synth;
        Rng rng = Rng::substream(suite.seed, "property/true_experts");
        while (synth.samples < opt.synthetic_cases) {
            const std::size_t m = 2 + rng.index(7);
            Eigen::VectorXd h(static_cast<Eigen::Index>(m));
            for (auto& v : h) v = rng.uniform(0.0, std::log(10.0));
            std::vector<double> sorted(h.data(), h.data() + h.size());
            std::sort(sorted.begin(), sorted.end());
            const std::size_t correct_count = 1 + rng.index(m);
            std::vector<bool> correct(m);
            for (std::size_t j = 0; j < m; ++j) correct[j] = h[static_cast<Eigen::Index>(j)] <= sorted[correct_count - 1];
            synth.add(h, correct);
        }
        ExpertTally bench;
        for (const auto* d : domains) tally_models(bench, {zs, ft}, d->data);
        const auto tasks = experts.task_expert_list();
        if (tasks.size() >= 2) {
            for (const auto* d : task_domains(suite)) tally_models(bench, tasks, d->data);
        }
        const std::size_t n = synth.samples + bench.samples;
        const std::string ce = !synth.first_counterexample.empty() ? synth.first_counterexample : bench.first_counterexample;
        checks.push_back(make_check("true_expert_weight_floor", n, synth.all_true_violations + bench.all_true_violations, 1e-12,
                                    static_cast<double>(synth.all_true_violations + bench.all_true_violations),
                                    "synthetic " + std::to_string(synth.all_true_violations) + "/" + std::to_string(synth.samples) +
                                        ", benchmark " + std::to_string(bench.all_true_violations) + "/" +
                                        std::to_string(bench.samples) + (ce.empty() ? "" : "; e.g. " + ce)));
        checks.push_back(make_check("true_expert_dominance", n, synth.dominance_violations + bench.dominance_violations, 1e-12,
                                    static_cast<double>(synth.dominance_violations + bench.dominance_violations)));
    }

    {
        Rng rng = Rng::substream(suite.seed, "property/em");
        std::size_t decreasing = 0;
        double worst = 0.0;
        for (std::size_t t = 0; t < opt.em_datasets; ++t) {
            const std::size_t k = 1 + rng.index(3);
            std::vector<BetaComponent> comps(k);
            double total = 0.0;
            for (auto& c : comps) {
                c.a = std::exp(rng.uniform(std::log(0.3), std::log(30.0)));
                c.b = std::exp(rng.uniform(std::log(0.3), std::log(30.0)));
                c.pi = rng.uniform(0.2, 1.0);
                total += c.pi;
            }
            for (auto& c : comps) c.pi /= total;
            const auto values = beta_mixture_sample(rng, comps, 200 + rng.index(1800));
            MixtureOptions mo;
            mo.k = opt.k;
            mo.seed = t;
            const BetaMixtureModel model = em_fit(values, mo);
            for (std::size_t i = 1; i < model.loglik_trace.size(); ++i) {
                const double drop = model.loglik_trace[i - 1] - model.loglik_trace[i];
                worst = std::max(worst, drop);
                if (drop > 1e-9) ++decreasing;
            }
        }
        checks.push_back(make_check("em_loglik_monotone", opt.em_datasets, decreasing, 1e-9, worst));
    }

    {
        Rng rng = Rng::substream(suite.seed, "property/em_recovery");
        const auto values = beta_mixture_sample(rng, {{2.0, 20.0, 0.4}, {20.0, 2.0, 0.6}}, 20000);
        MixtureOptions mo;
        mo.k = 2;
        const BetaMixtureModel model = em_fit(values, mo);
        std::vector<std::size_t> order{0, 1};
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return component_mean(model, a) < component_mean(model, b); });
        const double pi_err = std::max(std::abs(model.components[order[0]].pi - 0.4), std::abs(model.components[order[1]].pi - 0.6));
        const double mean_err = std::max(std::abs(component_mean(model, order[0]) - 2.0 / 22.0),
                                         std::abs(component_mean(model, order[1]) - 20.0 / 22.0));
        checks.push_back(make_check("em_parameter_recovery", values.size(), (pi_err > 0.05) + (mean_err > 0.02), 0.05,
                                    std::max(pi_err, mean_err)));
    }

    {
        std::size_t valley_fail = 0, dawin_fail = 0, nondegenerate_fail = 0;
        double worst_valley = -1e300, worst_dawin = -1e300;
        std::string detail;
        for (const auto* d : domains) {
            const double h0 = params_eval(experts.arch, zs.theta, d->data, "zs").mean_entropy();
            const double h1 = params_eval(experts.arch, ft.theta, d->data, "ft").mean_entropy();
            double best_h = std::numeric_limits<double>::infinity();
            double best_lambda = grid.front();
            for (double lambda : grid) {
                const double h = static_eval(zs, ft, lambda, d->data).mean_entropy();
                if (h < best_h) {
                    best_h = h;
                    best_lambda = lambda;
                }
            }
            const EvalResult dw = dawin_sample_eval(zs, ft, d->data, opt.options);
            const double hd = dw.mean_entropy();
            worst_valley = std::max(worst_valley, best_h - std::min(h0, h1));
            worst_dawin = std::max(worst_dawin, hd - best_h);
            valley_fail += best_h > std::min(h0, h1);
            dawin_fail += hd > best_h;
            detail += d->name + ": zs " + format_number(h0) + " ft " + format_number(h1) + " grid " + format_number(best_h) + "@" +
                      format_number(best_lambda) + " dawin " + format_number(hd) + "; ";
            nondegenerate_fail += mean_std(column_of(dw, 1)).second <= 0.01;
        }
        checks.push_back(make_check("entropy_valley_grid", domains.size(), valley_fail, 0.0, worst_valley, detail));
        checks.push_back(make_check("entropy_valley_dawin", domains.size(), dawin_fail, 0.0, worst_dawin, detail));
        checks.push_back(make_check("coefficients_nondegenerate", domains.size(), nondegenerate_fail, 0.01, 0.0));
    }

    {
        std::size_t bad = 0;
        double worst = 0.0;
        for (const auto* d : domains) {
            const EvalResult s = dawin_sample_eval(zs, ft, d->data, opt.options);
            const EvalResult c = dawin_clustered_eval(zs, ft, d->data, opt.k, opt.options);
            const double gap = std::abs(s.accuracy(d->data.labels) - c.accuracy(d->data.labels));
            worst = std::max(worst, gap);
            bad += gap > 0.01 || c.merge_count != opt.k;
        }
        checks.push_back(make_check("clustered_matches_sample", domains.size(), bad, 0.01, worst));
    }

    {
        const EvalReport pilot = run_pilot(suite, experts, grid);
        const double os = pilot.row("oracle_sample").average;
        const double od = pilot.row("oracle_domain").average;
        const double bs = pilot.row("best_static").average;
        const double single = std::max(pilot.row("zs").average, pilot.row("ft").average);
        const std::size_t bad = (os < od) + (od < bs) + (bs < single);
        checks.push_back(make_check("pilot_ordering", 3, bad, 0.0, os - bs,
                                    "oracle_sample " + format_number(os) + " oracle_domain " + format_number(od) +
                                        " best_static " + format_number(bs) + " max(zs,ft) " + format_number(single)));

        std::size_t dominated = 0;
        for (const auto* d : domains) {
            const double acc = pilot.row("oracle_sample").at(d->name).accuracy;
            for (double lambda : grid) dominated += static_eval(zs, ft, lambda, d->data).accuracy(d->data.labels) > acc;
        }
        checks.push_back(make_check("oracle_sample_dominates_static", domains.size() * grid.size(), dominated, 0.0,
                                    static_cast<double>(dominated)));

        const std::vector<Expert> pair{zs, ft};
        double dcs = 0.0;
        for (std::size_t i = 1; i < domains.size(); ++i) dcs += dcs_eval(pair, domains[i]->data).accuracy(domains[i]->data.labels);
        dcs /= static_cast<double>(domains.size() - 1);
        checks.push_back(make_check("dcs_beats_ft", 1, dcs < pilot.row("ft").average, 0.0, dcs - pilot.row("ft").average));
    }

    {
        const EvalReport analysis = run_analysis(suite, experts, opt.options);
        std::size_t bad = 0;
        double worst = 1.0;
        for (const auto& s : analysis.splits) {
            const auto& r = s.correlation.per_split[static_cast<std::size_t>(Split::TrueTrue)];
            if (!r || *r <= 0.0) ++bad;
            if (r) worst = std::min(worst, *r);
        }
        checks.push_back(make_check("truetrue_ratio_correlation", analysis.splits.size(), bad, 0.0, worst));
    }

    if (experts.task_experts.size() >= 2) {
        MergeStrategy s = MergeStrategy::parse("dawin_task_arith");
        s.lambda0 = opt.lambda0;
        s.options = opt.options;
        auto [st, dyn] = run_task_arith(suite, experts, s);
        std::size_t off_diag = 0;
        const auto& coeffs = dyn.details["mean_coefficients"];
        for (std::size_t t = 0; t < coeffs.size(); ++t) {
            const auto row = coeffs[t].get<std::vector<double>>();
            const auto best = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
            off_diag += best != t;
        }
        checks.push_back(make_check("mtl_diagonal_dominance", coeffs.size(), off_diag, 0.0, static_cast<double>(off_diag)));
        checks.push_back(make_check("mtl_dawin_vs_task_arith", 1, dyn.average < st.average, 0.0, dyn.average - st.average));
    }

    {
        double lo = 1.0, hi = 0.0;
        std::string detail;
        for (std::size_t b : opt.batch_sizes) {
            DawinOptions o = opt.options;
            o.batch_size = b;
            double sum = 0.0;
            for (std::size_t i = 1; i < domains.size(); ++i) sum += dawin_sample_eval(zs, ft, domains[i]->data, o).accuracy(domains[i]->data.labels);
            const double avg = sum / static_cast<double>(domains.size() - 1);
            lo = std::min(lo, avg);
            hi = std::max(hi, avg);
            detail += (b ? std::to_string(b) : std::string("full")) + ":" + format_number(avg) + " ";
        }
        checks.push_back(make_check("batch_size_spread", opt.batch_sizes.size(), hi - lo > 0.01, 0.01, hi - lo, detail));
    }

    {
        std::size_t diffs = 0;
        for (const auto* d : domains) {
            const EvalResult a = dawin_clustered_eval(zs, ft, d->data, opt.k, opt.options);
            const EvalResult b = dawin_clustered_eval(zs, ft, d->data, opt.k, opt.options);
            diffs += a.prob_matrix() != b.prob_matrix();
        }
        checks.push_back(make_check("repeat_run_identical", domains.size(), diffs, 0.0, static_cast<double>(diffs)));
    }

    {
        std::vector<ParamVector> ingredients;
        for (const auto& c : experts.soup_ingredients) ingredients.push_back(c.payload);
        if (ingredients.size() >= 2) {
            const GreedySoup g = greedy_soup(experts.arch, ingredients, suite.id_val.data);
            double best = 0.0;
            for (const auto& p : ingredients) best = std::max(best, accuracy(predict_proba(experts.arch, p.values(), suite.id_val.data.features), suite.id_val.data.labels));
            const double soup_acc = accuracy(predict_proba(experts.arch, g.soup.values(), suite.id_val.data.features), suite.id_val.data.labels);
            checks.push_back(make_check("greedy_soup_not_worse", 1, soup_acc < best, 0.0, soup_acc - best));
        }
    }

    {
        std::size_t bad = 0;
        const double tol = 0.02;
        double worst = 0.0;
        std::vector<const Domain*> all = domains;
        all.push_back(&suite.id_train);
        all.push_back(&suite.id_val);
        for (const auto* d : all) {
            std::vector<std::size_t> counts(suite.spec.class_count, 0);
            for (int y : d->data.labels) ++counts[static_cast<std::size_t>(y)];
            const double expected = 1.0 / static_cast<double>(suite.spec.class_count);
            for (std::size_t c : counts) {
                const double dev = std::abs(static_cast<double>(c) / static_cast<double>(d->data.size()) - expected);
                worst = std::max(worst, dev);
                bad += dev > tol;
            }
        }
        checks.push_back(make_check("class_priors_uniform", all.size(), bad, tol, worst));
    }

    {
        const double id_gap = params_eval(experts.arch, ft.theta, suite.id_test.data, "ft").accuracy(suite.id_test.data.labels) -
                              params_eval(experts.arch, zs.theta, suite.id_test.data, "zs").accuracy(suite.id_test.data.labels);
        bool flipped = false;
        for (const auto& d : suite.ood_tests) {
            const double gap = params_eval(experts.arch, ft.theta, d.data, "ft").accuracy(d.data.labels) -
                               params_eval(experts.arch, zs.theta, d.data, "zs").accuracy(d.data.labels);
            flipped = flipped || (gap * id_gap < 0.0);
        }
        checks.push_back(make_check("generalist_specialist_tradeoff", suite.ood_tests.size(), !flipped, 0.0, id_gap));
    }

    {
        Rng rng = Rng::substream(suite.seed, "property/temperature");
        std::size_t bad = 0;
        for (std::size_t t = 0; t < 1000; ++t) {
            Eigen::MatrixXd logits(1, static_cast<Eigen::Index>(suite.spec.class_count));
            for (auto& v : logits.reshaped()) v = 5.0 * rng.normal();
            double prev = -1.0;
            for (double temp = 1.0; temp <= 64.0; temp *= 1.5) {
                const double h = entropy(softmax_rows(logits, temp).row(0).transpose());
                if (h < prev - 1e-12) ++bad;
                prev = h;
            }
        }
        checks.push_back(make_check("entropy_monotone_in_temperature", 1000, bad, 1e-12, static_cast<double>(bad)));
    }
    return checks;
}

nlohmann::json to_json(const EvalReport& report) {
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["seed"] = report.seed;
    j["config"] = report.config;
    j["nondeterministic_fields"] = {"strategies[].domains[].wall_ms"};
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.strategies) {
        nlohmann::json doms = nlohmann::json::array();
        for (const auto& d : r.domains) {
            doms.push_back({{"domain", d.domain},
                            {"samples", d.samples},
                            {"accuracy", d.accuracy},
                            {"mean_entropy", d.mean_entropy},
                            {"merge_count", d.merge_count},
                            {"wall_ms", d.wall_ms}});
        }
        rows.push_back({{"strategy", r.strategy}, {"average", r.average}, {"average_kind", r.average_kind}, {"details", r.details}, {"domains", doms}});
    }
    j["strategies"] = rows;
    nlohmann::json splits = nlohmann::json::array();
    for (const auto& s : report.splits) {
        nlohmann::json counts, per_split, entropies = nlohmann::json::object();
        for (Split sp : kSplits) {
            const auto i = static_cast<std::size_t>(sp);
            counts[to_string(sp)] = s.counts[i];
            per_split[to_string(sp)] = opt_to_json(s.correlation.per_split[i]);
        }
        for (std::size_t m = 0; m < s.models.size(); ++m) {
            nlohmann::json e;
            for (Split sp : kSplits) e[to_string(sp)] = opt_to_json(s.mean_entropy[m][static_cast<std::size_t>(sp)]);
            entropies[s.models[m]] = e;
        }
        splits.push_back({{"domain", s.domain},
                          {"counts", counts},
                          {"correlation", {{"overall", opt_to_json(s.correlation.overall)}, {"per_split", per_split}}},
                          {"mean_entropy", entropies}});
    }
    j["splits"] = splits;
    nlohmann::json hists = nlohmann::json::array();
    for (const auto& h : report.histograms) hists.push_back({{"name", h.name}, {"domain", h.domain}, {"bins", h.counts.size()}, {"counts", h.counts}});
    j["histograms"] = hists;
    nlohmann::json props = nlohmann::json::array();
    for (const auto& p : report.properties) {
        props.push_back({{"name", p.name},
                         {"samples", p.samples},
                         {"violations", p.violations},
                         {"tolerance", p.tolerance},
                         {"measured", p.measured},
                         {"passed", p.passed},
                         {"detail", p.detail}});
    }
    j["properties"] = props;
    j["extras"] = report.extras;
    return j;
}

EvalReport report_from_json(const nlohmann::json& j) {
    try {
        if (j.at("schema_version").get<int>() != kReportSchemaVersion) throw Error(ErrorCode::Format, "unsupported report schema version");
        EvalReport r;
        r.seed = j.at("seed").get<std::uint64_t>();
        r.config = j.at("config");
        for (const auto& row : j.at("strategies")) {
            StrategyRow s;
            s.strategy = row.at("strategy").get<std::string>();
            s.average = row.at("average").get<double>();
            s.average_kind = row.at("average_kind").get<std::string>();
            s.details = row.at("details");
            for (const auto& d : row.at("domains")) {
                s.domains.push_back(DomainMetrics{d.at("domain").get<std::string>(), d.at("samples").get<std::size_t>(),
                                                  d.at("accuracy").get<double>(), d.at("mean_entropy").get<double>(),
                                                  d.at("merge_count").get<std::size_t>(), d.value("wall_ms", 0.0)});
            }
            r.strategies.push_back(std::move(s));
        }
        for (const auto& sj : j.at("splits")) {
            SplitStats s;
            s.domain = sj.at("domain").get<std::string>();
            s.correlation.overall = opt_from_json(sj.at("correlation").at("overall"));
            for (Split sp : kSplits) {
                const auto i = static_cast<std::size_t>(sp);
                s.counts[i] = sj.at("counts").at(to_string(sp)).get<std::size_t>();
                s.correlation.per_split[i] = opt_from_json(sj.at("correlation").at("per_split").at(to_string(sp)));
            }
            s.correlation.counts = s.counts;
            for (const auto& [model, e] : sj.at("mean_entropy").items()) {
                s.models.push_back(model);
                std::array<std::optional<double>, 4> v;
                for (Split sp : kSplits) v[static_cast<std::size_t>(sp)] = opt_from_json(e.at(to_string(sp)));
                s.mean_entropy.push_back(v);
            }
            r.splits.push_back(std::move(s));
        }
        for (const auto& h : j.at("histograms")) {
            r.histograms.push_back(Histogram{h.at("name").get<std::string>(), h.at("domain").get<std::string>(),
                                             h.at("counts").get<std::vector<std::size_t>>()});
        }
        for (const auto& p : j.at("properties")) {
            PropertyCheck c;
            c.name = p.at("name").get<std::string>();
            c.samples = p.at("samples").get<std::size_t>();
            c.violations = p.at("violations").get<std::size_t>();
            c.tolerance = p.at("tolerance").get<double>();
            c.measured = p.at("measured").get<double>();
            c.passed = p.at("passed").get<bool>();
            c.detail = p.at("detail").get<std::string>();
            r.properties.push_back(std::move(c));
        }
        r.extras = j.at("extras");
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Format, std::string("malformed report: ") + e.what());
    }
}

nlohmann::json strip_timing(const nlohmann::json& report_json) {
    nlohmann::json out = report_json;
    if (out.contains("strategies")) {
        for (auto& row : out["strategies"]) {
            for (auto& d : row["domains"]) d.erase("wall_ms");
        }
    }
    return out;
}

std::string report_to_csv(const EvalReport& report) {
    std::string out = "strategy,domain,samples,accuracy,mean_entropy,merge_count,wall_ms\n";
    char buf[160];
    for (const auto& r : report.strategies) {
        for (const auto& d : r.domains) {
            std::snprintf(buf, sizeof buf, ",%zu,%.17g,%.17g,%zu,%.3f\n", d.samples, d.accuracy, d.mean_entropy, d.merge_count, d.wall_ms);
            out += r.strategy + "," + d.domain + buf;
        }
    }
    return out;
}

void emit_report(const EvalReport& report, const std::filesystem::path& path, ReportFormat format) {
    const std::string text = format == ReportFormat::Json ? to_json(report).dump(2) + "\n" : report_to_csv(report);
    write_text_atomic(path, text);
}

}  // namespace dawin
