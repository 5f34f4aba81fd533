// dawin: command-line front end for suite generation, training, coefficient
// export, mixture fitting, evaluation, analysis and the property suite.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dawin/error.hpp"
#include "dawin/harness.hpp"

namespace fs = std::filesystem;
using namespace dawin;

namespace {

fs::path report_root() {
    const char* env = std::getenv("DAWIN_REPORT_DIR");
    return env && *env ? fs::path(env) : fs::path(".");
}

fs::path output_or_default(const std::string& out, const std::string& fallback) {
    return out.empty() ? report_root() / fallback : fs::path(out);
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            grid.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument, "bad grid value '" + item + "'");
        }
    }
    validate_grid(grid);
    return grid;
}

struct MergeFlags {
    bool offset = true;
    bool calibrate = false;
    std::size_t k = 3;
    bool k_set = false;
    double lambda = 0.5;
    double lambda0 = 0.3;
    std::size_t batch_size = 0;
    double scale = 1.0;
    bool posterior = false;
    std::string grid = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
    std::uint64_t em_seed = 0;

    void add_to(CLI::App* cmd) {
        cmd->add_flag("--offset,!--no-offset", offset, "Domain offset adjustment of the entropy coefficients (default on)");
        cmd->add_flag("--calibrate", calibrate, "Temperature-scale the experts before computing entropies");
        cmd->add_option("--k", k, "Mixture components for clustered merging (task arithmetic: 0 = per sample, default 1)")
            ->check(CLI::NonNegativeNumber)
            ->each([this](const std::string&) { k_set = true; });
        cmd->add_option("--lambda", lambda, "Coefficient for the static strategy")->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--lambda0", lambda0, "Task-vector scaling term")->check(CLI::PositiveNumber);
        cmd->add_option("--batch-size", batch_size, "Samples per offset estimate (0 = whole domain)");
        cmd->add_option("--scale", scale, "Multiply each sample coefficient by this factor, clamped to [0,1]")
            ->check(CLI::NonNegativeNumber);
        cmd->add_flag("--posterior-membership", posterior, "Include mixing weights when routing samples to components");
        cmd->add_option("--grid", grid, "Comma-separated interpolation grid for sweeps and oracle search");
        cmd->add_option("--em-seed", em_seed, "Seed recorded with fitted mixtures");
    }

    DawinOptions options() const {
        DawinOptions o;
        o.offset = offset;
        o.calibrate = calibrate;
        o.batch_size = batch_size;
        o.scale = scale;
        o.posterior_membership = posterior;
        o.mixture.seed = em_seed;
        return o;
    }

    MergeStrategy strategy(const std::string& name) const {
        MergeStrategy s = MergeStrategy::parse(name);
        s.lambda = lambda;
        s.grid = parse_grid(grid);
        if (k_set || s.kind != StrategyKind::DawinTaskArith) s.k = k;
        s.lambda0 = lambda0;
        s.options = options();
        s.validate();
        return s;
    }
};

struct ExpertFlags {
    std::string zs, ft;
    std::vector<std::string> soups, tasks;

    void add_to(CLI::App* cmd, bool with_extras) {
        cmd->add_option("--zs", zs, "Generalist checkpoint (trained in-process from --seed when omitted)");
        cmd->add_option("--ft", ft, "Fine-tuned checkpoint (trained in-process from --seed when omitted)");
        if (with_extras) {
            cmd->add_option("--soup", soups, "Extra fine-tuned checkpoints for the soup baselines");
            cmd->add_option("--task", tasks, "Task expert checkpoints, one per suite task, in order");
        }
    }

    // Either loads every checkpoint or, when zs/ft are not given, trains the
    // full expert set from the seed.
    ExpertSet resolve(const BenchmarkSuite& suite, std::uint64_t seed, nlohmann::json& provenance) const {
        if (zs.empty() != ft.empty()) throw Error(ErrorCode::InvalidArgument, "--zs and --ft must be given together");
        if (zs.empty()) {
            provenance = {{"experts", "trained in-process"}, {"training", ExpertSetConfig{}.to_json()}};
            return train_experts(suite, seed);
        }
        std::vector<Checkpoint> soup_cks, task_cks;
        for (const auto& p : soups) soup_cks.push_back(load_checkpoint(p));
        for (const auto& p : tasks) task_cks.push_back(load_checkpoint(p));
        ExpertSet set = assemble_experts(suite, load_checkpoint(zs), load_checkpoint(ft), std::move(soup_cks), std::move(task_cks));
        nlohmann::json ids = {{"zs", set.zs.id()}, {"ft", set.ft.id()}};
        for (const auto& c : set.task_experts) ids["tasks"].push_back(c.id());
        for (std::size_t i = 1; i < set.soup_ingredients.size(); ++i) ids["soups"].push_back(set.soup_ingredients[i].id());
        provenance = {{"experts", "loaded"}, {"checkpoints", ids}};
        return set;
    }
};

BenchmarkSuite suite_or_generate(const std::string& dir, std::uint64_t seed) {
    return dir.empty() ? generate(seed, BenchmarkSpec{}) : load_suite(dir);
}

void print_rows(const EvalReport& report) {
    for (const auto& r : report.strategies) {
        std::printf("%-28s %s %.4f |", r.strategy.c_str(), r.average_kind.c_str(), r.average);
        for (const auto& d : r.domains) std::printf(" %s=%.4f", d.domain.c_str(), d.accuracy);
        std::printf("\n");
    }
}

void write_report(const EvalReport& report, const fs::path& json_path, const std::string& csv_path) {
    emit_report(report, json_path, ReportFormat::Json);
    if (!csv_path.empty()) emit_report(report, csv_path, ReportFormat::Csv);
    std::printf("report: %s\n", json_path.string().c_str());
}

int cmd_gen(std::uint64_t seed, const std::string& spec_file, const std::string& out) {
    BenchmarkSpec spec;
    if (!spec_file.empty()) {
        const auto bytes = read_file(spec_file);
        try {
            spec = BenchmarkSpec::from_json(nlohmann::json::parse(bytes.begin(), bytes.end()));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::Format, std::string("bad spec file: ") + e.what());
        }
    }
    const fs::path dir = output_or_default(out, "suite_seed" + std::to_string(seed));
    save_suite(generate(seed, spec), dir);
    std::printf("suite: %s\n", (dir / "suite.json").string().c_str());
    return 0;
}

struct TrainFlags {
    std::string suite, role = "pretrain", init, out;
    std::size_t index = 0;
    TrainConfig config;
    std::optional<double> lr;
};

int cmd_train(const TrainFlags& f, std::uint64_t seed) {
    const BenchmarkSuite suite = load_suite(f.suite);
    const ExpertSetConfig defaults;
    TrainConfig cfg = f.config;
    std::optional<Checkpoint> init;
    const LabeledData* data = nullptr;
    std::string stream, role, dataset;
    if (f.role == "pretrain") {
        data = &suite.pretrain_mix.data;
        stream = "pretrain";
        role = "zs";
        dataset = suite.pretrain_mix.name;
    } else {
        if (f.init.empty()) throw Error(ErrorCode::InvalidArgument, "--init is required for role " + f.role);
        init = load_checkpoint(f.init);
        if (f.role == "finetune") {
            data = &suite.id_train.data;
            stream = "finetune";
            role = "ft";
            dataset = suite.id_train.name;
        } else if (f.role == "soup") {
            data = &suite.id_train.data;
            stream = "soup/" + std::to_string(f.index);
            role = "soup" + std::to_string(f.index);
            dataset = suite.id_train.name;
            cfg.learning_rate = defaults.soup_learning_rates[f.index % defaults.soup_learning_rates.size()];
        } else if (f.role == "task") {
            if (f.index >= suite.mtl_tasks.size()) throw Error(ErrorCode::InvalidArgument, "task index out of range");
            data = &suite.mtl_tasks[f.index].train.data;
            stream = "task/" + std::to_string(f.index);
            role = "task" + std::to_string(f.index);
            dataset = suite.mtl_tasks[f.index].train.name;
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown role " + f.role);
        }
    }
    if (f.lr) cfg.learning_rate = *f.lr;
    cfg.seed = role_seed(seed, stream);
    const MlpArchitecture arch = init ? init->arch : MlpArchitecture{};
    Checkpoint ck = train(arch, *data, init, cfg, dataset);
    ck.meta.role = role;
    const fs::path out = output_or_default(f.out, role + ".ckpt");
    save_checkpoint(ck, out);
    std::printf("checkpoint: %s id=%s final_loss=%.6f\n", out.string().c_str(), ck.id().c_str(), ck.meta.final_loss);
    return 0;
}

struct CoeffFlags {
    std::string theta0, theta1, domain, mode = "offset", pseudo = "avg_soft", val, out;
    std::vector<std::string> experts;
    std::size_t batch_size = 0;
};

int cmd_coeffs(const CoeffFlags& f) {
    std::vector<std::string> paths = f.experts;
    if (paths.empty()) {
        if (f.theta0.empty() || f.theta1.empty()) throw Error(ErrorCode::InvalidArgument, "give --theta0/--theta1 or --experts");
        paths = {f.theta0, f.theta1};
    }
    if (paths.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two models");
    std::vector<Checkpoint> cks;
    for (const auto& p : paths) cks.push_back(load_checkpoint(p));
    const LabeledData data = load_domain(f.domain, cks.front().arch.class_count);
    std::optional<LabeledData> val;
    if (!f.val.empty()) val = load_domain(f.val, cks.front().arch.class_count);

    std::vector<Expert> experts;
    for (std::size_t j = 0; j < cks.size(); ++j) {
        const double t = val ? calibrate_temperature(cks[j].arch, cks[j].payload, *val) : 1.0;
        experts.push_back(Expert::from_checkpoint(cks[j], "m" + std::to_string(j), t));
    }
    CoefficientBatch batch;
    const bool pair = experts.size() == 2;
    if (f.mode == "oracle" || f.mode == "pseudo") {
        if (!pair) throw Error(ErrorCode::InvalidArgument, "mode " + f.mode + " supports two models only");
        if (f.mode == "oracle" && !data.has_labels()) throw Error(ErrorCode::MissingLabels, "oracle coefficients need labels");
        const Eigen::MatrixXd p0 = predict_proba(experts[0].arch, experts[0].theta.values(), data.features);
        const Eigen::MatrixXd p1 = predict_proba(experts[1].arch, experts[1].theta.values(), data.features);
        Eigen::VectorXd lambdas(data.size());
        if (f.mode == "oracle") {
            for (Eigen::Index i = 0; i < data.size(); ++i) {
                const int y = data.labels[static_cast<std::size_t>(i)];
                lambdas[i] = oracle_coeff(p0(i, y), p1(i, y));
            }
            batch = CoefficientBatch::from_pair(lambdas, CoefficientMode::Oracle);
        } else {
            const PseudoLabel variant = pseudo_label_from_string(f.pseudo);
            const bool mid = variant == PseudoLabel::MidSoft || variant == PseudoLabel::MidHard;
            Eigen::MatrixXd pm;
            if (mid) pm = predict_proba(experts[0].arch, interpolate_pair(experts[0].theta, experts[1].theta, 0.5).values(), data.features);
            for (Eigen::Index i = 0; i < data.size(); ++i) {
                const ProbVector a(p0.row(i).transpose()), b(p1.row(i).transpose());
                std::optional<ProbVector> m;
                if (mid) m.emplace(pm.row(i).transpose());
                lambdas[i] = pseudo_label_coeff(variant, a, b, m ? &*m : nullptr);
            }
            batch = CoefficientBatch::from_pair(lambdas, CoefficientMode::PseudoLabel);
            batch.pseudo_label = variant;
        }
    } else if (f.mode == "entropy" || f.mode == "offset") {
        if (pair) {
            DawinOptions o;
            o.offset = f.mode == "offset";
            o.calibrate = val.has_value();
            o.batch_size = f.batch_size;
            batch = dawin_pair_coefficients(experts[0], experts[1], data.features, o);
        } else {
            if (f.mode == "offset") throw Error(ErrorCode::InvalidArgument, "offset adjustment is defined for two models only");
            batch.coefficients = multi_coefficients(experts, data.features, val.has_value());
            batch.mode = CoefficientMode::Plain;
        }
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown mode " + f.mode);
    }
    batch.source_ids.clear();
    for (const auto& c : cks) batch.source_ids.push_back(c.id());
    const std::string csv = coefficients_to_csv(batch);
    if (f.out.empty()) {
        std::fwrite(csv.data(), 1, csv.size(), stdout);
    } else {
        write_text_atomic(f.out, csv);
    }
    return 0;
}

int cmd_fit_mixture(const std::string& coeffs, std::size_t k, std::uint64_t seed, double tol, std::size_t max_iter,
                    const std::string& out) {
    const auto bytes = read_file(coeffs);
    const CoefficientBatch batch = coefficients_from_csv(std::string(bytes.begin(), bytes.end()));
    MixtureOptions mo;
    mo.k = k;
    mo.seed = seed;
    mo.tol = tol;
    mo.max_iter = max_iter;
    nlohmann::json j;
    if (batch.coefficients.cols() == 2) {
        const Eigen::VectorXd lambdas = batch.coefficients.col(1);
        j = to_json(em_fit(std::span<const double>(lambdas.data(), static_cast<std::size_t>(lambdas.size())), mo));
    } else {
        j = to_json(dirichlet_em_fit(batch.coefficients, mo));
    }
    const std::string text = j.dump(2) + "\n";
    if (out.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
    } else {
        write_text_atomic(out, text);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Training-free dynamic weight interpolation toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "TOML/INI file with option defaults; command-line flags take precedence");
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "Root seed for every random stream")->capture_default_str();

    std::string gen_spec, gen_out;
    auto* gen = app.add_subcommand("gen", "Generate the synthetic benchmark suite");
    gen->add_option("--spec", gen_spec, "Benchmark spec JSON (defaults when omitted)");
    gen->add_option("--out", gen_out, "Output directory (default $DAWIN_REPORT_DIR/suite_seed<seed>)");

    TrainFlags tf;
    auto* tr = app.add_subcommand("train", "Train one checkpoint");
    tr->add_option("--suite", tf.suite, "Suite directory")->required();
    tr->add_option("--role", tf.role, "pretrain | finetune | soup | task")
        ->check(CLI::IsMember({"pretrain", "finetune", "soup", "task"}));
    tr->add_option("--index", tf.index, "Task or soup ingredient index");
    tr->add_option("--init", tf.init, "Checkpoint to fine-tune from (all roles except pretrain)");
    tr->add_option("--out", tf.out, "Checkpoint path");
    tr->add_option("--epochs", tf.config.epochs, "Training epochs")->check(CLI::PositiveNumber)->capture_default_str();
    tr->add_option("--batch", tf.config.batch_size, "Mini-batch size")->check(CLI::PositiveNumber)->capture_default_str();
    tr->add_option("--lr", tf.lr, "Learning rate (default 0.05; soup ingredients cycle their own)")->check(CLI::PositiveNumber);
    tr->add_option("--momentum", tf.config.momentum, "SGD momentum")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    tr->add_option("--weight-decay", tf.config.weight_decay, "L2 weight decay")->check(CLI::NonNegativeNumber)->capture_default_str();

    CoeffFlags cf;
    auto* co = app.add_subcommand("coeffs", "Export per-sample interpolation coefficients as CSV");
    co->add_option("--theta0", cf.theta0, "Model 0 checkpoint");
    co->add_option("--theta1", cf.theta1, "Model 1 checkpoint");
    co->add_option("--experts", cf.experts, "Two or more checkpoints (multi-model coefficients)");
    co->add_option("--domain", cf.domain, "Domain CSV")->required();
    co->add_option("--mode", cf.mode, "entropy | offset | oracle | pseudo")
        ->check(CLI::IsMember({"entropy", "offset", "oracle", "pseudo"}))
        ->capture_default_str();
    co->add_option("--pseudo", cf.pseudo, "Pseudo label: avg_soft | avg_hard | mid_soft | mid_hard")->capture_default_str();
    co->add_option("--val", cf.val, "Labeled validation CSV; enables temperature calibration of the entropies");
    co->add_option("--batch-size", cf.batch_size, "Samples per offset estimate (0 = whole domain)");
    co->add_option("--out", cf.out, "Output CSV (stdout when omitted)");

    std::string fm_coeffs, fm_out;
    std::size_t fm_k = 3, fm_iter = 200;
    double fm_tol = 1e-6;
    auto* fm = app.add_subcommand("fit-mixture", "Fit a Beta (two models) or Dirichlet (more) mixture to a coefficient CSV");
    fm->add_option("--coeffs", fm_coeffs, "Coefficient CSV from `coeffs`")->required();
    fm->add_option("--k", fm_k, "Mixture components")->check(CLI::PositiveNumber)->capture_default_str();
    fm->add_option("--tol", fm_tol, "Log-likelihood convergence tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    fm->add_option("--max-iter", fm_iter, "EM iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
    fm->add_option("--out", fm_out, "Mixture JSON (stdout when omitted)");

    std::string ev_suite, ev_out, ev_csv, ev_pred;
    std::vector<std::string> ev_strategies;
    bool ev_pilot = false;
    MergeFlags ev_mf;
    ExpertFlags ev_ef;
    auto* ev = app.add_subcommand("eval", "Run merging strategies over the suite and write a report");
    ev->add_option("--suite", ev_suite, "Suite directory (generated from --seed when omitted)");
    ev->add_option("--strategy", ev_strategies,
                   "static | wise_sweep | uniform_soup | greedy_soup | dawin_sample | dawin_clustered | dawin_task_arith | "
                   "dcs | doe | oracle_sample | oracle_domain (repeatable)");
    ev->add_flag("--pilot", ev_pilot, "Add the ZS / FT / best static / oracle comparison");
    ev->add_option("--out", ev_out, "Report JSON (default $DAWIN_REPORT_DIR/eval_report.json)");
    ev->add_option("--csv", ev_csv, "Also write the CSV summary here");
    ev->add_option("--predictions-dir", ev_pred, "Write one predictions CSV per strategy and domain into this directory");
    ev_mf.add_to(ev);
    ev_ef.add_to(ev, true);

    std::string an_suite, an_out;
    MergeFlags an_mf;
    ExpertFlags an_ef;
    auto* an = app.add_subcommand("analyze", "Correctness splits, ratio correlations, histograms and entropy paths");
    an->add_option("--suite", an_suite, "Suite directory (generated from --seed when omitted)");
    an->add_option("--out", an_out, "Report JSON (default $DAWIN_REPORT_DIR/analysis_report.json)");
    an_mf.add_to(an);
    an_ef.add_to(an, false);

    std::string ps_suite, ps_out;
    std::size_t ps_cases = 100000;
    MergeFlags ps_mf;
    ExpertFlags ps_ef;
    auto* ps = app.add_subcommand("suite", "Run the property suite; exit code = number of failed checks");
    ps->add_option("--suite", ps_suite, "Suite directory (generated from --seed when omitted)");
    ps->add_option("--out", ps_out, "Report JSON (default $DAWIN_REPORT_DIR/property_report.json)");
    ps->add_option("--synthetic-cases", ps_cases, "Random configurations for the algebraic checks")->capture_default_str();
    ps_mf.add_to(ps);
    ps_ef.add_to(ps, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        const auto effective = [&](const CLI::App* cmd) {
            return nlohmann::json{{"command", cmd->get_name()}, {"seed", seed}, {"effective_config", app.config_to_str(true, false)}};
        };
        if (*gen) return cmd_gen(seed, gen_spec, gen_out);
        if (*tr) return cmd_train(tf, seed);
        if (*co) return cmd_coeffs(cf);
        if (*fm) return cmd_fit_mixture(fm_coeffs, fm_k, seed, fm_tol, fm_iter, fm_out);
        if (*ev) {
            const BenchmarkSuite suite = suite_or_generate(ev_suite, seed);
            std::vector<MergeStrategy> strategies;
            for (const auto& name : ev_strategies) strategies.push_back(ev_mf.strategy(name));
            if (strategies.empty() && !ev_pilot) throw Error(ErrorCode::InvalidArgument, "give --strategy and/or --pilot");
            nlohmann::json provenance;
            const ExpertSet experts = ev_ef.resolve(suite, seed, provenance);
            EvalReport report;
            report.seed = suite.seed;
            if (ev_pilot) report.append(run_pilot(suite, experts, parse_grid(ev_mf.grid)));
            ResultSink sink;
            if (!ev_pred.empty()) {
                fs::create_directories(ev_pred);
                sink = [&](const std::string& row, const Domain& d, const EvalResult& r) {
                    std::string file = row + "__" + d.name + ".csv";
                    for (char& c : file) {
                        if (c == '(' || c == ')' || c == '=') c = '_';
                    }
                    write_text_atomic(fs::path(ev_pred) / file, predictions_to_csv(r));
                };
            }
            EvalReport main = run_main(suite, experts, strategies, sink);
            report.config = main.config;
            report.append(std::move(main));
            report.config["cli"] = effective(ev);
            report.config["provenance"] = provenance;
            print_rows(report);
            write_report(report, output_or_default(ev_out, "eval_report.json"), ev_csv);
            return 0;
        }
        if (*an) {
            const BenchmarkSuite suite = suite_or_generate(an_suite, seed);
            nlohmann::json provenance;
            const ExpertSet experts = an_ef.resolve(suite, seed, provenance);
            EvalReport report = run_analysis(suite, experts, an_mf.options());
            report.config["cli"] = effective(an);
            report.config["provenance"] = provenance;
            for (const auto& s : report.splits) {
                const auto& tt = s.correlation.per_split[0];
                std::printf("%-16s TT=%zu TF=%zu FT=%zu FF=%zu r_overall=%s r_TT=%s\n", s.domain.c_str(), s.counts[0], s.counts[1],
                            s.counts[2], s.counts[3],
                            s.correlation.overall ? std::to_string(*s.correlation.overall).c_str() : "undefined",
                            tt ? std::to_string(*tt).c_str() : "undefined");
            }
            write_report(report, output_or_default(an_out, "analysis_report.json"), "");
            return 0;
        }
        if (*ps) {
            const BenchmarkSuite suite = suite_or_generate(ps_suite, seed);
            nlohmann::json provenance;
            const ExpertSet experts = ps_ef.resolve(suite, seed, provenance);
            PropertySuiteOptions opt;
            opt.synthetic_cases = ps_cases;
            opt.k = ps_mf.k;
            opt.lambda0 = ps_mf.lambda0;
            opt.options = ps_mf.options();
            EvalReport report;
            report.seed = suite.seed;
            report.properties = run_property_suite(suite, experts, opt);
            report.config["cli"] = effective(ps);
            report.config["provenance"] = provenance;
            int failed = 0;
            for (const auto& c : report.properties) {
                std::printf("%-34s %s  samples=%zu violations=%zu measured=%.6g\n", c.name.c_str(), c.passed ? "PASS" : "FAIL",
                            c.samples, c.violations, c.measured);
                failed += !c.passed;
            }
            write_report(report, output_or_default(ps_out, "property_report.json"), "");
            return failed;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.code() == ErrorCode::InvalidArgument ? 1 : 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
