#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dawin/error.hpp"
#include "dawin/merge_engine.hpp"
#include "support.hpp"

using namespace dawin;

namespace {

const testing::SmallWorld& world() { return testing::small_world(); }

LabeledData head(const LabeledData& d, Eigen::Index n) {
    LabeledData out;
    out.features = d.features.topRows(n);
    out.labels.assign(d.labels.begin(), d.labels.begin() + n);
    return out;
}

Expert constant_expert(const MlpArchitecture& arch, int hot_class, double logit) {
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(arch.parameter_count()));
    if (hot_class >= 0) theta[theta.size() - static_cast<Eigen::Index>(arch.class_count) + hot_class] = logit;
    return Expert{arch, ParamVector(theta, arch.layout_id()), 1.0, "const"};
}

DawinOptions plain() {
    DawinOptions o;
    o.offset = false;
    return o;
}

}  // namespace

TEST_CASE("static interpolation endpoints") {
    const auto& w = world();
    const Expert zs = w.experts.zs_expert(), ft = w.experts.ft_expert();
    const LabeledData& d = w.suite.id_test.data;
    const EvalResult r0 = static_eval(zs, ft, 0.0, d);
    const EvalResult r1 = static_eval(zs, ft, 1.0, d);
    CHECK(r0.prob_matrix() == predict_proba(zs.arch, zs.theta.values(), d.features));
    CHECK(r1.prob_matrix() == predict_proba(ft.arch, ft.theta.values(), d.features));
    CHECK(r0.merge_count == 1);
    CHECK(r0.predictions.size() == static_cast<std::size_t>(d.size()));
}

TEST_CASE("WiSE sweep") {
    const auto& w = world();
    const Expert zs = w.experts.zs_expert(), ft = w.experts.ft_expert();
    std::vector<const LabeledData*> tests;
    for (const Domain* d : w.suite.eval_domains()) tests.push_back(&d->data);

    const std::vector<double> grid = default_grid();
    CHECK(grid.size() == 9);
    CHECK(grid.front() == doctest::Approx(0.1));
    CHECK(grid.back() == doctest::Approx(0.9));
    const WiseSweepTable t = wise_sweep(zs, ft, grid, w.suite.id_val.data, tests);
    REQUIRE(t.rows.size() == 9);
    // Exhaustive re-scan: best ID-val accuracy, ties to the smaller lambda.
    double best = -1.0, best_lambda = -1.0;
    for (double l : grid) {
        const double acc = static_eval(zs, ft, l, w.suite.id_val.data).accuracy(w.suite.id_val.data.labels);
        if (acc > best) {
            best = acc;
            best_lambda = l;
        }
    }
    CHECK(t.best_lambda == best_lambda);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(t.rows[i].test_accuracy.size() == tests.size());
        CHECK(t.rows[i].test_accuracy[0] ==
              static_eval(zs, ft, grid[i], w.suite.id_test.data).accuracy(w.suite.id_test.data.labels));
    }

    const std::vector<double> ends{0.0, 1.0};
    const WiseSweepTable raw = wise_sweep(zs, ft, ends, w.suite.id_val.data, tests);
    const double a0 = params_eval(zs.arch, zs.theta, w.suite.id_val.data, "zs").accuracy(w.suite.id_val.data.labels);
    const double a1 = params_eval(ft.arch, ft.theta, w.suite.id_val.data, "ft").accuracy(w.suite.id_val.data.labels);
    CHECK(raw.rows[0].id_val_accuracy == a0);
    CHECK(raw.rows[1].id_val_accuracy == a1);
    CHECK(raw.best_lambda == (a1 > a0 ? 1.0 : 0.0));

    const std::vector<double> empty;
    CHECK_THROWS_AS(wise_sweep(zs, ft, empty, w.suite.id_val.data, tests), Error);
    const std::vector<double> unordered{0.5, 0.2};
    CHECK_THROWS_AS(validate_grid(unordered), Error);
}

TEST_CASE("soups") {
    Eigen::VectorXd a(2), b(2);
    a << 0, 2;
    b << 2, 0;
    const std::vector<ParamVector> pair{ParamVector(a, "l"), ParamVector(b, "l")};
    const ParamVector u = uniform_soup(pair);
    CHECK(u[0] == 1.0);
    CHECK(u[1] == 1.0);
    const std::vector<ParamVector> same{ParamVector(a, "l"), ParamVector(a, "l"), ParamVector(a, "l")};
    CHECK(uniform_soup(same).values() == a);

    const auto& w = world();
    std::vector<ParamVector> ingredients;
    for (const auto& c : w.experts.soup_ingredients) ingredients.push_back(c.payload);
    REQUIRE(ingredients.size() >= 2);
    const GreedySoup g = greedy_soup(w.experts.arch, ingredients, w.suite.id_val.data);
    double best_single = 0.0;
    for (const auto& p : ingredients) {
        best_single = std::max(best_single, params_eval(w.experts.arch, p, w.suite.id_val.data, "x").accuracy(w.suite.id_val.data.labels));
    }
    const double soup_acc = params_eval(w.experts.arch, g.soup, w.suite.id_val.data, "soup").accuracy(w.suite.id_val.data.labels);
    CHECK(soup_acc == g.val_accuracy);
    CHECK(soup_acc >= best_single);
    CHECK_FALSE(g.used.empty());

    const std::vector<ParamVector> one{ParamVector(a, "l")};
    CHECK_THROWS_AS(uniform_soup(one), Error);
    const std::vector<ParamVector> mixed{ParamVector(a, "l"), ParamVector(a, "other")};
    CHECK_THROWS_AS(uniform_soup(mixed), Error);
}

TEST_CASE("dawin_sample with identical models") {
    const auto& w = world();
    const Expert zs = w.experts.zs_expert();
    const LabeledData d = head(w.suite.ood_tests[0].data, 100);
    for (bool offset : {false, true}) {
        DawinOptions o;
        o.offset = offset;
        const EvalResult r = dawin_sample_eval(zs, zs, d, o);
        for (const auto& p : r.predictions) CHECK(p.chosen_lambda[1] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK((r.prob_matrix() - predict_proba(zs.arch, zs.theta.values(), d.features)).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(r.merge_count == static_cast<std::size_t>(d.size()));
    }
}

TEST_CASE("confident model 1 against a uniform model 0") {
    const MlpArchitecture arch = world().experts.arch;
    const Expert uniform = constant_expert(arch, -1, 0.0);
    const Expert sharp = constant_expert(arch, 3, 60.0);
    const LabeledData d = head(world().suite.id_test.data, 10);
    const CoefficientBatch c = dawin_pair_coefficients(uniform, sharp, d.features, plain());
    const double cc = static_cast<double>(arch.class_count);
    for (Eigen::Index i = 0; i < c.size(); ++i) CHECK(c.lambda(i) == doctest::Approx(cc / (cc + 1.0)).epsilon(1e-12));
    const EvalResult r = dawin_sample_eval(uniform, sharp, d, plain());
    for (const auto& p : r.predictions) CHECK(p.argmax() == 3);
}

TEST_CASE("per-sample coefficients vary within a domain") {
    const auto& w = world();
    const Expert zs = w.experts.zs_expert(), ft = w.experts.ft_expert();
    for (const Domain* d : w.suite.eval_domains()) {
        const EvalResult r = dawin_sample_eval(zs, ft, d->data, DawinOptions{});
        double m = 0.0, s = 0.0;
        for (const auto& p : r.predictions) m += p.chosen_lambda[1];
        m /= static_cast<double>(r.predictions.size());
        for (const auto& p : r.predictions) s += (p.chosen_lambda[1] - m) * (p.chosen_lambda[1] - m);
        CHECK(std::sqrt(s / static_cast<double>(r.predictions.size())) > 0.01);
    }
}

TEST_CASE("offset adjustment changes coefficients and batches are honored") {
    const auto& w = world();
    const Expert zs = w.experts.zs_expert(), ft = w.experts.ft_expert();
    const Eigen::MatrixXd& x = w.suite.ood_tests[1].data.features;
    const CoefficientBatch p = dawin_pair_coefficients(zs, ft, x, plain());
    const CoefficientBatch o = dawin_pair_coefficients(zs, ft, x, DawinOptions{});
    CHECK(p.mode == CoefficientMode::Plain);
    CHECK(o.mode == CoefficientMode::OffsetAdjusted);
    CHECK((p.coefficients - o.coefficients).cwiseAbs().maxCoeff() > 1e-6);

    DawinOptions b;
    b.batch_size = 64;
    const CoefficientBatch ob = dawin_pair_coefficients(zs, ft, x, b);
    // The first batch equals an offset fit on the first 64 rows alone.
    const CoefficientBatch first = dawin_pair_coefficients(zs, ft, x.topRows(64), DawinOptions{});
    CHECK((ob.coefficients.topRows(64) - first.coefficients).cwiseAbs().maxCoeff() <= 1e-15);

    DawinOptions scaled = plain();
    scaled.scale = 0.5;
    const CoefficientBatch s = dawin_pair_coefficients(zs, ft, x, scaled);
    CHECK((s.coefficients.col(1) - 0.5 * p.coefficients.col(1)).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("calibration only changes entropy, never reported probabilities") {
    const auto& w = world();
    Expert zs = w.experts.zs_expert();
    Expert hot = zs;
    hot.temperature = 3.0;
    const LabeledData d = head(w.suite.id_test.data, 50);
    const EvalResult a = params_eval(zs.arch, zs.theta, d, "zs");
    const EvalResult b = params_eval(hot.arch, hot.theta, d, "zs");
    CHECK(a.prob_matrix() == b.prob_matrix());
    DawinOptions cal = plain();
    cal.calibrate = true;
    const CoefficientBatch c0 = dawin_pair_coefficients(zs, w.experts.ft_expert(), d.features, plain());
    const CoefficientBatch c1 = dawin_pair_coefficients(hot, w.experts.ft_expert(), d.features, cal);
    CHECK((c0.coefficients - c1.coefficients).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("clustered DaWin") {
    const auto& w = world();
    const Expert zs = w.experts.zs_expert(), ft = w.experts.ft_expert();
    const LabeledData& d = w.suite.ood_tests[0].data;

    SUBCASE("merge count equals K") {
        for (std::size_t k : {1u, 2u, 3u, 5u}) CHECK(dawin_clustered_eval(zs, ft, d, k, DawinOptions{}).merge_count == k);
    }
    SUBCASE("K=1 is a static model at the mixture mean") {
        const EvalResult r = dawin_clustered_eval(zs, ft, d, 1, DawinOptions{});
        const BetaMixtureModel m = beta_mixture_from_json(r.diagnostics["mixture"]);
        const EvalResult s = static_eval(zs, ft, component_mean(m, 0), d);
        CHECK((r.prob_matrix() - s.prob_matrix()).cwiseAbs().maxCoeff() <= 1e-12);
    }
    SUBCASE("K=N on a small slice approaches per-sample merging") {
        const LabeledData slice = head(d, 200);
        const double acc_c = dawin_clustered_eval(zs, ft, slice, 200, DawinOptions{}).accuracy(slice.labels);
        const double acc_s = dawin_sample_eval(zs, ft, slice, DawinOptions{}).accuracy(slice.labels);
        CHECK(std::abs(acc_c - acc_s) <= 0.01);
    }
    SUBCASE("errors") {
        const LabeledData tiny = head(d, 2);
        CHECK_THROWS_AS(dawin_clustered_eval(zs, ft, tiny, 3, DawinOptions{}), Error);
        CHECK_THROWS_AS(dawin_clustered_eval(zs, ft, d, 0, DawinOptions{}), Error);
    }
}

TEST_CASE("task arithmetic") {
    const auto& w = world();
    const Expert base = w.experts.zs_expert();
    const auto experts = w.experts.task_expert_list();
    REQUIRE(experts.size() == 4);
    const LabeledData d = head(w.suite.mtl_tasks[1].test.data, 100);

    SUBCASE("identical experts get uniform weights") {
        const std::vector<Expert> same(3, experts[0]);
        const Eigen::MatrixXd c = multi_coefficients(same, d.features, false);
        CHECK((c.array() - 1.0 / 3.0).abs().maxCoeff() <= 1e-15);
    }
    SUBCASE("lambda0 = 0 returns the base model") {
        const EvalResult r = dawin_task_arith_eval(base, experts, d, 0.0, 0, DawinOptions{});
        CHECK((r.prob_matrix() - predict_proba(base.arch, base.theta.values(), d.features)).cwiseAbs().maxCoeff() <= 1e-12);
    }
    SUBCASE("static row uses unit weights") {
        std::vector<TaskVector> taus;
        for (const auto& e : experts) taus.push_back(make_task_vector(e.theta, base.theta));
        const std::vector<double> ones(4, 1.0);
        const ParamVector merged = combine_task_vectors(base.theta, 0.3, ones, taus);
        const EvalResult r = static_task_arith_eval(base, experts, d, 0.3);
        CHECK(r.prob_matrix() == predict_proba(base.arch, merged.values(), d.features));
        CHECK(r.merge_count == 1);
    }
    SUBCASE("per-sample and compressed modes") {
        const EvalResult ps = dawin_task_arith_eval(base, experts, d, 0.3, 0, DawinOptions{});
        CHECK(ps.merge_count == static_cast<std::size_t>(d.size()));
        const Eigen::MatrixXd c = multi_coefficients(experts, d.features, false);
        for (std::size_t i = 0; i < ps.predictions.size(); ++i) {
            CHECK((ps.predictions[i].chosen_lambda - c.row(static_cast<Eigen::Index>(i)).transpose()).cwiseAbs().maxCoeff() <= 1e-15);
        }
        const EvalResult k1 = dawin_task_arith_eval(base, experts, d, 0.3, 1, DawinOptions{});
        CHECK(k1.merge_count == 1);
        CHECK(k1.diagnostics.contains("mean_coefficients"));
        const EvalResult k2 = dawin_task_arith_eval(base, experts, d, 0.3, 2, DawinOptions{});
        CHECK(k2.merge_count == 2);
    }
}

TEST_CASE("dynamic selection and output ensembling") {
    const auto& w = world();
    const Expert zs = w.experts.zs_expert(), ft = w.experts.ft_expert();
    const std::vector<Expert> pair{zs, ft};
    const LabeledData d = head(w.suite.ood_tests[2].data, 200);
    const Eigen::MatrixXd p0 = predict_proba(zs.arch, zs.theta.values(), d.features);
    const Eigen::MatrixXd p1 = predict_proba(ft.arch, ft.theta.values(), d.features);

    const EvalResult dcs = dcs_eval(pair, d);
    const EvalResult doe = doe_eval(pair, d);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        const double h0 = entropy(p0.row(i).transpose()), h1 = entropy(p1.row(i).transpose());
        const Eigen::VectorXd pick = h1 < h0 ? p1.row(i).transpose() : p0.row(i).transpose();
        CHECK(dcs.predictions[static_cast<std::size_t>(i)].prob.probs() == pick);

        const Eigen::VectorXd q = doe.predictions[static_cast<std::size_t>(i)].prob.probs();
        CHECK(std::abs(q.sum() - 1.0) <= 1e-12);
        for (Eigen::Index c = 0; c < q.size(); ++c) {
            CHECK(q[c] >= std::min(p0(i, c), p1(i, c)) - 1e-15);
            CHECK(q[c] <= std::max(p0(i, c), p1(i, c)) + 1e-15);
        }
    }

    const std::vector<Expert> same{zs, zs};
    CHECK(dcs_eval(same, d).prob_matrix() == p0);
    CHECK((doe_eval(same, d).prob_matrix() - p0).cwiseAbs().maxCoeff() <= 1e-15);

    const MlpArchitecture arch = w.experts.arch;
    const std::vector<Expert> hot{constant_expert(arch, 6, 80.0), constant_expert(arch, -1, 0.0)};
    for (const auto& p : doe_eval(hot, d).predictions) CHECK(p.argmax() == 6);
    for (const auto& p : dcs_eval(hot, d).predictions) CHECK(p.argmax() == 6);

    const std::vector<Expert> one{zs};
    CHECK_THROWS_AS(dcs_eval(one, d), Error);
}

TEST_CASE("oracles") {
    const auto& w = world();
    const Expert zs = w.experts.zs_expert(), ft = w.experts.ft_expert();
    const LabeledData& d = w.suite.ood_tests[1].data;
    const Eigen::MatrixXd p0 = predict_proba(zs.arch, zs.theta.values(), d.features);
    const Eigen::MatrixXd p1 = predict_proba(ft.arch, ft.theta.values(), d.features);

    const EvalResult o = oracle_sample_eval(zs, ft, d);
    for (std::size_t i = 0; i < o.predictions.size(); ++i) {
        const int y = d.labels[i];
        const auto r = static_cast<Eigen::Index>(i);
        CHECK(o.predictions[i].chosen_lambda[1] == doctest::Approx(oracle_coeff(p0(r, y), p1(r, y))).epsilon(1e-15));
    }
    LabeledData unlabeled;
    unlabeled.features = d.features.topRows(10);
    CHECK_THROWS_AS(oracle_sample_eval(zs, ft, unlabeled), Error);

    const OracleDomainResult od = oracle_domain_search(zs, ft, d, default_grid());
    double best = -1.0;
    for (const auto& [l, acc] : od.table) best = std::max(best, acc);
    CHECK(od.accuracy == best);
    CHECK(od.table.size() == 9);
    for (const auto& [l, acc] : od.table) {
        if (acc == best) {
            CHECK(od.best_lambda == l);
            break;
        }
    }
    const std::vector<double> ends{0.0, 1.0};
    const OracleDomainResult raw = oracle_domain_search(zs, ft, d, ends);
    CHECK(raw.accuracy == std::max(accuracy(p0, d.labels), accuracy(p1, d.labels)));
}

TEST_CASE("strategy parsing and validation") {
    for (const char* n : {"static", "wise_sweep", "uniform_soup", "greedy_soup", "dawin_sample", "dawin_clustered",
                          "dawin_task_arith", "dcs", "doe", "oracle_sample", "oracle_domain"}) {
        const MergeStrategy s = MergeStrategy::parse(n);
        CHECK(s.name() == n);
        CHECK_NOTHROW(s.validate());
    }
    CHECK(MergeStrategy::parse("dawin_task_arith").k == 1);
    CHECK(MergeStrategy::parse("dawin_task_arith").lambda0 == 0.3);
    CHECK_THROWS_AS(MergeStrategy::parse("fisher"), Error);
    MergeStrategy s = MergeStrategy::parse("dawin_clustered");
    s.k = 0;
    CHECK_THROWS_AS(s.validate(), Error);
    s = MergeStrategy::parse("dawin_task_arith");
    s.k = 0;
    CHECK_NOTHROW(s.validate());
    s.lambda0 = 0.0;
    CHECK_THROWS_AS(s.validate(), Error);
    s = MergeStrategy::parse("static");
    s.lambda = 1.2;
    CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("predictions CSV and determinism") {
    const auto& w = world();
    const Expert zs = w.experts.zs_expert(), ft = w.experts.ft_expert();
    const LabeledData d = head(w.suite.id_test.data, 5);
    const EvalResult a = dawin_clustered_eval(zs, ft, d, 2, DawinOptions{});
    const EvalResult b = dawin_clustered_eval(zs, ft, d, 2, DawinOptions{});
    const std::string csv = predictions_to_csv(a);
    CHECK(csv == predictions_to_csv(b));
    CHECK(csv.rfind("sample_index,argmax,chosen_lambda_json,strategy\n0,", 0) == 0);
    CHECK(csv.find(",dawin_clustered\n") != std::string::npos);
    const auto quoted = csv.find("\"[");
    REQUIRE(quoted != std::string::npos);
    const auto end = csv.find("]\"", quoted);
    const auto row = nlohmann::json::parse(csv.substr(quoted + 1, end - quoted));
    CHECK(row.size() == 2);
}
