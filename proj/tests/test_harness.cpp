#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "dawin/error.hpp"
#include "dawin/harness.hpp"
#include "support.hpp"

using namespace dawin;

namespace {

const testing::SmallWorld& world() { return testing::small_world(); }

std::vector<MergeStrategy> main_strategies() {
    std::vector<MergeStrategy> s;
    for (const char* n : {"static", "dawin_sample", "dawin_clustered", "dawin_task_arith", "greedy_soup", "dcs"}) {
        s.push_back(MergeStrategy::parse(n));
    }
    MergeStrategy plain = MergeStrategy::parse("dawin_sample");
    plain.options.offset = false;
    s.push_back(plain);
    return s;
}

}  // namespace

TEST_CASE("role seeds are stable and distinct") {
    CHECK(role_seed(0, "pretrain") == role_seed(0, "pretrain"));
    std::set<std::uint64_t> seen;
    for (const char* r : {"pretrain", "finetune", "soup/0", "soup/1", "task/0", "task/1"}) seen.insert(role_seed(0, r));
    CHECK(seen.size() == 6);
    CHECK(role_seed(0, "pretrain") != role_seed(1, "pretrain"));
}

TEST_CASE("trained experts share one base") {
    const auto& e = world().experts;
    CHECK(e.ft.meta.parent_id == e.zs.id());
    for (const auto& t : e.task_experts) CHECK(t.meta.parent_id == e.zs.id());
    CHECK(e.soup_ingredients.front().payload.values() == e.ft.payload.values());
    CHECK(e.task_temperatures.size() == e.task_experts.size());
    CHECK(e.zs_temperature > 0.0);

    const ExpertSet again = assemble_experts(world().suite, e.zs, e.ft, {}, e.task_experts);
    CHECK(again.zs_temperature == e.zs_temperature);
    CHECK(again.ft_temperature == e.ft_temperature);
    CHECK(again.task_temperatures == e.task_temperatures);
}

TEST_CASE("pilot report shape and consistency") {
    const auto& w = world();
    const EvalReport r = run_pilot(w.suite, w.experts, default_grid());
    REQUIRE(r.strategies.size() == 5);
    const std::vector<std::string> names{"zs", "ft", "best_static", "oracle_domain", "oracle_sample"};
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(r.strategies[i].strategy == names[i]);
        CHECK(r.strategies[i].domains.size() == 1 + w.suite.ood_tests.size());
    }
    for (const Domain* d : w.suite.eval_domains()) {
        const double zs = params_eval(w.experts.arch, w.experts.zs.payload, d->data, "zs").accuracy(d->data.labels);
        CHECK(r.row("zs").at(d->name).accuracy == zs);
        const double ft = params_eval(w.experts.arch, w.experts.ft.payload, d->data, "ft").accuracy(d->data.labels);
        CHECK(r.row("ft").at(d->name).accuracy == ft);
        CHECK(r.row("oracle_domain").at(d->name).accuracy >= r.row("best_static").at(d->name).accuracy);
    }
    double sum = 0.0;
    for (std::size_t i = 1; i < r.row("zs").domains.size(); ++i) sum += r.row("zs").domains[i].accuracy;
    CHECK(r.row("zs").average == doctest::Approx(sum / static_cast<double>(w.suite.ood_tests.size())).epsilon(1e-15));
    CHECK_THROWS_AS(r.row("nope"), Error);
}

TEST_CASE("main report") {
    const auto& w = world();
    const auto strategies = main_strategies();
    std::size_t sink_calls = 0;
    const EvalReport r = run_main(w.suite, w.experts, strategies,
                                  [&](const std::string&, const Domain&, const EvalResult&) { ++sink_calls; });
    for (const auto& d : r.row("dawin_clustered(K=3)").domains) CHECK(d.merge_count == 3);
    for (const auto& d : r.row("static(0.5)").domains) CHECK(d.merge_count == 1);
    CHECK(r.row("task_arith(0.3)").average_kind == "task_average");
    const auto& ta = r.row("dawin_task_arith(K=1)");
    CHECK(ta.domains.size() == w.suite.mtl_tasks.size());
    CHECK(ta.details["mean_coefficients"].size() == w.suite.mtl_tasks.size());
    CHECK(sink_calls == 6 * w.suite.eval_domains().size() + 2 * w.suite.mtl_tasks.size());

    // The two dawin_sample rows differ only in the offset flag.
    std::vector<const StrategyRow*> sample_rows;
    for (const auto& row : r.strategies)
        if (row.strategy == "dawin_sample") sample_rows.push_back(&row);
    REQUIRE(sample_rows.size() == 2);
    bool differs = false;
    for (const auto& [name, entry] : sample_rows[0]->details["domains"].items()) {
        differs |= entry["lambda_mean"] != sample_rows[1]->details["domains"][name]["lambda_mean"];
    }
    CHECK(differs);
    for (const auto& row : r.strategies)
        for (const auto& d : row.domains) {
            CHECK(d.accuracy >= 0.0);
            CHECK(d.accuracy <= 1.0);
        }
}

TEST_CASE("analysis report") {
    const auto& w = world();
    const EvalReport r = run_analysis(w.suite, w.experts);
    REQUIRE(r.splits.size() == w.suite.eval_domains().size());
    for (std::size_t i = 0; i < r.splits.size(); ++i) {
        const auto& s = r.splits[i];
        std::size_t total = 0;
        for (std::size_t c : s.counts) total += c;
        CHECK(total == static_cast<std::size_t>(w.suite.eval_domains()[i]->data.size()));
        CHECK(s.models.size() == 4);
        CHECK(s.mean_entropy.size() == 4);
    }
    CHECK(r.histograms.size() == 3 * r.splits.size());
    for (const auto& h : r.histograms) {
        CHECK(h.counts.size() == kHistogramBins);
        std::size_t total = 0;
        for (std::size_t c : h.counts) total += c;
        CHECK(total == static_cast<std::size_t>(w.suite.id_test.data.size()));
    }
    CHECK(r.extras.contains("entropy_path"));
    CHECK(r.extras.contains("offset_effect"));
    for (const auto& [domain, rows] : r.extras.at("mixture_loglik_by_k").items()) {
        REQUIRE(rows.size() == 5);
        for (std::size_t k = 0; k < 5; ++k) {
            CHECK(rows[k].at("k") == k + 1);
            CHECK(std::isfinite(rows[k].at("loglik").get<double>()));
        }
    }
    CHECK(r.extras.at("mixture_loglik_by_k").size() == 5);
}

TEST_CASE("histogram binning") {
    const std::vector<double> v{0.0, 0.019, 0.02, 0.5, 0.999, 1.0};
    const Histogram h = make_histogram("x", "d", v);
    CHECK(h.counts[0] == 2);
    CHECK(h.counts[1] == 1);
    CHECK(h.counts[25] == 1);
    CHECK(h.counts[49] == 2);
    const std::vector<double> bad{1.5};
    CHECK_THROWS_AS(make_histogram("x", "d", bad), Error);
}

TEST_CASE("true-expert checks on hand-made entropy vectors") {
    // Two correct models with a spread: the weaker correct one drops below 1/M.
    Eigen::Vector3d h(0.0, 5.0, 5.01);
    const std::vector<bool> two_correct{true, true, false};
    REQUIRE(true_expert_weight_floor(h, two_correct).has_value());
    CHECK_FALSE(*true_expert_weight_floor(h, two_correct));
    CHECK(*true_expert_dominance(h, two_correct));
    // One correct, lowest entropy.
    const std::vector<bool> one_correct{true, false, false};
    CHECK(*true_expert_weight_floor(h, one_correct));
    // Precondition fails when an incorrect model is more certain.
    const std::vector<bool> wrong_order{false, true, false};
    CHECK_FALSE(true_expert_weight_floor(h, wrong_order).has_value());
    const std::vector<bool> none{false, false, false};
    CHECK_FALSE(true_expert_dominance(h, none).has_value());
}

TEST_CASE("property suite runs and reports consistently") {
    const auto& w = world();
    PropertySuiteOptions o;
    o.synthetic_cases = 2000;
    o.em_datasets = 5;
    o.batch_sizes = {64, 0};
    const auto checks = run_property_suite(w.suite, w.experts, o);
    std::set<std::string> names;
    for (const auto& c : checks) {
        names.insert(c.name);
        CHECK(c.violations <= std::max<std::size_t>(c.samples, 1));
        CHECK(c.passed == (c.violations == 0));
    }
    for (const char* n : {"coefficient_algebra", "true_expert_weight_floor", "true_expert_dominance", "em_loglik_monotone",
                          "em_parameter_recovery", "entropy_valley_grid", "entropy_valley_dawin", "clustered_matches_sample",
                          "pilot_ordering", "truetrue_ratio_correlation", "mtl_diagonal_dominance", "batch_size_spread",
                          "repeat_run_identical"}) {
        CHECK_MESSAGE(names.count(n) == 1, n);
    }
}

TEST_CASE("report serialization") {
    const auto& w = world();
    EvalReport r = run_pilot(w.suite, w.experts, default_grid());
    r.append(run_main(w.suite, w.experts, main_strategies()));
    r.append(run_analysis(w.suite, w.experts));

    const nlohmann::json j = to_json(r);
    CHECK(j.at("schema_version") == kReportSchemaVersion);
    CHECK(j.contains("nondeterministic_fields"));
    const EvalReport back = report_from_json(nlohmann::json::parse(j.dump()));
    CHECK(to_json(back) == j);
    CHECK(strip_timing(to_json(back)) == strip_timing(j));
    for (const auto& row : strip_timing(j).at("strategies"))
        for (const auto& d : row.at("domains")) CHECK_FALSE(d.contains("wall_ms"));

    const std::string csv = report_to_csv(r);
    std::size_t lines = 0, expected = 0;
    for (char c : csv) lines += c == '\n';
    for (const auto& row : r.strategies) expected += row.domains.size();
    CHECK(lines == expected + 1);
    CHECK(csv.rfind("strategy,domain,samples,accuracy,mean_entropy,merge_count,wall_ms\n", 0) == 0);

    const auto dir = testing::scratch_dir("report");
    emit_report(r, dir / "r.json", ReportFormat::Json);
    emit_report(r, dir / "r.csv", ReportFormat::Csv);
    const auto bytes = read_file(dir / "r.json");
    CHECK(strip_timing(nlohmann::json::parse(bytes.begin(), bytes.end())) == strip_timing(j));
    const auto csv_bytes = read_file(dir / "r.csv");
    CHECK(std::string(csv_bytes.begin(), csv_bytes.end()) == csv);
    CHECK_THROWS_AS(emit_report(r, dir / "missing" / "sub" / "r.json", ReportFormat::Json), Error);
}

TEST_CASE("reports are reproducible modulo timing") {
    const BenchmarkSuite s = generate(7, testing::small_spec());
    const ExpertSet e = train_experts(s, 7, testing::quick_config());
    CHECK(e.zs.payload.values() == world().experts.zs.payload.values());
    const auto strategies = main_strategies();
    const nlohmann::json a = strip_timing(to_json(run_main(s, e, strategies)));
    const nlohmann::json b = strip_timing(to_json(run_main(world().suite, world().experts, strategies)));
    CHECK(a.dump() == b.dump());
}
