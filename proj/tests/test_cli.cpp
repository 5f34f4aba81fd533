#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "dawin/harness.hpp"
#include "dawin/param_space.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace dawin;

namespace {

const fs::path kTmp = DAWIN_TEST_TMP;

int run(const std::string& args) {
    const std::string cmd = std::string(DAWIN_CLI_PATH) + " " + args + " > " + (kTmp / "last.log").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    const auto bytes = read_file(p);
    return std::string(bytes.begin(), bytes.end());
}

nlohmann::json load_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

// Small suite on disk, generated once per binary.
const fs::path& suite_dir() {
    static const fs::path dir = [] {
        fs::remove_all(kTmp);
        fs::create_directories(kTmp);
        write(kTmp / "spec.json", testing::small_spec().to_json().dump());
        const fs::path d = kTmp / "suite";
        REQUIRE(run("--seed 3 gen --spec " + (kTmp / "spec.json").string() + " --out " + d.string()) == 0);
        return d;
    }();
    return dir;
}

const StrategyRow* find_row(const EvalReport& r, const std::string& name) {
    for (const auto& s : r.strategies)
        if (s.strategy == name) return &s;
    return nullptr;
}

}  // namespace

TEST_CASE("gen is deterministic") {
    suite_dir();
    const fs::path again = kTmp / "suite_again";
    REQUIRE(run("--seed 3 gen --spec " + (kTmp / "spec.json").string() + " --out " + again.string()) == 0);
    for (const auto& e : fs::directory_iterator(suite_dir())) CHECK(slurp(e.path()) == slurp(again / e.path().filename()));

    const fs::path a = kTmp / "default_a", b = kTmp / "default_b";
    REQUIRE(run("--seed 0 gen --out " + a.string()) == 0);
    REQUIRE(run("--seed 0 gen --out " + b.string()) == 0);
    CHECK(slurp(a / "suite.json") == slurp(b / "suite.json"));
    CHECK(slurp(a / "ood_rot30.csv") == slurp(b / "ood_rot30.csv"));
}

TEST_CASE("eval with clustered merging records K merges per domain") {
    const fs::path out = kTmp / "clustered.json";
    REQUIRE(run("--seed 3 eval --suite " + suite_dir().string() + " --strategy dawin_clustered --k 3 --out " + out.string()) == 0);
    const EvalReport r = report_from_json(load_json(out));
    const StrategyRow* row = find_row(r, "dawin_clustered(K=3)");
    REQUIRE(row != nullptr);
    CHECK(row->domains.size() == 5);
    for (const auto& d : row->domains) CHECK(d.merge_count == 3);
    CHECK(r.config.contains("cli"));
}

TEST_CASE("CLI-trained checkpoints reproduce the in-process experts") {
    const std::string s = suite_dir().string();
    const fs::path zs = kTmp / "zs.dwin", ft = kTmp / "ft.dwin";
    REQUIRE(run("--seed 3 train --suite " + s + " --role pretrain --out " + zs.string()) == 0);
    REQUIRE(run("--seed 3 train --suite " + s + " --role finetune --init " + zs.string() + " --out " + ft.string()) == 0);
    const Checkpoint c = load_checkpoint(ft);
    CHECK(c.meta.parent_id == load_checkpoint(zs).id());

    const fs::path with = kTmp / "with.json", without = kTmp / "without.json";
    REQUIRE(run("--seed 3 eval --suite " + s + " --strategy dawin_sample --strategy static --zs " + zs.string() + " --ft " +
                ft.string() + " --out " + with.string()) == 0);
    REQUIRE(run("--seed 3 eval --suite " + s + " --strategy dawin_sample --strategy static --out " + without.string()) == 0);
    CHECK(strip_timing(load_json(with))["strategies"] == strip_timing(load_json(without))["strategies"]);
}

TEST_CASE("coeffs and fit-mixture") {
    const std::string s = suite_dir().string();
    const fs::path zs = kTmp / "c_zs.dwin", ft = kTmp / "c_ft.dwin";
    REQUIRE(run("--seed 3 train --suite " + s + " --role pretrain --epochs 3 --out " + zs.string()) == 0);
    REQUIRE(run("--seed 3 train --suite " + s + " --role finetune --epochs 2 --init " + zs.string() + " --out " + ft.string()) == 0);
    const std::string models = " --theta0 " + zs.string() + " --theta1 " + ft.string();
    const fs::path csv = kTmp / "coeffs.csv";
    REQUIRE(run("coeffs" + models + " --domain " + (suite_dir() / "ood_rot60.csv").string() + " --mode offset --out " + csv.string()) == 0);
    const CoefficientBatch b = coefficients_from_csv(slurp(csv));
    CHECK(b.size() == 400);
    CHECK(b.mode == CoefficientMode::OffsetAdjusted);

    const fs::path mix = kTmp / "mix.json";
    REQUIRE(run("fit-mixture --coeffs " + csv.string() + " --k 2 --out " + mix.string()) == 0);
    CHECK(beta_mixture_from_json(load_json(mix)).k() == 2);

    SUBCASE("oracle mode without labels is a data error") {
        LabeledData d = load_domain(suite_dir() / "id_test.csv");
        d.labels.clear();
        save_domain(d, kTmp / "unlabeled.csv");
        CHECK(run("coeffs" + models + " --domain " + (kTmp / "unlabeled.csv").string() + " --mode oracle") == 2);
        CHECK(slurp(kTmp / "last.log").find("missing-labels") != std::string::npos);
    }
    SUBCASE("oracle mode with labels") {
        CHECK(run("coeffs" + models + " --domain " + (suite_dir() / "id_test.csv").string() + " --mode oracle") == 0);
    }
    SUBCASE("multi-model coefficients") {
        const fs::path m = kTmp / "multi.csv";
        const std::string three = "coeffs --experts " + zs.string() + " " + ft.string() + " " + zs.string() + " --domain " +
                                  (suite_dir() / "id_test.csv").string();
        CHECK(run(three + " --out " + m.string()) == 1);  // offset mode needs exactly two models
        REQUIRE(run(three + " --mode entropy --out " + m.string()) == 0);
        CHECK(coefficients_from_csv(slurp(m)).coefficients.cols() == 3);
        REQUIRE(run("fit-mixture --coeffs " + m.string() + " --k 1 --out " + mix.string()) == 0);
        CHECK(dirichlet_mixture_from_json(load_json(mix)).k() == 1);
    }
}

TEST_CASE("exit codes") {
    CHECK(run("--help") == 0);
    CHECK(run("bogus") == 1);
    CHECK(run("eval --strategy not_a_strategy --suite " + suite_dir().string()) == 1);
    CHECK(run("eval --suite " + (kTmp / "no_such_dir").string()) == 2);
    const fs::path broken = kTmp / "broken.dwin";
    write(broken, "DWIN1garbage");
    CHECK(run("coeffs --theta0 " + broken.string() + " --theta1 " + broken.string() + " --domain " +
              (suite_dir() / "id_test.csv").string()) == 2);
}

TEST_CASE("config file values apply unless a flag overrides them") {
    const fs::path cfg = kTmp / "cfg.ini";
    write(cfg, "[eval]\nk=2\n");
    const fs::path a = kTmp / "cfg_a.json", b = kTmp / "cfg_b.json";
    REQUIRE(run("--config " + cfg.string() + " --seed 3 eval --suite " + suite_dir().string() +
                " --strategy dawin_clustered --out " + a.string()) == 0);
    REQUIRE(run("--config " + cfg.string() + " --seed 3 eval --suite " + suite_dir().string() +
                " --strategy dawin_clustered --k 4 --out " + b.string()) == 0);
    CHECK(find_row(report_from_json(load_json(a)), "dawin_clustered(K=2)") != nullptr);
    CHECK(find_row(report_from_json(load_json(b)), "dawin_clustered(K=4)") != nullptr);
    CHECK(load_json(b)["config"]["cli"]["effective_config"].get<std::string>().find("k=4") != std::string::npos);
}

TEST_CASE("property suite exit code counts failed checks") {
    const fs::path out = kTmp / "props.json";
    const int rc = run("--seed 3 suite --suite " + suite_dir().string() + " --synthetic-cases 2000 --out " + out.string());
    const EvalReport r = report_from_json(load_json(out));
    int failed = 0;
    for (const auto& p : r.properties) failed += !p.passed;
    CHECK(rc == failed);
}
