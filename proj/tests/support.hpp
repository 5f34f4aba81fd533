#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <string>

#include "dawin/databench.hpp"
#include "dawin/harness.hpp"
#include "dawin/rng.hpp"

namespace dawin::testing {

// Reduced suite: same structure as the default one, a fraction of the samples.
inline BenchmarkSpec small_spec() {
    BenchmarkSpec s;
    s.n_pretrain = 2000;
    s.n_id_train = 800;
    s.n_id_val = 300;
    s.n_test = 400;
    s.n_task_train = 400;
    s.n_task_test = 200;
    return s;
}

inline ExpertSetConfig quick_config() {
    ExpertSetConfig c;
    c.pretrain.epochs = 8;
    c.finetune.epochs = 4;
    c.soup_variants = 2;
    return c;
}

struct SmallWorld {
    BenchmarkSuite suite;
    ExpertSet experts;
};

// Built once per test binary.
inline const SmallWorld& small_world() {
    static const SmallWorld world = [] {
        SmallWorld w;
        w.suite = generate(7, small_spec());
        w.experts = train_experts(w.suite, 7, quick_config());
        return w;
    }();
    return world;
}

inline Eigen::VectorXd random_vector(Rng& rng, Eigen::Index n, double lo = -1.0, double hi = 1.0) {
    Eigen::VectorXd v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

// Marsaglia-Tsang gamma draw; shapes below 1 use the u^(1/a) boost.
inline double sample_gamma(Rng& rng, double shape) {
    if (shape < 1.0) return sample_gamma(rng, shape + 1.0) * std::pow(rng.uniform(), 1.0 / shape);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = rng.normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

inline double sample_beta(Rng& rng, double a, double b) {
    const double x = sample_gamma(rng, a);
    return x / (x + sample_gamma(rng, b));
}

inline Eigen::VectorXd sample_dirichlet(Rng& rng, const Eigen::VectorXd& alpha) {
    Eigen::VectorXd g(alpha.size());
    for (Eigen::Index j = 0; j < alpha.size(); ++j) g[j] = sample_gamma(rng, alpha[j]);
    return g / g.sum();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("dawin_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace dawin::testing
