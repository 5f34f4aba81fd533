#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dawin/dataset.hpp"

namespace dawin {

// Label-preserving input transform applied to canonical class-cluster draws.
struct ShiftSpec {
    enum class Kind { Identity, Rotation, Noise, Scaling };

    Kind kind = Kind::Identity;
    double angle_deg = 0.0;       // Rotation
    double sigma = 0.0;           // Noise
    double scale_lo = 1.0;        // Scaling: per-coordinate factors drawn log-uniformly
    double scale_hi = 1.0;        //          from [scale_lo, scale_hi]
    std::vector<double> scales;   // Scaling: realized factors (filled by generate)

    static ShiftSpec identity() { return {}; }
    static ShiftSpec rotation(double deg) { ShiftSpec s; s.kind = Kind::Rotation; s.angle_deg = deg; return s; }
    static ShiftSpec noise(double sigma) { ShiftSpec s; s.kind = Kind::Noise; s.sigma = sigma; return s; }
    static ShiftSpec scaling(double lo, double hi) {
        ShiftSpec s; s.kind = Kind::Scaling; s.scale_lo = lo; s.scale_hi = hi; return s;
    }

    std::string name() const;
    nlohmann::json to_json() const;
    static ShiftSpec from_json(const nlohmann::json& j);
    bool operator==(const ShiftSpec&) const = default;
};

// Rotates every coordinate pair (0,1), (2,3), ... by the same angle; an odd
// trailing coordinate is left unchanged.
void rotate_pairs(Eigen::MatrixXd& features, double angle_rad);

struct Domain {
    std::string name;
    LabeledData data;
    ShiftSpec shift;
};

struct MtlTask {
    Domain train;
    Domain test;
    double rotation_deg = 0.0;
};

struct BenchmarkSpec {
    std::size_t class_count = 10;
    std::size_t dim = 16;
    double radius = 4.0;
    std::size_t n_pretrain = 10000;
    std::size_t n_id_train = 5000;
    std::size_t n_id_val = 1000;
    std::size_t n_test = 2000;
    double pretrain_max_rotation_deg = 75.0;
    std::vector<ShiftSpec> ood_shifts{ShiftSpec::rotation(30.0), ShiftSpec::rotation(60.0), ShiftSpec::noise(1.0),
                                      ShiftSpec::scaling(0.5, 2.0)};
    std::size_t mtl_tasks = 4;
    double mtl_rotation_span_deg = 120.0;  // task t is rotated by span * t / M
    std::size_t n_task_train = 2000;
    std::size_t n_task_test = 1000;

    void validate() const;
    nlohmann::json to_json() const;
    static BenchmarkSpec from_json(const nlohmann::json& j);
};

struct BenchmarkSuite {
    std::uint64_t seed = 0;
    BenchmarkSpec spec;
    Domain pretrain_mix;
    Domain id_train;
    Domain id_val;
    Domain id_test;
    std::vector<Domain> ood_tests;
    std::vector<MtlTask> mtl_tasks;

    // id_test followed by every OOD test domain.
    std::vector<const Domain*> eval_domains() const;
};

// C Gaussian clusters with unit covariance and means on a radius-R sphere;
// shifts transform every sample with the same rule.
BenchmarkSuite generate(std::uint64_t seed, const BenchmarkSpec& spec);

// CSV with header `label,f0,...,f{d-1}`, 17 significant digits. An empty label
// field marks an unlabeled row; a file must be all labeled or all unlabeled.
std::string domain_to_csv(const LabeledData& data);
LabeledData domain_from_csv(const std::string& text, std::optional<std::size_t> class_count = std::nullopt);
void save_domain(const LabeledData& data, const std::filesystem::path& path);
LabeledData load_domain(const std::filesystem::path& path, std::optional<std::size_t> class_count = std::nullopt);

// Directory layout: one CSV per domain plus suite.json listing files, shift
// specs and seed.
void save_suite(const BenchmarkSuite& suite, const std::filesystem::path& dir);
BenchmarkSuite load_suite(const std::filesystem::path& dir);

}  // namespace dawin
