#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dawin/architecture.hpp"

namespace dawin {

// Flat f64 view of a model's weights, bound to a layout.
class ParamVector {
public:
    ParamVector() = default;
    // Throws Error(Domain) on any non-finite entry.
    ParamVector(Eigen::VectorXd values, std::string layout_id);

    const Eigen::VectorXd& values() const noexcept { return values_; }
    const std::string& layout_id() const noexcept { return layout_id_; }
    Eigen::Index size() const noexcept { return values_.size(); }
    double operator[](Eigen::Index i) const { return values_[i]; }

    bool compatible_with(const ParamVector& other) const noexcept {
        return layout_id_ == other.layout_id_ && values_.size() == other.values_.size();
    }

private:
    Eigen::VectorXd values_;
    std::string layout_id_;
};

// theta_j - theta_0 for a shared pretrained model.
struct TaskVector {
    ParamVector delta;
    std::string base_layout;
};

void require_compatible(const ParamVector& a, const ParamVector& b);

// (1 - lambda) * a + lambda * b.
ParamVector interpolate_pair(const ParamVector& a, const ParamVector& b, double lambda);

// Buffer-reusing form for per-sample merging; no layout check beyond sizes.
void interpolate_into(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double lambda,
                      Eigen::VectorXd& out);

TaskVector make_task_vector(const ParamVector& theta_j, const ParamVector& theta_0);

// theta_0 + lambda_0 * sum_j weights[j] * taus[j].delta
ParamVector combine_task_vectors(const ParamVector& theta_0, double lambda_0,
                                 std::span<const double> weights, std::span<const TaskVector> taus);

void combine_task_vectors_into(const Eigen::VectorXd& theta_0, double lambda_0,
                               std::span<const double> weights, std::span<const TaskVector> taus,
                               Eigen::VectorXd& out);

struct CheckpointMeta {
    std::uint64_t seed = 0;
    std::string dataset_id;
    std::size_t epochs = 0;
    double final_loss = 0.0;
    std::optional<std::string> parent_id;
    std::string role;

    bool operator==(const CheckpointMeta&) const = default;
};

struct Checkpoint {
    MlpArchitecture arch;
    ParamVector payload;
    CheckpointMeta meta;

    // Content hash of architecture and payload bytes, hex encoded.
    std::string id() const;
};

// Builds a checkpoint, validating that the payload matches the architecture.
Checkpoint make_checkpoint(MlpArchitecture arch, Eigen::VectorXd payload, CheckpointMeta meta);

// File layout: "DWIN1", u32 LE header length, JSON header, raw LE f64 payload.
void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

std::vector<char> encode_checkpoint(const Checkpoint& c);
Checkpoint decode_checkpoint(std::span<const char> bytes);

// Writes via a sibling temp file and rename so readers never see partial output.
void write_file_atomic(const std::filesystem::path& path, std::span<const char> bytes);
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
std::vector<char> read_file(const std::filesystem::path& path);

}  // namespace dawin
