#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "dawin/architecture.hpp"
#include "dawin/dataset.hpp"
#include "dawin/param_space.hpp"

namespace dawin {

// Point on the (C-1)-simplex.
class ProbVector {
public:
    ProbVector() = default;
    // Throws Error(Domain) unless entries lie in [0,1] and sum to 1 within 1e-9.
    explicit ProbVector(Eigen::VectorXd probs);

    const Eigen::VectorXd& probs() const noexcept { return probs_; }
    Eigen::Index size() const noexcept { return probs_.size(); }
    double operator[](Eigen::Index c) const { return probs_[c]; }
    // Lowest index wins ties.
    int argmax() const;

private:
    Eigen::VectorXd probs_;
};

struct TrainConfig {
    std::size_t epochs = 30;
    std::size_t batch_size = 64;
    double learning_rate = 0.05;
    double momentum = 0.9;
    double weight_decay = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

// Row-wise softmax of logits / temperature.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits, double temperature = 1.0);

// N x C logits for the rows of `x`. `theta` must have arch.parameter_count() entries.
Eigen::MatrixXd logits_batch(const MlpArchitecture& arch, const Eigen::Ref<const Eigen::VectorXd>& theta,
                             const Eigen::Ref<const Eigen::MatrixXd>& x);

Eigen::MatrixXd predict_proba(const MlpArchitecture& arch, const Eigen::Ref<const Eigen::VectorXd>& theta,
                              const Eigen::Ref<const Eigen::MatrixXd>& x, double temperature = 1.0);

ProbVector forward(const MlpArchitecture& arch, const ParamVector& theta, const Eigen::Ref<const Eigen::VectorXd>& x,
                   double temperature = 1.0);

// Unchecked-layout variant used inside per-sample merging loops.
ProbVector forward_raw(const MlpArchitecture& arch, const Eigen::Ref<const Eigen::VectorXd>& theta,
                       const Eigen::Ref<const Eigen::VectorXd>& x, double temperature = 1.0);

// Mean cross-entropy over the batch and its gradient with respect to theta.
std::pair<double, Eigen::VectorXd> loss_and_gradient(const MlpArchitecture& arch,
                                                     const Eigen::Ref<const Eigen::VectorXd>& theta,
                                                     const Eigen::Ref<const Eigen::MatrixXd>& x,
                                                     const std::vector<int>& labels);

// Glorot-uniform weights, zero biases.
Eigen::VectorXd init_parameters(const MlpArchitecture& arch, std::uint64_t seed);

// SGD with momentum. With `init` the run fine-tunes from that checkpoint and
// records it as parent.
Checkpoint train(const MlpArchitecture& arch, const LabeledData& data, const std::optional<Checkpoint>& init,
                 const TrainConfig& config, const std::string& dataset_id = {});

// Temperature minimizing mean validation cross-entropy; golden-section search on
// log T over [0.25, 16].
double calibrate_temperature(const MlpArchitecture& arch, const ParamVector& theta, const LabeledData& validation);
double calibrate_temperature_from_logits(const Eigen::MatrixXd& logits, const std::vector<int>& labels);

double mean_cross_entropy(const Eigen::MatrixXd& logits, const std::vector<int>& labels, double temperature);

// Fraction of rows whose argmax equals the label.
double accuracy(const Eigen::MatrixXd& probs, const std::vector<int>& labels);
int row_argmax(const Eigen::Ref<const Eigen::VectorXd>& row);

}  // namespace dawin
