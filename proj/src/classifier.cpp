#include "dawin/classifier.hpp"

#include <cmath>
#include <numeric>

#include "dawin/error.hpp"
#include "dawin/rng.hpp"

namespace dawin {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstWeightMap = Eigen::Map<const RowMajorMatrix>;
using WeightMap = Eigen::Map<RowMajorMatrix>;

void check_theta(const MlpArchitecture& arch, Eigen::Index size) {
    if (static_cast<std::size_t>(size) != arch.parameter_count()) {
        throw Error(ErrorCode::IncompatibleModels, "parameter vector length " + std::to_string(size) +
                                                       " does not match " + arch.layout_id());
    }
}

void check_inputs(const MlpArchitecture& arch, const Eigen::Ref<const Eigen::MatrixXd>& x) {
    if (static_cast<std::size_t>(x.cols()) != arch.input_dim) {
        throw Error(ErrorCode::InvalidArgument, "feature dimension " + std::to_string(x.cols()) + " != " +
                                                    std::to_string(arch.input_dim));
    }
    if (!x.allFinite()) throw Error(ErrorCode::Domain, "non-finite input features");
}

void activate(Activation a, Eigen::MatrixXd& z) {
    switch (a) {
        case Activation::Tanh: z = z.array().tanh(); break;
        case Activation::Relu: z = z.array().max(0.0); break;
    }
}

// Forward pass keeping every layer's post-activation output (acts[0] is the input).
std::vector<Eigen::MatrixXd> forward_layers(const MlpArchitecture& arch, const Eigen::Ref<const Eigen::VectorXd>& theta,
                                            const Eigen::Ref<const Eigen::MatrixXd>& x) {
    const auto w = arch.widths();
    const std::size_t layers = w.size() - 1;
    std::vector<Eigen::MatrixXd> acts;
    acts.reserve(layers + 1);
    acts.emplace_back(x);
    Eigen::Index offset = 0;
    for (std::size_t l = 0; l < layers; ++l) {
        const auto in = static_cast<Eigen::Index>(w[l]);
        const auto out = static_cast<Eigen::Index>(w[l + 1]);
        ConstWeightMap weight(theta.data() + offset, out, in);
        offset += out * in;
        Eigen::Map<const Eigen::RowVectorXd> bias(theta.data() + offset, out);
        offset += out;
        Eigen::MatrixXd z = acts.back() * weight.transpose();
        z.rowwise() += bias;
        if (l + 1 < layers) activate(arch.activation, z);
        acts.push_back(std::move(z));
    }
    return acts;
}

}  // namespace

ProbVector::ProbVector(Eigen::VectorXd probs) : probs_(std::move(probs)) {
    if (probs_.size() == 0) throw Error(ErrorCode::Domain, "empty probability vector");
    if (!probs_.allFinite() || (probs_.array() < 0.0).any() || (probs_.array() > 1.0).any()) {
        throw Error(ErrorCode::Domain, "probability entries must lie in [0,1]");
    }
    if (std::abs(probs_.sum() - 1.0) > 1e-9) throw Error(ErrorCode::Domain, "probabilities do not sum to 1");
}

int ProbVector::argmax() const { return row_argmax(probs_); }

int row_argmax(const Eigen::Ref<const Eigen::VectorXd>& row) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < row.size(); ++c) {
        if (row[c] > row[best]) best = c;
    }
    return static_cast<int>(best);
}

void TrainConfig::validate() const {
    if (epochs == 0 || batch_size == 0) throw Error(ErrorCode::InvalidArgument, "epochs and batch size must be positive");
    if (!(learning_rate > 0.0) || !(momentum > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "learning rate and momentum must be positive");
    }
    if (!(weight_decay >= 0.0)) throw Error(ErrorCode::InvalidArgument, "weight decay must be >= 0");
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits, double temperature) {
    if (!(temperature > 0.0)) throw Error(ErrorCode::Domain, "temperature must be positive");
    Eigen::MatrixXd z = logits / temperature;
    const Eigen::VectorXd m = z.rowwise().maxCoeff();
    z.colwise() -= m;
    z = z.array().exp();
    const Eigen::VectorXd s = z.rowwise().sum();
    z.array().colwise() /= s.array();
    return z;
}

Eigen::MatrixXd logits_batch(const MlpArchitecture& arch, const Eigen::Ref<const Eigen::VectorXd>& theta,
                             const Eigen::Ref<const Eigen::MatrixXd>& x) {
    check_theta(arch, theta.size());
    check_inputs(arch, x);
    auto acts = forward_layers(arch, theta, x);
    return std::move(acts.back());
}

Eigen::MatrixXd predict_proba(const MlpArchitecture& arch, const Eigen::Ref<const Eigen::VectorXd>& theta,
                              const Eigen::Ref<const Eigen::MatrixXd>& x, double temperature) {
    return softmax_rows(logits_batch(arch, theta, x), temperature);
}

ProbVector forward_raw(const MlpArchitecture& arch, const Eigen::Ref<const Eigen::VectorXd>& theta,
                       const Eigen::Ref<const Eigen::VectorXd>& x, double temperature) {
    const Eigen::MatrixXd row = x.transpose();
    Eigen::MatrixXd p = predict_proba(arch, theta, row, temperature);
    return ProbVector(p.row(0).transpose());
}

ProbVector forward(const MlpArchitecture& arch, const ParamVector& theta, const Eigen::Ref<const Eigen::VectorXd>& x,
                   double temperature) {
    if (theta.layout_id() != arch.layout_id()) {
        throw Error(ErrorCode::IncompatibleModels, "parameter layout '" + theta.layout_id() + "' != '" +
                                                       arch.layout_id() + "'");
    }
    return forward_raw(arch, theta.values(), x, temperature);
}

std::pair<double, Eigen::VectorXd> loss_and_gradient(const MlpArchitecture& arch,
                                                     const Eigen::Ref<const Eigen::VectorXd>& theta,
                                                     const Eigen::Ref<const Eigen::MatrixXd>& x,
                                                     const std::vector<int>& labels) {
    check_theta(arch, theta.size());
    const Eigen::Index n = x.rows();
    if (n == 0 || static_cast<std::size_t>(n) != labels.size()) {
        throw Error(ErrorCode::InvalidArgument, "batch and label counts differ");
    }
    const auto w = arch.widths();
    const std::size_t layers = w.size() - 1;
    auto acts = forward_layers(arch, theta, x);

    Eigen::MatrixXd delta = softmax_rows(acts.back());
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const int y = labels[static_cast<std::size_t>(i)];
        loss -= std::log(std::max(delta(i, y), 1e-300));
        delta(i, y) -= 1.0;
    }
    loss /= static_cast<double>(n);
    delta /= static_cast<double>(n);

    Eigen::VectorXd grad(theta.size());
    std::vector<Eigen::Index> offsets(layers);
    Eigen::Index offset = 0;
    for (std::size_t l = 0; l < layers; ++l) {
        offsets[l] = offset;
        offset += static_cast<Eigen::Index>(w[l + 1] * w[l] + w[l + 1]);
    }
    for (std::size_t l = layers; l-- > 0;) {
        const auto in = static_cast<Eigen::Index>(w[l]);
        const auto out = static_cast<Eigen::Index>(w[l + 1]);
        WeightMap gw(grad.data() + offsets[l], out, in);
        gw.noalias() = delta.transpose() * acts[l];
        grad.segment(offsets[l] + out * in, out) = delta.colwise().sum().transpose();
        if (l == 0) break;
        ConstWeightMap weight(theta.data() + offsets[l], out, in);
        Eigen::MatrixXd upstream = delta * weight;
        switch (arch.activation) {
            case Activation::Tanh: upstream.array() *= 1.0 - acts[l].array().square(); break;
            case Activation::Relu: upstream.array() *= (acts[l].array() > 0.0).cast<double>(); break;
        }
        delta = std::move(upstream);
    }
    return {loss, std::move(grad)};
}

Eigen::VectorXd init_parameters(const MlpArchitecture& arch, std::uint64_t seed) {
    arch.validate();
    Rng rng = Rng::substream(seed, "train/init");
    const auto w = arch.widths();
    Eigen::VectorXd theta(static_cast<Eigen::Index>(arch.parameter_count()));
    Eigen::Index offset = 0;
    for (std::size_t l = 0; l + 1 < w.size(); ++l) {
        const double s = std::sqrt(6.0 / static_cast<double>(w[l] + w[l + 1]));
        const auto count = static_cast<Eigen::Index>(w[l] * w[l + 1]);
        for (Eigen::Index i = 0; i < count; ++i) theta[offset + i] = rng.uniform(-s, s);
        offset += count;
        theta.segment(offset, static_cast<Eigen::Index>(w[l + 1])).setZero();
        offset += static_cast<Eigen::Index>(w[l + 1]);
    }
    return theta;
}

Checkpoint train(const MlpArchitecture& arch, const LabeledData& data, const std::optional<Checkpoint>& init,
                 const TrainConfig& config, const std::string& dataset_id) {
    arch.validate();
    config.validate();
    const Eigen::Index n = data.size();
    if (n == 0) throw Error(ErrorCode::EmptyDataset, "training set is empty");
    if (!data.has_labels()) throw Error(ErrorCode::MissingLabels, "training requires labels");
    check_inputs(arch, data.features);
    for (int y : data.labels) {
        if (y < 0 || static_cast<std::size_t>(y) >= arch.class_count) {
            throw Error(ErrorCode::InvalidArgument, "label " + std::to_string(y) + " out of range");
        }
    }

    CheckpointMeta meta;
    meta.seed = config.seed;
    meta.dataset_id = dataset_id;
    meta.epochs = config.epochs;

    Eigen::VectorXd theta;
    if (init) {
        if (!(init->arch == arch)) throw Error(ErrorCode::IncompatibleModels, "init checkpoint architecture differs");
        theta = init->payload.values();
        meta.parent_id = init->id();
    } else {
        theta = init_parameters(arch, config.seed);
    }

    Eigen::VectorXd velocity = Eigen::VectorXd::Zero(theta.size());
    Rng shuffle_rng = Rng::substream(config.seed, "train/shuffle");
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    const auto batch = static_cast<Eigen::Index>(config.batch_size);
    Eigen::MatrixXd xb;
    std::vector<int> yb;
    double epoch_loss = 0.0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double loss_sum = 0.0;
        for (Eigen::Index start = 0; start < n; start += batch) {
            const Eigen::Index m = std::min(batch, n - start);
            xb.resize(m, data.dim());
            yb.resize(static_cast<std::size_t>(m));
            for (Eigen::Index i = 0; i < m; ++i) {
                const Eigen::Index src = order[static_cast<std::size_t>(start + i)];
                xb.row(i) = data.features.row(src);
                yb[static_cast<std::size_t>(i)] = data.labels[static_cast<std::size_t>(src)];
            }
            auto [loss, grad] = loss_and_gradient(arch, theta, xb, yb);
            loss_sum += loss * static_cast<double>(m);
            if (config.weight_decay > 0.0) grad += config.weight_decay * theta;
            velocity = config.momentum * velocity - config.learning_rate * grad;
            theta += velocity;
        }
        epoch_loss = loss_sum / static_cast<double>(n);
    }
    if (!theta.allFinite()) throw Error(ErrorCode::Domain, "training diverged");
    meta.final_loss = epoch_loss;
    return make_checkpoint(arch, std::move(theta), std::move(meta));
}

double mean_cross_entropy(const Eigen::MatrixXd& logits, const std::vector<int>& labels, double temperature) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        const Eigen::VectorXd z = logits.row(i).transpose() / temperature;
        const double m = z.maxCoeff();
        const double lse = m + std::log((z.array() - m).exp().sum());
        total += lse - z[labels[static_cast<std::size_t>(i)]];
    }
    return total / static_cast<double>(logits.rows());
}

double calibrate_temperature_from_logits(const Eigen::MatrixXd& logits, const std::vector<int>& labels) {
    if (logits.rows() == 0 || labels.size() != static_cast<std::size_t>(logits.rows())) {
        throw Error(ErrorCode::EmptyDataset, "temperature calibration needs a non-empty labeled validation set");
    }
    const auto objective = [&](double log_t) { return mean_cross_entropy(logits, labels, std::exp(log_t)); };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = std::log(0.25);
    double hi = std::log(16.0);
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = objective(c);
    double fd = objective(d);
    while (hi - lo > 1e-3) {
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = objective(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = objective(d);
        }
    }
    return std::exp(0.5 * (lo + hi));
}

double calibrate_temperature(const MlpArchitecture& arch, const ParamVector& theta, const LabeledData& validation) {
    if (validation.size() == 0 || !validation.has_labels()) {
        throw Error(ErrorCode::EmptyDataset, "temperature calibration needs a non-empty labeled validation set");
    }
    return calibrate_temperature_from_logits(logits_batch(arch, theta.values(), validation.features),
                                             validation.labels);
}

double accuracy(const Eigen::MatrixXd& probs, const std::vector<int>& labels) {
    if (labels.size() != static_cast<std::size_t>(probs.rows())) {
        throw Error(ErrorCode::MissingLabels, "accuracy needs one label per row");
    }
    if (labels.empty()) return 0.0;
    std::size_t correct = 0;
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
        if (row_argmax(probs.row(i).transpose()) == labels[static_cast<std::size_t>(i)]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(labels.size());
}

}  // namespace dawin
