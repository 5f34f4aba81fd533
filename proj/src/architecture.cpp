#include "dawin/architecture.hpp"

#include "dawin/error.hpp"

namespace dawin {

std::string to_string(Activation a) {
    switch (a) {
        case Activation::Tanh: return "tanh";
        case Activation::Relu: return "relu";
    }
    return "tanh";
}

Activation activation_from_string(const std::string& name) {
    if (name == "tanh") return Activation::Tanh;
    if (name == "relu") return Activation::Relu;
    throw Error(ErrorCode::Format, "unknown activation '" + name + "'");
}

void MlpArchitecture::validate() const {
    if (input_dim < 1) throw Error(ErrorCode::InvalidArgument, "input_dim must be >= 1");
    if (class_count < 2) throw Error(ErrorCode::InvalidArgument, "class_count must be >= 2");
    for (std::size_t w : hidden_widths) {
        if (w == 0) throw Error(ErrorCode::InvalidArgument, "hidden width must be positive");
    }
}

std::vector<std::size_t> MlpArchitecture::widths() const {
    std::vector<std::size_t> w;
    w.reserve(hidden_widths.size() + 2);
    w.push_back(input_dim);
    w.insert(w.end(), hidden_widths.begin(), hidden_widths.end());
    w.push_back(class_count);
    return w;
}

std::size_t MlpArchitecture::parameter_count() const {
    const auto w = widths();
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < w.size(); ++l) n += w[l + 1] * w[l] + w[l + 1];
    return n;
}

std::string MlpArchitecture::layout_id() const {
    std::string id = "mlp:";
    const auto w = widths();
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) id += '-';
        id += std::to_string(w[i]);
    }
    return id + ":" + to_string(activation);
}

}  // namespace dawin
