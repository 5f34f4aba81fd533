#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dawin {

enum class Activation { Tanh, Relu };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

// Feed-forward softmax classifier shape. The flat parameter layout is: per
// layer, the (fan_out x fan_in) weight matrix in row-major order followed by
// the bias vector; layers in forward order.
struct MlpArchitecture {
    std::size_t input_dim = 16;
    std::vector<std::size_t> hidden_widths{64};
    std::size_t class_count = 10;
    Activation activation = Activation::Tanh;

    // Throws Error(InvalidArgument) when C < 2, d < 1 or a hidden width is 0.
    void validate() const;

    // Layer widths including input and output: {d, h1, ..., C}.
    std::vector<std::size_t> widths() const;
    std::size_t parameter_count() const;
    // Pure function of the architecture, e.g. "mlp:16-64-10:tanh".
    std::string layout_id() const;

    bool operator==(const MlpArchitecture&) const = default;
};

}  // namespace dawin
