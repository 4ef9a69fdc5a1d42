#pragma once

#include <span>
#include <vector>

#include "navsim/rng.hpp"

namespace navsim {

// Fully connected Q-network: affine -> tanh -> affine -> tanh -> affine.
// Weights are row-major (out x in). Small enough that plain loops beat any
// library dependency here.
class QNetwork {
public:
    struct Layer {
        int in = 0;
        int out = 0;
        std::vector<double> weights;  // out*in, row-major
        std::vector<double> biases;   // out
    };

    QNetwork() = default;
    explicit QNetwork(std::vector<int> widths);

    // Scaled uniform fan-in initialization, U(-1/sqrt(in), +1/sqrt(in)).
    void init_weights(Rng& rng);

    // Q-values for one observation. Throws DimensionMismatchError if the
    // input size differs from the first layer width.
    std::vector<double> forward(std::span<const double> input) const;

    const std::vector<int>& widths() const { return widths_; }
    int input_dim() const { return widths_.front(); }
    int output_dim() const { return widths_.back(); }
    std::vector<Layer>& layers() { return layers_; }
    const std::vector<Layer>& layers() const { return layers_; }

    std::size_t parameter_count() const;
    // Flat parameter views in layer order, weights before biases. Used by the
    // checkpoint writer and the gradient tests.
    std::vector<double> flatten() const;
    void unflatten(std::span<const double> flat);

private:
    std::vector<int> widths_;
    std::vector<Layer> layers_;
};

// Gradient of a scalar loss with respect to every parameter, same layout as
// the network layers.
struct NetGradient {
    std::vector<QNetwork::Layer> layers;

    static NetGradient zeros_like(const QNetwork& net);
    void accumulate(const NetGradient& other, double scale = 1.0);
    void scale(double s);
};

// Forward pass that keeps the per-layer activations needed for backprop.
struct ForwardTrace {
    std::vector<std::vector<double>> activations;  // input + post-tanh per hidden layer
    std::vector<double> output;
};

ForwardTrace forward_trace(const QNetwork& net, std::span<const double> input);

// Backpropagate d(loss)/d(output) through the trace, accumulating into grad.
void backward(const QNetwork& net, const ForwardTrace& trace,
              std::span<const double> output_grad, NetGradient& grad);

// Adam optimizer state for one network.
class Adam {
public:
    Adam() = default;
    explicit Adam(const QNetwork& net, double beta1 = 0.9, double beta2 = 0.999,
                  double eps = 1e-8);

    // One update with the given learning rate; gradient layout must match.
    void step(QNetwork& net, const NetGradient& grad, double lr);

    long long steps_taken() const { return t_; }

private:
    double beta1_ = 0.9;
    double beta2_ = 0.999;
    double eps_ = 1e-8;
    long long t_ = 0;
    std::vector<QNetwork::Layer> m_;  // first moments, same layout as the net
    std::vector<QNetwork::Layer> v_;  // second moments
};

}  // namespace navsim
