#include "navsim/qnet.hpp"

#include <cmath>

#include "navsim/errors.hpp"

namespace navsim {

QNetwork::QNetwork(std::vector<int> widths) : widths_(std::move(widths)) {
    if (widths_.size() < 2) throw DimensionMismatchError("network needs >= 2 layers");
    for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
        Layer layer;
        layer.in = widths_[l];
        layer.out = widths_[l + 1];
        layer.weights.assign(static_cast<std::size_t>(layer.in) * layer.out, 0.0);
        layer.biases.assign(static_cast<std::size_t>(layer.out), 0.0);
        layers_.push_back(std::move(layer));
    }
}

void QNetwork::init_weights(Rng& rng) {
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        Layer& layer = layers_[l];
        double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
        // Observations are fed unnormalized and reach tens of ship lengths;
        // the input layer is damped so the first tanh starts unsaturated.
        if (l == 0) bound *= 0.1;
        for (double& w : layer.weights) w = rng.uniform(-bound, bound);
        for (double& b : layer.biases) b = rng.uniform(-bound, bound);
    }
}

namespace {

void affine(const QNetwork::Layer& layer, std::span<const double> in,
            std::vector<double>& out) {
    out.assign(static_cast<std::size_t>(layer.out), 0.0);
    for (int o = 0; o < layer.out; ++o) {
        double acc = layer.biases[static_cast<std::size_t>(o)];
        const double* row = layer.weights.data() + static_cast<std::size_t>(o) * layer.in;
        for (int i = 0; i < layer.in; ++i) acc += row[i] * in[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(o)] = acc;
    }
}

}  // namespace

std::vector<double> QNetwork::forward(std::span<const double> input) const {
    return forward_trace(*this, input).output;
}

ForwardTrace forward_trace(const QNetwork& net, std::span<const double> input) {
    if (static_cast<int>(input.size()) != net.input_dim()) {
        throw DimensionMismatchError("observation does not match network input width");
    }
    ForwardTrace trace;
    trace.activations.emplace_back(input.begin(), input.end());

    std::vector<double> z;
    const auto& layers = net.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        affine(layers[l], trace.activations.back(), z);
        if (l + 1 < layers.size()) {
            for (double& x : z) x = std::tanh(x);
            trace.activations.push_back(z);
        } else {
            trace.output = z;  // linear output layer
        }
    }
    return trace;
}

void backward(const QNetwork& net, const ForwardTrace& trace,
              std::span<const double> output_grad, NetGradient& grad) {
    const auto& layers = net.layers();
    std::vector<double> delta(output_grad.begin(), output_grad.end());

    for (std::size_t l = layers.size(); l-- > 0;) {
        const QNetwork::Layer& layer = layers[l];
        QNetwork::Layer& g = grad.layers[l];
        const std::vector<double>& a_in = trace.activations[l];

        for (int o = 0; o < layer.out; ++o) {
            const double d = delta[static_cast<std::size_t>(o)];
            g.biases[static_cast<std::size_t>(o)] += d;
            double* grow = g.weights.data() + static_cast<std::size_t>(o) * layer.in;
            for (int i = 0; i < layer.in; ++i) {
                grow[i] += d * a_in[static_cast<std::size_t>(i)];
            }
        }
        if (l == 0) break;

        // Propagate through the affine map, then the tanh of the layer below.
        std::vector<double> prev(static_cast<std::size_t>(layer.in), 0.0);
        for (int o = 0; o < layer.out; ++o) {
            const double d = delta[static_cast<std::size_t>(o)];
            const double* row = layer.weights.data() + static_cast<std::size_t>(o) * layer.in;
            for (int i = 0; i < layer.in; ++i) {
                prev[static_cast<std::size_t>(i)] += d * row[i];
            }
        }
        for (int i = 0; i < layer.in; ++i) {
            const double a = a_in[static_cast<std::size_t>(i)];
            prev[static_cast<std::size_t>(i)] *= 1.0 - a * a;  // tanh'
        }
        delta = std::move(prev);
    }
}

std::size_t QNetwork::parameter_count() const {
    std::size_t n = 0;
    for (const Layer& l : layers_) n += l.weights.size() + l.biases.size();
    return n;
}

std::vector<double> QNetwork::flatten() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for (const Layer& l : layers_) {
        flat.insert(flat.end(), l.weights.begin(), l.weights.end());
        flat.insert(flat.end(), l.biases.begin(), l.biases.end());
    }
    return flat;
}

void QNetwork::unflatten(std::span<const double> flat) {
    if (flat.size() != parameter_count()) {
        throw ShapeMismatchError("flat parameter vector has the wrong length");
    }
    std::size_t pos = 0;
    for (Layer& l : layers_) {
        for (double& w : l.weights) w = flat[pos++];
        for (double& b : l.biases) b = flat[pos++];
    }
}

NetGradient NetGradient::zeros_like(const QNetwork& net) {
    NetGradient g;
    for (const QNetwork::Layer& l : net.layers()) {
        QNetwork::Layer z;
        z.in = l.in;
        z.out = l.out;
        z.weights.assign(l.weights.size(), 0.0);
        z.biases.assign(l.biases.size(), 0.0);
        g.layers.push_back(std::move(z));
    }
    return g;
}

void NetGradient::accumulate(const NetGradient& other, double scale) {
    for (std::size_t l = 0; l < layers.size(); ++l) {
        for (std::size_t i = 0; i < layers[l].weights.size(); ++i) {
            layers[l].weights[i] += scale * other.layers[l].weights[i];
        }
        for (std::size_t i = 0; i < layers[l].biases.size(); ++i) {
            layers[l].biases[i] += scale * other.layers[l].biases[i];
        }
    }
}

void NetGradient::scale(double s) {
    for (auto& layer : layers) {
        for (double& w : layer.weights) w *= s;
        for (double& b : layer.biases) b *= s;
    }
}

Adam::Adam(const QNetwork& net, double beta1, double beta2, double eps)
    : beta1_(beta1), beta2_(beta2), eps_(eps) {
    const NetGradient z = NetGradient::zeros_like(net);
    m_ = z.layers;
    v_ = z.layers;
}

void Adam::step(QNetwork& net, const NetGradient& grad, double lr) {
    if (m_.size() != net.layers().size()) {
        throw ShapeMismatchError("optimizer state does not match network");
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));

    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        auto update = [&](std::vector<double>& param, const std::vector<double>& g,
                          std::vector<double>& m, std::vector<double>& v) {
            for (std::size_t i = 0; i < param.size(); ++i) {
                m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
                v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
                const double mhat = m[i] / bc1;
                const double vhat = v[i] / bc2;
                param[i] -= lr * mhat / (std::sqrt(vhat) + eps_);
            }
        };
        update(net.layers()[l].weights, grad.layers[l].weights, m_[l].weights, v_[l].weights);
        update(net.layers()[l].biases, grad.layers[l].biases, m_[l].biases, v_[l].biases);
    }
}

}  // namespace navsim
