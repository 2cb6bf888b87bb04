#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gcmt/errors.hpp"
#include "gcmt/tensor.hpp"

namespace gcmt {

constexpr double kCrossEntropyClamp = 1e-12;

/// Geometry of a grouped 1-D convolution. Channels are split into `groups`
/// independent slices; padding is symmetric zero-padding.
struct ConvSpec {
    std::size_t in_channels = 1;
    std::size_t out_channels = 1;
    std::size_t kernel = 1;
    std::size_t stride = 1;
    std::size_t padding = 0;
    std::size_t groups = 1;

    void validate() const {
        if (in_channels == 0) throw ValidationError("ConvSpec: in_channels must be >= 1");
        if (out_channels == 0) throw ValidationError("ConvSpec: out_channels must be >= 1");
        if (kernel == 0) throw ValidationError("ConvSpec: kernel must be >= 1");
        if (stride == 0) throw ValidationError("ConvSpec: stride must be >= 1");
        if (groups == 0) throw ValidationError("ConvSpec: groups must be >= 1");
        if (in_channels % groups != 0)
            throw ValidationError("ConvSpec: in_channels (" + std::to_string(in_channels) +
                                  ") not divisible by groups (" + std::to_string(groups) + ")");
        if (out_channels % groups != 0)
            throw ValidationError("ConvSpec: out_channels (" + std::to_string(out_channels) +
                                  ") not divisible by groups (" + std::to_string(groups) + ")");
    }

    std::size_t group_in() const { return in_channels / groups; }
    std::size_t group_out() const { return out_channels / groups; }

    /// floor((T + 2*padding - kernel)/stride) + 1, rejected when < 1.
    std::size_t out_len(std::size_t t_in) const {
        if (t_in + 2 * padding < kernel)
            throw ValidationError("ConvSpec: input length " + std::to_string(t_in) +
                                  " too short for kernel " + std::to_string(kernel) +
                                  " with padding " + std::to_string(padding));
        return (t_in + 2 * padding - kernel) / stride + 1;
    }

    /// Trainable scalar count: (C_in/G)*K*C_out + C_out.
    std::size_t param_count() const { return group_in() * kernel * out_channels + out_channels; }
};

inline void check_conv_args(const Tensor& input, const Tensor& weights, const Tensor& bias,
                            const ConvSpec& spec) {
    spec.validate();
    if (input.ndim() != 2)
        throw ValidationError("conv1d_grouped: input must be 2-d [T x C_in], got " + input.shape_str());
    if (input.dim(1) != spec.in_channels)
        throw ValidationError("conv1d_grouped: input channels (" + std::to_string(input.dim(1)) +
                              ") != spec.in_channels (" + std::to_string(spec.in_channels) + ")");
    require_shape(weights, {spec.out_channels, spec.group_in(), spec.kernel},
                  "conv1d_grouped: weights");
    require_shape(bias, {spec.out_channels}, "conv1d_grouped: bias");
}

/// Forward-pass weight layout: wt[c_in][k][oc_within_group], so the inner
/// loop over a group's output channels is contiguous.
inline Tensor transpose_conv_weights(const Tensor& weights, const ConvSpec& spec) {
    const std::size_t cg = spec.group_in(), ow = spec.group_out(), K = spec.kernel;
    Tensor wt({spec.in_channels, K, ow});
    for (std::size_t g = 0; g < spec.groups; ++g)
        for (std::size_t oc = 0; oc < ow; ++oc)
            for (std::size_t ic = 0; ic < cg; ++ic)
                for (std::size_t k = 0; k < K; ++k)
                    wt.at(g * cg + ic, k, oc) = weights.at(g * ow + oc, ic, k);
    return wt;
}

/// Kernel with caller-supplied transposed weights (see transpose_conv_weights).
/// Each output element accumulates its terms in ascending (ic, k) order on top
/// of the bias, matching the flat layout of the weight tensor.
inline void conv1d_grouped_forward_pre(const Tensor& input, const Tensor& wt, const Tensor& bias,
                                       const ConvSpec& spec, Tensor& out) {
    const std::size_t t_in = input.dim(0);
    const std::size_t t_out = spec.out_len(t_in);
    const std::size_t cin = spec.in_channels, cout = spec.out_channels;
    const std::size_t cg = spec.group_in(), ow = spec.group_out(), K = spec.kernel;
    const std::size_t stride = spec.stride;
    const long pad = static_cast<long>(spec.padding);

    out = Tensor({t_out, cout});
    double* __restrict__ y = out.data();
    const double* __restrict__ x = input.data();
    const double* __restrict__ b = bias.data();
    const double* __restrict__ w = wt.data();

    for (std::size_t t = 0; t < t_out; ++t)
        for (std::size_t c = 0; c < cout; ++c) y[t * cout + c] = b[c];

    for (std::size_t g = 0; g < spec.groups; ++g) {
        const std::size_t oc0 = g * ow;
        for (std::size_t ic = 0; ic < cg; ++ic) {
            const std::size_t c_in = g * cg + ic;
            for (std::size_t k = 0; k < K; ++k) {
                const double* __restrict__ wrow = w + (c_in * K + k) * ow;
                for (std::size_t t = 0; t < t_out; ++t) {
                    const long tin = static_cast<long>(t * stride + k) - pad;
                    if (tin < 0 || tin >= static_cast<long>(t_in)) continue;
                    const double xv = x[static_cast<std::size_t>(tin) * cin + c_in];
                    double* __restrict__ yrow = y + t * cout + oc0;
                    for (std::size_t oc = 0; oc < ow; ++oc) yrow[oc] += xv * wrow[oc];
                }
            }
        }
    }
}

/// Grouped 1-D convolution over a [T x C_in] window. Output channel c in
/// group g sees only group g's slice of the input channels.
inline Tensor conv1d_grouped(const Tensor& input, const Tensor& weights, const Tensor& bias,
                             const ConvSpec& spec) {
    check_conv_args(input, weights, bias, spec);
    Tensor out;
    conv1d_grouped_forward_pre(input, transpose_conv_weights(weights, spec), bias, spec, out);
    return out;
}

struct ConvGrads {
    Tensor input;
    Tensor weights;
    Tensor bias;
};

/// Gradients w.r.t. input, weights and bias given upstream grad_out
/// [T_out x C_out]. Weight/bias gradients accumulate over output positions in
/// ascending order.
inline ConvGrads conv1d_grouped_backward(const Tensor& input, const Tensor& weights,
                                         const ConvSpec& spec, const Tensor& grad_out) {
    check_conv_args(input, weights, Tensor({spec.out_channels}), spec);
    const std::size_t t_in = input.dim(0);
    const std::size_t t_out = spec.out_len(t_in);
    require_shape(grad_out, {t_out, spec.out_channels}, "conv1d_grouped_backward: grad_out");

    const std::size_t cin = spec.in_channels, cout = spec.out_channels;
    const std::size_t cg = spec.group_in(), ow = spec.group_out(), K = spec.kernel;
    const std::size_t stride = spec.stride;
    const long pad = static_cast<long>(spec.padding);

    ConvGrads grads;
    grads.input = Tensor({t_in, cin});
    grads.weights = Tensor(weights.shape());
    grads.bias = Tensor({cout});

    const double* __restrict__ x = input.data();
    const double* __restrict__ w = weights.data();
    const double* __restrict__ go = grad_out.data();
    double* __restrict__ gx = grads.input.data();
    double* __restrict__ gw = grads.weights.data();
    double* __restrict__ gb = grads.bias.data();

    for (std::size_t t = 0; t < t_out; ++t) {
        const double* __restrict__ grow = go + t * cout;
        for (std::size_t c = 0; c < cout; ++c) gb[c] += grow[c];
    }

    for (std::size_t g = 0; g < spec.groups; ++g) {
        for (std::size_t ocg = 0; ocg < ow; ++ocg) {
            const std::size_t oc = g * ow + ocg;
            const double* __restrict__ wrow = w + oc * cg * K;
            double* __restrict__ gwrow = gw + oc * cg * K;
            for (std::size_t t = 0; t < t_out; ++t) {
                const double gov = go[t * cout + oc];
                if (gov == 0.0) continue;
                const long base = static_cast<long>(t * stride) - pad;
                if (K == 1) {
                    if (base < 0 || base >= static_cast<long>(t_in)) continue;
                    const double* __restrict__ xrow = x + static_cast<std::size_t>(base) * cin + g * cg;
                    double* __restrict__ gxrow = gx + static_cast<std::size_t>(base) * cin + g * cg;
                    for (std::size_t ic = 0; ic < cg; ++ic) {
                        gwrow[ic] += gov * xrow[ic];
                        gxrow[ic] += gov * wrow[ic];
                    }
                } else {
                    for (std::size_t k = 0; k < K; ++k) {
                        const long tin = base + static_cast<long>(k);
                        if (tin < 0 || tin >= static_cast<long>(t_in)) continue;
                        const double* __restrict__ xrow = x + static_cast<std::size_t>(tin) * cin + g * cg;
                        double* __restrict__ gxrow = gx + static_cast<std::size_t>(tin) * cin + g * cg;
                        for (std::size_t ic = 0; ic < cg; ++ic) {
                            gwrow[ic * K + k] += gov * xrow[ic];
                            gxrow[ic] += gov * wrow[ic * K + k];
                        }
                    }
                }
            }
        }
    }
    return grads;
}

inline void check_dense_args(const Tensor& x, const Tensor& W, const Tensor& b) {
    if (x.ndim() != 1) throw ValidationError("dense: x must be 1-d, got " + x.shape_str());
    if (W.ndim() != 2) throw ValidationError("dense: W must be 2-d, got " + W.shape_str());
    if (W.dim(1) != x.dim(0))
        throw ValidationError("dense: W columns (" + std::to_string(W.dim(1)) +
                              ") != x length (" + std::to_string(x.dim(0)) + ")");
    require_shape(b, {W.dim(0)}, "dense: b");
}

/// y = W*x + b for a single feature vector.
inline Tensor dense(const Tensor& x, const Tensor& W, const Tensor& b) {
    check_dense_args(x, W, b);
    const std::size_t d_out = W.dim(0), d_in = W.dim(1);
    Tensor y({d_out});
    for (std::size_t o = 0; o < d_out; ++o) {
        const double* __restrict__ wrow = W.row(o);
        const double* __restrict__ xv = x.data();
        double acc = 0.0;
        for (std::size_t i = 0; i < d_in; ++i) acc += wrow[i] * xv[i];
        y[o] = acc + b[o];
    }
    return y;
}

struct DenseGrads {
    Tensor x;
    Tensor W;
    Tensor b;
};

inline DenseGrads dense_backward(const Tensor& x, const Tensor& W, const Tensor& grad_out) {
    check_dense_args(x, W, Tensor({W.dim(0)}));
    require_shape(grad_out, {W.dim(0)}, "dense_backward: grad_out");
    const std::size_t d_out = W.dim(0), d_in = W.dim(1);
    DenseGrads g;
    g.x = Tensor({d_in});
    g.W = Tensor({d_out, d_in});
    g.b = grad_out;
    for (std::size_t o = 0; o < d_out; ++o) {
        const double gov = grad_out[o];
        const double* __restrict__ wrow = W.row(o);
        const double* __restrict__ xv = x.data();
        double* __restrict__ gwrow = g.W.row(o);
        double* __restrict__ gx = g.x.data();
        for (std::size_t i = 0; i < d_in; ++i) {
            gwrow[i] = gov * xv[i];
            gx[i] += gov * wrow[i];
        }
    }
    return g;
}

/// Elementwise ReLU; the subgradient at exactly 0 is taken as 0.
inline Tensor relu(const Tensor& x) {
    Tensor y(x.shape());
    for (std::size_t i = 0; i < x.numel(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
    return y;
}

inline Tensor relu_backward(const Tensor& x, const Tensor& grad_out) {
    if (!x.same_shape(grad_out))
        throw ValidationError("relu_backward: x " + x.shape_str() + " vs grad_out " +
                              grad_out.shape_str());
    Tensor g(x.shape());
    for (std::size_t i = 0; i < x.numel(); ++i) g[i] = x[i] > 0.0 ? grad_out[i] : 0.0;
    return g;
}

/// Per-channel mean over the time axis: [T' x C] -> [C].
inline Tensor global_avg_pool(const Tensor& x) {
    if (x.ndim() != 2) throw ValidationError("global_avg_pool: expected 2-d [T x C], got " + x.shape_str());
    const std::size_t T = x.dim(0), C = x.dim(1);
    Tensor y({C});
    for (std::size_t t = 0; t < T; ++t) {
        const double* __restrict__ xrow = x.row(t);
        double* __restrict__ yv = y.data();
        for (std::size_t c = 0; c < C; ++c) yv[c] += xrow[c];
    }
    const double inv = 1.0 / static_cast<double>(T);
    for (std::size_t c = 0; c < C; ++c) y[c] *= inv;
    return y;
}

/// Distributes grad/T' uniformly over the pooled rows.
inline Tensor global_avg_pool_backward(std::size_t t_rows, const Tensor& grad_out) {
    if (t_rows == 0) throw ValidationError("global_avg_pool_backward: empty time axis");
    if (grad_out.ndim() != 1)
        throw ValidationError("global_avg_pool_backward: grad_out must be 1-d, got " +
                              grad_out.shape_str());
    const std::size_t C = grad_out.dim(0);
    const double inv = 1.0 / static_cast<double>(t_rows);
    Tensor g({t_rows, C});
    for (std::size_t t = 0; t < t_rows; ++t)
        for (std::size_t c = 0; c < C; ++c) g.at(t, c) = grad_out[c] * inv;
    return g;
}

/// Numerically stable softmax (max-subtracted).
inline Tensor softmax(const Tensor& z) {
    if (z.ndim() != 1) throw ValidationError("softmax: expected 1-d logits, got " + z.shape_str());
    const std::size_t K = z.dim(0);
    double zmax = z[0];
    for (std::size_t i = 1; i < K; ++i) zmax = std::max(zmax, z[i]);
    Tensor p({K});
    double sum = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
        p[i] = std::exp(z[i] - zmax);
        sum += p[i];
    }
    for (std::size_t i = 0; i < K; ++i) p[i] /= sum;
    return p;
}

/// -log(max(probs[label], clamp)); `probs` must already be a distribution.
inline double cross_entropy(const Tensor& probs, std::size_t label) {
    if (probs.ndim() != 1)
        throw ValidationError("cross_entropy: expected 1-d probabilities, got " + probs.shape_str());
    if (label >= probs.dim(0))
        throw ValidationError("cross_entropy: label " + std::to_string(label) +
                              " out of range for K=" + std::to_string(probs.dim(0)));
    return -std::log(std::max(probs[label], kCrossEntropyClamp));
}

struct SoftmaxCrossEntropy {
    Tensor probs;
    double loss = 0.0;
};

/// Fused softmax + cross-entropy on raw logits; the training path.
inline SoftmaxCrossEntropy softmax_cross_entropy(const Tensor& logits, std::size_t label) {
    SoftmaxCrossEntropy r;
    r.probs = softmax(logits);
    r.loss = cross_entropy(r.probs, label);
    return r;
}

/// Gradient w.r.t. the pre-softmax logits: probs - onehot(label).
inline Tensor softmax_cross_entropy_backward(const Tensor& probs, std::size_t label) {
    if (label >= probs.dim(0))
        throw ValidationError("softmax_cross_entropy_backward: label out of range");
    Tensor g = probs;
    g[label] -= 1.0;
    return g;
}

/// Mean of squared differences.
inline double mse(const Tensor& pred, const Tensor& target) {
    if (!pred.same_shape(target))
        throw ValidationError("mse: pred " + pred.shape_str() + " vs target " + target.shape_str());
    const std::size_t n = pred.numel();
    if (n == 0) throw ValidationError("mse: empty input");
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = pred[i] - target[i];
        acc += d * d;
    }
    return acc / static_cast<double>(n);
}

/// d(mse)/d(pred) = 2*(pred - target)/n.
inline Tensor mse_backward(const Tensor& pred, const Tensor& target) {
    if (!pred.same_shape(target))
        throw ValidationError("mse_backward: pred " + pred.shape_str() + " vs target " +
                              target.shape_str());
    const double inv = 2.0 / static_cast<double>(pred.numel());
    Tensor g(pred.shape());
    for (std::size_t i = 0; i < pred.numel(); ++i) g[i] = inv * (pred[i] - target[i]);
    return g;
}

} // namespace gcmt
