#ifndef LITERALE_FUSION_HPP
#define LITERALE_FUSION_HPP

#include "literale/score.hpp"

namespace literale {

struct FusionConfig {
    FusionKind kind = FusionKind::Linear;
    std::size_t hidden = 0;  // Z for the MLP form; 0 means "same as H"

    std::size_t mlp_hidden(std::size_t h) const { return hidden ? hidden : h; }
};

/// Intermediate values of one fusion application, kept for the backward
/// pass.
struct FuseCache {
    Vec input;  // [e, l]
    Vec pre1;   // W^T [e,l]  (or W_1^T [e,l] for the MLP)
    Vec act1;   // h(pre1); the gate's z
    Vec pre2;   // MLP second-layer pre-activation
    Vec out;
};

// g_lin: W^T [e, l]
inline Vec fuse_linear(const Vec& e, const Vec& l, const Tensor& w) {
    return ops::affine(w, ops::concat(e, l));
}

// g_nonlin: h(W^T [e, l]) with h in {tanh, relu}
inline Vec fuse_nonlinear(const Vec& e, const Vec& l, const Tensor& w, bool use_tanh) {
    Vec u = ops::affine(w, ops::concat(e, l));
    return use_tanh ? ops::tanh_fwd(u) : ops::relu(u);
}

// g_MLP: h(W_2^T h(W_1^T [e, l])), h = relu
inline Vec fuse_mlp(const Vec& e, const Vec& l, const Tensor& w1, const Tensor& w2) {
    return ops::relu(ops::affine(w2, ops::relu(ops::affine(w1, ops::concat(e, l)))));
}

// g_gate: z + (1 - z) .* e with z = softmax(W^T [e, l])
inline Vec fuse_gate(const Vec& e, const Vec& l, const Tensor& w) {
    Vec z = ops::softmax(ops::affine(w, ops::concat(e, l)));
    Vec out(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) out[i] = z[i] + (1.0 - z[i]) * e[i];
    return out;
}

/// Unified forward; w2 is only consulted for the MLP form.
inline FuseCache fuse_forward(FusionKind kind, const Vec& e, const Vec& l,
                              const Tensor& w, const Tensor* w2 = nullptr) {
    FuseCache c;
    if (kind == FusionKind::None) {
        c.out = e;
        return c;
    }
    c.input = ops::concat(e, l);
    if (w.rows() != c.input.size())
        throw DimensionError("fusion: weight rows " + std::to_string(w.rows()) +
                             " vs input length " + std::to_string(c.input.size()));
    c.pre1 = ops::affine(w, c.input);
    switch (kind) {
        case FusionKind::Linear:
            c.out = c.pre1;
            break;
        case FusionKind::NonlinearTanh:
            c.out = ops::tanh_fwd(c.pre1);
            break;
        case FusionKind::NonlinearReLU:
            c.out = ops::relu(c.pre1);
            break;
        case FusionKind::MLP: {
            if (!w2) throw ConfigError("MLP fusion needs a second weight matrix");
            c.act1 = ops::relu(c.pre1);
            c.pre2 = ops::affine(*w2, c.act1);
            c.out = ops::relu(c.pre2);
            break;
        }
        case FusionKind::Gate: {
            if (c.pre1.size() != e.size())
                throw DimensionError("gate fusion: output dim must equal embedding dim");
            c.act1 = ops::softmax(c.pre1);  // z
            c.out.resize(e.size());
            for (std::size_t i = 0; i < e.size(); ++i)
                c.out[i] = c.act1[i] + (1.0 - c.act1[i]) * e[i];
            break;
        }
        case FusionKind::None:
            break;
    }
    return c;
}

/// Accumulates d(out)/d(e) into `de` and weight gradients into dw / dw2.
/// Literal vectors are data, not parameters; their gradient is dropped.
inline void fuse_backward(FusionKind kind, const FuseCache& c, const Vec& e,
                          const Tensor& w, const Tensor* w2, const Vec& dout,
                          Vec& de, Tensor& dw, Tensor* dw2 = nullptr) {
    if (kind == FusionKind::None) {
        for (std::size_t i = 0; i < dout.size(); ++i) de[i] += dout[i];
        return;
    }
    Vec dpre1(c.pre1.size(), 0.0);
    switch (kind) {
        case FusionKind::Linear:
            dpre1 = dout;
            break;
        case FusionKind::NonlinearTanh:
            ops::tanh_backward(c.out, dout, dpre1);
            break;
        case FusionKind::NonlinearReLU:
            ops::relu_backward(c.pre1, dout, dpre1);
            break;
        case FusionKind::MLP: {
            Vec dpre2(c.pre2.size(), 0.0);
            ops::relu_backward(c.pre2, dout, dpre2);
            Vec dact1(c.act1.size(), 0.0);
            ops::affine_backward(*w2, c.act1, dpre2, *dw2, dact1);
            ops::relu_backward(c.pre1, dact1, dpre1);
            break;
        }
        case FusionKind::Gate: {
            // out = z + (1 - z) .* e
            Vec dz(c.act1.size());
            for (std::size_t i = 0; i < dz.size(); ++i) {
                dz[i] = dout[i] * (1.0 - e[i]);
                de[i] += dout[i] * (1.0 - c.act1[i]);
            }
            ops::softmax_backward(c.act1, dz, dpre1);
            break;
        }
        case FusionKind::None:
            break;
    }
    Vec dinput(c.input.size(), 0.0);
    ops::affine_backward(w, c.input, dpre1, dw, dinput);
    for (std::size_t i = 0; i < e.size(); ++i) de[i] += dinput[i];
}

}  // namespace literale

#endif
