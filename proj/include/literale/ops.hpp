#ifndef LITERALE_OPS_HPP
#define LITERALE_OPS_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "literale/tensor.hpp"

namespace literale {
namespace ops {

// ---- row lookup --------------------------------------------------------

inline Vec lookup_row(const Tensor& table, std::size_t row) {
    if (row >= table.rows())
        throw LookupError("lookup_row: row " + std::to_string(row) +
                          " out of range [0," + std::to_string(table.rows()) + ")");
    const std::size_t c = table.cols();
    return Vec(table.data.begin() + row * c, table.data.begin() + (row + 1) * c);
}

inline void lookup_row_backward(Tensor& table_grad, std::size_t row, const Vec& upstream) {
    const std::size_t c = table_grad.cols();
    for (std::size_t j = 0; j < c; ++j) table_grad.data[row * c + j] += upstream[j];
}

// ---- concat ------------------------------------------------------------

inline Vec concat(const Vec& a, const Vec& b) {
    Vec out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline void concat_backward(const Vec& upstream, std::size_t na, Vec& da, Vec& db) {
    for (std::size_t i = 0; i < na; ++i) da[i] += upstream[i];
    for (std::size_t i = na; i < upstream.size(); ++i) db[i - na] += upstream[i];
}

// ---- affine: y = W^T x, W is (in x out) --------------------------------

inline Vec affine(const Tensor& w, const Vec& x) {
    const std::size_t in = w.rows(), out = w.cols();
    if (x.size() != in)
        throw DimensionError("affine: input length " + std::to_string(x.size()) +
                             " vs weight rows " + std::to_string(in));
    Vec y(out, 0.0);
    for (std::size_t i = 0; i < in; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        const double* wrow = &w.data[i * out];
        for (std::size_t j = 0; j < out; ++j) y[j] += wrow[j] * xi;
    }
    return y;
}

inline void affine_backward(const Tensor& w, const Vec& x, const Vec& upstream,
                            Tensor& dw, Vec& dx) {
    const std::size_t in = w.rows(), out = w.cols();
    for (std::size_t i = 0; i < in; ++i) {
        const double* wrow = &w.data[i * out];
        double* dwrow = &dw.data[i * out];
        double acc = 0.0;
        for (std::size_t j = 0; j < out; ++j) {
            dwrow[j] += x[i] * upstream[j];
            acc += wrow[j] * upstream[j];
        }
        dx[i] += acc;
    }
}

// ---- elementwise nonlinearities ---------------------------------------

inline Vec relu(const Vec& x) {
    Vec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
    return y;
}

// subgradient at 0 is 0
inline void relu_backward(const Vec& x, const Vec& upstream, Vec& dx) {
    for (std::size_t i = 0; i < x.size(); ++i) dx[i] += x[i] > 0.0 ? upstream[i] : 0.0;
}

inline Vec tanh_fwd(const Vec& x) {
    Vec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::tanh(x[i]);
    return y;
}

inline void tanh_backward(const Vec& y, const Vec& upstream, Vec& dx) {
    for (std::size_t i = 0; i < y.size(); ++i) dx[i] += (1.0 - y[i] * y[i]) * upstream[i];
}

inline double sigmoid_scalar(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

inline Vec sigmoid(const Vec& x) {
    Vec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = sigmoid_scalar(x[i]);
    return y;
}

inline void sigmoid_backward(const Vec& y, const Vec& upstream, Vec& dx) {
    for (std::size_t i = 0; i < y.size(); ++i) dx[i] += y[i] * (1.0 - y[i]) * upstream[i];
}

inline Vec softmax(const Vec& x) {
    double m = x.empty() ? 0.0 : x[0];
    for (double v : x) m = std::max(m, v);
    Vec y(x.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = std::exp(x[i] - m);
        sum += y[i];
    }
    for (double& v : y) v /= sum;
    return y;
}

// full Jacobian-vector form: dx = y .* (upstream - <y, upstream>)
inline void softmax_backward(const Vec& y, const Vec& upstream, Vec& dx) {
    double dot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) dot += y[i] * upstream[i];
    for (std::size_t i = 0; i < y.size(); ++i) dx[i] += y[i] * (upstream[i] - dot);
}

// ---- elementwise product / reductions ---------------------------------

inline Vec elementwise_mul(const Vec& a, const Vec& b) {
    require_same_length(a, b, "elementwise_mul");
    Vec y(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) y[i] = a[i] * b[i];
    return y;
}

inline void elementwise_mul_backward(const Vec& a, const Vec& b, const Vec& upstream,
                                     Vec& da, Vec& db) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        da[i] += b[i] * upstream[i];
        db[i] += a[i] * upstream[i];
    }
}

inline double row_sum(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

inline void row_sum_backward(double upstream, Vec& dx) {
    for (double& v : dx) v += upstream;
}

inline double dot(const Vec& a, const Vec& b) {
    require_same_length(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// ---- dropout -----------------------------------------------------------

/// In train mode zeroes each entry with probability `rate` and scales
/// survivors by 1/(1-rate); in eval mode the identity. The per-entry
/// scale factors are returned so the backward pass can reuse them.
struct DropoutMask {
    Vec scale;  // empty means identity (eval mode or rate 0)

    Vec apply(const Vec& x) const {
        if (scale.empty()) return x;
        return elementwise_mul(x, scale);
    }
    void backward(const Vec& upstream, Vec& dx) const {
        if (scale.empty()) {
            for (std::size_t i = 0; i < upstream.size(); ++i) dx[i] += upstream[i];
        } else {
            for (std::size_t i = 0; i < upstream.size(); ++i) dx[i] += scale[i] * upstream[i];
        }
    }
};

inline DropoutMask make_dropout_mask(std::size_t n, double rate, bool train_mode,
                                     std::mt19937_64& rng) {
    if (rate < 0.0 || rate >= 1.0)
        throw ConfigError("dropout rate must be in [0,1)");
    DropoutMask m;
    if (!train_mode || rate == 0.0) return m;
    m.scale.assign(n, 0.0);
    const double keep = 1.0 - rate;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        m.scale[i] = unif(rng) < rate ? 0.0 : 1.0 / keep;
    return m;
}

// ---- 2-D valid convolution --------------------------------------------

/// filters: (F, fh, fw); input: (gh, gw); output: (F, gh-fh+1, gw-fw+1)
inline Tensor conv2d(const Tensor& filters, const Tensor& input) {
    if (filters.shape.size() != 3 || input.shape.size() != 2)
        throw DimensionError("conv2d: filters must be rank 3, input rank 2");
    const std::size_t nf = filters.shape[0], fh = filters.shape[1], fw = filters.shape[2];
    const std::size_t gh = input.shape[0], gw = input.shape[1];
    if (fh > gh || fw > gw)
        throw DimensionError("conv2d: filter larger than input grid");
    const std::size_t oh = gh - fh + 1, ow = gw - fw + 1;
    Tensor out({nf, oh, ow});
    for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t oy = 0; oy < oh; ++oy)
            for (std::size_t ox = 0; ox < ow; ++ox) {
                double acc = 0.0;
                for (std::size_t ky = 0; ky < fh; ++ky)
                    for (std::size_t kx = 0; kx < fw; ++kx)
                        acc += filters.data[(f * fh + ky) * fw + kx] *
                               input.data[(oy + ky) * gw + ox + kx];
                out.data[(f * oh + oy) * ow + ox] = acc;
            }
    return out;
}

inline void conv2d_backward(const Tensor& filters, const Tensor& input,
                            const Tensor& upstream, Tensor& dfilters, Tensor& dinput) {
    const std::size_t nf = filters.shape[0], fh = filters.shape[1], fw = filters.shape[2];
    const std::size_t gh = input.shape[0], gw = input.shape[1];
    const std::size_t oh = gh - fh + 1, ow = gw - fw + 1;
    for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t oy = 0; oy < oh; ++oy)
            for (std::size_t ox = 0; ox < ow; ++ox) {
                const double up = upstream.data[(f * oh + oy) * ow + ox];
                if (up == 0.0) continue;
                for (std::size_t ky = 0; ky < fh; ++ky)
                    for (std::size_t kx = 0; kx < fw; ++kx) {
                        dfilters.data[(f * fh + ky) * fw + kx] +=
                            up * input.data[(oy + ky) * gw + ox + kx];
                        dinput.data[(oy + ky) * gw + ox + kx] +=
                            up * filters.data[(f * fh + ky) * fw + kx];
                    }
            }
}

}  // namespace ops
}  // namespace literale

#endif
