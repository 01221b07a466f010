#ifndef LITERALE_SCORE_HPP
#define LITERALE_SCORE_HPP

#include <random>
#include <string>

#include "literale/ops.hpp"

namespace literale {

enum class ModelKind { DistMult, ComplEx, ConvE };
enum class FusionKind { None, Linear, NonlinearTanh, NonlinearReLU, MLP, Gate };

inline std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::DistMult: return "distmult";
        case ModelKind::ComplEx: return "complex";
        case ModelKind::ConvE: return "conve";
    }
    return "?";
}

inline std::string to_string(FusionKind k) {
    switch (k) {
        case FusionKind::None: return "none";
        case FusionKind::Linear: return "linear";
        case FusionKind::NonlinearTanh: return "tanh";
        case FusionKind::NonlinearReLU: return "relu";
        case FusionKind::MLP: return "mlp";
        case FusionKind::Gate: return "gate";
    }
    return "?";
}

inline ModelKind model_kind_from_string(const std::string& s) {
    if (s == "distmult") return ModelKind::DistMult;
    if (s == "complex") return ModelKind::ComplEx;
    if (s == "conve") return ModelKind::ConvE;
    throw ConfigError("unknown model '" + s + "' (expected distmult|complex|conve)");
}

inline FusionKind fusion_kind_from_string(const std::string& s) {
    if (s == "none") return FusionKind::None;
    if (s == "linear") return FusionKind::Linear;
    if (s == "tanh") return FusionKind::NonlinearTanh;
    if (s == "relu") return FusionKind::NonlinearReLU;
    if (s == "mlp") return FusionKind::MLP;
    if (s == "gate") return FusionKind::Gate;
    throw ConfigError("unknown fusion '" + s + "' (expected none|linear|tanh|relu|mlp|gate)");
}

struct ModelConfig {
    ModelKind kind = ModelKind::DistMult;
    std::size_t dim = 100;  // H

    // ConvE only. Each of e_i and r_k is reshaped to (dim/reshape_width,
    // reshape_width) and the two are stacked vertically.
    std::size_t n_filters = 32;
    std::size_t filter_h = 3;
    std::size_t filter_w = 3;
    std::size_t reshape_width = 10;
    double dropout_feature_map = 0.2;
    double dropout_projection = 0.3;

    double dropout_embedding = 0.2;

    void validate() const {
        if (dim == 0) throw ConfigError("embedding dim must be positive");
        if (kind != ModelKind::ConvE) return;
        if (reshape_width == 0 || dim % reshape_width != 0)
            throw ConfigError("ConvE: dim " + std::to_string(dim) +
                              " not divisible by reshape width " +
                              std::to_string(reshape_width));
        if (grid_h() < filter_h || reshape_width < filter_w)
            throw ConfigError("ConvE: filter larger than the stacked embedding grid");
        if (n_filters == 0) throw ConfigError("ConvE: need at least one filter");
    }

    std::size_t grid_h() const { return 2 * (dim / reshape_width); }
    std::size_t conv_out_h() const { return grid_h() - filter_h + 1; }
    std::size_t conv_out_w() const { return reshape_width - filter_w + 1; }
    std::size_t conv_flat() const { return n_filters * conv_out_h() * conv_out_w(); }
    // C of the complexity account: conv filters plus the projection matrix
    std::size_t conv_param_count() const {
        return n_filters * filter_h * filter_w + conv_flat() * dim;
    }
};

// ---- DistMult ----------------------------------------------------------

inline double score_distmult(const Vec& ei, const Vec& ej, const Vec& rk) {
    require_same_length(ei, ej, "score_distmult");
    require_same_length(ei, rk, "score_distmult");
    double s = 0.0;
    for (std::size_t h = 0; h < ei.size(); ++h) s += ei[h] * ej[h] * rk[h];
    return s;
}

inline void score_distmult_backward(const Vec& ei, const Vec& ej, const Vec& rk,
                                    double upstream, Vec& dei, Vec& dej, Vec& drk) {
    for (std::size_t h = 0; h < ei.size(); ++h) {
        dei[h] += upstream * ej[h] * rk[h];
        dej[h] += upstream * ei[h] * rk[h];
        drk[h] += upstream * ei[h] * ej[h];
    }
}

// ---- ComplEx -----------------------------------------------------------

inline double score_complex(const Vec& re_i, const Vec& im_i, const Vec& re_j,
                            const Vec& im_j, const Vec& re_r, const Vec& im_r) {
    return score_distmult(re_i, re_j, re_r) + score_distmult(im_i, im_j, re_r) +
           score_distmult(re_i, im_j, im_r) - score_distmult(im_i, re_j, im_r);
}

inline void score_complex_backward(const Vec& re_i, const Vec& im_i, const Vec& re_j,
                                   const Vec& im_j, const Vec& re_r, const Vec& im_r,
                                   double up, Vec& dre_i, Vec& dim_i, Vec& dre_j,
                                   Vec& dim_j, Vec& dre_r, Vec& dim_r) {
    for (std::size_t h = 0; h < re_i.size(); ++h) {
        dre_i[h] += up * (re_j[h] * re_r[h] + im_j[h] * im_r[h]);
        dim_i[h] += up * (im_j[h] * re_r[h] - re_j[h] * im_r[h]);
        dre_j[h] += up * (re_i[h] * re_r[h] - im_i[h] * im_r[h]);
        dim_j[h] += up * (im_i[h] * re_r[h] + re_i[h] * im_r[h]);
        dre_r[h] += up * (re_i[h] * re_j[h] + im_i[h] * im_j[h]);
        dim_r[h] += up * (re_i[h] * im_j[h] - im_i[h] * re_j[h]);
    }
}

// ---- ConvE hidden pipeline --------------------------------------------
// v = h(W^T vec(h([e_i; r_k] * omega))), score = <v, e_j>.

struct ConvECache {
    Tensor grid;       // stacked (grid_h x reshape_width) input
    Tensor conv_pre;   // convolution output before the nonlinearity
    Vec flat_relu;     // relu(conv) flattened
    ops::DropoutMask fm_mask;
    Vec flat_dropped;
    Vec proj_pre;      // projection output before dropout/nonlinearity
    ops::DropoutMask proj_mask;
    Vec proj_dropped;
    Vec hidden;        // final H-vector v
};

inline ConvECache conve_hidden(const ModelConfig& cfg, const Tensor& filters,
                               const Tensor& proj, const Vec& ei, const Vec& rk,
                               bool train_mode, std::mt19937_64& rng) {
    cfg.validate();
    if (ei.size() != cfg.dim || rk.size() != cfg.dim)
        throw DimensionError("conve_hidden: embedding length does not match config dim");
    ConvECache c;
    c.grid = Tensor({cfg.grid_h(), cfg.reshape_width}, ops::concat(ei, rk));
    c.conv_pre = ops::conv2d(filters, c.grid);
    c.flat_relu = ops::relu(c.conv_pre.data);
    c.fm_mask = ops::make_dropout_mask(c.flat_relu.size(), cfg.dropout_feature_map,
                                       train_mode, rng);
    c.flat_dropped = c.fm_mask.apply(c.flat_relu);
    c.proj_pre = ops::affine(proj, c.flat_dropped);
    c.proj_mask = ops::make_dropout_mask(c.proj_pre.size(), cfg.dropout_projection,
                                         train_mode, rng);
    c.proj_dropped = c.proj_mask.apply(c.proj_pre);
    c.hidden = ops::relu(c.proj_dropped);
    return c;
}

inline void conve_hidden_backward(const ModelConfig& cfg, const Tensor& filters,
                                  const Tensor& proj, const ConvECache& c,
                                  const Vec& dhidden, Tensor& dfilters, Tensor& dproj,
                                  Vec& dei, Vec& drk) {
    Vec d_proj_dropped(c.proj_dropped.size(), 0.0);
    ops::relu_backward(c.proj_dropped, dhidden, d_proj_dropped);
    Vec d_proj_pre(c.proj_pre.size(), 0.0);
    c.proj_mask.backward(d_proj_dropped, d_proj_pre);
    Vec d_flat_dropped(c.flat_dropped.size(), 0.0);
    ops::affine_backward(proj, c.flat_dropped, d_proj_pre, dproj, d_flat_dropped);
    Vec d_flat_relu(c.flat_relu.size(), 0.0);
    c.fm_mask.backward(d_flat_dropped, d_flat_relu);
    Vec d_conv_pre(c.conv_pre.size(), 0.0);
    ops::relu_backward(c.conv_pre.data, d_flat_relu, d_conv_pre);
    Tensor dgrid(c.grid.shape);
    Tensor d_conv(c.conv_pre.shape, std::move(d_conv_pre));
    ops::conv2d_backward(filters, c.grid, d_conv, dfilters, dgrid);
    ops::concat_backward(dgrid.data, cfg.dim, dei, drk);
}

inline double score_conve(const ModelConfig& cfg, const Tensor& filters,
                          const Tensor& proj, const Vec& ei, const Vec& ej,
                          const Vec& rk, bool train_mode, std::mt19937_64& rng) {
    return ops::dot(conve_hidden(cfg, filters, proj, ei, rk, train_mode, rng).hidden, ej);
}

// ---- 1-N batched scoring ----------------------------------------------

/// scores = candidates . q, one entry per candidate row.
inline Vec score_all_tails(const Tensor& candidates, const Vec& q) {
    const std::size_t n = candidates.rows(), h = candidates.cols();
    if (q.size() != h) throw DimensionError("score_all_tails: query length mismatch");
    Vec scores(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = &candidates.data[i * h];
        double acc = 0.0;
        for (std::size_t j = 0; j < h; ++j) acc += row[j] * q[j];
        scores[i] = acc;
    }
    return scores;
}

inline void score_all_tails_backward(const Tensor& candidates, const Vec& q,
                                     const Vec& dscores, Tensor& dcandidates, Vec& dq) {
    const std::size_t n = candidates.rows(), h = candidates.cols();
    for (std::size_t i = 0; i < n; ++i) {
        const double up = dscores[i];
        if (up == 0.0) continue;
        const double* row = &candidates.data[i * h];
        double* drow = &dcandidates.data[i * h];
        for (std::size_t j = 0; j < h; ++j) {
            drow[j] += up * q[j];
            dq[j] += up * row[j];
        }
    }
}

// ---- parameter accounting ---------------------------------------------

/// Number of trainable parameters for a base model plus fusion overhead,
/// bias-free. ComplEx keeps independent fusion weights for its real and
/// imaginary parts, so its fusion overhead doubles.
inline std::size_t parameter_count(const ModelConfig& cfg, FusionKind fusion,
                                   std::size_t n_entities, std::size_t n_relations,
                                   std::size_t n_data_relations, std::size_t mlp_hidden) {
    const std::size_t h = cfg.dim;
    std::size_t base = 0;
    switch (cfg.kind) {
        case ModelKind::DistMult: base = n_entities * h + n_relations * h; break;
        case ModelKind::ComplEx: base = 2 * (n_entities * h + n_relations * h); break;
        case ModelKind::ConvE:
            base = n_entities * h + n_relations * h + cfg.conv_param_count();
            break;
    }
    std::size_t per_g = 0;
    switch (fusion) {
        case FusionKind::None: per_g = 0; break;
        case FusionKind::Linear:
        case FusionKind::NonlinearTanh:
        case FusionKind::NonlinearReLU:
        case FusionKind::Gate: per_g = (h + n_data_relations) * h; break;
        case FusionKind::MLP:
            per_g = (h + n_data_relations) * mlp_hidden + mlp_hidden * h;
            break;
    }
    if (cfg.kind == ModelKind::ComplEx) per_g *= 2;
    return base + per_g;
}

}  // namespace literale

#endif
