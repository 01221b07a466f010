#ifndef LITERALE_LOSS_HPP
#define LITERALE_LOSS_HPP

#include <cmath>

#include "literale/ops.hpp"

namespace literale {

struct LossResult {
    double loss = 0.0;
    Vec dscores;
};

inline double softplus(double x) {
    // log(1 + e^x), stable for large |x|
    return std::log1p(std::exp(-std::abs(x))) + std::max(x, 0.0);
}

/// Mean binary cross-entropy of sigmoid(scores) against targets, with
/// the fused gradient (sigmoid(s) - y) / N w.r.t. the raw scores.
inline LossResult bce_loss(const Vec& scores, const Vec& targets) {
    require_same_length(scores, targets, "bce_loss");
    const std::size_t n = scores.size();
    LossResult r;
    r.dscores.assign(n, 0.0);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = scores[i], y = targets[i];
        // -(y log p + (1-y) log(1-p)) = softplus(s) - y*s
        r.loss += softplus(s) - y * s;
        r.dscores[i] = (ops::sigmoid_scalar(s) - y) * inv_n;
    }
    r.loss *= inv_n;
    return r;
}

/// y' = (1 - eps) * y + eps / n_entities
inline Vec smooth_labels(const Vec& y, double eps, std::size_t n_entities) {
    if (eps < 0.0 || eps >= 1.0) throw ConfigError("label smoothing must be in [0,1)");
    Vec out(y.size());
    const double floor = eps / static_cast<double>(n_entities);
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = (1.0 - eps) * y[i] + floor;
    return out;
}

}  // namespace literale

#endif
