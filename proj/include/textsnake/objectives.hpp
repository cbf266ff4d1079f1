#pragma once

#include <cstddef>
#include <vector>

#include "textsnake/geometry.hpp"
#include "textsnake/maps.hpp"

namespace textsnake {

/// Raw network output planes: two logits each for TR and TCL plus the three
/// geometry regressions. All planes share the h x w grid.
struct PredictionMaps {
    int height = 0;
    int width = 0;
    std::vector<double> tr_logit_neg, tr_logit_pos;
    std::vector<double> tcl_logit_neg, tcl_logit_pos;
    std::vector<double> r, cos_t, sin_t;

    PredictionMaps() = default;
    PredictionMaps(int h, int w)
        : height(h), width(w) {
        const std::size_t n = static_cast<std::size_t>(h) * w;
        tr_logit_neg.assign(n, 0.0);
        tr_logit_pos.assign(n, 0.0);
        tcl_logit_neg.assign(n, 0.0);
        tcl_logit_pos.assign(n, 0.0);
        r.assign(n, 0.0);
        cos_t.assign(n, 0.0);
        sin_t.assign(n, 0.0);
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(height) * width; }
};

struct LossWeights {
    double tr = 1.0, tcl = 1.0, r = 1.0, sin = 1.0, cos = 1.0;
};

struct LossBreakdown {
    double l_tr = 0.0, l_tcl = 0.0, l_r = 0.0, l_sin = 0.0, l_cos = 0.0;
    double total = 0.0;
};

/// d(total)/d(entry) for every prediction plane, same layout as the input.
struct LossGradients {
    std::vector<double> tr_logit_neg, tr_logit_pos;
    std::vector<double> tcl_logit_neg, tcl_logit_pos;
    std::vector<double> r, cos_t, sin_t;
    /// OHEM bookkeeping: positive count and negatives kept for the TR term.
    std::size_t tr_positives = 0;
    std::size_t tr_negatives_kept = 0;
};

/// 0.5 x^2 for |x| < 1, |x| - 0.5 otherwise.
double smoothed_l1(double x);
/// Derivative of smoothed_l1: x inside the quadratic zone, sign(x) outside.
double smoothed_l1_grad(double x);

/// Training objective over one image. TR uses softmax cross-entropy with
/// online hard negative mining (negatives kept = min(3 * positives,
/// available), hardest first, ties to the lower pixel index). TCL uses plain
/// cross-entropy over pixels inside ground-truth TR. The regression terms
/// are smoothed-L1 over ground-truth TCL pixels with residuals
/// (r_hat - r)/r, cos_hat - cos, sin_hat - sin. All components are means;
/// pixels under `ignore` never contribute.
LossBreakdown loss(const PredictionMaps& pred, const GeometryMaps& gt, const PixelMask& ignore,
                   const LossWeights& weights = {});

/// Same contract as `loss`, also producing analytic gradients (the OHEM
/// selection is treated as fixed).
LossBreakdown loss_with_gradients(const PredictionMaps& pred, const GeometryMaps& gt,
                                  const PixelMask& ignore, const LossWeights& weights,
                                  LossGradients& grads);

}  // namespace textsnake
