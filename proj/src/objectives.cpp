#include "textsnake/objectives.hpp"

#include <algorithm>
#include <cmath>

namespace textsnake {

double smoothed_l1(double x) {
    const double ax = std::abs(x);
    return ax < 1.0 ? 0.5 * x * x : ax - 0.5;
}

double smoothed_l1_grad(double x) {
    if (std::abs(x) < 1.0) return x;
    return x > 0.0 ? 1.0 : -1.0;
}

namespace {

constexpr double kMinRadius = 1e-6;

// Stable softmax cross-entropy for a two-way pixel. Returns the loss for
// label `pos` and the class probabilities.
double softmax_ce(double logit_neg, double logit_pos, bool pos, double& p_neg, double& p_pos) {
    const double m = std::max(logit_neg, logit_pos);
    const double en = std::exp(logit_neg - m);
    const double ep = std::exp(logit_pos - m);
    const double z = en + ep;
    p_neg = en / z;
    p_pos = ep / z;
    const double log_z = m + std::log(z);
    return pos ? log_z - logit_pos : log_z - logit_neg;
}

}  // namespace

LossBreakdown loss_with_gradients(const PredictionMaps& pred, const GeometryMaps& gt,
                                  const PixelMask& ignore, const LossWeights& weights,
                                  LossGradients& grads) {
    if (pred.height != gt.height() || pred.width != gt.width())
        throw DimensionMismatch("loss: prediction/ground-truth shapes differ");
    if (ignore.height() != gt.height() || ignore.width() != gt.width())
        throw DimensionMismatch("loss: ignore mask shape differs");

    const std::size_t n = pred.pixel_count();
    grads.tr_logit_neg.assign(n, 0.0);
    grads.tr_logit_pos.assign(n, 0.0);
    grads.tcl_logit_neg.assign(n, 0.0);
    grads.tcl_logit_pos.assign(n, 0.0);
    grads.r.assign(n, 0.0);
    grads.cos_t.assign(n, 0.0);
    grads.sin_t.assign(n, 0.0);

    const int w = pred.width;
    auto ignored = [&](std::size_t i) {
        return ignore.get(static_cast<int>(i) / w, static_cast<int>(i) % w);
    };

    LossBreakdown out;

    // --- TR: softmax cross-entropy with hard negative mining ---
    std::vector<std::size_t> positives;
    std::vector<std::pair<double, std::size_t>> negatives;  // (ce, index)
    std::vector<double> ce_tr(n, 0.0);
    std::vector<double> pneg_tr(n, 0.0), ppos_tr(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (ignored(i)) continue;
        const bool pos = gt.tr[i] >= 0.5f;
        ce_tr[i] = softmax_ce(pred.tr_logit_neg[i], pred.tr_logit_pos[i], pos, pneg_tr[i], ppos_tr[i]);
        if (pos)
            positives.push_back(i);
        else
            negatives.emplace_back(ce_tr[i], i);
    }
    const std::size_t keep = std::min(3 * positives.size(), negatives.size());
    std::sort(negatives.begin(), negatives.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;  // hardest first
        return a.second < b.second;                        // ties: lower index
    });
    negatives.resize(keep);
    grads.tr_positives = positives.size();
    grads.tr_negatives_kept = keep;

    const std::size_t tr_count = positives.size() + keep;
    if (tr_count > 0) {
        double sum = 0.0;
        const double inv = 1.0 / static_cast<double>(tr_count);
        for (std::size_t i : positives) {
            sum += ce_tr[i];
            grads.tr_logit_pos[i] = (ppos_tr[i] - 1.0) * inv;
            grads.tr_logit_neg[i] = pneg_tr[i] * inv;
        }
        for (const auto& [ce, i] : negatives) {
            sum += ce;
            grads.tr_logit_neg[i] = (pneg_tr[i] - 1.0) * inv;
            grads.tr_logit_pos[i] = ppos_tr[i] * inv;
        }
        out.l_tr = sum * inv;
    }

    // --- TCL: plain cross-entropy over pixels inside ground-truth TR ---
    std::size_t tcl_count = 0;
    double tcl_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (ignored(i) || gt.tr[i] < 0.5f) continue;
        double pn, pp;
        const bool pos = gt.tcl[i] >= 0.5f;
        tcl_sum += softmax_ce(pred.tcl_logit_neg[i], pred.tcl_logit_pos[i], pos, pn, pp);
        grads.tcl_logit_pos[i] = pos ? pp - 1.0 : pp;
        grads.tcl_logit_neg[i] = pos ? pn : pn - 1.0;
        ++tcl_count;
    }
    if (tcl_count > 0) {
        const double inv = 1.0 / static_cast<double>(tcl_count);
        out.l_tcl = tcl_sum * inv;
        for (std::size_t i = 0; i < n; ++i) {
            grads.tcl_logit_pos[i] *= inv;
            grads.tcl_logit_neg[i] *= inv;
        }
    } else {
        std::fill(grads.tcl_logit_pos.begin(), grads.tcl_logit_pos.end(), 0.0);
        std::fill(grads.tcl_logit_neg.begin(), grads.tcl_logit_neg.end(), 0.0);
    }

    // --- Regression: smoothed-L1 over ground-truth TCL pixels ---
    std::size_t reg_count = 0, r_count = 0;
    double r_sum = 0.0, cos_sum = 0.0, sin_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (ignored(i) || gt.tcl[i] < 0.5f) continue;
        ++reg_count;
        const double gr = gt.r[i];
        if (gr >= kMinRadius) {
            ++r_count;
            const double res = (pred.r[i] - gr) / gr;
            r_sum += smoothed_l1(res);
            grads.r[i] = smoothed_l1_grad(res) / gr;  // scaled by 1/count below
        }
        const double cres = pred.cos_t[i] - gt.cos_t[i];
        const double sres = pred.sin_t[i] - gt.sin_t[i];
        cos_sum += smoothed_l1(cres);
        sin_sum += smoothed_l1(sres);
        grads.cos_t[i] = smoothed_l1_grad(cres);
        grads.sin_t[i] = smoothed_l1_grad(sres);
    }
    if (r_count > 0) {
        out.l_r = r_sum / static_cast<double>(r_count);
        const double inv = 1.0 / static_cast<double>(r_count);
        for (std::size_t i = 0; i < n; ++i) grads.r[i] *= inv;
    } else {
        std::fill(grads.r.begin(), grads.r.end(), 0.0);
    }
    if (reg_count > 0) {
        out.l_cos = cos_sum / static_cast<double>(reg_count);
        out.l_sin = sin_sum / static_cast<double>(reg_count);
        const double inv = 1.0 / static_cast<double>(reg_count);
        for (std::size_t i = 0; i < n; ++i) {
            grads.cos_t[i] *= inv;
            grads.sin_t[i] *= inv;
        }
    } else {
        std::fill(grads.cos_t.begin(), grads.cos_t.end(), 0.0);
        std::fill(grads.sin_t.begin(), grads.sin_t.end(), 0.0);
    }

    out.total = weights.tr * out.l_tr + weights.tcl * out.l_tcl + weights.r * out.l_r +
                weights.sin * out.l_sin + weights.cos * out.l_cos;

    for (std::size_t i = 0; i < n; ++i) {
        grads.tr_logit_neg[i] *= weights.tr;
        grads.tr_logit_pos[i] *= weights.tr;
        grads.tcl_logit_neg[i] *= weights.tcl;
        grads.tcl_logit_pos[i] *= weights.tcl;
        grads.r[i] *= weights.r;
        grads.cos_t[i] *= weights.cos;
        grads.sin_t[i] *= weights.sin;
    }
    return out;
}

LossBreakdown loss(const PredictionMaps& pred, const GeometryMaps& gt, const PixelMask& ignore,
                   const LossWeights& weights) {
    LossGradients grads;
    return loss_with_gradients(pred, gt, ignore, weights, grads);
}

}  // namespace textsnake
