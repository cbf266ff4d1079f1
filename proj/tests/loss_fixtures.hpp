#pragma once

// Random prediction / ground-truth pairs for loss tests. Fixtures are
// conditioned away from the two sources of finite-difference trouble: hard
// negative ties at the OHEM cutoff and smoothed-L1 residuals near |x| = 1.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "textsnake/maps.hpp"
#include "textsnake/objectives.hpp"

namespace loss_fixtures {

using textsnake::GeometryMaps;
using textsnake::PixelMask;
using textsnake::PredictionMaps;

struct LossPair {
    PredictionMaps pred;
    GeometryMaps gt;
    PixelMask ignore;
};

inline LossPair make_pair(int h, int w, std::uint32_t seed, bool with_ignore = false) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> logit(-2.0, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> radius(2.0, 20.0);
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);

    for (int attempt = 0; attempt < 100; ++attempt) {
        LossPair out{PredictionMaps(h, w), GeometryMaps(h, w), PixelMask(h, w)};
        const std::size_t n = out.pred.pixel_count();
        for (std::size_t i = 0; i < n; ++i) {
            out.pred.tr_logit_neg[i] = logit(rng);
            out.pred.tr_logit_pos[i] = logit(rng);
            out.pred.tcl_logit_neg[i] = logit(rng);
            out.pred.tcl_logit_pos[i] = logit(rng);
            out.pred.r[i] = radius(rng);
            out.pred.cos_t[i] = 2.0 * unit(rng) - 1.0;
            out.pred.sin_t[i] = 2.0 * unit(rng) - 1.0;

            const bool tr = unit(rng) < 0.4;
            const bool tcl = tr && unit(rng) < 0.4;
            out.gt.tr[i] = tr ? 1.0f : 0.0f;
            out.gt.tcl[i] = tcl ? 1.0f : 0.0f;
            if (tcl) {
                const float gr = static_cast<float>(radius(rng));
                out.gt.r[i] = gr;
                const double t = angle(rng);
                out.gt.cos_t[i] = static_cast<float>(std::cos(t));
                out.gt.sin_t[i] = static_cast<float>(std::sin(t));
            }
            if (with_ignore && unit(rng) < 0.1)
                out.ignore.set(static_cast<int>(i) / w, static_cast<int>(i) % w);
        }

        // Reject draws with a near-tie at the hard-negative cutoff.
        std::vector<double> neg_ce;
        std::size_t positives = 0;
        auto ce_of = [](double zn, double zp, bool pos) {
            const double m = std::max(zn, zp);
            const double log_z = m + std::log(std::exp(zn - m) + std::exp(zp - m));
            return pos ? log_z - zp : log_z - zn;
        };
        for (std::size_t i = 0; i < n; ++i) {
            if (out.ignore.get(static_cast<int>(i) / w, static_cast<int>(i) % w)) continue;
            if (out.gt.tr[i] >= 0.5f)
                ++positives;
            else
                neg_ce.push_back(ce_of(out.pred.tr_logit_neg[i], out.pred.tr_logit_pos[i], false));
        }
        const std::size_t keep = std::min(3 * positives, neg_ce.size());
        bool clean = true;
        if (keep > 0 && keep < neg_ce.size()) {
            std::sort(neg_ce.rbegin(), neg_ce.rend());
            if (neg_ce[keep - 1] - neg_ce[keep] < 1e-3) clean = false;
        }

        // Reject residuals within 1e-3 of the smoothed-L1 kink.
        for (std::size_t i = 0; i < n && clean; ++i) {
            if (out.gt.tcl[i] < 0.5f) continue;
            const double rres = (out.pred.r[i] - out.gt.r[i]) / out.gt.r[i];
            const double cres = out.pred.cos_t[i] - out.gt.cos_t[i];
            const double sres = out.pred.sin_t[i] - out.gt.sin_t[i];
            for (double v : {rres, cres, sres})
                if (std::abs(std::abs(v) - 1.0) < 1e-3) clean = false;
        }
        if (clean) return out;
        seed = seed * 2654435761u + 1;
        rng.seed(seed);
    }
    throw std::runtime_error("loss fixture conditioning failed");
}

// Central finite difference of total loss w.r.t. one entry of one plane.
template <typename PlaneGetter>
double finite_diff(PredictionMaps pred, const GeometryMaps& gt, const PixelMask& ignore,
                   PlaneGetter plane, std::size_t index, double step = 1e-4) {
    double& slot = plane(pred)[index];
    const double saved = slot;
    slot = saved + step;
    const double hi = textsnake::loss(pred, gt, ignore).total;
    slot = saved - step;
    const double lo = textsnake::loss(pred, gt, ignore).total;
    slot = saved;
    return (hi - lo) / (2.0 * step);
}

}  // namespace loss_fixtures
