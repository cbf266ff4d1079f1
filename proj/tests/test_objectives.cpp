#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "loss_fixtures.hpp"
#include "textsnake/objectives.hpp"

using namespace textsnake;

TEST_CASE("smoothed_l1: closed form and smoothness at the kink") {
    CHECK(smoothed_l1(0.0) == 0.0);
    CHECK(smoothed_l1(0.5) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(smoothed_l1(2.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(smoothed_l1(-2.0) == doctest::Approx(1.5).epsilon(1e-15));

    std::mt19937 rng(1);
    std::uniform_real_distribution<double> x(-5.0, 5.0);
    for (int i = 0; i < 100000; ++i) {
        const double v = x(rng);
        const double want = std::abs(v) < 1.0 ? 0.5 * v * v : std::abs(v) - 0.5;
        CHECK(std::abs(smoothed_l1(v) - want) <= 1e-12);
    }

    // Value and first derivative are continuous at |x| = 1.
    const double eps = 1e-9;
    CHECK(std::abs(smoothed_l1(1.0 - eps) - smoothed_l1(1.0 + eps)) < 1e-8);
    CHECK(std::abs(smoothed_l1_grad(1.0 - eps) - smoothed_l1_grad(1.0 + eps)) < 1e-8);
    CHECK(std::abs(smoothed_l1_grad(-1.0 - eps) - smoothed_l1_grad(-1.0 + eps)) < 1e-8);
}

TEST_CASE("loss: near-perfect predictions vanish") {
    GeometryMaps gt(8, 8);
    PredictionMaps pred(8, 8);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
        const bool tr = unit(rng) < 0.5;
        const bool tcl = tr && unit(rng) < 0.5;
        gt.tr[i] = tr ? 1.0f : 0.0f;
        gt.tcl[i] = tcl ? 1.0f : 0.0f;
        if (tcl) {
            gt.r[i] = 5.0f;
            gt.cos_t[i] = 1.0f;
            gt.sin_t[i] = 0.0f;
        }
        // Logit margin 10 toward the true class.
        pred.tr_logit_pos[i] = tr ? 10.0 : 0.0;
        pred.tr_logit_neg[i] = tr ? 0.0 : 10.0;
        pred.tcl_logit_pos[i] = tcl ? 10.0 : 0.0;
        pred.tcl_logit_neg[i] = tcl ? 0.0 : 10.0;
        pred.r[i] = gt.r[i];
        pred.cos_t[i] = gt.cos_t[i];
        pred.sin_t[i] = gt.sin_t[i];
    }
    const LossBreakdown out = loss(pred, gt, PixelMask(8, 8));
    CHECK(out.l_tr <= 1e-4);
    CHECK(out.l_tcl <= 1e-4);
    CHECK(out.l_r == 0.0);
    CHECK(out.l_cos == 0.0);
    CHECK(out.l_sin == 0.0);
    CHECK(out.total == doctest::Approx(out.l_tr + out.l_tcl).epsilon(1e-12));
}

TEST_CASE("loss: OHEM keeps exactly min(3P, N) negatives, lowest indices on ties") {
    // 110 pixels on an 11x10 grid: the first 10 are positives, the remaining
    // 100 negatives all equally wrong.
    GeometryMaps gt(11, 10);
    PredictionMaps pred(11, 10);
    for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
        const bool pos = i < 10;
        gt.tr[i] = pos ? 1.0f : 0.0f;
        pred.tr_logit_pos[i] = pos ? -1.0 : 1.0;  // every pixel is wrong
        pred.tr_logit_neg[i] = pos ? 1.0 : -1.0;
    }
    LossGradients grads;
    loss_with_gradients(pred, gt, PixelMask(11, 10), {}, grads);
    CHECK(grads.tr_positives == 10);
    CHECK(grads.tr_negatives_kept == 30);

    // Gradient support: all 10 positives plus exactly the 30 lowest-index
    // negatives (ties broken by index).
    for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
        const bool contributes = grads.tr_logit_pos[i] != 0.0;
        if (i < 10)
            CHECK(contributes);
        else if (i < 40)
            CHECK(contributes);
        else
            CHECK_FALSE(contributes);
    }

    // When negatives are scarcer than 3P, all of them are kept.
    GeometryMaps gt2(4, 4);
    PredictionMaps pred2(4, 4);
    for (std::size_t i = 0; i < gt2.pixel_count(); ++i) gt2.tr[i] = i < 14 ? 1.0f : 0.0f;
    LossGradients grads2;
    loss_with_gradients(pred2, gt2, PixelMask(4, 4), {}, grads2);
    CHECK(grads2.tr_positives == 14);
    CHECK(grads2.tr_negatives_kept == 2);
}

TEST_CASE("loss: scaling all weights scales the total") {
    const auto fix = loss_fixtures::make_pair(12, 12, 7);
    const LossBreakdown base = loss(fix.pred, fix.gt, fix.ignore);
    LossWeights w;
    w.tr = w.tcl = w.r = w.sin = w.cos = 3.5;
    const LossBreakdown scaled = loss(fix.pred, fix.gt, fix.ignore, w);
    CHECK(scaled.total == doctest::Approx(3.5 * base.total).epsilon(1e-12));
}

TEST_CASE("loss: invariant under partition-preserving pixel permutations") {
    const auto fix = loss_fixtures::make_pair(10, 10, 21);
    const LossBreakdown base = loss(fix.pred, fix.gt, fix.ignore);

    // Swap two TR-positive, TCL-negative pixels wholesale.
    std::vector<std::size_t> group;
    for (std::size_t i = 0; i < fix.gt.pixel_count(); ++i)
        if (fix.gt.tr[i] >= 0.5f && fix.gt.tcl[i] < 0.5f &&
            !fix.ignore.get(static_cast<int>(i) / 10, static_cast<int>(i) % 10))
            group.push_back(i);
    REQUIRE(group.size() >= 2);

    auto fix2 = fix;
    auto swap_all = [&](std::size_t a, std::size_t b) {
        std::swap(fix2.pred.tr_logit_neg[a], fix2.pred.tr_logit_neg[b]);
        std::swap(fix2.pred.tr_logit_pos[a], fix2.pred.tr_logit_pos[b]);
        std::swap(fix2.pred.tcl_logit_neg[a], fix2.pred.tcl_logit_neg[b]);
        std::swap(fix2.pred.tcl_logit_pos[a], fix2.pred.tcl_logit_pos[b]);
        std::swap(fix2.pred.r[a], fix2.pred.r[b]);
        std::swap(fix2.pred.cos_t[a], fix2.pred.cos_t[b]);
        std::swap(fix2.pred.sin_t[a], fix2.pred.sin_t[b]);
    };
    swap_all(group[0], group[1]);
    const LossBreakdown permuted = loss(fix2.pred, fix2.gt, fix2.ignore);
    CHECK(permuted.total == doctest::Approx(base.total).epsilon(1e-12));
}

TEST_CASE("loss: geometry disagreement outside ground-truth TCL is free") {
    auto fix = loss_fixtures::make_pair(10, 10, 33);
    // Make geometry exact on TCL pixels.
    for (std::size_t i = 0; i < fix.gt.pixel_count(); ++i)
        if (fix.gt.tcl[i] >= 0.5f) {
            fix.pred.r[i] = fix.gt.r[i];
            fix.pred.cos_t[i] = fix.gt.cos_t[i];
            fix.pred.sin_t[i] = fix.gt.sin_t[i];
        }
    const LossBreakdown base = loss(fix.pred, fix.gt, fix.ignore);
    CHECK(base.l_r == 0.0);
    CHECK(base.l_cos == 0.0);
    CHECK(base.l_sin == 0.0);

    // Scramble geometry everywhere off-TCL: nothing changes.
    auto scrambled = fix;
    for (std::size_t i = 0; i < fix.gt.pixel_count(); ++i)
        if (fix.gt.tcl[i] < 0.5f) {
            scrambled.pred.r[i] += 100.0;
            scrambled.pred.cos_t[i] = -scrambled.pred.cos_t[i];
        }
    const LossBreakdown after = loss(scrambled.pred, scrambled.gt, scrambled.ignore);
    CHECK(after.total == doctest::Approx(base.total).epsilon(1e-12));
}

TEST_CASE("loss: ignore mask removes pixels everywhere") {
    auto fix = loss_fixtures::make_pair(10, 10, 44, /*with_ignore=*/true);
    const LossBreakdown base = loss(fix.pred, fix.gt, fix.ignore);

    // Changing predictions under the ignore mask never changes the loss.
    auto fix2 = fix;
    for (int row = 0; row < 10; ++row)
        for (int col = 0; col < 10; ++col)
            if (fix.ignore.get(row, col)) {
                const std::size_t i = static_cast<std::size_t>(row) * 10 + col;
                fix2.pred.tr_logit_pos[i] += 3.0;
                fix2.pred.tcl_logit_neg[i] -= 2.0;
                fix2.pred.r[i] += 50.0;
            }
    const LossBreakdown after = loss(fix2.pred, fix2.gt, fix2.ignore);
    CHECK(after.total == doctest::Approx(base.total).epsilon(1e-12));
}

TEST_CASE("loss: dimension mismatch is rejected") {
    CHECK_THROWS_AS(loss(PredictionMaps(8, 8), GeometryMaps(8, 9), PixelMask(8, 9)),
                    DimensionMismatch);
    CHECK_THROWS_AS(loss(PredictionMaps(8, 8), GeometryMaps(8, 8), PixelMask(4, 4)),
                    DimensionMismatch);
}

TEST_CASE("loss: analytic gradients match central finite differences") {
    for (std::uint32_t seed : {101u, 202u, 303u}) {
        const auto fix = loss_fixtures::make_pair(8, 8, seed);
        LossGradients grads;
        loss_with_gradients(fix.pred, fix.gt, fix.ignore, {}, grads);

        auto check_plane = [&](auto getter, const std::vector<double>& analytic) {
            std::mt19937 pick(seed);
            std::uniform_int_distribution<std::size_t> idx(0, analytic.size() - 1);
            for (int probe = 0; probe < 12; ++probe) {
                const std::size_t i = idx(pick);
                const double fd =
                    loss_fixtures::finite_diff(fix.pred, fix.gt, fix.ignore, getter, i);
                const double denom = std::max({std::abs(fd), std::abs(analytic[i]), 1e-3});
                CHECK(std::abs(fd - analytic[i]) / denom <= 1e-4);
            }
        };
        check_plane([](PredictionMaps& p) -> std::vector<double>& { return p.tr_logit_neg; },
                    grads.tr_logit_neg);
        check_plane([](PredictionMaps& p) -> std::vector<double>& { return p.tr_logit_pos; },
                    grads.tr_logit_pos);
        check_plane([](PredictionMaps& p) -> std::vector<double>& { return p.tcl_logit_pos; },
                    grads.tcl_logit_pos);
        check_plane([](PredictionMaps& p) -> std::vector<double>& { return p.r; }, grads.r);
        check_plane([](PredictionMaps& p) -> std::vector<double>& { return p.cos_t; },
                    grads.cos_t);
        check_plane([](PredictionMaps& p) -> std::vector<double>& { return p.sin_t; },
                    grads.sin_t);
    }
}
