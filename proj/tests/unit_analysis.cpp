#include <doctest.h>

#include <cmath>

#include <etmti/analysis.hpp>

using namespace etmti;

namespace {
constexpr double kInvE = 0.36787944117144233;

bool near_abs(double a, double b, double tol) { return std::abs(a - b) < tol; }
} // namespace

TEST_CASE("level profile chain at the default operating point") {
    const LevelProfile L0 = level_profile(3000, 0.95, 3, 0);
    CHECK(L0.p == doctest::Approx(0.000350877193).epsilon(1e-8));
    CHECK(L0.p_empty == doctest::Approx(0.3489536079).epsilon(1e-8));
    CHECK(L0.p_single == doctest::Approx(0.3674485165).epsilon(1e-8));
    CHECK(L0.p_collide == doctest::Approx(0.2835978756).epsilon(1e-8));
    CHECK(L0.q == 1.0);
    CHECK(L0.s == doctest::Approx(2850.0).epsilon(1e-10));
    CHECK(L0.k_star == doctest::Approx(1047.228272).epsilon(1e-8));

    const LevelProfile L1 = level_profile(3000, 0.95, 3, 1);
    CHECK(L1.p_empty == doctest::Approx(0.7040557654).epsilon(1e-8));
    CHECK(L1.p_single == doctest::Approx(0.2470660073).epsilon(1e-8));
    CHECK(L1.p_collide == doctest::Approx(0.0488782273).epsilon(1e-8));
    CHECK(L1.q == doctest::Approx(0.2835978756).epsilon(1e-8));
    CHECK(L1.s == doctest::Approx(2424.761836).epsilon(1e-8));
    CHECK(L1.k_star == doctest::Approx(1065.18609).epsilon(1e-8));
    CHECK(L1.c == doctest::Approx(2112.414362).epsilon(1e-8));

    const LevelProfile L2 = level_profile(3000, 0.95, 3, 2);
    CHECK(L2.p_empty == doctest::Approx(0.8896195814).epsilon(1e-8));
    CHECK(L2.p_single == doctest::Approx(0.1040531305).epsilon(1e-8));
    CHECK(L2.k_star == doctest::Approx(556.548435).epsilon(1e-8));
}

TEST_CASE("level profile accessor matches the bulk chain") {
    const auto chain = level_profiles(2000, 0.8, 4, 6);
    for (int i = 0; i < 6; ++i) {
        const LevelProfile L = level_profile(2000, 0.8, 4, i);
        CHECK(L.level == chain[i].level);
        CHECK(L.c == chain[i].c);
        CHECK(L.k_star == chain[i].k_star);
        CHECK(L.q == chain[i].q);
    }
    CHECK_THROWS_AS(level_profile(2000, 0.8, 4, -1), std::invalid_argument);
    CHECK_THROWS_AS(level_profiles(0, 0.8, 4, 3), std::invalid_argument);
    CHECK_THROWS_AS(level_profiles(100, 0.0, 4, 3), std::invalid_argument);
    CHECK_THROWS_AS(level_profiles(100, 0.8, 1, 3), std::invalid_argument);
}

TEST_CASE("predicted frame counts across the tag range") {
    CHECK(predicted_frames(1000, 0.95, 3) == 8);
    CHECK(predicted_frames(2000, 0.95, 3) == 8);
    CHECK(predicted_frames(3000, 0.95, 3) == 9);
    CHECK(predicted_frames(4000, 0.95, 3) == 9);
    CHECK(predicted_frames(5000, 0.95, 3) == 9);
    CHECK(predicted_frames(1, 0.95, 3) == 1);
}

TEST_CASE("a tree that cannot cover its tags raises the analysis error") {
    // With beta this small every level keeps a single always-colliding slot.
    CHECK_THROWS_AS(predicted_frames(10, 1e-300, 2), AnalysisError);
}

TEST_CASE("identification-time prediction at the reference operating point") {
    const Phase2Prediction p = predict_phase2_time(3000, 0.95, 3);
    CHECK(p.f_m == 9);
    CHECK(p.seg_r == 132);
    CHECK(p.seg_t == 37);
    CHECK(p.t_r_ms == doctest::Approx(316.8));
    CHECK(p.t_t_ms == doctest::Approx(88.8));
    CHECK(p.total_ms() == doctest::Approx(405.6));

    const Phase2Prediction c = predict_phase2_time_coarse(3000, 0.95, 3);
    CHECK(c.f_m == 9);
    CHECK(c.seg_r == 160);
    CHECK(c.seg_t == 37);
    CHECK(c.total_ms() == doctest::Approx(472.8));
}

TEST_CASE("identification-time prediction edge sizes") {
    const Phase2Prediction k1 = predict_phase2_time(1, 0.95, 3);
    CHECK(k1.f_m == 1);
    CHECK(k1.t_r_ms == doctest::Approx(2.4));
    CHECK(k1.t_t_ms == doctest::Approx(2.4));

    const Phase2Prediction k10 = predict_phase2_time(10, 0.95, 3);
    CHECK(k10.f_m == 4);
    CHECK(k10.total_ms() == doctest::Approx(19.2));

    const Phase2Prediction k1000 = predict_phase2_time(1000, 0.95, 3);
    CHECK(k1000.t_r_ms == doctest::Approx(117.6));
    CHECK(k1000.t_t_ms == doctest::Approx(36.0));
    CHECK(k1000.total_ms() == doctest::Approx(153.6));
}

TEST_CASE("estimation-time prediction") {
    const Phase1Prediction p = predict_phase1_time(1000, 0.25, 0);
    CHECK(p.seg_cmd == 4);
    CHECK(p.seg_reply == 1);
    CHECK(p.t_est_ms == doctest::Approx(12.0));
    CHECK(p.t_dea_ms == 0.0);

    const double sweep[4] = {0.5, 0.25, 0.125, 0.0625};
    const double expect[4] = {55.2, 28.8, 16.8, 9.6};
    for (int i = 0; i < 4; ++i)
        CHECK(predict_phase1_time(3000, sweep[i], 0).t_est_ms == doctest::Approx(expect[i]));

    CHECK(predict_phase1_time(3000, 0.25, 1).t_dea_ms == doctest::Approx(76.8));
    CHECK(predict_phase1_time(1000, 0.25, 2).t_dea_ms == doctest::Approx(52.8));

    CHECK_THROWS_AS(predict_phase1_time(1000, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(predict_phase1_time(1000, 1.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(predict_phase1_time(1000, 0.25, -1), std::invalid_argument);
}

TEST_CASE("false-negative bound matches the published reliability table") {
    const double ratios[5] = {0.01, 0.05, 0.10, 0.15, 0.20};
    const double expect[5] = {0.007457, 0.036638, 0.071706, 0.105273, 0.137409};
    for (int i = 0; i < 5; ++i)
        CHECK(near_abs(fnr_bound(3000, ratios[i] * 3000, 0.95, 3), expect[i], 1e-6));
}

TEST_CASE("false-negative bound grows with surviving unknowns") {
    const double a = fnr_bound(3000, 30, 0.95, 3);
    const double b = fnr_bound(3000, 60, 0.95, 3);
    const double c = fnr_bound(3000, 150, 0.95, 3);
    CHECK(near_abs(a, 0.007457, 1e-6));
    CHECK(near_abs(b, 0.014849, 1e-6));
    CHECK(near_abs(c, 0.036638, 1e-6));
    CHECK(a < b);
    CHECK(b < c);
    CHECK(fnr_bound(3000, 0.0, 0.95, 3) == 0.0);
    CHECK(fnr_bound(3000, -5.0, 0.95, 3) == 0.0);
}

TEST_CASE("closed-form bound variant stays below the recursion") {
    const double expect[5] = {0.001103, 0.005484, 0.010891, 0.016222, 0.021479};
    const double ratios[5] = {0.01, 0.05, 0.10, 0.15, 0.20};
    for (int i = 0; i < 5; ++i) {
        const double lit = fnr_bound_literal(3000, ratios[i] * 3000, 0.95, 3);
        CHECK(near_abs(lit, expect[i], 1e-6));
        CHECK(lit < fnr_bound(3000, ratios[i] * 3000, 0.95, 3));
    }
}

TEST_CASE("deployment plan wires the pieces together") {
    const PlanResult r = plan(3000, 0.95, 300.0);
    CHECK(r.budget == 150);
    CHECK(r.f_d_pred == 2);
    CHECK(r.u_pred == doctest::Approx(300.0 * (1.0 - kInvE) * (1.0 - kInvE)));
    CHECK(r.f_m_pred == 9);
    CHECK(r.t2_pred_ms == doctest::Approx(405.6));
    CHECK(r.t1_pred_ms == doctest::Approx(28.8 + 2 * 76.8));
    CHECK(r.r_fn_bound == doctest::Approx(fnr_bound(3000, r.u_pred, 0.95, 3)));

    const PlanResult none = plan(3000, 0.95, 0.0);
    CHECK(none.f_d_pred == 0);
    CHECK(none.r_fn_bound == 0.0);

    CHECK_THROWS_AS(plan(3000, 0.995, 300.0), std::invalid_argument);
    CHECK_THROWS_AS(plan(3000, 0.95, -1.0), std::invalid_argument);
}

TEST_CASE("frame-parameter grid search lands on the analytic optimum") {
    const SweepResult k3000 = sweep_beta_b(3000);
    CHECK(k3000.cells.size() == 23 * 5);
    int converged = 0;
    for (const SweepCell& c : k3000.cells) converged += c.converged;
    CHECK(converged == 115);
    CHECK(k3000.best_beta == doctest::Approx(0.80));
    CHECK(k3000.best_B == 3);
    CHECK(k3000.best_t2_ms == doctest::Approx(400.8));
    for (const SweepCell& c : k3000.cells)
        if (c.beta == doctest::Approx(0.95) && c.B == 3) CHECK(c.t2_ms == doctest::Approx(405.6));

    const SweepResult k1000 = sweep_beta_b(1000);
    CHECK(k1000.best_beta == doctest::Approx(1.00));
    CHECK(k1000.best_B == 4);
    CHECK(k1000.best_t2_ms == doctest::Approx(148.8));

    const SweepResult k5000 = sweep_beta_b(5000);
    CHECK(k5000.best_beta == doctest::Approx(1.05));
    CHECK(k5000.best_B == 3);
    CHECK(k5000.best_t2_ms == doctest::Approx(648.0));
}
