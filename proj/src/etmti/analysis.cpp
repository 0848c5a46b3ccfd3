#include "analysis.hpp"

#include <algorithm>
#include <cmath>

#include "channel.hpp"
#include "core.hpp"
#include "ebud.hpp"

namespace etmti {

namespace {

constexpr int kMaxLevels = 64;
constexpr double kConvergeEps = 1e-9;
constexpr double kHeaderBits = 52.0;
constexpr double kInvE = 0.36787944117144233;

void validate_tree_params(int K, double beta, int B) {
    if (K < 1) throw std::invalid_argument("tag count must be positive");
    if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
    if (B < 2) throw std::invalid_argument("branch factor must be at least 2");
}

// invariant: ceil(c - eps) >= K iff the cumulative singleton mass exceeds K-1
int frames_from_profile(const std::vector<LevelProfile>& prof, int K) {
    for (size_t n = 1; n <= prof.size(); ++n)
        if (std::ceil(prof[n - 1].c - kConvergeEps) >= static_cast<double>(K))
            return static_cast<int>(n);
    throw AnalysisError("collision tree does not cover the tag set within 64 frames");
}

} // namespace

std::vector<LevelProfile> level_profiles(int K, double beta, int B, int levels) {
    validate_tree_params(K, beta, B);
    std::vector<LevelProfile> out;
    out.reserve(levels);
    const double base = beta * static_cast<double>(K);
    double pow_b = 1.0; // B^i, exact until it leaves integer-double range
    double c_prev = 0.0;
    double q = 1.0;
    for (int i = 0; i < levels; ++i) {
        const double slots = base * pow_b;
        LevelProfile L;
        L.level = i;
        L.p = std::min(1.0, 1.0 / slots);
        if (L.p >= 1.0) {
            L.p_empty = 0.0;
            L.p_single = K == 1 ? 1.0 : 0.0;
        } else {
            L.p_empty = std::exp(K * std::log1p(-L.p));
            L.p_single = std::exp(std::log(static_cast<double>(K)) + std::log(L.p) +
                                  (K - 1) * std::log1p(-L.p));
        }
        L.p_collide = std::max(0.0, 1.0 - L.p_empty - L.p_single);
        L.q = q;
        L.s = slots * q;
        L.c = slots * L.p_single;
        L.k_star = L.c - c_prev;
        out.push_back(L);
        c_prev = L.c;
        q = L.p_collide;
        pow_b *= B;
    }
    return out;
}

LevelProfile level_profile(int K, double beta, int B, int i) {
    if (i < 0) throw std::invalid_argument("level index must be non-negative");
    return level_profiles(K, beta, B, i + 1).back();
}

int predicted_frames(int K, double beta, int B) {
    return frames_from_profile(level_profiles(K, beta, B, kMaxLevels), K);
}

namespace {

Phase2Prediction predict_phase2_impl(int K, double beta, int B, bool coarse) {
    const std::vector<LevelProfile> prof = level_profiles(K, beta, B, kMaxLevels);
    const int fm = frames_from_profile(prof, K);
    Phase2Prediction out;
    out.f_m = fm;
    const double base = beta * static_cast<double>(K);
    double pow_b = 1.0;
    for (int i = 0; i < fm; ++i) {
        const LevelProfile& L = prof[i];
        double bv_bits;
        if (coarse) {
            bv_bits = 2.0 * L.s;
        } else {
            // Expected occupied slots this level, net of the singletons that
            // already dropped out one level up.
            const double occupied =
                i == 0 ? base * (1.0 - L.p_empty)
                       : base * pow_b * (1.0 - L.p_empty) -
                             base * (pow_b / B) * prof[i - 1].p_single;
            bv_bits = L.s + occupied;
        }
        out.seg_r += segments_real(bv_bits + kHeaderBits);
        out.seg_t += segments_real(L.k_star);
        pow_b *= B;
    }
    out.t_r_ms = out.seg_r * TimeLedger::t_id_ms;
    out.t_t_ms = out.seg_t * TimeLedger::t_id_ms;
    return out;
}

} // namespace

Phase2Prediction predict_phase2_time(int K, double beta, int B) {
    return predict_phase2_impl(K, beta, B, false);
}

Phase2Prediction predict_phase2_time_coarse(int K, double beta, int B) {
    return predict_phase2_impl(K, beta, B, true);
}

Phase1Prediction predict_phase1_time(int K, double gamma, int f_d) {
    if (K < 1) throw std::invalid_argument("tag count must be positive");
    if (gamma <= 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must be in (0, 1]");
    if (f_d < 0) throw std::invalid_argument("frame count must be non-negative");
    const long fsub = static_cast<long>(std::ceil(gamma * K - kConvergeEps));
    const double expected_zeros =
        static_cast<double>(fsub) * std::pow(1.0 - 1.0 / static_cast<double>(K), K);
    Phase1Prediction out;
    out.seg_cmd = segments(fsub + 52);
    out.seg_reply = segments_real(expected_zeros);
    out.t_est_ms = (out.seg_cmd + out.seg_reply) * TimeLedger::t_id_ms;
    out.t_dea_ms = static_cast<double>(f_d) * segments(K + 52) * TimeLedger::t_id_ms;
    return out;
}

double fnr_bound(int K, double u_d, double beta, int B) {
    if (u_d <= 0.0) return 0.0;
    const std::vector<LevelProfile> prof = level_profiles(K, beta, B, kMaxLevels);
    const int fm = frames_from_profile(prof, K);
    double u = u_d;
    double r = 0.0;
    for (int i = 0; i < fm; ++i) {
        const LevelProfile& L = prof[i];
        const double hit = L.s <= 1.0 ? 1.0 : 1.0 / L.s;
        r += (L.k_star / K) * (1.0 - std::pow(1.0 - hit, u));
        u *= 1.0 - L.p_empty; // survivors stay only while landing in occupied slots
    }
    return r;
}

double fnr_bound_literal(int K, double u_d, double beta, int B) {
    if (u_d <= 0.0) return 0.0;
    const std::vector<LevelProfile> prof = level_profiles(K, beta, B, kMaxLevels);
    const int fm = frames_from_profile(prof, K);
    double r = 0.0;
    for (int i = 0; i < fm; ++i) {
        const LevelProfile& L = prof[i];
        r += (L.k_star / K) * (1.0 - std::pow(1.0 - L.p, u_d * L.p_collide));
    }
    return r;
}

PlanResult plan(int K, double alpha, double u_est, double gamma, double beta, int B) {
    if (u_est < 0.0) throw std::invalid_argument("estimated unknown count must be non-negative");
    PlanResult out;
    out.beta = beta;
    out.gamma = gamma;
    out.B = B;
    out.budget = std::max(1, residual_unknown_budget(alpha, K));
    out.f_d_pred = deactivation_frames_needed(u_est, out.budget);
    out.u_pred = u_est * std::pow(1.0 - kInvE, out.f_d_pred);
    const Phase1Prediction p1 = predict_phase1_time(K, gamma, out.f_d_pred);
    out.t1_pred_ms = p1.t1_ms();
    const Phase2Prediction p2 = predict_phase2_time(K, beta, B);
    out.t2_pred_ms = p2.total_ms();
    out.f_m_pred = p2.f_m;
    out.r_fn_bound = fnr_bound(K, out.u_pred, beta, B);
    return out;
}

SweepResult sweep_beta_b(int K) {
    SweepResult res;
    bool have_best = false;
    for (int j = 0; j <= 22; ++j) {
        const double beta = (10 + 5 * j) / 100.0;
        for (int B = 2; B <= 6; ++B) {
            SweepCell cell{beta, B, 0.0, false};
            try {
                cell.t2_ms = predict_phase2_time(K, beta, B).total_ms();
                cell.converged = true;
                if (!have_best || cell.t2_ms < res.best_t2_ms - 1e-12) {
                    have_best = true;
                    res.best_beta = beta;
                    res.best_B = B;
                    res.best_t2_ms = cell.t2_ms;
                }
            } catch (const AnalysisError&) {
            }
            res.cells.push_back(cell);
        }
    }
    if (!have_best) throw AnalysisError("no (beta, B) grid cell converged");
    return res;
}

} // namespace etmti
