#include "ebud.hpp"

#include <algorithm>
#include <cmath>

namespace etmti {

namespace {
constexpr int kHeaderBits = 52; // 4-bit type + three 16-bit fields
constexpr double kInvE = 0.36787944117144233;

uint16_t next_seed(std::mt19937_64& rng, const std::vector<uint16_t>* schedule, size_t idx) {
    if (schedule) {
        if (idx >= schedule->size())
            throw std::invalid_argument("phase 1: seed schedule exhausted");
        return (*schedule)[idx];
    }
    return static_cast<uint16_t>(rng() & 0xFFFF);
}
} // namespace

std::vector<uint8_t> build_pv(const std::vector<TagRecord>& known, uint32_t f, uint16_t seed,
                              const Hasher& hasher) {
    if (f == 0)
        throw std::domain_error("build_pv: frame size must be positive");
    std::vector<uint8_t> pv(f, 0);
    for (const auto& t : known)
        pv[hasher.slot(t.id, seed, f) - 1] = 1;
    return pv;
}

std::vector<uint8_t> extract_ev(const std::vector<uint8_t>& pv, double gamma) {
    if (gamma <= 0.0 || gamma > 1.0)
        throw std::invalid_argument("extract_ev: gamma must be in (0, 1]");
    const size_t len = static_cast<size_t>(std::ceil(gamma * pv.size() - 1e-9));
    return std::vector<uint8_t>(pv.begin(), pv.begin() + len);
}

EstimationFrameResult run_estimation_frame(Population& pop, double gamma, uint16_t seed,
                                           const Hasher& hasher) {
    const uint32_t f = static_cast<uint32_t>(pop.known.size());
    EstimationFrameResult res;
    if (f == 0) {
        res.segs = segments(kHeaderBits);
        return res;
    }

    const auto pv = build_pv(pop.known, f, seed, hasher);
    const auto ev = extract_ev(pv, gamma);

    // Rank of each empty prefix position; replies are one-hot over these.
    std::vector<int> zero_rank(ev.size(), -1);
    int zeros = 0;
    for (size_t s = 0; s < ev.size(); ++s)
        if (!ev[s])
            zero_rank[s] = zeros++;

    std::vector<int> ones_at(zeros, 0);
    int responders = 0;
    for (auto& u : pop.unknown) {
        if (!u.active)
            continue;
        const uint32_t slot = hasher.slot(u.id, seed, f);
        if (slot <= ev.size() && !ev[slot - 1]) {
            ++ones_at[zero_rank[slot - 1]];
            ++responders;
            u.active = false; // replied, acknowledged, done for the round
        }
    }

    res.merged.symbols.resize(zeros);
    for (int i = 0; i < zeros; ++i) {
        if (ones_at[i] == 0)
            res.merged.symbols[i] = Symbol::Zero;
        else if (ones_at[i] == responders)
            res.merged.symbols[i] = Symbol::One;
        else
            res.merged.symbols[i] = Symbol::X;
    }
    res.n_x = count_active(res.merged);
    res.responders_deactivated = responders;
    res.segs = segments(static_cast<long>(ev.size()) + kHeaderBits) + segments(zeros);
    return res;
}

double estimate_unknown(int n_x, int K, double gamma, bool* saturated) {
    if (saturated)
        *saturated = false;
    if (n_x < 0)
        throw std::invalid_argument("estimate_unknown: n_x must be non-negative");
    if (n_x == 0 || K <= 0)
        return 0.0;

    const double ceiling = gamma * K * kInvE; // expected empty prefix positions
    double nx = n_x;
    if (nx >= ceiling) {
        nx = ceiling - 1.0;
        if (saturated)
            *saturated = true;
        if (nx <= 0.0)
            return 0.0;
    }
    return -static_cast<double>(K) * std::log(1.0 - nx / ceiling);
}

int residual_unknown_budget(double alpha, int K) {
    if (alpha <= 0.0 || alpha > 0.99)
        throw std::invalid_argument("residual_unknown_budget: alpha must be in (0, 0.99]");
    double ratio;
    if (alpha <= 0.90)
        ratio = 0.10;
    else if (alpha <= 0.95)
        ratio = 0.05;
    else
        ratio = 0.01;
    return static_cast<int>(ratio * K + 1e-9);
}

int deactivation_frames_needed(double u_est, int u_d_max) {
    if (u_d_max < 1)
        throw std::invalid_argument("deactivation_frames_needed: budget must be >= 1");
    if (u_est <= static_cast<double>(u_d_max))
        return 0;
    const double frames = std::log(static_cast<double>(u_d_max) / u_est) / std::log(1.0 - kInvE);
    return static_cast<int>(std::ceil(frames - 1e-12));
}

DeactivationFrameResult run_deactivation_frame(Population& pop, uint16_t seed,
                                               const Hasher& hasher) {
    const uint32_t f = static_cast<uint32_t>(pop.known.size());
    DeactivationFrameResult res;
    if (f == 0)
        return res;

    const auto pv = build_pv(pop.known, f, seed, hasher);
    for (auto& u : pop.unknown) {
        if (!u.active)
            continue;
        if (!pv[hasher.slot(u.id, seed, f) - 1]) {
            u.active = false;
            ++res.deactivated;
        }
    }
    res.segs = segments(static_cast<long>(f) + kHeaderBits);
    return res;
}

PhaseOneResult run_phase1(Population& pop, const ScenarioParams& params, std::mt19937_64& rng,
                          const Hasher& hasher, const std::vector<uint16_t>* seed_schedule) {
    PhaseOneResult out;
    size_t seed_idx = 0;

    const auto est = run_estimation_frame(pop, params.gamma, next_seed(rng, seed_schedule, seed_idx++), hasher);
    out.n_x = est.n_x;
    out.seg_est = est.segs;
    out.deactivated = est.responders_deactivated;
    out.u_est = estimate_unknown(est.n_x, params.K, params.gamma, &out.saturated);

    // Tiny populations can floor the budget to zero; one tag is the practical minimum.
    const int budget = std::max(1, residual_unknown_budget(params.alpha, params.K));
    out.f_d = deactivation_frames_needed(out.u_est, budget);

    for (int i = 0; i < out.f_d; ++i) {
        const auto dea = run_deactivation_frame(pop, next_seed(rng, seed_schedule, seed_idx++), hasher);
        out.deactivated += dea.deactivated;
        out.seg_dea += dea.segs;
    }
    out.remaining_unknown = static_cast<int>(pop.unknown.size()) - out.deactivated;
    return out;
}

} // namespace etmti
