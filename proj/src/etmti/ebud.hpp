#pragma once
#include <random>
#include <vector>

#include "channel.hpp"
#include "core.hpp"

namespace etmti {

// Phase I: one short estimation frame sizes the unknown population, then
// deactivation frames mute unknowns until few enough remain for the target
// reliability.

struct EstimationFrameResult {
    int n_x = 0;                    // occupied positions in the merged reply
    int responders_deactivated = 0; // unknowns that replied and went quiet
    long segs = 0;                  // command + reply air time
    TriStateString merged;
};

struct DeactivationFrameResult {
    int deactivated = 0;
    long segs = 0; // command only; nobody transmits back
};

struct PhaseOneResult {
    double u_est = 0.0;
    int f_d = 0;
    int deactivated = 0;
    int remaining_unknown = 0;
    int n_x = 0;
    bool saturated = false;
    long seg_est = 0;
    long seg_dea = 0;
};

// Presence vector over f slots: bit s-1 set iff some known tag hashes to slot s.
// Missing known tags are still in the database, so they contribute too.
std::vector<uint8_t> build_pv(const std::vector<TagRecord>& known, uint32_t f, uint16_t seed,
                              const Hasher& hasher = default_hasher());

// Early-breaking prefix of ceil(gamma * f) bits.
std::vector<uint8_t> extract_ev(const std::vector<uint8_t>& pv, double gamma);

EstimationFrameResult run_estimation_frame(Population& pop, double gamma, uint16_t seed,
                                           const Hasher& hasher = default_hasher());

// Inverts the expected count of occupied empty-prefix positions.
// Saturates (and flags) when n_x reaches the model ceiling gamma*K/e.
double estimate_unknown(int n_x, int K, double gamma, bool* saturated = nullptr);

// Largest unknown count tolerable after Phase I for the given reliability.
// Defined for alpha <= 0.99 only.
int residual_unknown_budget(double alpha, int K);

// Frames needed to decay u_est below the budget at rate (1 - 1/e) per frame.
int deactivation_frames_needed(double u_est, int u_d_max);

DeactivationFrameResult run_deactivation_frame(Population& pop, uint16_t seed,
                                               const Hasher& hasher = default_hasher());

// Full Phase I. Frame seeds come from rng unless a fixed schedule is supplied
// (tests use schedules to pin scripted hash layouts).
PhaseOneResult run_phase1(Population& pop, const ScenarioParams& params, std::mt19937_64& rng,
                          const Hasher& hasher = default_hasher(),
                          const std::vector<uint16_t>* seed_schedule = nullptr);

} // namespace etmti
