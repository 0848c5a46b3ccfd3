#pragma once
#include <stdexcept>
#include <vector>

namespace etmti {

// The collision tree failed to cover all K tags within the level cap; the
// requested operating point has no finite prediction.
struct AnalysisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-level occupancy model of the splitting tree. Level 0 is the opening
// frame with beta*K slots; level i has beta*K*B^i. Slot counts and singleton
// mass are expectations, not integers.
struct LevelProfile {
    int level = 0;
    double p = 0.0;         // chance one given tag lands in one given slot, capped at 1
    double p_empty = 0.0;   // per-slot probability of 0 / 1 / >=2 expected tags
    double p_single = 0.0;
    double p_collide = 0.0;
    double q = 1.0;         // chance the process is still splitting at this level
    double s = 0.0;         // expected broadcast slots actually issued
    double k_star = 0.0;    // expected tags newly resolved at this level
    double c = 0.0;         // cumulative singleton mass through this level
};

std::vector<LevelProfile> level_profiles(int K, double beta, int B, int levels);
LevelProfile level_profile(int K, double beta, int B, int i);

// Smallest frame count whose cumulative singleton mass covers all K tags.
// Throws AnalysisError when 64 levels do not suffice.
int predicted_frames(int K, double beta, int B);

struct Phase2Prediction {
    double t_r_ms = 0.0; // reader broadcasts
    double t_t_ms = 0.0; // tag replies
    int f_m = 0;
    long seg_r = 0;
    long seg_t = 0;
    double total_ms() const { return t_r_ms + t_t_ms; }
};

// Expected identification-round time. The broadcast per level is costed at its
// exact code length: one bit per expected-empty slot, two per occupied slot.
Phase2Prediction predict_phase2_time(int K, double beta, int B);
// Two-bits-per-slot upper bound on the broadcast; kept for comparison runs.
Phase2Prediction predict_phase2_time_coarse(int K, double beta, int B);

struct Phase1Prediction {
    double t_est_ms = 0.0;
    double t_dea_ms = 0.0;
    long seg_cmd = 0;   // estimation command segments
    long seg_reply = 0; // expected merged-reply segments
    double t1_ms() const { return t_est_ms + t_dea_ms; }
};

Phase1Prediction predict_phase1_time(int K, double gamma, int f_d);

// Expected fraction of missing tags masked by surviving unknowns: an unknown
// must keep landing in occupied slots through level i, then hit the one slot
// where a missing tag was due to answer.
double fnr_bound(int K, double u_d, double beta, int B);
// Closed-form variant with the per-level collision bracket folded into the
// exponent; systematically optimistic, kept for reference.
double fnr_bound_literal(int K, double u_d, double beta, int B);

struct PlanResult {
    double t1_pred_ms = 0.0;
    double t2_pred_ms = 0.0;
    int f_m_pred = 0;
    int f_d_pred = 0;
    int budget = 0;       // tolerable unknowns left after Phase I
    double u_pred = 0.0;  // expected unknowns left after f_d frames
    double r_fn_bound = 0.0;
    double beta = 0.95;
    double gamma = 0.25;
    int B = 3;
    double total_ms() const { return t1_pred_ms + t2_pred_ms; }
};

// End-to-end round plan for a deployment: how many deactivation frames the
// reliability target needs, and what the round will cost.
PlanResult plan(int K, double alpha, double u_est, double gamma = 0.25, double beta = 0.95,
                int B = 3);

struct SweepCell {
    double beta = 0.0;
    int B = 0;
    double t2_ms = 0.0;
    bool converged = false;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    double best_beta = 0.0;
    int best_B = 0;
    double best_t2_ms = 0.0;
};

// Grid search over beta in [0.10, 1.20] step 0.05 and B in {2..6}, minimizing
// predicted identification time. Ties keep the first cell in scan order.
SweepResult sweep_beta_b(int K);

} // namespace etmti
