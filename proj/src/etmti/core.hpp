#pragma once
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rng.hpp"

namespace etmti {

// 96-bit tag identifier; hi carries the top 32 bits, lo the bottom 64.
struct TagId {
    uint64_t hi = 0;
    uint64_t lo = 0;

    friend bool operator==(const TagId& a, const TagId& b) {
        return a.hi == b.hi && a.lo == b.lo;
    }
    friend bool operator<(const TagId& a, const TagId& b) {
        return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
    }
};

enum class TagClass : uint8_t { Known, Unknown };
enum class Verdict : uint8_t { Unverified, Present, Missing };

struct TagRecord {
    TagId id;
    TagClass cls = TagClass::Known;
    bool present = true;   // ground truth: physically in range
    bool active = true;    // false once deactivated; never transmits again
    bool silenced = false; // replied in a singleton slot; stays quiet for the round
    uint32_t counter = 0;  // pending collision-group index (Ac)
    Verdict verified = Verdict::Unverified;
};

struct Population {
    std::vector<TagRecord> known;
    std::vector<TagRecord> unknown;
    int missing_count = 0;
};

struct ScenarioParams {
    int K = 1000;
    double r_m = 0.0;
    double r_u = 0.0;
    double alpha = 0.95;
    double gamma = 0.25;
    double beta = 0.95;
    int B = 3;
    int trials = 100;
    uint64_t master_seed = 1;
};

// All air time is an integer number of 96-bit segments; ms values derive from that.
struct TimeLedger {
    long seg_est = 0;
    long seg_dea = 0;
    long seg_r = 0;
    long seg_t = 0;

    static constexpr double t_id_ms = 2.4;
    static constexpr int segment_bits = 96;

    double t_est_ms() const { return seg_est * t_id_ms; }
    double t_dea_ms() const { return seg_dea * t_id_ms; }
    double t_r_ms() const { return seg_r * t_id_ms; }
    double t_t_ms() const { return seg_t * t_id_ms; }
    double phase1_total_ms() const { return (seg_est + seg_dea) * t_id_ms; }
    double phase2_total_ms() const { return (seg_r + seg_t) * t_id_ms; }
    double total_ms() const { return phase1_total_ms() + phase2_total_ms(); }
};

// Seeded hash from (id, seed) to a 1-based slot in [1, f].
uint32_t hash_slot(const TagId& id, uint16_t seed, uint32_t f);

// Hash indirection so tests can pin tags to scripted slots.
struct Hasher {
    virtual ~Hasher() = default;
    virtual uint32_t slot(const TagId& id, uint16_t seed, uint32_t f) const {
        return hash_slot(id, seed, f);
    }
};

const Hasher& default_hasher();

Population generate_population(const ScenarioParams& params, uint64_t rng_seed);

} // namespace etmti
