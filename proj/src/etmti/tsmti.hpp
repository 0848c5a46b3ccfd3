#pragma once
#include <random>
#include <string>
#include <vector>

#include "channel.hpp"
#include "core.hpp"

namespace etmti {

// Phase II: every known tag (missing ones included, since the reader cannot
// tell yet) is hashed into the first frame; collision slots split into B child
// slots per frame until no expected collisions remain. Presence is read off
// the one-hot replies in expected-singleton slots.

enum class SlotState : uint8_t { ExpectedEmpty, ExpectedSingleton, ExpectedCollision };

struct BroadcastVector {
    std::vector<SlotState> slots;

    long bit_length() const; // empty slots code in one bit, the rest in two
    int n_singleton() const;
    int n_collision() const;
    std::string to_string() const; // per-slot codes separated by spaces
};

// Frame 1 layout over max(1, round(beta * K)) slots. Counters are the
// collision-group indices Ac, numbered left to right; 0 marks a tag whose slot
// is an expected singleton (it owns a reply position instead).
struct FirstFrameLayout {
    BroadcastVector bv;
    std::vector<uint32_t> counters;   // parallel to the known list
    std::vector<int> singleton_owner; // reply position -> index into the known list
};

FirstFrameLayout build_bv_first(const std::vector<TagRecord>& known, double beta, uint16_t seed,
                                const Hasher& hasher = default_hasher());

// Frame i >= 2: pending tags carry their previous group index in .counter and
// land in slot (counter - 1) * B + hash(id) with hash over [1, B]. Collision
// numbering restarts across the whole frame each time.
struct GroupFrameLayout {
    BroadcastVector bv;
    std::vector<uint32_t> counters;   // parallel to the pending list
    std::vector<int> singleton_owner; // reply position -> index into the pending list
};

GroupFrameLayout build_bv_group(const std::vector<TagRecord>& pending, int B, uint16_t seed,
                                const Hasher& hasher = default_hasher());

// Splits the expected-singleton owners by what the reader heard: an occupied
// reply position is presence, a silent one is absence. Indices refer to the
// same list singleton_owner does.
struct DecodeResult {
    std::vector<int> present_owners;
    std::vector<int> missing_owners;
};

DecodeResult reader_decode(const BroadcastVector& bv, const TriStateString& received,
                           const std::vector<int>& singleton_owner);

struct FrameTrace {
    std::string bv;    // broadcast codes, space separated
    std::string reply; // merged one-hot replies as heard
};

struct RoundReport {
    std::vector<TagId> verified_present;
    std::vector<TagId> identified_missing;
    std::vector<TagId> falsely_present; // missing, but an unknown answered in their position
    int unknown_deactivated_p2 = 0;
    int frames_used = 0;
    long seg_r = 0;
    long seg_t = 0;
    bool depth_cap_hit = false;
};

// Full Phase II round. Runs until no expected collisions remain or the frame
// cap trips (then leftovers resolve by ground truth and the flag is set).
// Frame seeds come from rng unless a fixed schedule is supplied.
RoundReport run_phase2(Population& pop, const ScenarioParams& params, std::mt19937_64& rng,
                       const Hasher& hasher = default_hasher(),
                       const std::vector<uint16_t>* seed_schedule = nullptr,
                       std::vector<FrameTrace>* trace = nullptr);

} // namespace etmti
