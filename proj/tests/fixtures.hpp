#pragma once
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <etmti/core.hpp>

// Scripted hash layouts for the worked protocol examples. Tags are pinned to
// slots per (frame seed, tag id), so the traces below are bit-exact and every
// drift in frame construction shows up as a hard mismatch.

namespace fixtures {

struct FixtureHasher : etmti::Hasher {
    std::map<std::pair<uint16_t, uint64_t>, uint32_t> table;

    uint32_t slot(const etmti::TagId& id, uint16_t seed, uint32_t f) const override {
        const auto it = table.find({seed, id.lo});
        if (it == table.end()) throw std::out_of_range("fixture hasher: unscripted (seed, tag)");
        if (it->second < 1 || it->second > f)
            throw std::out_of_range("fixture hasher: scripted slot outside frame");
        return it->second;
    }
};

inline etmti::TagId known_id(uint64_t n) { return {0, n}; }      // T1..: lo = 1..
inline etmti::TagId unknown_id(uint64_t n) { return {0, 100 + n}; } // U1..: lo = 101..

// ---- estimation example -------------------------------------------------
// Ten knowns, five unknowns, gamma = 0.6, frame seed 7.
// PV over 10 slots is "1010101110"; the 6-bit prefix "101010" has empty
// positions {2,4,6}; unknowns U2/U4 land on slot 2, U5 on slot 6, so the
// merged one-hot reply over the three empty positions reads "x0x".

constexpr uint16_t kEstSeed = 7;
constexpr double kEstGamma = 0.6;

inline etmti::Population estimation_population() {
    etmti::Population pop;
    for (uint64_t n = 1; n <= 10; ++n) {
        etmti::TagRecord t;
        t.id = known_id(n);
        pop.known.push_back(t);
    }
    for (uint64_t n = 1; n <= 5; ++n) {
        etmti::TagRecord t;
        t.id = unknown_id(n);
        t.cls = etmti::TagClass::Unknown;
        pop.unknown.push_back(t);
    }
    return pop;
}

inline FixtureHasher estimation_hasher() {
    FixtureHasher h;
    const uint32_t known_slots[10] = {1, 3, 5, 7, 8, 9, 1, 3, 5, 9};
    for (uint64_t n = 1; n <= 10; ++n) h.table[{kEstSeed, n}] = known_slots[n - 1];
    const uint32_t unknown_slots[5] = {1, 2, 5, 2, 6};
    for (uint64_t n = 1; n <= 5; ++n) h.table[{kEstSeed, 100 + n}] = unknown_slots[n - 1];
    return h;
}

// ---- identification example ---------------------------------------------
// Ten knowns with T2/T5/T8 missing, three unknowns, beta = 1, B = 3, frame
// seeds 11/12/13. The broadcast, counter, and reply trace is pinned below.

constexpr uint16_t kIdSeeds[3] = {11, 12, 13};

inline etmti::Population identification_population() {
    etmti::Population pop;
    for (uint64_t n = 1; n <= 10; ++n) {
        etmti::TagRecord t;
        t.id = known_id(n);
        t.present = !(n == 2 || n == 5 || n == 8);
        pop.known.push_back(t);
    }
    pop.missing_count = 3;
    for (uint64_t n = 1; n <= 3; ++n) {
        etmti::TagRecord t;
        t.id = unknown_id(n);
        t.cls = etmti::TagClass::Unknown;
        pop.unknown.push_back(t);
    }
    return pop;
}

inline FixtureHasher identification_hasher() {
    FixtureHasher h;
    // frame 1 over 10 slots
    const uint32_t f1[10] = {2, 7, 2, 3, 5, 9, 2, 5, 7, 7}; // T1..T10
    for (uint64_t n = 1; n <= 10; ++n) h.table[{11, n}] = f1[n - 1];
    h.table[{11, 101}] = 5;  // U1 joins the T5/T8 collision
    h.table[{11, 102}] = 4;  // U2 hits an expected-empty slot
    h.table[{11, 103}] = 10; // U3 likewise
    // frame 2: within-group choice over B = 3
    h.table[{12, 1}] = 1;
    h.table[{12, 3}] = 2;
    h.table[{12, 7}] = 2;
    h.table[{12, 5}] = 1;
    h.table[{12, 8}] = 2;
    h.table[{12, 2}] = 3;
    h.table[{12, 9}] = 2;
    h.table[{12, 10}] = 2;
    h.table[{12, 101}] = 3; // lands beside T2's singleton: expected empty
    // frame 3
    h.table[{13, 3}] = 1;
    h.table[{13, 7}] = 2;
    h.table[{13, 9}] = 1;
    h.table[{13, 10}] = 2;
    return h;
}

inline const char* kIdBv1 = "0 11 10 0 11 0 11 0 10 0";
inline const char* kIdBv2 = "10 11 0 10 10 0 0 11 10";
inline const char* kIdBv3 = "10 10 0 10 10 0";
inline const char* kIdReply1 = "xx";
inline const char* kIdReply2 = "1000";
inline const char* kIdReply3 = "xxxx";

} // namespace fixtures
