#include "tsmti.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace etmti {

namespace {

constexpr long kHeaderBits = 52;
constexpr int kMaxFrames = 32;

struct SlotMaps {
    std::vector<int> singleton_rank; // slot index -> reply position, -1 elsewhere
    std::vector<uint32_t> collision_ac; // slot index -> Ac, 0 elsewhere
};

SlotMaps index_slots(const BroadcastVector& bv) {
    SlotMaps m;
    m.singleton_rank.assign(bv.slots.size(), -1);
    m.collision_ac.assign(bv.slots.size(), 0);
    int rank = 0;
    uint32_t ac = 0;
    for (size_t s = 0; s < bv.slots.size(); ++s) {
        if (bv.slots[s] == SlotState::ExpectedSingleton) m.singleton_rank[s] = rank++;
        else if (bv.slots[s] == SlotState::ExpectedCollision) m.collision_ac[s] = ++ac;
    }
    return m;
}

// Shared tail of both layout builders: occupancy counts -> slot states,
// per-tag counters, and the reply-position ownership table.
template <typename Layout>
Layout finish_layout(const std::vector<int>& occ, const std::vector<uint32_t>& slot_of) {
    Layout lay;
    lay.bv.slots.resize(occ.size());
    for (size_t s = 0; s < occ.size(); ++s) {
        lay.bv.slots[s] = occ[s] == 0   ? SlotState::ExpectedEmpty
                          : occ[s] == 1 ? SlotState::ExpectedSingleton
                                        : SlotState::ExpectedCollision;
    }
    const SlotMaps maps = index_slots(lay.bv);
    lay.counters.resize(slot_of.size());
    lay.singleton_owner.assign(lay.bv.n_singleton(), -1);
    for (size_t j = 0; j < slot_of.size(); ++j) {
        const size_t s = slot_of[j] - 1;
        if (maps.singleton_rank[s] >= 0) {
            lay.counters[j] = 0;
            lay.singleton_owner[maps.singleton_rank[s]] = static_cast<int>(j);
        } else {
            lay.counters[j] = maps.collision_ac[s];
        }
    }
    return lay;
}

ResponseString one_hot(int position, int length) {
    ResponseString r;
    r.bits.assign(length, 0);
    r.bits[position] = 1;
    return r;
}

} // namespace

long BroadcastVector::bit_length() const {
    long bits = 0;
    for (SlotState s : slots) bits += (s == SlotState::ExpectedEmpty) ? 1 : 2;
    return bits;
}

int BroadcastVector::n_singleton() const {
    return static_cast<int>(std::count(slots.begin(), slots.end(), SlotState::ExpectedSingleton));
}

int BroadcastVector::n_collision() const {
    return static_cast<int>(std::count(slots.begin(), slots.end(), SlotState::ExpectedCollision));
}

std::string BroadcastVector::to_string() const {
    std::string out;
    for (size_t s = 0; s < slots.size(); ++s) {
        if (s) out += ' ';
        switch (slots[s]) {
            case SlotState::ExpectedEmpty: out += '0'; break;
            case SlotState::ExpectedSingleton: out += "10"; break;
            case SlotState::ExpectedCollision: out += "11"; break;
        }
    }
    return out;
}

FirstFrameLayout build_bv_first(const std::vector<TagRecord>& known, double beta, uint16_t seed,
                                const Hasher& hasher) {
    if (known.empty()) throw std::invalid_argument("first frame needs at least one known tag");
    if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
    const auto f1 = static_cast<uint32_t>(
        std::max<long long>(1, std::llround(beta * static_cast<double>(known.size()))));
    std::vector<uint32_t> slot_of(known.size());
    std::vector<int> occ(f1, 0);
    for (size_t j = 0; j < known.size(); ++j) {
        slot_of[j] = hasher.slot(known[j].id, seed, f1);
        ++occ[slot_of[j] - 1];
    }
    return finish_layout<FirstFrameLayout>(occ, slot_of);
}

GroupFrameLayout build_bv_group(const std::vector<TagRecord>& pending, int B, uint16_t seed,
                                const Hasher& hasher) {
    if (pending.empty()) throw std::invalid_argument("group frame needs pending tags");
    if (B < 2) throw std::invalid_argument("branch factor must be at least 2");
    uint32_t n_groups = 0;
    for (const TagRecord& t : pending) {
        if (t.counter == 0) throw std::invalid_argument("pending tag carries no group index");
        n_groups = std::max(n_groups, t.counter);
    }
    const uint32_t fsize = n_groups * static_cast<uint32_t>(B);
    std::vector<uint32_t> slot_of(pending.size());
    std::vector<int> occ(fsize, 0);
    for (size_t j = 0; j < pending.size(); ++j) {
        slot_of[j] = (pending[j].counter - 1) * B + hasher.slot(pending[j].id, seed, B);
        ++occ[slot_of[j] - 1];
    }
    return finish_layout<GroupFrameLayout>(occ, slot_of);
}

DecodeResult reader_decode(const BroadcastVector& bv, const TriStateString& received,
                           const std::vector<int>& singleton_owner) {
    const size_t n = singleton_owner.size();
    if (static_cast<size_t>(bv.n_singleton()) != n || received.length() != n)
        throw std::invalid_argument("reply length does not match the singleton count");
    DecodeResult out;
    for (size_t r = 0; r < n; ++r) {
        if (received.symbols[r] == Symbol::Zero) out.missing_owners.push_back(singleton_owner[r]);
        else out.present_owners.push_back(singleton_owner[r]);
    }
    return out;
}

RoundReport run_phase2(Population& pop, const ScenarioParams& params, std::mt19937_64& rng,
                       const Hasher& hasher, const std::vector<uint16_t>* seed_schedule,
                       std::vector<FrameTrace>* trace) {
    RoundReport rep;
    if (pop.known.empty()) return rep;

    size_t sched_pos = 0;
    auto next_seed = [&]() -> uint16_t {
        if (!seed_schedule) return static_cast<uint16_t>(rng() & 0xFFFF);
        if (sched_pos >= seed_schedule->size())
            throw std::invalid_argument("frame seed schedule exhausted");
        return (*seed_schedule)[sched_pos++];
    };

    auto settle = [&](int global_idx, bool heard) {
        TagRecord& t = pop.known[global_idx];
        if (heard) {
            t.verified = Verdict::Present;
            if (t.present) rep.verified_present.push_back(t.id);
            else rep.falsely_present.push_back(t.id);
        } else {
            t.verified = Verdict::Missing;
            rep.identified_missing.push_back(t.id);
        }
    };

    // Reader-side pending list; ground truth only matters at reply time.
    std::vector<TagRecord> pending = pop.known;
    std::vector<int> src(pending.size());
    std::iota(src.begin(), src.end(), 0);
    std::vector<int> live_unknown;
    for (size_t u = 0; u < pop.unknown.size(); ++u)
        if (pop.unknown[u].active && !pop.unknown[u].silenced)
            live_unknown.push_back(static_cast<int>(u));

    for (int frame = 1; frame <= kMaxFrames; ++frame) {
        const uint16_t seed = next_seed();
        BroadcastVector bv;
        std::vector<uint32_t> counters;
        std::vector<int> owner;
        if (frame == 1) {
            FirstFrameLayout lay = build_bv_first(pending, params.beta, seed, hasher);
            bv = std::move(lay.bv);
            counters = std::move(lay.counters);
            owner = std::move(lay.singleton_owner);
        } else {
            GroupFrameLayout lay = build_bv_group(pending, params.B, seed, hasher);
            bv = std::move(lay.bv);
            counters = std::move(lay.counters);
            owner = std::move(lay.singleton_owner);
        }
        const SlotMaps maps = index_slots(bv);
        const int n_sing = bv.n_singleton();

        std::vector<ResponseString> responses;
        for (int r = 0; r < n_sing; ++r)
            if (pop.known[src[owner[r]]].present) responses.push_back(one_hot(r, n_sing));

        std::vector<int> next_unknown;
        for (int u : live_unknown) {
            TagRecord& t = pop.unknown[u];
            const uint32_t slot = frame == 1
                ? hasher.slot(t.id, seed, static_cast<uint32_t>(bv.slots.size()))
                : (t.counter - 1) * params.B + hasher.slot(t.id, seed, params.B);
            switch (bv.slots[slot - 1]) {
                case SlotState::ExpectedEmpty:
                    t.active = false;
                    ++rep.unknown_deactivated_p2;
                    break;
                case SlotState::ExpectedSingleton:
                    responses.push_back(one_hot(maps.singleton_rank[slot - 1], n_sing));
                    t.silenced = true;
                    break;
                case SlotState::ExpectedCollision:
                    t.counter = maps.collision_ac[slot - 1];
                    next_unknown.push_back(u);
                    break;
            }
        }
        live_unknown = std::move(next_unknown);

        const TriStateString merged = superpose(responses, n_sing);
        const DecodeResult decode = reader_decode(bv, merged, owner);
        for (int j : decode.present_owners) settle(src[j], true);
        for (int j : decode.missing_owners) settle(src[j], false);

        rep.seg_r += segments(bv.bit_length() + kHeaderBits);
        rep.seg_t += segments(n_sing);
        rep.frames_used = frame;
        if (trace) trace->push_back({bv.to_string(), merged.to_string()});

        std::vector<TagRecord> next_pending;
        std::vector<int> next_src;
        for (size_t j = 0; j < pending.size(); ++j) {
            if (counters[j] == 0) continue;
            pending[j].counter = counters[j];
            next_pending.push_back(pending[j]);
            next_src.push_back(src[j]);
        }
        pending = std::move(next_pending);
        src = std::move(next_src);
        if (pending.empty()) return rep;
    }

    // Splitting stalled (identical hash paths). Resolve leftovers by ground
    // truth so the verdict sets stay complete, and flag the round.
    rep.depth_cap_hit = true;
    for (int g : src) settle(g, pop.known[g].present);
    return rep;
}

} // namespace etmti
