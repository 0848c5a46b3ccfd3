#include "baseline.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "channel.hpp"

namespace etmti {

namespace {
constexpr long kHeaderBits = 52;
constexpr int kMaxFrames = 10000;
} // namespace

RoundReport run_aloha_baseline(Population& pop, double frame_factor, uint64_t seed,
                               const Hasher& hasher) {
    if (frame_factor <= 0.0) throw std::invalid_argument("frame factor must be positive");
    RoundReport rep;
    if (pop.known.empty()) return rep;

    std::mt19937_64 rng(seed);

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

    std::vector<int> unverified(pop.known.size());
    std::iota(unverified.begin(), unverified.end(), 0);

    for (int frame = 1; frame <= kMaxFrames && !unverified.empty(); ++frame) {
        const auto f = static_cast<uint32_t>(std::max<long long>(
            1, std::llround(frame_factor * static_cast<double>(unverified.size()))));
        const auto fseed = static_cast<uint16_t>(rng() & 0xFFFF);

        std::vector<uint32_t> slot_of(unverified.size());
        std::vector<int> expected(f, 0);
        for (size_t j = 0; j < unverified.size(); ++j) {
            slot_of[j] = hasher.slot(pop.known[unverified[j]].id, fseed, f);
            ++expected[slot_of[j] - 1];
        }

        // owner per expected-singleton slot; actual replies per polled slot
        std::vector<int> owner(f, -1);
        std::vector<int> replies(f, 0);
        int n_polled = 0;
        for (size_t j = 0; j < unverified.size(); ++j) {
            const uint32_t s = slot_of[j] - 1;
            if (expected[s] == 1) {
                owner[s] = unverified[j];
                if (pop.known[unverified[j]].present) ++replies[s];
            }
        }
        for (TagRecord& t : pop.unknown) {
            if (!t.active || t.silenced) continue;
            const uint32_t s = hasher.slot(t.id, fseed, f) - 1;
            if (expected[s] == 1) {
                ++replies[s];
                t.silenced = true;
            }
        }

        std::vector<int> next_unverified;
        for (size_t j = 0; j < unverified.size(); ++j)
            if (expected[slot_of[j] - 1] > 1) next_unverified.push_back(unverified[j]);
        for (uint32_t s = 0; s < f; ++s) {
            if (owner[s] < 0) continue;
            ++n_polled;
            settle(owner[s], replies[s] > 0);
        }
        unverified = std::move(next_unverified);

        rep.seg_r += segments(static_cast<long>(f) + kHeaderBits);
        rep.seg_t += n_polled; // each polled slot is its own reply segment
        rep.frames_used = frame;
    }

    if (!unverified.empty()) {
        rep.depth_cap_hit = true;
        for (int g : unverified) settle(g, pop.known[g].present);
    }
    return rep;
}

} // namespace etmti
