#include "core.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace etmti {

uint32_t hash_slot(const TagId& id, uint16_t seed, uint32_t f) {
    if (f == 0)
        throw std::domain_error("hash_slot: frame size must be positive");
    uint64_t x = splitmix64(id.lo + 0x9E3779B97F4A7C15ULL * id.hi);
    x = splitmix64(x ^ seed);
    return static_cast<uint32_t>(x % f) + 1;
}

const Hasher& default_hasher() {
    static const Hasher h;
    return h;
}

Population generate_population(const ScenarioParams& params, uint64_t rng_seed) {
    if (params.K < 0 || params.r_m < 0.0 || params.r_m > 1.0 || params.r_u < 0.0)
        throw std::invalid_argument("generate_population: invalid counts or ratios");

    const int K = params.K;
    const int M = static_cast<int>(std::llround(params.r_m * K));
    const int U = static_cast<int>(std::llround(params.r_u * K));

    std::mt19937_64 rng(rng_seed);
    std::set<TagId> used;
    auto fresh_id = [&]() {
        for (;;) {
            TagId id{rng() & 0xFFFFFFFFULL, rng()};
            if (used.insert(id).second)
                return id;
        }
    };

    Population pop;
    pop.known.reserve(K);
    for (int i = 0; i < K; ++i) {
        TagRecord t;
        t.id = fresh_id();
        t.cls = TagClass::Known;
        pop.known.push_back(t);
    }

    // Uniform missing subset via partial Fisher-Yates over the index range.
    std::vector<int> idx(K);
    for (int i = 0; i < K; ++i)
        idx[i] = i;
    for (int i = 0; i < M; ++i) {
        std::uniform_int_distribution<int> pick(i, K - 1);
        std::swap(idx[i], idx[pick(rng)]);
        pop.known[idx[i]].present = false;
    }
    pop.missing_count = M;

    pop.unknown.reserve(U);
    for (int i = 0; i < U; ++i) {
        TagRecord t;
        t.id = fresh_id();
        t.cls = TagClass::Unknown;
        t.present = true;
        pop.unknown.push_back(t);
    }
    return pop;
}

} // namespace etmti
