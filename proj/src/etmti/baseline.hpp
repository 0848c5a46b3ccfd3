#pragma once
#include <cstdint>

#include "core.hpp"
#include "tsmti.hpp"

namespace etmti {

// Framed-Aloha verification round used as the comparison point. Each frame the
// reader sizes f to the unverified remainder, broadcasts the expected slot
// map, then polls every expected-singleton slot one reply segment at a time.
// Tags in expected collisions carry over to the next frame; unknowns answer
// any poll they land in (and then stay quiet), which is what lets them mask a
// missing tag here too.
RoundReport run_aloha_baseline(Population& pop, double frame_factor, uint64_t seed,
                               const Hasher& hasher = default_hasher());

} // namespace etmti
