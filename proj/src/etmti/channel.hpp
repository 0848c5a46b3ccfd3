#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace etmti {

// Received symbol after superposing simultaneous responses. A readable '1'
// survives only when every responder agrees on the bit; any disagreement is x.
enum class Symbol : uint8_t { Zero, One, X };

struct TriStateString {
    std::vector<Symbol> symbols;

    size_t length() const { return symbols.size(); }
    std::string to_string() const; // '0' / '1' / 'x'
};

struct ResponseString {
    std::vector<uint8_t> bits; // 0 or 1 per position
};

// Bitwise superposition of equal-length responses. Empty input yields an
// all-zero string of empty_len (nobody transmitted, the reader hears silence).
TriStateString superpose(const std::vector<ResponseString>& responses, size_t empty_len = 0);

// Occupied positions: One or X. A lone '1' still marks an occupied slot.
int count_active(const TriStateString& msg);

// Air time is charged in whole 96-bit segments of 2.4 ms each.
long segments(long bits);
long segments_real(double bits); // expectation-valued bit counts from the analysis
double transmission_time_ms(long bits);

} // namespace etmti
