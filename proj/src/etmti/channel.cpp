#include "channel.hpp"

#include <cmath>
#include <stdexcept>

#include "core.hpp"

namespace etmti {

std::string TriStateString::to_string() const {
    std::string s;
    s.reserve(symbols.size());
    for (Symbol sym : symbols)
        s += (sym == Symbol::Zero ? '0' : sym == Symbol::One ? '1' : 'x');
    return s;
}

TriStateString superpose(const std::vector<ResponseString>& responses, size_t empty_len) {
    TriStateString out;
    if (responses.empty()) {
        out.symbols.assign(empty_len, Symbol::Zero);
        return out;
    }
    const size_t n = responses.front().bits.size();
    for (const auto& r : responses)
        if (r.bits.size() != n)
            throw std::invalid_argument("superpose: responses must have equal length");

    out.symbols.resize(n);
    for (size_t i = 0; i < n; ++i) {
        size_t ones = 0;
        for (const auto& r : responses)
            ones += r.bits[i];
        if (ones == 0)
            out.symbols[i] = Symbol::Zero;
        else if (ones == responses.size())
            out.symbols[i] = Symbol::One;
        else
            out.symbols[i] = Symbol::X;
    }
    return out;
}

int count_active(const TriStateString& msg) {
    int n = 0;
    for (Symbol s : msg.symbols)
        n += (s != Symbol::Zero);
    return n;
}

long segments(long bits) {
    if (bits <= 0)
        return 0;
    return (bits + TimeLedger::segment_bits - 1) / TimeLedger::segment_bits;
}

long segments_real(double bits) {
    if (bits <= 0.0)
        return 0;
    return static_cast<long>(std::ceil(bits / TimeLedger::segment_bits - 1e-12));
}

double transmission_time_ms(long bits) {
    return segments(bits) * TimeLedger::t_id_ms;
}

} // namespace etmti
