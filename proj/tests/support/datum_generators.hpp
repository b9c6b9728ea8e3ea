#pragma once

#include "fpsyn/standard_data.hpp"
#include "generators.hpp"

namespace fpsyn::testgen {

/// Random valid datum: a random module as H^1, optionally with an acyclic pair
/// in degrees (0, 1) whose filtration jump is random.
inline HKDatum random_datum(Gen& gen, const Field& f, long p, std::size_t n) {
    HKDatum d = datum_from_module(gen.module(f, p, n, gen.coin()));
    if (gen.coin()) {
        d = with_acyclic_pair(d, 0, gen.nonzero_elem(f, 3), gen.integer(0, 1));
    }
    return d;
}

inline HKDatumPtr share(HKDatum d) { return std::make_shared<const HKDatum>(std::move(d)); }

} // namespace fpsyn::testgen
