#pragma once

#include <gmpxx.h>

#include <string>

#include "kron/errors.hpp"

namespace kron {

// Arbitrary-precision rational. All exact-arithmetic code in the library
// works on this type; doubles appear only in the dynamics layer.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "p", "-p/q", or a plain integer string into a canonical rational.
Rat parse_rat(const std::string& text);

std::string rat_to_string(const Rat& r);

inline double rat_to_double(const Rat& r) { return r.get_d(); }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

}  // namespace kron
