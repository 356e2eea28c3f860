#pragma once

#include <gmpxx.h>

#include <string>

namespace fil {

using Integer = mpz_class;
using Rational = mpq_class;

inline bool is_integer(const Rational& r) { return mpz_cmp_ui(r.get_den().get_mpz_t(), 1) == 0; }

inline std::string to_string(const Rational& r) { return r.get_str(); }

} // namespace fil
