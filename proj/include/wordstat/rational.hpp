/**
 * Exact rational arithmetic helpers.
 *
 * Thin layer over GMP's mpq_class: parsing/printing in the "p/q" text form
 * used throughout the library, plus exact binomials and factorials.
 */
#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace wordstat {

using Rat = mpq_class;
using Int = mpz_class;

/** Exact factorial n! (n >= 0). */
inline Int factorial(long n) {
    if (n < 0) throw std::invalid_argument("factorial: negative argument");
    Int r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

/** Exact binomial coefficient C(n, k); 0 when k < 0 or k > n (n >= 0). */
inline Int binom(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(k));
    return r;
}

/** Parse "p", "-p", or "p/q" into an exact rational. */
inline Rat rat_parse(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("rat_parse: bad rational '" + s + "'");
    r.canonicalize();
    return r;
}

/** Print as "p" (integer) or "p/q" (canonical lowest terms). */
inline std::string rat_str(const Rat& r) { return r.get_str(); }

}  // namespace wordstat
