#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace flowcert {

// Exact rational weights. Every double is a dyadic rational, so numeric
// pipelines embed exactly; all graph algebra downstream is exact.
using Rat = mpq_class;

inline Rat rat_from_double(double x) {
    Rat q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

inline double rat_to_double(const Rat& q) { return q.get_d(); }

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

// Parses "p/q", "p", or a plain decimal like "-0.125" (exact).
inline Rat rat_parse(const std::string& s) {
    if (s.find('/') != std::string::npos) {
        Rat q(s);
        q.canonicalize();
        return q;
    }
    auto dot = s.find('.');
    auto exp = s.find_first_of("eE");
    if (dot == std::string::npos && exp == std::string::npos) {
        Rat q(s);
        q.canonicalize();
        return q;
    }
    // Decimal or scientific: go through strtod; doubles are exact rationals.
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad rational literal: " + s);
    return rat_from_double(v);
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline bool rat_is_integer(const Rat& q) { return q.get_den() == 1; }

// Nearest integer (ties toward +inf); used for integrality checks.
inline mpz_class rat_round(const Rat& q) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    Rat frac = q - Rat(fl);
    return frac * 2 >= 1 ? mpz_class(fl + 1) : fl;
}

inline mpz_class rat_floor(const Rat& q) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return fl;
}

inline mpz_class rat_ceil(const Rat& q) {
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return c;
}

// gcd generator of a set of rationals: gcd(n_i * L/d_i) / L with L = lcm(d_i).
// Returns 0 for an empty or all-zero set.
inline Rat rat_gcd(const Rat& a, const Rat& b) {
    if (a == 0) return rat_abs(b);
    if (b == 0) return rat_abs(a);
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), a.get_den().get_mpz_t(), b.get_den().get_mpz_t());
    mpz_class na = a.get_num() * (l / a.get_den());
    mpz_class nb = b.get_num() * (l / b.get_den());
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), na.get_mpz_t(), nb.get_mpz_t());
    Rat r{g, l};
    r.canonicalize();
    return r;
}

// Snap to a multiple of 2^-bits. Numeric cochains are quantized once at
// pull-back so every later comparison is exact and deterministic.
inline Rat rat_quantize(double x, int bits = 40) {
    mpz_class den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);
    double scaled = x * static_cast<double>(1ULL << (bits >= 63 ? 62 : bits));
    (void)scaled;
    Rat exact = rat_from_double(x);
    Rat num = exact * Rat(den);
    mpz_class n = rat_round(num);
    Rat r{n, den};
    r.canonicalize();
    return r;
}

}  // namespace flowcert
