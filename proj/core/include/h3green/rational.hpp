#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace h3green {

using Int = mpz_class;
using Rat = mpq_class;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int mod_euclid(const Int& a, const Int& b) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline long to_long(const Int& a) {
    if (!a.fits_slong_p()) throw Error("integer does not fit in long");
    return a.get_si();
}

inline bool is_perfect_square(const Int& a) {
    return a >= 0 && mpz_perfect_square_p(a.get_mpz_t());
}

inline Int isqrt(const Int& a) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

// Floor of a rational.
inline Int rat_floor(const Rat& q) { return floor_div(q.get_num(), q.get_den()); }

inline Rat parse_rational(const std::string& s) {
    Rat q(s);
    q.canonicalize();
    return q;
}

inline long double to_ld(const Int& a) { return strtold(a.get_str().c_str(), nullptr); }

inline long double to_ld(const Rat& q) { return to_ld(Int(q.get_num())) / to_ld(Int(q.get_den())); }

inline std::string rat_str(const Rat& q) { return q.get_str(); }

// Trial-division factorization, returns (prime, exponent) pairs in increasing order.
std::vector<std::pair<Int, int>> factorize(Int n);

std::vector<Int> divisors(const Int& n);

bool is_prime(const Int& n);

}  // namespace h3green
