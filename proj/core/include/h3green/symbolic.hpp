#pragma once

#include "h3green/rational.hpp"

#include <map>
#include <string>

namespace h3green {

// Exact Q-linear combination over the constant basis {1, pi, log p, L(chi_{d0},1)}.
// The numeric evaluation homomorphism is linear by construction.
class SymbolicScalar {
public:
    enum class Kind { One = 0, Pi = 1, LogPrime = 2, LValue = 3 };

    struct Tag {
        Kind kind;
        long arg;  // prime p for LogPrime, fundamental discriminant for LValue
        bool operator<(const Tag& o) const {
            if (kind != o.kind) return kind < o.kind;
            return arg < o.arg;
        }
        bool operator==(const Tag& o) const { return kind == o.kind && arg == o.arg; }
    };

    SymbolicScalar() = default;

    static SymbolicScalar rational(const Rat& r);
    static SymbolicScalar pi(const Rat& coeff = 1);
    static SymbolicScalar log_prime(long p, const Rat& coeff = 1);
    static SymbolicScalar l_value(long delta0, const Rat& coeff = 1);

    SymbolicScalar& operator+=(const SymbolicScalar& o);
    SymbolicScalar& operator-=(const SymbolicScalar& o);
    SymbolicScalar& operator*=(const Rat& c);
    friend SymbolicScalar operator+(SymbolicScalar a, const SymbolicScalar& b) { return a += b; }
    friend SymbolicScalar operator-(SymbolicScalar a, const SymbolicScalar& b) { return a -= b; }
    friend SymbolicScalar operator*(SymbolicScalar a, const Rat& c) { return a *= c; }
    friend SymbolicScalar operator*(const Rat& c, SymbolicScalar a) { return a *= c; }

    // Multiplies every term by pi. Only legal while no term already carries a
    // transcendental tag that would leave the basis; terms tagged One become Pi.
    SymbolicScalar times_pi() const;

    bool operator==(const SymbolicScalar& o) const { return terms_ == o.terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Rational coefficient of a given basis constant (0 if absent).
    Rat coeff(Kind kind, long arg = 0) const;

    const std::map<Tag, Rat>& terms() const { return terms_; }

    long double numeric() const;
    std::string str() const;

private:
    void insert(const Tag& t, const Rat& c);
    std::map<Tag, Rat> terms_;
};

}  // namespace h3green
