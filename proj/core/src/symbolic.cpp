#include "h3green/symbolic.hpp"

#include "h3green/arith.hpp"

#include <cmath>
#include <sstream>

namespace h3green {

void SymbolicScalar::insert(const Tag& t, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find(t);
    if (it == terms_.end()) {
        terms_.emplace(t, c);
        return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

SymbolicScalar SymbolicScalar::rational(const Rat& r) {
    SymbolicScalar s;
    s.insert({Kind::One, 0}, r);
    return s;
}

SymbolicScalar SymbolicScalar::pi(const Rat& coeff) {
    SymbolicScalar s;
    s.insert({Kind::Pi, 0}, coeff);
    return s;
}

SymbolicScalar SymbolicScalar::log_prime(long p, const Rat& coeff) {
    if (!is_prime(Int(p))) throw Error("SymbolicScalar: LogPrime tag needs a prime");
    SymbolicScalar s;
    s.insert({Kind::LogPrime, p}, coeff);
    return s;
}

SymbolicScalar SymbolicScalar::l_value(long delta0, const Rat& coeff) {
    if (delta0 <= 1 || !is_fundamental_discriminant(Int(delta0)))
        throw Error("SymbolicScalar: LValue tag needs a fundamental discriminant > 1");
    SymbolicScalar s;
    s.insert({Kind::LValue, delta0}, coeff);
    return s;
}

SymbolicScalar& SymbolicScalar::operator+=(const SymbolicScalar& o) {
    for (const auto& [t, c] : o.terms_) insert(t, c);
    return *this;
}

SymbolicScalar& SymbolicScalar::operator-=(const SymbolicScalar& o) {
    for (const auto& [t, c] : o.terms_) insert(t, -c);
    return *this;
}

SymbolicScalar& SymbolicScalar::operator*=(const Rat& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [t, v] : terms_) v *= c;
    return *this;
}

SymbolicScalar SymbolicScalar::times_pi() const {
    SymbolicScalar out;
    for (const auto& [t, c] : terms_) {
        if (t.kind != Kind::One)
            throw Error("SymbolicScalar::times_pi would leave the constant basis");
        out.insert({Kind::Pi, 0}, c);
    }
    return out;
}

Rat SymbolicScalar::coeff(Kind kind, long arg) const {
    auto it = terms_.find({kind, arg});
    return it == terms_.end() ? Rat(0) : it->second;
}

long double SymbolicScalar::numeric() const {
    const long double pi = 3.141592653589793238462643383279503L;
    long double total = 0.0L;
    for (const auto& [t, c] : terms_) {
        long double base = 0.0L;
        switch (t.kind) {
            case Kind::One: base = 1.0L; break;
            case Kind::Pi: base = pi; break;
            case Kind::LogPrime: base = logl((long double)t.arg); break;
            case Kind::LValue: base = dirichlet_L_at_1(Int(t.arg)); break;
        }
        total += to_ld(c) * base;
    }
    return total;
}

std::string SymbolicScalar::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [t, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.get_str();
        switch (t.kind) {
            case Kind::One: break;
            case Kind::Pi: os << "*pi"; break;
            case Kind::LogPrime: os << "*log(" << t.arg << ")"; break;
            case Kind::LValue: os << "*L(chi_" << t.arg << ",1)"; break;
        }
    }
    return os.str();
}

}  // namespace h3green
