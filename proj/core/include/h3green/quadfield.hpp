#pragma once

#include "h3green/rational.hpp"

#include <complex>
#include <vector>

namespace h3green {

struct DiscMismatch : Error {
    using Error::Error;
};

// Element x + y*omega_D of Q(sqrt(D)), omega_D = (D + sqrt(D))/2, with exact
// rational coordinates. D is a negative fundamental discriminant.
class QuadInt {
public:
    QuadInt() : x_(0), y_(0), disc_(0) {}
    QuadInt(Rat x, Rat y, Int disc);

    static QuadInt zero(const Int& disc) { return QuadInt(0, 0, disc); }
    static QuadInt one(const Int& disc) { return QuadInt(1, 0, disc); }
    static QuadInt omega(const Int& disc) { return QuadInt(0, 1, disc); }

    const Rat& x() const { return x_; }
    const Rat& y() const { return y_; }
    const Int& disc() const { return disc_; }

    QuadInt operator+(const QuadInt& o) const;
    QuadInt operator-(const QuadInt& o) const;
    QuadInt operator-() const;
    QuadInt operator*(const QuadInt& o) const;
    QuadInt operator*(const Rat& c) const;
    bool operator==(const QuadInt& o) const;
    bool operator!=(const QuadInt& o) const { return !(*this == o); }

    QuadInt conj() const;
    Rat norm() const;   // z * conj(z), nonnegative for D < 0
    Rat trace() const;  // z + conj(z)

    bool in_ring() const;               // member of O_D
    bool in_inverse_different() const;  // member of d_D^{-1}

    std::complex<double> to_complex() const;

private:
    void check_same(const QuadInt& o) const;
    Rat x_, y_;
    Int disc_;
};

// Canonical representatives of the |D| cosets of d_D^{-1}/O_D, with a negation
// map. Representatives have coordinates in [0,1).
struct DiscGroupField {
    Int disc;
    std::vector<QuadInt> reps;
    std::vector<int> negation;  // index of -reps[i] in reps

    int index_of(const QuadInt& b) const;  // coset of an inverse-different element
};

DiscGroupField discriminant_group_reps(const Int& D);

}  // namespace h3green
