#include "h3green/quadfield.hpp"

#include "h3green/arith.hpp"

#include <cmath>

namespace h3green {

QuadInt::QuadInt(Rat x, Rat y, Int disc) : x_(std::move(x)), y_(std::move(y)), disc_(std::move(disc)) {
    if (disc_ >= 0 || !is_fundamental_discriminant(disc_))
        throw Error("QuadInt: disc must be a negative fundamental discriminant");
}

void QuadInt::check_same(const QuadInt& o) const {
    if (disc_ != o.disc_) throw DiscMismatch("QuadInt: discriminant mismatch");
}

QuadInt QuadInt::operator+(const QuadInt& o) const {
    check_same(o);
    return QuadInt(x_ + o.x_, y_ + o.y_, disc_);
}

QuadInt QuadInt::operator-(const QuadInt& o) const {
    check_same(o);
    return QuadInt(x_ - o.x_, y_ - o.y_, disc_);
}

QuadInt QuadInt::operator-() const { return QuadInt(-x_, -y_, disc_); }

QuadInt QuadInt::operator*(const QuadInt& o) const {
    check_same(o);
    // omega^2 = D*omega + (D - D^2)/4
    Rat D(disc_);
    Rat c = (D - D * D) / 4;
    Rat nx = x_ * o.x_ + y_ * o.y_ * c;
    Rat ny = x_ * o.y_ + y_ * o.x_ + y_ * o.y_ * D;
    return QuadInt(nx, ny, disc_);
}

QuadInt QuadInt::operator*(const Rat& c) const { return QuadInt(x_ * c, y_ * c, disc_); }

bool QuadInt::operator==(const QuadInt& o) const {
    return disc_ == o.disc_ && x_ == o.x_ && y_ == o.y_;
}

QuadInt QuadInt::conj() const { return QuadInt(x_ + y_ * Rat(disc_), -y_, disc_); }

Rat QuadInt::trace() const { return 2 * x_ + y_ * Rat(disc_); }

Rat QuadInt::norm() const {
    Rat D(disc_);
    return x_ * x_ + D * x_ * y_ + y_ * y_ * (D * D - D) / 4;
}

bool QuadInt::in_ring() const { return is_integer(x_) && is_integer(y_); }

bool QuadInt::in_inverse_different() const {
    // sqrt(D)*(x + y*omega) = (-Dx + y(D - D^2)/2) + (2x + yD)*omega
    Rat D(disc_);
    Rat u = -D * x_ + y_ * (D - D * D) / 2;
    Rat v = 2 * x_ + y_ * D;
    return is_integer(u) && is_integer(v);
}

std::complex<double> QuadInt::to_complex() const {
    double D = disc_.get_d();
    double xr = to_ld(x_);
    double yr = to_ld(y_);
    return {xr + yr * D / 2.0, yr * std::sqrt(-D) / 2.0};
}

int DiscGroupField::index_of(const QuadInt& b) const {
    if (!b.in_inverse_different()) throw Error("index_of: element not in the inverse different");
    Rat fx = b.x() - Rat(rat_floor(b.x()));
    Rat fy = b.y() - Rat(rat_floor(b.y()));
    for (size_t i = 0; i < reps.size(); ++i) {
        if (reps[i].x() == fx && reps[i].y() == fy) return (int)i;
    }
    throw Error("index_of: coset representative not found");
}

DiscGroupField discriminant_group_reps(const Int& D) {
    DiscGroupField g;
    g.disc = D;
    long ad = to_long(abs(D));
    long den = 2 * ad;
    for (long i = 0; i < den; ++i) {
        for (long j = 0; j < den; ++j) {
            Rat rx(i, den), ry(j, den);
            rx.canonicalize();
            ry.canonicalize();
            QuadInt z(rx, ry, D);
            if (z.in_inverse_different()) g.reps.push_back(z);
        }
    }
    if ((long)g.reps.size() != ad) throw Error("discriminant_group_reps: wrong coset count");
    g.negation.resize(g.reps.size());
    for (size_t i = 0; i < g.reps.size(); ++i) g.negation[i] = g.index_of(-g.reps[i]);
    return g;
}

}  // namespace h3green
