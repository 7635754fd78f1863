#include <doctest.h>

#include "h3green/quadfield.hpp"

#include <random>

using namespace h3green;

TEST_CASE("gaussian integer arithmetic") {
    // 1 + i over D = -4: i = omega + 2
    QuadInt one_plus_i(Rat(3), Rat(1), -4);
    CHECK(one_plus_i.norm() == 2);
    CHECK(one_plus_i.in_ring());

    QuadInt w = QuadInt::omega(-4);
    CHECK(w.trace() == -4);
    CHECK(w.conj().conj() == w);

    // (1+i)/2 lies in the inverse different
    QuadInt half(Rat(3, 2), Rat(1, 2), -4);
    CHECK(half.in_inverse_different());
    CHECK(!half.in_ring());

    QuadInt z1(Rat(1), Rat(2), -4), z2(Rat(3), Rat(-1), -4);
    CHECK((z1 * z2).norm() == z1.norm() * z2.norm());
    CHECK((z1 + z2).trace() == z1.trace() + z2.trace());

    QuadInt other(Rat(1), Rat(0), -8);
    CHECK_THROWS_AS((void)(z1 + other), DiscMismatch);
}

TEST_CASE("conjugation fixes the ring and different membership") {
    std::mt19937 rng(3);
    for (long D : {-4L, -8L, -3L, -7L, -11L}) {
        for (int i = 0; i < 20; ++i) {
            Rat x((long)(rng() % 19) - 9, (long)(rng() % 3) + 1);
            Rat y((long)(rng() % 19) - 9, (long)(rng() % 3) + 1);
            x.canonicalize();
            y.canonicalize();
            QuadInt z(x, y, D);
            CHECK(z.conj().conj() == z);
            CHECK(z.norm() == z.conj().norm());
            CHECK(z.norm() >= 0);
            CHECK(z.in_inverse_different() == z.conj().in_inverse_different());
        }
    }
}

TEST_CASE("discriminant group has |D| cosets") {
    for (long D : {-4L, -3L, -8L, -7L, -11L}) {
        DiscGroupField g = discriminant_group_reps(D);
        CHECK((long)g.reps.size() == -D);
        // negation fixes the zero coset
        CHECK(g.negation[0] == 0);
        // negation is an involution
        for (size_t i = 0; i < g.reps.size(); ++i) CHECK(g.negation[g.negation[i]] == (int)i);
    }
}

TEST_CASE("duality: trace pairing integral exactly on the inverse different") {
    std::mt19937 rng(17);
    for (long D : {-4L, -8L, -3L}) {
        DiscGroupField g = discriminant_group_reps(D);
        for (int i = 0; i < 100; ++i) {
            const QuadInt& r = g.reps[rng() % g.reps.size()];
            QuadInt s(Rat((long)(rng() % 21) - 10), Rat((long)(rng() % 21) - 10), D);
            REQUIRE(s.in_ring());
            CHECK(is_integer((r * s.conj()).trace()));
        }
        // and an element outside the inverse different fails for some s
        QuadInt bad(Rat(1, 3), Rat(0), D);
        CHECK(!bad.in_inverse_different());
        bool some_nonintegral = false;
        for (long k = 0; k < 5 && !some_nonintegral; ++k) {
            QuadInt s(Rat(k), Rat(1), D);
            if (!is_integer((bad * s.conj()).trace())) some_nonintegral = true;
        }
        CHECK(some_nonintegral);
    }
}
