#include <catch2/catch_amalgamated.hpp>

#include <gmpxx.h>

#include <bit>
#include <random>

#include "subtile/series.hpp"

using subtile::Dyadic;
using subtile::Interval;
using subtile::SeriesSpec;

namespace {

SeriesSpec constant_ones() {
    return SeriesSpec{[](std::uint64_t) { return 1L; }, 1, 0};
}

long thue_morse_coeff(std::uint64_t n) {
    return std::popcount(n) % 2 == 0 ? 2 : 1;
}

Dyadic width_of(const char* s) { return Dyadic::from_string(s, 96, MPFR_RNDD); }

}  // namespace

TEST_CASE("geometric series sums to 2 at x = 1/2") {
    Interval half = Interval::outward(mpq_class(1, 2), 96);
    Interval v = subtile::eval_series(constant_ones(), half, width_of("1e-20"));
    CHECK(v.contains(mpq_class(2)));
    CHECK(v.width() <= width_of("1e-20"));
}

TEST_CASE("zero series evaluates to the exact point 0") {
    SeriesSpec zero{[](std::uint64_t) { return 0L; }, 0, 0};
    Interval half = Interval::outward(mpq_class(1, 2), 96);
    Interval v = subtile::eval_series(zero, half, width_of("1e-30"));
    CHECK(v.lo() == Dyadic::of_long(0));
    CHECK(v.hi() == Dyadic::of_long(0));
}

TEST_CASE("thue-morse coefficients at x = 1/4 against exact partial sums") {
    SeriesSpec tm{[](std::uint64_t n) { return thue_morse_coeff(n); }, 2, 0};
    Interval quarter = Interval::outward(mpq_class(1, 4), 160);
    Interval v = subtile::eval_series(tm, quarter, width_of("1e-40"));

    // Independent oracle: exact rational partial sum to depth 200, tail in
    // [0, 2 * (1/4)^201 / (3/4)].
    mpq_class x(1, 4), partial = 0, xp = 1;
    for (std::uint64_t n = 0; n <= 200; ++n) {
        partial += thue_morse_coeff(n) * xp;
        xp *= x;
    }
    mpq_class tail_hi = 2 * xp / mpq_class(3, 4);  // xp == (1/4)^201 here
    CHECK(v.hi() >= Interval::outward(partial, 256).lo());
    CHECK(Interval::outward(partial + tail_hi, 256).hi() >= v.lo());
    CHECK(v.width() <= width_of("1e-40"));
    // 50-digit value pinned from the oracle above.
    CHECK(v.contains(Interval::from_string_outward(
        "2.3501838654395696088665545269661788676420865021769", 256)));
}

TEST_CASE("eventually-zero provider matches the exact polynomial value") {
    // 1 + 3x + 2x^5
    SeriesSpec poly{[](std::uint64_t n) -> long {
                        if (n == 0) return 1;
                        if (n == 1) return 3;
                        if (n == 5) return 2;
                        return 0;
                    },
                    3, 0};
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<long> num(1, 99);
    for (int t = 0; t < 100; ++t) {
        mpq_class q(num(rng), 100);
        q.canonicalize();
        Interval x = Interval::outward(q, 128);
        Interval v = subtile::eval_series(poly, x, width_of("1e-25"));
        mpq_class want = 1 + 3 * q + 2 * q * q * q * q * q;
        CHECK(v.contains(want));
        CHECK(v.width() <= width_of("1e-25"));
    }
}

TEST_CASE("series with nonzero start index") {
    // sum_{i>=3} x^i = x^3/(1-x) at x = 1/2 -> 1/4
    SeriesSpec tail{[](std::uint64_t) { return 1L; }, 1, 3};
    Interval half = Interval::outward(mpq_class(1, 2), 96);
    Interval v = subtile::eval_series(tail, half, width_of("1e-20"));
    CHECK(v.contains(mpq_class(1, 4)));
}

TEST_CASE("x at or above 1 is non-convergent") {
    Interval one = Interval::of_long(1);
    CHECK_THROWS_AS(subtile::eval_series(constant_ones(), one, width_of("1e-10")),
                    subtile::NonConvergent);
    Interval neg(Dyadic::of_long(-1), Dyadic::from_string("0.5", 64, MPFR_RNDU));
    CHECK_THROWS_AS(subtile::eval_series(constant_ones(), neg, width_of("1e-10")),
                    subtile::InvalidArgument);
}

TEST_CASE("coefficient outside the declared bound is rejected on access") {
    SeriesSpec bad{[](std::uint64_t n) { return n == 7 ? 9L : 1L; }, 2, 0};
    Interval x = Interval::outward(mpq_class(1, 2), 96);
    CHECK_THROWS_AS(subtile::eval_series(bad, x, width_of("1e-20")), subtile::InvalidArgument);
}

TEST_CASE("monotone refinement of series enclosures") {
    std::mt19937_64 rng(10101);
    std::uniform_int_distribution<long> num(10, 90);
    SeriesSpec tm{[](std::uint64_t n) { return thue_morse_coeff(n); }, 2, 0};
    for (int t = 0; t < 60; ++t) {
        mpq_class q(num(rng), 100);
        q.canonicalize();
        Interval x = Interval::outward(q, 192);
        Interval coarse = subtile::eval_series(tm, x, width_of("1e-12"));
        Interval fine = subtile::eval_series(tm, x, width_of("1e-24"));
        CHECK(coarse.contains(fine));
    }
}

TEST_CASE("bisect_root on a linear function") {
    auto f = [](const Interval& x, const Dyadic&) {
        return x * Interval::of_long(2) - Interval::of_long(1);
    };
    Interval r = subtile::bisect_root(f, Dyadic::of_long(0), Dyadic::of_long(1), width_of("1e-30"));
    CHECK(r.contains(mpq_class(1, 2)));
    CHECK(r.width() <= width_of("1e-30"));
}

TEST_CASE("bisect_root on the increasing form of x^2 - 3x + 1") {
    // x^2 - 3x + 1 decreases on (0,1); its negation increases and has the
    // same root (3 - sqrt(5)) / 2 there.
    auto f = [](const Interval& x, const Dyadic&) {
        subtile::Prec p = x.precision() + 8;
        return sub(sub(mul(x, Interval::of_long(3), p), x.pow_si(2, p), p), Interval::of_long(1),
                   p);
    };
    Interval r = subtile::bisect_root(f, Dyadic::of_long(0), Dyadic::of_long(1), width_of("1e-35"));
    Interval want = Interval::from_string_outward(
        "0.381966011250105151795413165634361882279690820194237137864551", 256);
    CHECK(r.contains(want));
    CHECK(r.width() <= width_of("1e-35"));
}

TEST_CASE("bisect_root through a certified series evaluation") {
    // f(x) = x * sum_i x^i - 1 has the closed-form root 1/2 (a dyadic point,
    // which exercises the midpoint-ambiguity fallback).
    auto f = [](const Interval& x, const Dyadic& w) {
        return mul(x, subtile::eval_series(constant_ones(), x, w), x.precision() + 8) -
               Interval::of_long(1);
    };
    Interval r = subtile::bisect_root(f, Dyadic::from_string("0.01", 64, MPFR_RNDD),
                                      Dyadic::from_string("0.9", 64, MPFR_RNDU), width_of("1e-30"));
    CHECK(r.contains(mpq_class(1, 2)));
    CHECK(r.width() <= width_of("1e-30"));
}

TEST_CASE("bisect_root refinement nests") {
    auto f = [](const Interval& x, const Dyadic&) {
        subtile::Prec p = x.precision() + 8;
        return sub(sub(mul(x, Interval::of_long(3), p), x.pow_si(2, p), p), Interval::of_long(1),
                   p);
    };
    Interval coarse =
        subtile::bisect_root(f, Dyadic::of_long(0), Dyadic::of_long(1), width_of("1e-10"));
    Interval fine =
        subtile::bisect_root(f, Dyadic::of_long(0), Dyadic::of_long(1), width_of("1e-40"));
    CHECK(coarse.contains(fine));
}

TEST_CASE("bisect_root rejects a bracket without sign change") {
    auto f = [](const Interval& x, const Dyadic&) { return x + Interval::of_long(1); };
    CHECK_THROWS_AS(
        subtile::bisect_root(f, Dyadic::of_long(0), Dyadic::of_long(1), width_of("1e-10")),
        subtile::NoSignChange);
}
