#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "subtile/algebra.hpp"

using subtile::CoefficientSequence;
using subtile::Dyadic;
using subtile::IntegerPolynomial;
using subtile::Interval;

namespace {

Dyadic width_of(const char* s) { return Dyadic::from_string(s, 96, MPFR_RNDD); }

std::vector<mpz_class> z(std::initializer_list<long> v) {
    std::vector<mpz_class> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

}  // namespace

TEST_CASE("certificate of the all-ones sequence is 2x - 1") {
    auto seq = CoefficientSequence::periodic({1});
    IntegerPolynomial p = periodic_certificate(seq);
    CHECK(p.coeffs == z({-1, 2}));
    auto d = solve_mu(seq);
    CHECK(p.eval(d.mu, 256).contains_zero());
}

TEST_CASE("certificate of (2,1,1,...) is x^2 - 3x + 1") {
    auto seq = CoefficientSequence::eventually_periodic({2}, {1});
    IntegerPolynomial p = periodic_certificate(seq);
    CHECK(p.coeffs == z({1, -3, 1}));
    auto d = solve_mu(seq);
    CHECK(p.eval(d.mu, 256).contains_zero());
}

TEST_CASE("certificate of the period-2 sequence (2,1) is 2x^2 + 2x - 1") {
    auto seq = CoefficientSequence::periodic({2, 1});
    IntegerPolynomial p = periodic_certificate(seq);
    CHECK(p.coeffs == z({-1, 2, 2}));
    auto d = solve_mu(seq);
    CHECK(p.eval(d.mu, 256).contains_zero());
}

TEST_CASE("degenerate presentations certify the same root") {
    // the period block repeats the preperiod tail: both presentations give
    // the same polynomial after normalization
    auto short_form = CoefficientSequence::periodic({1});
    auto long_form = CoefficientSequence::eventually_periodic({1}, {1});
    IntegerPolynomial a = periodic_certificate(short_form);
    IntegerPolynomial b = periodic_certificate(long_form);
    CHECK(a == b);

    auto doubled = CoefficientSequence::periodic({1, 1});
    IntegerPolynomial c = periodic_certificate(doubled);
    auto d = solve_mu(short_form);
    CHECK(c.eval(d.mu, 256).contains_zero());
}

TEST_CASE("random eventually periodic certificates vanish at mu") {
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<int> jlen(0, 5), klen(1, 6), digit(0, 4);
    int done = 0;
    while (done < 25) {
        std::vector<long> pre(jlen(rng)), period(klen(rng));
        for (auto& v : pre) v = digit(rng);
        for (auto& v : period) v = digit(rng);
        auto seq = CoefficientSequence::eventually_periodic(pre, period);
        if (!validate(seq).ok) continue;
        ++done;

        IntegerPolynomial p = periodic_certificate(seq);
        CHECK(p.degree() <= pre.size() + period.size() + 1);
        mpz_class c0 = p.coeffs.front();
        CHECK((c0 == 1 || c0 == -1));
        auto d = solve_mu(seq);
        CHECK(p.eval(d.mu, 320).contains_zero());
    }
}

TEST_CASE("rational constant-term obstruction") {
    CHECK(subtile::constant_term_obstruction(mpq_class(2, 5)));
    CHECK(!subtile::constant_term_obstruction(mpq_class(1, 2)));
    CHECK(!subtile::constant_term_obstruction(mpq_class(1, 3)));
    CHECK(subtile::constant_term_obstruction(mpq_class(3, 7)));
    CHECK(subtile::constant_term_obstruction(mpq_class(4, 6)));  // reduces to 2/3
    CHECK_THROWS_AS(subtile::constant_term_obstruction(mpq_class(7, 5)),
                    subtile::InvalidArgument);
}

TEST_CASE("thue-morse generating function identity holds at mu") {
    auto d = solve_mu(CoefficientSequence::thue_morse());
    Interval r = thue_morse_consistency(d, width_of("1e-20"));
    CHECK(r.contains_zero());
    CHECK(r.width() <= width_of("1e-20"));

    Interval finer = thue_morse_consistency(d, width_of("1e-28"));
    CHECK(finer.contains_zero());
    CHECK(finer.width() < r.width());
}

TEST_CASE("the identity fails off the true mu") {
    auto d = solve_mu(CoefficientSequence::thue_morse());
    Interval bump = Interval::from_string_outward("1e-6", 128);
    Interval shifted = d.mu + bump;
    Interval r = subtile::thue_morse_identity_residual(shifted, width_of("1e-20"));
    CHECK(!r.contains_zero());
}

TEST_CASE("thue-morse functional equation T(z) = (1-z) T(z^2) at mu") {
    auto d = solve_mu(CoefficientSequence::thue_morse());
    const subtile::Prec p = 256;
    const std::uint64_t depth = 400;

    auto tm_partial = [&](const Interval& x) {
        Interval t = Interval::of_long(0);
        for (std::uint64_t n = depth + 1; n-- > 0;) {
            long tn = subtile::thue_morse_coefficient(n) == 2 ? 1 : -1;
            t = add(mul(t, x, p), Interval::of_long(tn), p);
        }
        Dyadic tail = subtile::detail::series_tail_bound(1, x.hi(), depth, 96);
        return add(t, Interval(tail.neg(), tail), p);
    };

    Interval mu2 = mul(d.mu, d.mu, p);
    Interval lhs = tm_partial(d.mu);
    Interval rhs = mul(sub(Interval::of_long(1), d.mu, p), tm_partial(mu2), p);
    CHECK(sub(lhs, rhs, p).contains_zero());
}

TEST_CASE("certificate requires an eventually periodic sequence") {
    CHECK_THROWS_AS(periodic_certificate(CoefficientSequence::thue_morse()),
                    subtile::InvalidArgument);
    CHECK_THROWS_AS(thue_morse_consistency(solve_mu(CoefficientSequence::periodic({1})),
                                           width_of("1e-10")),
                    subtile::InvalidArgument);
}
