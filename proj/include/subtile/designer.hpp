#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "subtile/errors.hpp"
#include "subtile/geometry.hpp"
#include "subtile/interval.hpp"
#include "subtile/sequence.hpp"
#include "subtile/series.hpp"

namespace subtile {

// Parameters of the inverse construction for a prescribed lambda > 2:
//   mu in (0,1) with mu + 1/mu = lambda,
//   C minimal with mu + mu^C <= 1 certified,
//   N = ceil((1-mu)/mu) + 1 (one above the minimal capacity, so that a
//       conservatively small digit can always be absorbed by the tail),
//   mu' = 1/mu - 1/(1-mu^C) >= 0, the mass the digits have to realize.
struct DesignParameters {
    Interval lambda_target;
    Interval mu;
    Interval mu_prime;
    long spike_period_c = 1;
    long digit_cap_n = 1;
};

// Enclosure of the smaller root of x^2 - lambda x + 1, computed directly as
// (lambda - sqrt(lambda^2 - 4))/2 and cross-checked against bisection on the
// increasing form lambda x - x^2 - 1; the two enclosures must intersect.
inline Interval mu_from_lambda(const Interval& lambda, const PrecisionPolicy& pol = {}) {
    if (!(lambda.lo() > Dyadic::of_long(2))) {
        throw InvalidArgument("mu_from_lambda: lambda must exceed 2");
    }
    const Prec p = std::max<Prec>(pol.start, lambda.precision() + 32);
    Interval disc = sub(mul(lambda, lambda, p), Interval::of_long(4), p);
    Interval direct = div(sub(lambda, disc.sqrt(p), p), Interval::of_long(2), p);

    auto f = [&lambda](const Interval& x, const Dyadic&) {
        Prec q = std::max<Prec>(x.precision(), lambda.precision()) + 16;
        return sub(sub(mul(lambda, x, q), mul(x, x, q), q), Interval::of_long(1), q);
    };
    Dyadic target = std::max(Dyadic::mul(direct.width(), Dyadic::of_long(4), 64, MPFR_RNDU),
                             Dyadic::pow2(-static_cast<long>(p)));
    Interval checked = bisect_root(f, Dyadic::of_long(0), Dyadic::of_long(1), target, pol);

    auto meet = Interval::intersect(direct, checked);
    if (!meet) {
        throw InternalInconsistency("mu_from_lambda: quadratic and bisection enclosures disjoint");
    }
    return *meet;
}

inline DesignParameters choose_parameters(const Interval& lambda, const PrecisionPolicy& pol = {}) {
    if (!(lambda.lo() > Dyadic::of_long(2))) {
        throw InvalidArgument("choose_parameters: lambda must exceed 2");
    }

    PrecisionPolicy local = pol;
    Interval mu = mu_from_lambda(lambda, local);
    const Interval one = Interval::of_long(1);

    // smallest C with a certified mu + mu^C <= 1; an undecidable straddle
    // escalates precision and then fails
    long c = 0;
    for (long candidate = 1; candidate <= static_cast<long>(kPrecCap); ++candidate) {
        for (;;) {
            Prec p = mu.precision() + 16;
            Interval s = add(mu, mu.pow_si(candidate, p), p);
            if (s.hi() <= Dyadic::of_long(1)) {
                c = candidate;
                break;
            }
            if (s.lo() > Dyadic::of_long(1)) break;  // certified too large, next C
            if (local.start >= local.cap) {
                throw PrecisionExhausted("choose_parameters: mu + mu^C straddles 1 at the cap");
            }
            local.start = std::min<Prec>(local.start * 2, local.cap);
            mu = mu_from_lambda(lambda, local);
        }
        if (c != 0) break;
    }
    if (c == 0) throw PrecisionExhausted("choose_parameters: no admissible C found");

    // N = ceil((1-mu)/mu) + 1, certified by matching ceilings of both ends
    long n = 0;
    for (;;) {
        Prec p = mu.precision() + 16;
        Interval q = div(sub(one, mu, p), mu, p);
        long cl = q.lo().to_long_ceil();
        long ch = q.hi().to_long_ceil();
        if (cl == ch) {
            n = cl + 1;
            break;
        }
        if (local.start >= local.cap) {
            throw PrecisionExhausted("choose_parameters: (1-mu)/mu straddles an integer at the cap");
        }
        local.start = std::min<Prec>(local.start * 2, local.cap);
        mu = mu_from_lambda(lambda, local);
    }

    Prec p = mu.precision() + 16;
    Interval mu_prime =
        sub(div(one, mu, p), div(one, sub(one, mu.pow_si(c, p), p), p), p);
    if (mu_prime.hi().sgn() < 0) {
        throw InternalInconsistency("choose_parameters: mu' enclosure entirely negative");
    }

    DesignParameters out;
    out.lambda_target = lambda;
    out.mu = mu;
    out.mu_prime = mu_prime;
    out.spike_period_c = c;
    out.digit_cap_n = n;
    return out;
}

struct GreedyDigits {
    std::vector<long> digits;
    Interval residual;
};

// The greedy expansion of mu' in powers of mu with digits capped at N: each
// digit is the largest c with partial + c*mu^i <= mu', decided by certified
// comparisons. When the comparison cannot be certified even at the precision
// cap (an exact tie), the smaller digit is chosen; the enlarged cap N keeps
// the leftover mass absorbable by later digits.
inline GreedyDigits greedy_digits(const DesignParameters& params, unsigned digit_count,
                                  const PrecisionPolicy& pol = {}) {
    PrecisionPolicy local = pol;
    Interval mu = params.mu;
    Interval mu_prime = params.mu_prime;
    const long cap_n = params.digit_cap_n;

    std::vector<long> digits;
    digits.reserve(digit_count + 1);

    auto replay = [&](Prec start) {
        local.start = start;
        mu = mu_from_lambda(params.lambda_target, local);
        Prec p = mu.precision() + 16;
        mu_prime = sub(div(Interval::of_long(1), mu, p),
                       div(Interval::of_long(1),
                           sub(Interval::of_long(1), mu.pow_si(params.spike_period_c, p), p), p),
                       p);
    };

    Interval partial = Interval::of_long(0);
    Interval mu_pow = Interval::of_long(1);
    auto rebuild_state = [&](std::size_t upto) {
        Prec p = mu.precision() + 16;
        partial = Interval::of_long(0);
        mu_pow = Interval::of_long(1);
        for (std::size_t j = 0; j < upto; ++j) {
            partial = add(partial, mul(Interval::of_long(digits[j]), mu_pow, p), p);
            mu_pow = mul(mu_pow, mu, p);
        }
    };

    for (unsigned i = 0; i <= digit_count; ++i) {
        long digit = 0;
        for (;;) {
            Prec p = mu.precision() + 16;
            Interval remaining = sub(mu_prime, partial, p);
            if (mu_prime.is_exact() && partial.is_exact() && remaining.is_exact() &&
                remaining.lo().is_zero()) {
                digit = 0;  // exact zero remainder: every further digit is 0
                break;
            }
            Interval q = div(remaining, mu_pow, p);
            long fl = q.lo().to_long_floor();
            long fh = q.hi().to_long_floor();
            if (fl >= cap_n) {
                digit = cap_n;
                break;
            }
            if (fl == fh || fh <= 0) {
                digit = std::max(0L, fl);
                break;
            }
            if (local.start >= local.cap) {
                digit = std::max(0L, std::min(fl, cap_n));  // conservative tie-break
                break;
            }
            replay(std::min<Prec>(local.start * 2, local.cap));
            rebuild_state(digits.size());
        }
        digits.push_back(digit);
        Prec p = mu.precision() + 16;
        if (digit != 0) {
            partial = add(partial, mul(Interval::of_long(digit), mu_pow, p), p);
        }
        mu_pow = mul(mu_pow, mu, p);
    }

    Prec p = mu.precision() + 16;
    GreedyDigits out;
    out.digits = std::move(digits);
    out.residual = sub(mu_prime, partial, p);
    return out;
}

// The designed coefficient sequence a_i = [C | i] + c_i realizing the
// prescribed lambda up to the reported truncation residual.
struct DesignResult {
    CoefficientSequence seq;
    DesignParameters params;
    GreedyDigits expansion;
};

inline DesignResult design_sequence(const Interval& lambda, unsigned digit_count,
                                    const PrecisionPolicy& pol = {}) {
    DesignParameters params = choose_parameters(lambda, pol);
    GreedyDigits gd = greedy_digits(params, digit_count, pol);
    CoefficientSequence seq =
        CoefficientSequence::designed(params.spike_period_c, gd.digits, params.digit_cap_n + 1);
    require_valid(seq);
    return DesignResult{std::move(seq), std::move(params), std::move(gd)};
}

// lambda argument grammar: "pi", "e", "sqrt:n", "p/q", or a decimal literal.
inline Interval parse_lambda_expression(const std::string& expr, Prec prec) {
    if (expr == "pi") return Interval::pi(prec);
    if (expr == "e") return Interval::euler(prec);
    if (expr.rfind("sqrt:", 0) == 0) {
        unsigned long n = std::stoul(expr.substr(5));
        return Interval::sqrt_ui(n, prec);
    }
    auto slash = expr.find('/');
    if (slash != std::string::npos) {
        mpq_class q(expr.substr(0, slash) + "/" + expr.substr(slash + 1));
        q.canonicalize();
        if (q.get_den() == 0) throw InvalidArgument("parse_lambda_expression: zero denominator");
        return Interval::outward(q, prec);
    }
    return Interval::from_string_outward(expr, prec);
}

}  // namespace subtile
