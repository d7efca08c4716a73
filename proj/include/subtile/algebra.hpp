#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "subtile/errors.hpp"
#include "subtile/geometry.hpp"
#include "subtile/interval.hpp"
#include "subtile/sequence.hpp"

namespace subtile {

struct IntegerPolynomial {
    std::vector<mpz_class> coeffs;  // ascending degree, leading nonzero

    std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

    Interval eval(const Interval& x, Prec p) const {
        Interval acc = Interval::of_long(0);
        for (std::size_t i = coeffs.size(); i-- > 0;) {
            Interval c = Interval::outward(mpq_class(coeffs[i]), p);
            acc = add(mul(acc, x, p), c, p);
        }
        return acc;
    }

    friend bool operator==(const IntegerPolynomial& a, const IntegerPolynomial& b) = default;
};

namespace detail {

inline void poly_trim(std::vector<mpz_class>& c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

inline std::vector<mpz_class> poly_add(const std::vector<mpz_class>& a,
                                       const std::vector<mpz_class>& b) {
    std::vector<mpz_class> out(std::max(a.size(), b.size()), mpz_class(0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    poly_trim(out);
    return out;
}

inline std::vector<mpz_class> poly_mul(const std::vector<mpz_class>& a,
                                       const std::vector<mpz_class>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<mpz_class> out(a.size() + b.size() - 1, mpz_class(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    poly_trim(out);
    return out;
}

}  // namespace detail

// Exact algebraicity certificate for an eventually periodic sequence with
// preperiod length j and period length k: clearing denominators in
//   1/mu = sum_{i<j} a_i mu^i + (a_j mu^j + ... + a_{j+k-1} mu^{j+k-1})/(1 - mu^k)
// gives the integer polynomial
//   P(x) = x (1 - x^k) Pre(x) + x Per(x) + x^k - 1,
// with P(mu) = 0 and degree at most j + k. Normalized to positive leading
// coefficient; the constant term is -+1 by construction.
inline IntegerPolynomial periodic_certificate(const CoefficientSequence& seq) {
    if (seq.kind() != CoefficientSequence::Kind::EventuallyPeriodic) {
        throw InvalidArgument("periodic_certificate: eventually periodic sequences only");
    }
    require_valid(seq);
    const std::size_t j = seq.preperiod().size();
    const std::size_t k = seq.period().size();

    std::vector<mpz_class> pre(j, mpz_class(0));
    for (std::size_t i = 0; i < j; ++i) pre[i] = seq.preperiod()[i];
    detail::poly_trim(pre);

    std::vector<mpz_class> per(j + k, mpz_class(0));
    for (std::size_t i = 0; i < k; ++i) per[j + i] = seq.period()[i];
    detail::poly_trim(per);

    std::vector<mpz_class> x{mpz_class(0), mpz_class(1)};
    std::vector<mpz_class> one_minus_xk(k + 1, mpz_class(0));
    one_minus_xk[0] = 1;
    one_minus_xk[k] = -1;

    std::vector<mpz_class> p = detail::poly_mul(detail::poly_mul(x, one_minus_xk), pre);
    p = detail::poly_add(p, detail::poly_mul(x, per));
    std::vector<mpz_class> xk_minus_one(k + 1, mpz_class(0));
    xk_minus_one[0] = -1;
    xk_minus_one[k] = 1;
    p = detail::poly_add(p, xk_minus_one);
    detail::poly_trim(p);
    if (p.empty()) throw InternalInconsistency("periodic_certificate: zero polynomial");

    if (p.back() < 0) {
        for (mpz_class& c : p) c = -c;
    }
    return IntegerPolynomial{std::move(p)};
}

// A rational mu = p/q in lowest terms is realizable by an eventually
// periodic sequence only if its certificate (constant term -+1) admits it:
// the rational root theorem forces p | 1. Returns true when obstructed.
inline bool constant_term_obstruction(const mpq_class& mu_rational) {
    mpq_class q = mu_rational;
    q.canonicalize();
    if (!(q > 0 && q < 1)) {
        throw InvalidArgument("constant_term_obstruction: need 0 < mu < 1");
    }
    return q.get_num() != 1;
}

// Enclosure of 1/mu - (3/2)/(1-mu) - T(mu)/2, where T is the +-1
// Thue-Morse generating function evaluated by signed partial sums with the
// tail bounded by mu^{D+1}/(1-mu). The identity holds exactly at the
// Thue-Morse mu, so the residual must contain 0.
inline Interval thue_morse_identity_residual(const Interval& mu, const Dyadic& target_width,
                                             const PrecisionPolicy& pol = {}) {
    if (!(mu.lo().sgn() > 0) || !(mu.hi() < Dyadic::of_long(1))) {
        throw InvalidArgument("thue_morse_identity_residual: mu must lie in (0,1)");
    }
    // depth from the signed tail bound (coefficients have modulus 1)
    std::uint64_t depth = 4;
    const Prec tp = 96;
    while (detail::series_tail_bound(1, mu.hi(), depth, tp) >
           Dyadic::mul(target_width, Dyadic::pow2(-2), 64, MPFR_RNDD)) {
        depth = depth * 2 + 16;
        if (depth > (1u << 26)) {
            throw PrecisionExhausted("thue_morse_identity_residual: depth cap reached");
        }
    }
    Dyadic tail = detail::series_tail_bound(1, mu.hi(), depth, tp);
    Interval tail_box(tail.neg(), tail);

    return refine_to_width(target_width, pol, [&](Prec p) {
        Interval t = Interval::of_long(0);
        for (std::uint64_t n = depth + 1; n-- > 0;) {
            long tn = thue_morse_coefficient(n) == 2 ? 1 : -1;
            t = add(mul(t, mu, p), Interval::of_long(tn), p);
        }
        t = add(t, tail_box, p);
        Interval one = Interval::of_long(1);
        Interval lhs = div(one, mu, p);
        Interval mid = div(Interval::outward(mpq_class(3, 2), p), sub(one, mu, p), p);
        Interval half_t = div(t, Interval::of_long(2), p);
        return sub(sub(lhs, mid, p), half_t, p);
    });
}

inline Interval thue_morse_consistency(const InflationData& data, const Dyadic& target_width,
                                       const PrecisionPolicy& pol = {}) {
    if (data.seq.kind() != CoefficientSequence::Kind::ThueMorse) {
        throw InvalidArgument("thue_morse_consistency: data must come from the Thue-Morse sequence");
    }
    return thue_morse_identity_residual(data.mu, target_width, pol);
}

}  // namespace subtile
