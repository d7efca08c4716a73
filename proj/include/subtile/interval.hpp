#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <optional>
#include <string>
#include <utility>

#include "subtile/dyadic.hpp"
#include "subtile/errors.hpp"

namespace subtile {

// A certified real: the closed dyadic interval [lo, hi]. Every operation
// rounds outward (lo with MPFR_RNDD, hi with MPFR_RNDU), so the true result
// of operating on any reals inside the operand intervals lies inside the
// result interval. Widths are never silently dropped; a caller that needs a
// tighter enclosure recomputes at higher precision.
class Interval {
  public:
    Interval() : lo_(), hi_() {}

    Interval(Dyadic lo, Dyadic hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (!lo_.is_finite() || !hi_.is_finite() || hi_ < lo_) {
            throw InvalidArgument("Interval: endpoints must be finite with lo <= hi");
        }
    }

    static Interval exact(const Dyadic& d) { return Interval(d, d); }
    static Interval of_long(long v) { return exact(Dyadic::of_long(v)); }

    static Interval outward(const mpq_class& q, Prec prec) {
        Dyadic lo(prec), hi(prec);
        mpfr_set_q(lo.raw(), q.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(hi.raw(), q.get_mpq_t(), MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }

    static Interval from_string_outward(const std::string& s, Prec prec) {
        return Interval(Dyadic::from_string(s, prec, MPFR_RNDD),
                        Dyadic::from_string(s, prec, MPFR_RNDU));
    }

    static Interval pi(Prec prec) {
        Dyadic lo(prec), hi(prec);
        mpfr_const_pi(lo.raw(), MPFR_RNDD);
        mpfr_const_pi(hi.raw(), MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }

    static Interval euler(Prec prec) {
        Dyadic one = Dyadic::of_long(1);
        Dyadic lo(prec), hi(prec);
        mpfr_exp(lo.raw(), one.raw(), MPFR_RNDD);
        mpfr_exp(hi.raw(), one.raw(), MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }

    static Interval sqrt_ui(unsigned long n, Prec prec) {
        Dyadic lo(prec), hi(prec);
        mpfr_sqrt_ui(lo.raw(), n, MPFR_RNDD);
        mpfr_sqrt_ui(hi.raw(), n, MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }

    const Dyadic& lo() const { return lo_; }
    const Dyadic& hi() const { return hi_; }

    Prec precision() const { return std::max(lo_.precision(), hi_.precision()); }

    // Upper bound on the true width.
    Dyadic width() const { return Dyadic::sub(hi_, lo_, precision(), MPFR_RNDU); }

    Dyadic midpoint() const {
        Prec p = precision() + 1;
        return Dyadic::div(Dyadic::add(lo_, hi_, p, MPFR_RNDN), Dyadic::of_long(2), p, MPFR_RNDN);
    }

    bool is_exact() const { return lo_ == hi_; }
    bool contains_zero() const { return lo_.sgn() <= 0 && hi_.sgn() >= 0; }

    bool contains(const Dyadic& d) const { return lo_ <= d && d <= hi_; }

    bool contains(const mpq_class& q) const {
        return mpfr_cmp_q(lo_.raw(), q.get_mpq_t()) <= 0 &&
               mpfr_cmp_q(hi_.raw(), q.get_mpq_t()) >= 0;
    }

    bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }

    // Certified order: true only when every point of *this is below every
    // point of o.
    bool certainly_less(const Interval& o) const { return hi_ < o.lo_; }

    friend Interval add(const Interval& a, const Interval& b, Prec prec) {
        return Interval(Dyadic::add(a.lo_, b.lo_, prec, MPFR_RNDD),
                        Dyadic::add(a.hi_, b.hi_, prec, MPFR_RNDU));
    }

    friend Interval sub(const Interval& a, const Interval& b, Prec prec) {
        return Interval(Dyadic::sub(a.lo_, b.hi_, prec, MPFR_RNDD),
                        Dyadic::sub(a.hi_, b.lo_, prec, MPFR_RNDU));
    }

    friend Interval mul(const Interval& a, const Interval& b, Prec prec) {
        const Dyadic* as[2] = {&a.lo_, &a.hi_};
        const Dyadic* bs[2] = {&b.lo_, &b.hi_};
        Dyadic lo, hi;
        bool first = true;
        for (const Dyadic* x : as) {
            for (const Dyadic* y : bs) {
                Dyadic d = Dyadic::mul(*x, *y, prec, MPFR_RNDD);
                Dyadic u = Dyadic::mul(*x, *y, prec, MPFR_RNDU);
                if (first) {
                    lo = std::move(d);
                    hi = std::move(u);
                    first = false;
                } else {
                    if (d < lo) lo = std::move(d);
                    if (u > hi) hi = std::move(u);
                }
            }
        }
        return Interval(std::move(lo), std::move(hi));
    }

    friend Interval div(const Interval& a, const Interval& b, Prec prec) {
        if (b.contains_zero()) {
            throw InvalidArgument("Interval division by an interval containing zero");
        }
        const Dyadic* as[2] = {&a.lo_, &a.hi_};
        const Dyadic* bs[2] = {&b.lo_, &b.hi_};
        Dyadic lo, hi;
        bool first = true;
        for (const Dyadic* x : as) {
            for (const Dyadic* y : bs) {
                Dyadic d = Dyadic::div(*x, *y, prec, MPFR_RNDD);
                Dyadic u = Dyadic::div(*x, *y, prec, MPFR_RNDU);
                if (first) {
                    lo = std::move(d);
                    hi = std::move(u);
                    first = false;
                } else {
                    if (d < lo) lo = std::move(d);
                    if (u > hi) hi = std::move(u);
                }
            }
        }
        return Interval(std::move(lo), std::move(hi));
    }

    friend Interval operator+(const Interval& a, const Interval& b) {
        return add(a, b, std::max(a.precision(), b.precision()));
    }
    friend Interval operator-(const Interval& a, const Interval& b) {
        return sub(a, b, std::max(a.precision(), b.precision()));
    }
    friend Interval operator*(const Interval& a, const Interval& b) {
        return mul(a, b, std::max(a.precision(), b.precision()));
    }
    friend Interval operator/(const Interval& a, const Interval& b) {
        return div(a, b, std::max(a.precision(), b.precision()));
    }

    Interval neg() const { return Interval(hi_.neg(), lo_.neg()); }

    Interval sqrt(Prec prec) const {
        if (lo_.sgn() < 0) throw InvalidArgument("Interval::sqrt: negative lower endpoint");
        return Interval(Dyadic::sqrt(lo_, prec, MPFR_RNDD), Dyadic::sqrt(hi_, prec, MPFR_RNDU));
    }

    Interval pow_si(long e, Prec prec) const {
        if (e == 0) return of_long(1);
        if (e < 0) {
            if (contains_zero()) {
                throw InvalidArgument("Interval::pow_si: negative power of interval containing 0");
            }
        } else if (e % 2 == 0 && lo_.sgn() < 0 && hi_.sgn() > 0) {
            // Even power of a straddling interval: minimum is attained at 0.
            Dyadic m = std::max(lo_.abs(), hi_.abs());
            return Interval(Dyadic::of_long(0), Dyadic::pow_si(m, e, prec, MPFR_RNDU));
        }
        // Monotone on its sign class: endpoint candidates suffice.
        Dyadic c1d = Dyadic::pow_si(lo_, e, prec, MPFR_RNDD);
        Dyadic c2d = Dyadic::pow_si(hi_, e, prec, MPFR_RNDD);
        Dyadic c1u = Dyadic::pow_si(lo_, e, prec, MPFR_RNDU);
        Dyadic c2u = Dyadic::pow_si(hi_, e, prec, MPFR_RNDU);
        return Interval(std::min(c1d, c2d), std::max(c1u, c2u));
    }

    // Enclosure of |x| over x in the interval.
    Interval abs_hull() const {
        if (lo_.sgn() >= 0) return *this;
        if (hi_.sgn() <= 0) return neg();
        return Interval(Dyadic::of_long(0), std::max(lo_.abs(), hi_.abs()));
    }

    static std::optional<Interval> intersect(const Interval& a, const Interval& b) {
        Dyadic lo = std::max(a.lo_, b.lo_);
        Dyadic hi = std::min(a.hi_, b.hi_);
        if (hi < lo) return std::nullopt;
        return Interval(std::move(lo), std::move(hi));
    }

    static Interval hull(const Interval& a, const Interval& b) {
        return Interval(std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_));
    }

    // Enclosure of min(x, y) / max(x, y) over the operand intervals.
    static Interval min_hull(const Interval& a, const Interval& b) {
        return Interval(std::min(a.lo_, b.lo_), std::min(a.hi_, b.hi_));
    }

    static Interval max_hull(const Interval& a, const Interval& b) {
        return Interval(std::max(a.lo_, b.lo_), std::max(a.hi_, b.hi_));
    }

    std::string to_string(int digits = 20) const {
        return "[" + lo_.to_string(digits, MPFR_RNDD) + ", " + hi_.to_string(digits, MPFR_RNDU) + "]";
    }

  private:
    Dyadic lo_, hi_;
};

// Convenience scalars used throughout the library.
inline Interval operator+(const Interval& a, long b) { return a + Interval::of_long(b); }
inline Interval operator-(const Interval& a, long b) { return a - Interval::of_long(b); }
inline Interval operator*(const Interval& a, long b) { return a * Interval::of_long(b); }

}  // namespace subtile
