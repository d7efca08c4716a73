#pragma once

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

#include "subtile/errors.hpp"

namespace subtile {

using Prec = mpfr_prec_t;

inline constexpr Prec kDefaultPrec = 128;
inline constexpr Prec kPrecCap = 4096;

// Escalation schedule for certified computations: start precision doubles
// until the cap, then the computation fails with PrecisionExhausted.
struct PrecisionPolicy {
    Prec start = 192;
    Prec cap = kPrecCap;
};

// An arbitrary-precision dyadic rational m * 2^e, backed by a single MPFR
// number. Immutable in practice: all rounded operations are static and take
// an explicit target precision and rounding mode, so every rounding decision
// is visible at the call site.
class Dyadic {
  public:
    Dyadic() : Dyadic(kDefaultPrec) {}

    explicit Dyadic(Prec prec) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }

    Dyadic(const Dyadic& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);  // same precision: exact
    }

    Dyadic(Dyadic&& o) noexcept {
        mpfr_init2(v_, 2);
        mpfr_swap(v_, o.v_);
    }

    Dyadic& operator=(const Dyadic& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }

    Dyadic& operator=(Dyadic&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }

    ~Dyadic() { mpfr_clear(v_); }

    static Dyadic of_long(long v) {
        Dyadic d(64);
        mpfr_set_si(d.v_, v, MPFR_RNDN);  // exact
        return d;
    }

    static Dyadic of_double(double v) {
        Dyadic d(64);
        mpfr_set_d(d.v_, v, MPFR_RNDN);  // doubles are dyadic: exact
        return d;
    }

    // 2^e, exact.
    static Dyadic pow2(long e) {
        Dyadic d(8);
        mpfr_set_ui_2exp(d.v_, 1, e, MPFR_RNDN);
        return d;
    }

    static Dyadic from_string(const std::string& s, Prec prec, mpfr_rnd_t rnd) {
        Dyadic d(prec);
        if (mpfr_set_str(d.v_, s.c_str(), 10, rnd) != 0) {
            throw InvalidArgument("Dyadic::from_string: unparsable literal '" + s + "'");
        }
        return d;
    }

    Prec precision() const { return mpfr_get_prec(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sgn() const { return mpfr_sgn(v_); }

    friend bool operator<(const Dyadic& a, const Dyadic& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator<=(const Dyadic& a, const Dyadic& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>(const Dyadic& a, const Dyadic& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator>=(const Dyadic& a, const Dyadic& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    friend bool operator==(const Dyadic& a, const Dyadic& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
    friend bool operator!=(const Dyadic& a, const Dyadic& b) { return mpfr_cmp(a.v_, b.v_) != 0; }

    static Dyadic add(const Dyadic& a, const Dyadic& b, Prec prec, mpfr_rnd_t rnd) {
        Dyadic r(prec);
        mpfr_add(r.v_, a.v_, b.v_, rnd);
        return r;
    }

    static Dyadic sub(const Dyadic& a, const Dyadic& b, Prec prec, mpfr_rnd_t rnd) {
        Dyadic r(prec);
        mpfr_sub(r.v_, a.v_, b.v_, rnd);
        return r;
    }

    static Dyadic mul(const Dyadic& a, const Dyadic& b, Prec prec, mpfr_rnd_t rnd) {
        Dyadic r(prec);
        mpfr_mul(r.v_, a.v_, b.v_, rnd);
        return r;
    }

    static Dyadic div(const Dyadic& a, const Dyadic& b, Prec prec, mpfr_rnd_t rnd) {
        if (b.is_zero()) throw InvalidArgument("Dyadic::div: division by zero");
        Dyadic r(prec);
        mpfr_div(r.v_, a.v_, b.v_, rnd);
        return r;
    }

    static Dyadic sqrt(const Dyadic& a, Prec prec, mpfr_rnd_t rnd) {
        if (a.sgn() < 0) throw InvalidArgument("Dyadic::sqrt: negative operand");
        Dyadic r(prec);
        mpfr_sqrt(r.v_, a.v_, rnd);
        return r;
    }

    static Dyadic pow_si(const Dyadic& a, long e, Prec prec, mpfr_rnd_t rnd) {
        if (e < 0 && a.is_zero()) throw InvalidArgument("Dyadic::pow_si: 0 to negative power");
        Dyadic r(prec);
        mpfr_pow_si(r.v_, a.v_, e, rnd);
        return r;
    }

    // Exact sign flips keep the operand's precision.
    Dyadic neg() const {
        Dyadic r(precision());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

    Dyadic abs() const {
        Dyadic r(precision());
        mpfr_abs(r.v_, v_, MPFR_RNDN);
        return r;
    }

    double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(v_, rnd); }

    long to_long_floor() const {
        Dyadic f(precision());
        mpfr_floor(f.v_, v_);
        return mpfr_get_si(f.v_, MPFR_RNDN);
    }

    long to_long_ceil() const {
        Dyadic f(precision());
        mpfr_ceil(f.v_, v_);
        return mpfr_get_si(f.v_, MPFR_RNDN);
    }

    // Decimal rendering with an explicit rounding direction, so a caller can
    // print certified lower/upper decimal bounds.
    std::string to_string(int digits, mpfr_rnd_t rnd) const {
        char fmt[32];
        std::snprintf(fmt, sizeof(fmt), "%%.%dR*e", digits);
        char* out = nullptr;
        mpfr_asprintf(&out, fmt, rnd, v_);
        std::string s(out);
        mpfr_free_str(out);
        return s;
    }

    mpfr_srcptr raw() const { return v_; }
    mpfr_ptr raw() { return v_; }

  private:
    mpfr_t v_;
};

}  // namespace subtile
