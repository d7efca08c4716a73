#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subtile/errors.hpp"
#include "subtile/series.hpp"
#include "subtile/word.hpp"

namespace subtile {

// a_n = (3 + t_n)/2 where t_n = (-1)^{s_2(n)}: 2 when the binary expansion
// of n has an even number of ones, 1 otherwise.
inline long thue_morse_coefficient(std::uint64_t n) {
    return std::popcount(n) % 2 == 0 ? 2 : 1;
}

struct ValidationReport {
    enum class Coverage { Proven, WindowVerified };

    bool ok = true;
    Coverage coverage = Coverage::WindowVerified;
    std::uint64_t probed_depth = 0;
    // populated when !ok
    ValidationFailure::Condition condition = ValidationFailure::Condition::A1;
    std::uint64_t witness = 0;
    std::string message;
};

// A provider of the bounded integer sequence a = (a_i) together with its
// declared admissibility data: the coefficient bound N (A1) and the strict
// zero-run bound C (A3: every run of consecutive zeros is shorter than C).
class CoefficientSequence {
  public:
    enum class Kind { Explicit, EventuallyPeriodic, ThueMorse, Designed };

    // Finite window of values, zero-extended beyond the window. Only the
    // window is certifiable; primarily for validation experiments and tests.
    static CoefficientSequence explicit_values(std::vector<long> values, long bound_n,
                                               long zero_run_c) {
        auto d = std::make_shared<Data>();
        d->kind = Kind::Explicit;
        d->pre = std::move(values);
        d->bound_n = bound_n;
        d->zero_run_c = zero_run_c;
        return CoefficientSequence(std::move(d));
    }

    static CoefficientSequence periodic(std::vector<long> period) {
        return eventually_periodic({}, std::move(period));
    }

    static CoefficientSequence eventually_periodic(std::vector<long> pre,
                                                   std::vector<long> period) {
        if (period.empty()) throw InvalidArgument("eventually_periodic: empty period");
        auto d = std::make_shared<Data>();
        d->kind = Kind::EventuallyPeriodic;
        d->pre = std::move(pre);
        d->period = std::move(period);
        d->bound_n = derive_bound(*d);
        d->zero_run_c = derive_zero_run(*d);
        return CoefficientSequence(std::move(d));
    }

    static CoefficientSequence eventually_periodic(std::vector<long> pre, std::vector<long> period,
                                                   long bound_n, long zero_run_c) {
        if (period.empty()) throw InvalidArgument("eventually_periodic: empty period");
        auto d = std::make_shared<Data>();
        d->kind = Kind::EventuallyPeriodic;
        d->pre = std::move(pre);
        d->period = std::move(period);
        d->bound_n = bound_n;
        d->zero_run_c = zero_run_c;
        return CoefficientSequence(std::move(d));
    }

    static CoefficientSequence thue_morse() {
        auto d = std::make_shared<Data>();
        d->kind = Kind::ThueMorse;
        d->bound_n = 2;
        d->zero_run_c = 1;
        return CoefficientSequence(std::move(d));
    }

    // a_i = [spike_period | i] + digit_i; the spike series keeps A2/A3 valid
    // for any digit tail.
    static CoefficientSequence designed(long spike_period, std::vector<long> digits, long bound_n) {
        if (spike_period <= 0) throw InvalidArgument("designed: spike period must be positive");
        auto d = std::make_shared<Data>();
        d->kind = Kind::Designed;
        d->spike_period = spike_period;
        d->digits = std::move(digits);
        d->bound_n = bound_n;
        d->zero_run_c = spike_period;
        return CoefficientSequence(std::move(d));
    }

    Kind kind() const { return d_->kind; }
    long bound_n() const { return d_->bound_n; }
    long zero_run_c() const { return d_->zero_run_c; }
    const std::vector<long>& preperiod() const { return d_->pre; }
    const std::vector<long>& period() const { return d_->period; }
    const std::vector<long>& digits() const { return d_->digits; }
    long spike_period() const { return d_->spike_period; }

    long at(std::uint64_t i) const {
        long v = raw_at(i);
        if (v < 0 || v > d_->bound_n) {
            throw ValidationFailure(ValidationFailure::Condition::A1, i,
                                    "a_" + std::to_string(i) + " = " + std::to_string(v) +
                                        " outside declared bound [0, " +
                                        std::to_string(d_->bound_n) + "]");
        }
        return v;
    }

    SeriesSpec series(std::uint64_t start_index = 0) const {
        CoefficientSequence self = *this;  // shares immutable data
        return SeriesSpec{[self](std::uint64_t i) { return self.at(i); }, d_->bound_n,
                          start_index};
    }

    // Limit letters are representable exactly when the accumulation points
    // of the shifted sequence are enumerable: eventually periodic tails only.
    bool supports_limit_letters() const {
        return d_->kind == Kind::EventuallyPeriodic || d_->kind == Kind::Designed;
    }

    std::vector<LimitWindow> limit_letters() const {
        if (!supports_limit_letters()) {
            throw UnsupportedLimitLetter(
                "limit letters require an eventually periodic coefficient tail");
        }
        std::vector<long> block;
        if (d_->kind == Kind::EventuallyPeriodic) {
            block = d_->period;
        } else {
            block.assign(static_cast<std::size_t>(d_->spike_period), 0);
            block[0] = 1;
        }
        std::vector<LimitWindow> out;
        for (long r = 0; r < static_cast<long>(block.size()); ++r) {
            LimitWindow w = LimitWindow::of(block, r);
            if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
        }
        return out;
    }

    friend bool operator==(const CoefficientSequence& a, const CoefficientSequence& b) {
        return a.d_->kind == b.d_->kind && a.d_->pre == b.d_->pre &&
               a.d_->period == b.d_->period && a.d_->digits == b.d_->digits &&
               a.d_->spike_period == b.d_->spike_period && a.d_->bound_n == b.d_->bound_n &&
               a.d_->zero_run_c == b.d_->zero_run_c;
    }

  private:
    struct Data {
        Kind kind = Kind::Explicit;
        std::vector<long> pre;
        std::vector<long> period;
        std::vector<long> digits;
        long spike_period = 0;
        long bound_n = 0;
        long zero_run_c = 1;
    };

    explicit CoefficientSequence(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

    long raw_at(std::uint64_t i) const {
        const Data& d = *d_;
        switch (d.kind) {
            case Kind::Explicit:
                return i < d.pre.size() ? d.pre[i] : 0;
            case Kind::EventuallyPeriodic:
                if (i < d.pre.size()) return d.pre[i];
                return d.period[(i - d.pre.size()) % d.period.size()];
            case Kind::ThueMorse:
                return thue_morse_coefficient(i);
            case Kind::Designed: {
                long v = (i % static_cast<std::uint64_t>(d.spike_period) == 0) ? 1 : 0;
                if (i < d.digits.size()) v += d.digits[i];
                return v;
            }
        }
        throw InvalidArgument("unreachable sequence kind");
    }

    static long derive_bound(const Data& d) {
        long n = 0;
        for (long v : d.pre) n = std::max(n, v);
        for (long v : d.period) n = std::max(n, v);
        return n;
    }

    // Strict bound: every zero run must be shorter than the returned C. For
    // an eventually periodic sequence every run appears inside the window
    // preperiod + 3 periods (cyclic runs included), unless the period is all
    // zeros, in which case no valid C exists and validation reports A3.
    static long derive_zero_run(const Data& d) {
        std::vector<long> w = d.pre;
        for (int rep = 0; rep < 3; ++rep) w.insert(w.end(), d.period.begin(), d.period.end());
        long run = 0, best = 0;
        for (long v : w) {
            run = (v == 0) ? run + 1 : 0;
            best = std::max(best, run);
        }
        return best + 1;
    }

    std::shared_ptr<const Data> d_;
};

// Checks (A1)-(A3) on indices 0..probe_depth. For structurally known kinds
// (eventually periodic, Thue-Morse) a clean window is a proof for all i; for
// the open-ended kinds the report is window-verified only.
inline ValidationReport validate(const CoefficientSequence& seq, std::uint64_t probe_depth) {
    ValidationReport rep;
    const long c = seq.zero_run_c();

    auto fail = [&](ValidationFailure::Condition cond, std::uint64_t witness,
                    const std::string& msg) {
        rep.ok = false;
        rep.condition = cond;
        rep.witness = witness;
        rep.message = msg;
        return rep;
    };

    if (c <= 0) {
        return fail(ValidationFailure::Condition::A3, 0, "declared zero-run bound must be positive");
    }
    if (seq.bound_n() < 0) {
        return fail(ValidationFailure::Condition::A1, 0, "declared coefficient bound must be >= 0");
    }

    std::uint64_t depth = probe_depth;
    if (seq.kind() == CoefficientSequence::Kind::EventuallyPeriodic) {
        depth = std::max<std::uint64_t>(
            depth, seq.preperiod().size() + 3 * seq.period().size() + static_cast<std::uint64_t>(c));
        rep.coverage = ValidationReport::Coverage::Proven;
    } else if (seq.kind() == CoefficientSequence::Kind::ThueMorse) {
        rep.coverage = ValidationReport::Coverage::Proven;
    } else {
        rep.coverage = ValidationReport::Coverage::WindowVerified;
    }
    rep.probed_depth = depth;

    long zero_run = 0;
    for (std::uint64_t i = 0; i <= depth; ++i) {
        long v;
        try {
            v = seq.at(i);
        } catch (const ValidationFailure& vf) {
            return fail(ValidationFailure::Condition::A1, i, vf.what());
        }
        if (i == 0 && v == 0) {
            return fail(ValidationFailure::Condition::A2, 0, "a_0 must be nonzero");
        }
        if (v == 0) {
            if (++zero_run >= c) {
                return fail(ValidationFailure::Condition::A3, i,
                            "zero run of length " + std::to_string(zero_run) +
                                " reaches the declared bound C = " + std::to_string(c));
            }
        } else {
            zero_run = 0;
        }
    }
    return rep;
}

inline ValidationReport validate(const CoefficientSequence& seq) {
    return validate(seq, 10 * (static_cast<std::uint64_t>(seq.zero_run_c()) + 1));
}

inline void require_valid(const CoefficientSequence& seq) {
    ValidationReport rep = validate(seq);
    if (!rep.ok) throw ValidationFailure(rep.condition, rep.witness, rep.message);
}

}  // namespace subtile
