#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "subtile/errors.hpp"
#include "subtile/interval.hpp"
#include "subtile/sequence.hpp"
#include "subtile/word.hpp"

namespace subtile {

inline constexpr std::uint64_t kDefaultWordBudget = 1u << 24;

namespace detail {

inline std::uint64_t image_length(const CoefficientSequence& seq, const Letter& l) {
    if (l.is_isolated()) {
        std::uint64_t i = l.index();
        return static_cast<std::uint64_t>(seq.at(i)) + (i == 0 ? 1 : 2);
    }
    return static_cast<std::uint64_t>(l.window().at_origin()) + 2;
}

inline void check_limit_supported(const CoefficientSequence& seq, const Letter& l) {
    if (!seq.supports_limit_letters()) {
        throw UnsupportedLimitLetter("sequence kind cannot represent limit letters");
    }
    auto windows = seq.limit_letters();
    if (std::find(windows.begin(), windows.end(), l.window()) == windows.end()) {
        throw UnsupportedLimitLetter("window " + l.to_string() +
                                     " is not an accumulation point of this sequence");
    }
}

}  // namespace detail

// The substitution on letters:
//   [0]      -> [0]^{a_0} [1]
//   [i], i>0 -> [0]^{a_i} [i-1] [i+1]
//   [inf_b]  -> [0]^{b_0} [inf_{sigma^{-1} b}] [inf_{sigma b}]
inline Word apply(const CoefficientSequence& seq, const Letter& l) {
    Word out;
    if (l.is_isolated()) {
        std::uint64_t i = l.index();
        long zeros = seq.at(i);
        out.reserve(static_cast<std::size_t>(zeros) + 2);
        for (long z = 0; z < zeros; ++z) out.push_back(Letter::isolated(0));
        if (i == 0) {
            out.push_back(Letter::isolated(1));
        } else {
            out.push_back(Letter::isolated(i - 1));
            out.push_back(Letter::isolated(i + 1));
        }
        return out;
    }
    detail::check_limit_supported(seq, l);
    const LimitWindow& b = l.window();
    long zeros = b.at_origin();
    out.reserve(static_cast<std::size_t>(zeros) + 2);
    for (long z = 0; z < zeros; ++z) out.push_back(Letter::isolated(0));
    out.push_back(Letter::limit(b.shifted(-1)));
    out.push_back(Letter::limit(b.shifted(+1)));
    return out;
}

inline Word apply_word(const CoefficientSequence& seq, const Word& w) {
    Word out;
    for (const Letter& l : w) {
        Word img = apply(seq, l);
        out.insert(out.end(), img.begin(), img.end());
    }
    return out;
}

// rho^k(w), materialized. The growth is exponential in k, so each level's
// length is computed up front and checked against the budget before anything
// is allocated.
inline Word apply_word_iterated(const CoefficientSequence& seq, Word w, unsigned k,
                                std::uint64_t budget) {
    for (unsigned level = 0; level < k; ++level) {
        std::uint64_t next_len = 0;
        for (const Letter& l : w) {
            next_len += detail::image_length(seq, l);
            if (next_len > budget) {
                throw BudgetExceeded("apply_word_iterated: level " + std::to_string(level + 1) +
                                     " exceeds budget of " + std::to_string(budget) + " letters");
            }
        }
        Word next;
        next.reserve(next_len);
        for (const Letter& l : w) {
            Word img = apply(seq, l);
            next.insert(next.end(), img.begin(), img.end());
        }
        w = std::move(next);
    }
    return w;
}

inline Word supertile(const CoefficientSequence& seq, const Letter& letter, unsigned k,
                      std::uint64_t budget = kDefaultWordBudget) {
    return apply_word_iterated(seq, Word{letter}, k, budget);
}

// Letter counts of rho^k([i]) per letter index, tracked exactly without
// materializing the word. Index j of the result counts occurrences of [j].
inline std::vector<mpz_class> supertile_counts(const CoefficientSequence& seq,
                                               std::uint64_t letter_index, unsigned k) {
    std::vector<mpz_class> counts(letter_index + k + 1, mpz_class(0));
    counts[letter_index] = 1;
    for (unsigned step = 0; step < k; ++step) {
        std::vector<mpz_class> next(counts.size(), mpz_class(0));
        for (std::size_t j = 0; j < counts.size(); ++j) {
            if (counts[j] == 0) continue;
            const mpz_class& c = counts[j];
            next[0] += c * seq.at(j);
            if (j == 0) {
                next[1] += c;
            } else {
                next[j - 1] += c;
                if (j + 1 < next.size()) next[j + 1] += c;
            }
        }
        counts = std::move(next);
    }
    return counts;
}

inline mpz_class supertile_size(const CoefficientSequence& seq, std::uint64_t letter_index,
                                unsigned k) {
    if (k == 0) return 1;
    std::vector<mpz_class> counts = supertile_counts(seq, letter_index, k);
    mpz_class total = 0;
    for (const mpz_class& c : counts) total += c;
    return total;
}

inline std::map<Letter, std::uint64_t> letter_histogram(const Word& w) {
    std::map<Letter, std::uint64_t> h;
    for (const Letter& l : w) ++h[l];
    return h;
}

// The M x M upper-left corner of the infinite substitution matrix: entry
// (i, j) counts the letters [i] in the image of [j]. Row 0 reads
// (a_0, a_1 + 1, a_2, ..., a_{M-1}); below it the matrix is the 0/1
// tridiagonal shift pattern.
struct TruncatedOperator {
    std::size_t size = 0;
    std::vector<long> entries;  // row-major

    long at(std::size_t i, std::size_t j) const { return entries[i * size + j]; }
};

inline TruncatedOperator truncated_matrix(const CoefficientSequence& seq, std::size_t m) {
    if (m < 3) throw InvalidArgument("truncated_matrix: need M >= 3");
    TruncatedOperator op;
    op.size = m;
    op.entries.assign(m * m, 0);
    for (std::size_t j = 0; j < m; ++j) {
        op.entries[j] = seq.at(j) + (j == 1 ? 1 : 0);
    }
    // rows i >= 1: ones exactly on |i - j| = 1
    for (std::size_t i = 1; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            op.entries[i * m + j] = (j + 1 == i || j == i + 1) ? 1 : 0;
        }
    }
    return op;
}

// Power iteration on the truncated corner with Collatz-Wielandt ratio
// bounds. The returned interval encloses the dominant eigenvalue of the
// finite corner up to floating-point noise; it is an estimate of the true
// inflation factor, not a certified enclosure (the truncation bias toward
// the infinite operator is not accounted for).
inline Interval power_iteration(const TruncatedOperator& op, unsigned max_iters = 20000,
                                double tol = 1e-9) {
    if (op.size < 3) throw InvalidArgument("power_iteration: need M >= 3");
    const std::size_t m = op.size;
    std::vector<double> v(m, 1.0), w(m, 0.0);
    double lo = 0.0, hi = 0.0;
    for (unsigned it = 0; it < max_iters; ++it) {
        for (std::size_t i = 0; i < m; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += op.at(i, j) * v[j];
            w[i] = s;
        }
        lo = std::numeric_limits<double>::infinity();
        hi = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double r = w[i] / v[i];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        double norm = 0.0;
        for (double x : w) norm = std::max(norm, x);
        for (std::size_t i = 0; i < m; ++i) v[i] = w[i] / norm;
        if (hi - lo <= tol * hi) {
            double pad = 4.0 * std::numeric_limits<double>::epsilon() * hi;
            return Interval(Dyadic::of_double(lo - pad), Dyadic::of_double(hi + pad));
        }
    }
    throw NoConvergence("power_iteration: Collatz-Wielandt gap above tolerance after " +
                        std::to_string(max_iters) + " iterations");
}

}  // namespace subtile
