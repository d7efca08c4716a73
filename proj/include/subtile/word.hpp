#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "subtile/errors.hpp"

namespace subtile {

// The bi-infinite window describing a limit letter of an eventually periodic
// coefficient sequence: a purely periodic word w_m = block[m mod L]. Stored
// canonically (primitive period, phase folded into a rotation), so two
// windows describe the same bi-infinite word exactly when their blocks are
// equal.
class LimitWindow {
  public:
    static LimitWindow of(std::vector<long> period, long phase) {
        if (period.empty()) throw InvalidArgument("LimitWindow: empty period");
        const std::size_t n = period.size();
        std::size_t r = static_cast<std::size_t>(((phase % static_cast<long>(n)) +
                                                  static_cast<long>(n)) %
                                                 static_cast<long>(n));
        std::vector<long> rot(n);
        for (std::size_t i = 0; i < n; ++i) rot[i] = period[(r + i) % n];
        // reduce to the primitive cyclic period
        for (std::size_t d = 1; d <= n; ++d) {
            if (n % d != 0) continue;
            bool ok = true;
            for (std::size_t i = 0; ok && i < n; ++i) ok = rot[i] == rot[(i + d) % n];
            if (ok) {
                rot.resize(d);
                break;
            }
        }
        LimitWindow w;
        w.block_ = std::move(rot);
        return w;
    }

    const std::vector<long>& block() const { return block_; }
    long at_origin() const { return block_[0]; }

    long at(long m) const {
        const long n = static_cast<long>(block_.size());
        return block_[static_cast<std::size_t>(((m % n) + n) % n)];
    }

    // The window of the shifted bi-infinite word sigma^by(w).
    LimitWindow shifted(long by) const { return of(block_, by); }

    friend bool operator==(const LimitWindow& a, const LimitWindow& b) = default;
    friend auto operator<=>(const LimitWindow& a, const LimitWindow& b) = default;

  private:
    LimitWindow() = default;
    std::vector<long> block_;
};

// An alphabet element: either the isolated letter [i] or a limit letter
// described by its window.
class Letter {
  public:
    static Letter isolated(std::uint64_t index) { return Letter(index); }
    static Letter limit(LimitWindow w) { return Letter(std::move(w)); }

    bool is_isolated() const { return std::holds_alternative<std::uint64_t>(v_); }
    bool is_limit() const { return !is_isolated(); }

    std::uint64_t index() const {
        if (!is_isolated()) throw InvalidArgument("Letter::index on a limit letter");
        return std::get<std::uint64_t>(v_);
    }

    const LimitWindow& window() const {
        if (!is_limit()) throw InvalidArgument("Letter::window on an isolated letter");
        return std::get<LimitWindow>(v_);
    }

    friend bool operator==(const Letter& a, const Letter& b) = default;

    friend bool operator<(const Letter& a, const Letter& b) {
        if (a.is_isolated() != b.is_isolated()) return a.is_isolated();
        if (a.is_isolated()) return a.index() < b.index();
        return a.window() < b.window();
    }

    std::string to_string() const {
        if (is_isolated()) return "[" + std::to_string(index()) + "]";
        std::string s = "[inf:";
        for (std::size_t i = 0; i < window().block().size(); ++i) {
            if (i) s += ",";
            s += std::to_string(window().block()[i]);
        }
        return s + "]";
    }

  private:
    explicit Letter(std::uint64_t i) : v_(i) {}
    explicit Letter(LimitWindow w) : v_(std::move(w)) {}
    std::variant<std::uint64_t, LimitWindow> v_;
};

using Word = std::vector<Letter>;

inline Word word_of_indices(std::initializer_list<std::uint64_t> idx) {
    Word w;
    w.reserve(idx.size());
    for (std::uint64_t i : idx) w.push_back(Letter::isolated(i));
    return w;
}

inline bool all_isolated(const Word& w) {
    for (const Letter& l : w) {
        if (!l.is_isolated()) return false;
    }
    return true;
}

inline std::string word_to_string(const Word& w) {
    std::string s;
    for (const Letter& l : w) s += l.to_string();
    return s.empty() ? "eps" : s;
}

}  // namespace subtile
