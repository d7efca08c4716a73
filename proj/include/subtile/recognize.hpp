#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subtile/errors.hpp"
#include "subtile/sequence.hpp"
#include "subtile/substitution.hpp"
#include "subtile/word.hpp"

namespace subtile {

struct SupertilePart {
    Letter preimage;
    Word image;
};

// A level-k supertile decomposition of a finite word: unparsable material at
// the edges goes to the fragments, and the concatenation
// left_fragment ++ images ++ right_fragment reproduces the input exactly.
struct Decomposition {
    Word left_fragment;
    std::vector<SupertilePart> supertiles;
    Word right_fragment;
};

namespace detail {

// Inversion of a complete level-1 supertile image [0]^z x_1 .. x_t with
// t in {1, 2} nonzero letters:
//   t=1, x=1: rho([0]) = [0]^{a_0} [1]
//   t=1, x=2: rho([1]) = [0]^{a_1+1} [2]
//   t=2:      rho([x+1]) = [0]^{a_{x+1}} [x] [x+2]
// Returns the preimage, or nullopt with *expected_zeros set when only the
// zero count failed (the structure still identifies the preimage, which is
// how a left-truncated zero block is recognized).
inline std::optional<Letter> invert_supertile(const CoefficientSequence& seq, long z,
                                              const std::vector<std::uint64_t>& nonzeros,
                                              long* expected_zeros) {
    *expected_zeros = -1;
    if (nonzeros.size() == 1) {
        std::uint64_t x = nonzeros[0];
        if (x == 1) {
            *expected_zeros = seq.at(0);
            if (z == *expected_zeros) return Letter::isolated(0);
            return std::nullopt;
        }
        if (x == 2) {
            *expected_zeros = seq.at(1) + 1;
            if (z == *expected_zeros) return Letter::isolated(1);
            return std::nullopt;
        }
        return std::nullopt;  // single nonzero must be [1] or [2]
    }
    if (nonzeros.size() == 2) {
        std::uint64_t x = nonzeros[0], y = nonzeros[1];
        if (y != x + 2) return std::nullopt;
        *expected_zeros = seq.at(x + 1);
        if (z == *expected_zeros) return Letter::isolated(x + 1);
        return std::nullopt;
    }
    return std::nullopt;
}

struct SegmentParse {
    Word left_fragment;
    std::vector<SupertilePart> supertiles;
    bool ok = false;
};

// Parses one segment: a zero block of length z followed by m nonzero
// letters (indices nz). The first supertile takes the block plus one
// nonzero if m is odd, two if m is even; the remaining nonzeros pair into
// zero-free supertiles. With allow_left_trunc, a first supertile whose zero
// count exceeds the visible block is emitted as a fragment instead.
inline SegmentParse parse_segment(const CoefficientSequence& seq, long z,
                                  const std::vector<std::uint64_t>& nz, bool allow_left_trunc) {
    SegmentParse out;
    auto zero_word = [&](long count) {
        Word w;
        for (long i = 0; i < count; ++i) w.push_back(Letter::isolated(0));
        return w;
    };

    if (nz.empty()) return out;  // a bare zero block is never a complete supertile

    const std::size_t m = nz.size();
    const std::size_t t_first = (m % 2 == 1) ? 1 : 2;
    std::vector<std::uint64_t> head(nz.begin(), nz.begin() + t_first);
    long expected = -1;
    std::optional<Letter> pre = invert_supertile(seq, z, head, &expected);

    std::size_t cursor = t_first;
    if (pre) {
        Word image = zero_word(z);
        for (std::uint64_t x : head) image.push_back(Letter::isolated(x));
        out.supertiles.push_back(SupertilePart{*pre, std::move(image)});
    } else if (allow_left_trunc && expected > z) {
        // structure matched but zeros are missing on the left: the first
        // supertile of the segment is cut off and stays a fragment
        out.left_fragment = zero_word(z);
        for (std::uint64_t x : head) out.left_fragment.push_back(Letter::isolated(x));
    } else {
        return out;  // not parseable as a segment start
    }

    // the parity of t_first makes the remaining nonzeros pair up exactly
    for (; cursor + 1 < m; cursor += 2) {
        std::uint64_t x = nz[cursor], y = nz[cursor + 1];
        if (y != x + 2 || seq.at(x + 1) != 0) return SegmentParse{};
        out.supertiles.push_back(SupertilePart{
            Letter::isolated(x + 1), Word{Letter::isolated(x), Letter::isolated(y)}});
    }
    out.ok = true;
    return out;
}

// Parses a zero-free run anchored on its right end (the next cut or the end
// of the word). Pairs are matched right-to-left; an odd leading letter and,
// when permitted, a leading pair whose preimage has zeros (their zero block
// was cut off before the word) go to the left fragment.
inline SegmentParse parse_zero_free_prefix(const CoefficientSequence& seq,
                                           const std::vector<std::uint64_t>& nz) {
    SegmentParse out;
    const std::size_t m = nz.size();
    std::size_t cursor = 0;
    if (m % 2 == 1) {
        out.left_fragment.push_back(Letter::isolated(nz[0]));
        cursor = 1;
    }
    if ((m - cursor) % 2 != 0) return SegmentParse{};
    bool leftmost_pair = true;
    for (; cursor + 1 < m; cursor += 2) {
        std::uint64_t x = nz[cursor], y = nz[cursor + 1];
        if (y != x + 2) return SegmentParse{};
        bool zero_free = seq.at(x + 1) == 0;
        if (zero_free) {
            out.supertiles.push_back(SupertilePart{
                Letter::isolated(x + 1), Word{Letter::isolated(x), Letter::isolated(y)}});
        } else if (leftmost_pair && cursor == 0) {
            // tail of a supertile whose zeros lie before the word start
            out.left_fragment.push_back(Letter::isolated(x));
            out.left_fragment.push_back(Letter::isolated(y));
        } else {
            return SegmentParse{};
        }
        leftmost_pair = false;
    }
    out.ok = true;
    return out;
}

}  // namespace detail

// Level-1 supertile decomposition, following the zero-block cut rule: every
// maximal interior run of zeros starts a supertile and belongs to it
// entirely. Unresolvable edge material becomes fragments; interior
// inconsistencies are NotLegal.
inline Decomposition decompose_level1(const CoefficientSequence& seq, const Word& w) {
    if (!all_isolated(w)) {
        throw InvalidArgument("decompose_level1: words of isolated letters only");
    }
    Decomposition out;
    if (w.empty()) return out;

    const std::size_t n = w.size();
    std::vector<std::uint64_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = w[i].index();

    // leading zero-free run, then segments (zero block + following nonzeros)
    std::size_t p = 0;
    std::vector<std::uint64_t> prefix;
    while (p < n && idx[p] != 0) prefix.push_back(idx[p++]);

    struct Segment {
        long zeros = 0;
        std::vector<std::uint64_t> nz;
    };
    std::vector<Segment> segments;
    while (p < n) {
        Segment s;
        while (p < n && idx[p] == 0) {
            ++s.zeros;
            ++p;
        }
        while (p < n && idx[p] != 0) s.nz.push_back(idx[p++]);
        // no level-1 image carries more than max(a_i) + 1 zeros
        if (s.zeros > seq.bound_n() + 1) {
            throw NotLegal("decompose_level1: zero block longer than any image allows");
        }
        segments.push_back(std::move(s));
    }

    auto take = [&out](detail::SegmentParse&& part) {
        for (auto& l : part.left_fragment) out.left_fragment.push_back(l);
        for (auto& st : part.supertiles) out.supertiles.push_back(std::move(st));
    };
    auto fragments_so_far_empty = [&out]() {
        return out.left_fragment.empty() && out.supertiles.empty();
    };

    if (!prefix.empty()) {
        if (segments.empty()) {
            // no cut anywhere: right-anchor on the word end, falling back to
            // trimming a truncated tail letter by letter
            for (std::size_t trim = 0; trim <= prefix.size(); ++trim) {
                std::vector<std::uint64_t> body(prefix.begin(), prefix.end() - trim);
                detail::SegmentParse part = detail::parse_zero_free_prefix(seq, body);
                if (part.ok) {
                    take(std::move(part));
                    for (std::size_t i = prefix.size() - trim; i < prefix.size(); ++i) {
                        out.right_fragment.push_back(Letter::isolated(prefix[i]));
                    }
                    return out;
                }
            }
            throw NotLegal("decompose_level1: zero-free word admits no parse");
        }
        detail::SegmentParse part = detail::parse_zero_free_prefix(seq, prefix);
        if (!part.ok) throw NotLegal("decompose_level1: zero-free prefix admits no parse");
        take(std::move(part));
    }

    for (std::size_t s = 0; s < segments.size(); ++s) {
        const Segment& seg = segments[s];
        const bool first_block_at_word_start = prefix.empty() && s == 0;
        const bool final_segment = s + 1 == segments.size();

        if (!final_segment) {
            detail::SegmentParse part =
                detail::parse_segment(seq, seg.zeros, seg.nz, first_block_at_word_start);
            if (!part.ok) {
                throw NotLegal("decompose_level1: interior segment admits no parse");
            }
            if (!part.left_fragment.empty() && !fragments_so_far_empty()) {
                throw NotLegal("decompose_level1: truncated supertile after parsed material");
            }
            take(std::move(part));
            continue;
        }

        // final segment: prefer the complete reading, then trim a truncated
        // tail from the right until the rest parses
        const std::size_t total = static_cast<std::size_t>(seg.zeros) + seg.nz.size();
        for (std::size_t trim = 0; trim <= total; ++trim) {
            std::size_t keep = total - trim;
            long zk = std::min<long>(seg.zeros, static_cast<long>(keep));
            std::vector<std::uint64_t> nzk(seg.nz.begin(),
                                           seg.nz.begin() + (static_cast<long>(keep) - zk));
            detail::SegmentParse part =
                detail::parse_segment(seq, zk, nzk, first_block_at_word_start);
            if (part.ok) {
                take(std::move(part));
                for (long i = zk; i < seg.zeros; ++i) {
                    out.right_fragment.push_back(Letter::isolated(0));
                }
                for (std::size_t i = nzk.size(); i < seg.nz.size(); ++i) {
                    out.right_fragment.push_back(Letter::isolated(seg.nz[i]));
                }
                return out;
            }
        }
        // nothing of the segment parses: all of it is a truncated opening
        if (!fragments_so_far_empty() || first_block_at_word_start) {
            for (long i = 0; i < seg.zeros; ++i) out.right_fragment.push_back(Letter::isolated(0));
            for (std::uint64_t x : seg.nz) out.right_fragment.push_back(Letter::isolated(x));
            return out;
        }
        throw NotLegal("decompose_level1: final segment admits no parse");
    }
    return out;
}

// Level-k decomposition as k applications of the level-1 parser, re-parsing
// the preimage word each round and accumulating the fragments in original
// coordinates.
inline Decomposition decompose_levelk(const CoefficientSequence& seq, const Word& w, unsigned k) {
    if (k == 0) throw InvalidArgument("decompose_levelk: k must be >= 1");
    if (k == 1) return decompose_level1(seq, w);
    if (!all_isolated(w)) {
        throw InvalidArgument("decompose_levelk: words of isolated letters only");
    }

    struct Spanned {
        Letter letter;
        std::size_t begin, end;  // original coordinates
    };
    std::vector<Spanned> current;
    current.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) current.push_back({w[i], i, i + 1});

    std::size_t left_end = 0, right_begin = w.size();
    for (unsigned level = 0; level < k; ++level) {
        Word cur;
        cur.reserve(current.size());
        for (const Spanned& s : current) cur.push_back(s.letter);
        Decomposition d = decompose_level1(seq, cur);

        std::size_t lf = d.left_fragment.size();
        std::size_t rf = d.right_fragment.size();
        if (lf > 0) left_end = current[lf - 1].end;
        if (rf > 0) right_begin = current[current.size() - rf].begin;

        std::vector<Spanned> next;
        next.reserve(d.supertiles.size());
        std::size_t pos = lf;
        for (const SupertilePart& st : d.supertiles) {
            std::size_t len = st.image.size();
            next.push_back({st.preimage, current[pos].begin, current[pos + len - 1].end});
            pos += len;
        }
        current = std::move(next);
        if (current.empty()) break;
    }

    Decomposition out;
    out.left_fragment.assign(w.begin(), w.begin() + left_end);
    out.right_fragment.assign(w.begin() + right_begin, w.end());
    for (const Spanned& s : current) {
        out.supertiles.push_back(
            SupertilePart{s.letter, Word(w.begin() + s.begin, w.begin() + s.end)});
    }
    return out;
}

}  // namespace subtile
