#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "subtile/recognize.hpp"

using subtile::CoefficientSequence;
using subtile::Decomposition;
using subtile::Letter;
using subtile::Word;

namespace {

const CoefficientSequence kOnes = CoefficientSequence::periodic({1});

std::vector<CoefficientSequence> sample_sequences() {
    return {
        kOnes,
        CoefficientSequence::eventually_periodic({2}, {1}),
        CoefficientSequence::thue_morse(),
        CoefficientSequence::periodic({1, 0, 2}),
        CoefficientSequence::eventually_periodic({1}, {2, 0, 0, 1}),
    };
}

}  // namespace

TEST_CASE("decomposition of rho([0][1]) recovers both supertiles") {
    Word w = apply_word(kOnes, subtile::word_of_indices({0, 1}));
    Decomposition d = decompose_level1(kOnes, w);
    CHECK(d.left_fragment.empty());
    CHECK(d.right_fragment.empty());
    REQUIRE(d.supertiles.size() == 2);
    CHECK(d.supertiles[0].preimage == Letter::isolated(0));
    CHECK(d.supertiles[0].image == subtile::word_of_indices({0, 1}));
    CHECK(d.supertiles[1].preimage == Letter::isolated(1));
    CHECK(d.supertiles[1].image == subtile::word_of_indices({0, 0, 2}));
}

TEST_CASE("a single image parses to its preimage") {
    for (const auto& seq : sample_sequences()) {
        Word w = apply(seq, Letter::isolated(0));
        Decomposition d = decompose_level1(seq, w);
        CHECK(d.left_fragment.empty());
        CHECK(d.right_fragment.empty());
        REQUIRE(d.supertiles.size() == 1);
        CHECK(d.supertiles[0].preimage == Letter::isolated(0));
    }
}

TEST_CASE("dropping the leading letter yields a left fragment") {
    // rho([0][1]) = [0][1][0][0][2] without its first letter
    Word w = subtile::word_of_indices({1, 0, 0, 2});
    Decomposition d = decompose_level1(kOnes, w);
    CHECK(d.left_fragment == subtile::word_of_indices({1}));
    REQUIRE(d.supertiles.size() == 1);
    CHECK(d.supertiles[0].preimage == Letter::isolated(1));
    CHECK(d.supertiles[0].image == subtile::word_of_indices({0, 0, 2}));
    CHECK(d.right_fragment.empty());
}

TEST_CASE("truncated tails become right fragments") {
    // [0][3] can only open rho([4]) = [0]^{a_4}[3][5]
    Decomposition d = decompose_level1(kOnes, subtile::word_of_indices({0, 3}));
    CHECK(d.supertiles.empty());
    CHECK(d.left_fragment.empty());
    CHECK(d.right_fragment == subtile::word_of_indices({0, 3}));
}

TEST_CASE("zero blocks longer than any image are not legal") {
    CHECK_THROWS_AS(decompose_level1(kOnes, subtile::word_of_indices({1, 0, 0, 0, 2})),
                    subtile::NotLegal);
}

TEST_CASE("decomposition reproduces the input exactly") {
    std::mt19937_64 rng(31337);
    for (const auto& seq : sample_sequences()) {
        Word big = supertile(seq, Letter::isolated(0), 6, 1u << 22);
        std::uniform_int_distribution<std::size_t> pick(0, big.size() - 2);
        for (int t = 0; t < 40; ++t) {
            std::size_t i = pick(rng);
            std::size_t j = std::min(big.size(), i + 1 + rng() % 60);
            Word w(big.begin() + i, big.begin() + j);
            Decomposition d;
            try {
                d = decompose_level1(seq, w);
            } catch (const subtile::NotLegal&) {
                continue;  // edge-truncated words may be rejected, never misparsed
            }
            Word rebuilt = d.left_fragment;
            for (const auto& st : d.supertiles) {
                CHECK(apply(seq, st.preimage) == st.image);
                rebuilt.insert(rebuilt.end(), st.image.begin(), st.image.end());
            }
            rebuilt.insert(rebuilt.end(), d.right_fragment.begin(), d.right_fragment.end());
            CHECK(rebuilt == w);
        }
    }
}

TEST_CASE("round trip: images of legal words decompose with empty fragments") {
    std::mt19937_64 rng(90210);
    for (const auto& seq : sample_sequences()) {
        Word big = supertile(seq, Letter::isolated(0), 6, 1u << 22);
        std::uniform_int_distribution<std::size_t> pick(0, big.size() - 2);
        for (int t = 0; t < 100; ++t) {
            std::size_t i = pick(rng);
            std::size_t len = 1 + rng() % 200;
            std::size_t j = std::min(big.size(), i + len);
            Word w(big.begin() + i, big.begin() + j);
            Word image = apply_word(seq, w);
            Decomposition d = decompose_level1(seq, image);
            CHECK(d.left_fragment.empty());
            CHECK(d.right_fragment.empty());
            REQUIRE(d.supertiles.size() == w.size());
            for (std::size_t u = 0; u < w.size(); ++u) {
                CHECK(d.supertiles[u].preimage == w[u]);
            }
        }
    }
}

TEST_CASE("level-k decomposition") {
    Word w2 = supertile(kOnes, Letter::isolated(0), 2);
    Decomposition d = decompose_levelk(kOnes, w2, 2);
    CHECK(d.left_fragment.empty());
    CHECK(d.right_fragment.empty());
    REQUIRE(d.supertiles.size() == 1);
    CHECK(d.supertiles[0].preimage == Letter::isolated(0));
    CHECK(d.supertiles[0].image == w2);

    Word w = apply_word(kOnes, apply_word(kOnes, subtile::word_of_indices({0, 1})));
    Decomposition d2 = decompose_levelk(kOnes, w, 2);
    REQUIRE(d2.supertiles.size() == 2);
    CHECK(d2.supertiles[0].preimage == Letter::isolated(0));
    CHECK(d2.supertiles[1].preimage == Letter::isolated(1));
    CHECK(d2.left_fragment.empty());
    CHECK(d2.right_fragment.empty());

    // k = 1 agrees with the level-1 parser
    Word v = supertile(kOnes, Letter::isolated(0), 3);
    Decomposition a = decompose_level1(kOnes, v);
    Decomposition b = decompose_levelk(kOnes, v, 1);
    REQUIRE(a.supertiles.size() == b.supertiles.size());
    for (std::size_t i = 0; i < a.supertiles.size(); ++i) {
        CHECK(a.supertiles[i].preimage == b.supertiles[i].preimage);
        CHECK(a.supertiles[i].image == b.supertiles[i].image);
    }
}

TEST_CASE("level-k round trip across sequences") {
    std::mt19937_64 rng(777);
    for (const auto& seq : sample_sequences()) {
        Word big = supertile(seq, Letter::isolated(0), 3, 1u << 22);
        std::uniform_int_distribution<std::size_t> pick(0, big.size() - 2);
        for (int t = 0; t < 20; ++t) {
            std::size_t i = pick(rng);
            std::size_t j = std::min(big.size(), i + 1 + rng() % 12);
            Word w(big.begin() + i, big.begin() + j);
            Word image = apply_word(seq, apply_word(seq, w));
            Decomposition d = decompose_levelk(seq, image, 2);
            CHECK(d.left_fragment.empty());
            CHECK(d.right_fragment.empty());
            REQUIRE(d.supertiles.size() == w.size());
            for (std::size_t u = 0; u < w.size(); ++u) {
                CHECK(d.supertiles[u].preimage == w[u]);
                CHECK(d.supertiles[u].image == apply_word(seq, apply(seq, w[u])));
            }
        }
    }
}

TEST_CASE("shifting the input never produces crossing boundaries") {
    std::mt19937_64 rng(1618);
    for (const auto& seq : sample_sequences()) {
        Word big = supertile(seq, Letter::isolated(0), 6, 1u << 22);
        const std::size_t len = std::min<std::size_t>(70, big.size() - 2);
        std::uniform_int_distribution<std::size_t> pick(0, big.size() - len - 1);
        for (int t = 0; t < 30; ++t) {
            std::size_t base = pick(rng);
            Word w(big.begin() + base, big.begin() + base + len);
            Word shifted(big.begin() + base + 1, big.begin() + base + len);

            auto spans = [](const Decomposition& d, std::size_t offset) {
                std::vector<std::pair<std::size_t, std::size_t>> out;
                std::size_t pos = offset + d.left_fragment.size();
                for (const auto& st : d.supertiles) {
                    out.emplace_back(pos, pos + st.image.size());
                    pos += st.image.size();
                }
                return out;
            };

            Decomposition d0, d1;
            try {
                d0 = decompose_level1(seq, w);
                d1 = decompose_level1(seq, shifted);
            } catch (const subtile::NotLegal&) {
                continue;
            }
            auto s0 = spans(d0, 0);
            auto s1 = spans(d1, 1);
            for (auto [a, b] : s0) {
                for (auto [c, d] : s1) {
                    bool crossing = (a < c && c < b && b < d) || (c < a && a < d && d < b);
                    CHECK(!crossing);
                }
            }
        }
    }
}

TEST_CASE("the substitution is injective on letters") {
    std::map<Word, std::uint64_t> seen;
    for (std::uint64_t i = 0; i <= 1000; ++i) {
        Word img = apply(CoefficientSequence::thue_morse(), Letter::isolated(i));
        auto [it, fresh] = seen.emplace(img, i);
        CHECK(fresh);
    }
}

TEST_CASE("empty and degenerate words") {
    Decomposition d = decompose_level1(kOnes, Word{});
    CHECK(d.left_fragment.empty());
    CHECK(d.supertiles.empty());
    CHECK(d.right_fragment.empty());

    // all-zero word: a truncated opening, nothing certain
    Decomposition dz = decompose_level1(kOnes, subtile::word_of_indices({0, 0}));
    CHECK(dz.supertiles.empty());
    CHECK(dz.left_fragment.size() + dz.right_fragment.size() == 2);

    CHECK_THROWS_AS(decompose_levelk(kOnes, Word{}, 0), subtile::InvalidArgument);
}
