#include <catch2/catch_amalgamated.hpp>

#include "subtile/substitution.hpp"

using subtile::CoefficientSequence;
using subtile::Letter;
using subtile::LimitWindow;
using subtile::Word;

namespace {

const CoefficientSequence kOnes = CoefficientSequence::periodic({1});
const CoefficientSequence kConstLen = CoefficientSequence::eventually_periodic({2}, {1});

}  // namespace

TEST_CASE("images of the first letters") {
    CHECK(apply(kOnes, Letter::isolated(0)) == subtile::word_of_indices({0, 1}));
    // [1] -> [0]^{a_1} [0] [2]: the [i-1] = [0] merges into the zero block
    CHECK(apply(kOnes, Letter::isolated(1)) == subtile::word_of_indices({0, 0, 2}));
    CHECK(apply(kOnes, Letter::isolated(2)) == subtile::word_of_indices({0, 1, 3}));
    CHECK(apply(kConstLen, Letter::isolated(0)) == subtile::word_of_indices({0, 0, 1}));
}

TEST_CASE("image of a limit letter over a constant window is itself shifted") {
    // eventually periodic a = (2, 1, 1, ...): the single accumulation point
    // is the all-ones bi-infinite word; both shifts coincide with it.
    auto windows = kConstLen.limit_letters();
    REQUIRE(windows.size() == 1);
    Letter inf = Letter::limit(windows[0]);
    Word img = apply(kConstLen, inf);
    REQUIRE(img.size() == 3);  // b_0 = 1 zero, then the two shifted windows
    CHECK(img[0] == Letter::isolated(0));
    CHECK(img[1] == inf);
    CHECK(img[2] == inf);
}

TEST_CASE("limit letters of a two-phase period shift into each other") {
    auto seq = CoefficientSequence::periodic({2, 1});
    auto windows = seq.limit_letters();
    REQUIRE(windows.size() == 2);
    Letter a = Letter::limit(windows[0]);
    Word img = apply(seq, a);
    // [0]^{b_0} [inf_{shift^-1}] [inf_{shift}] with both shifts the other phase
    REQUIRE(img.size() == static_cast<std::size_t>(windows[0].at_origin()) + 2);
    CHECK(img[img.size() - 2] == Letter::limit(windows[0].shifted(-1)));
    CHECK(img[img.size() - 1] == Letter::limit(windows[0].shifted(1)));
    CHECK(windows[0].shifted(-1) == windows[0].shifted(1));  // period 2
}

TEST_CASE("limit letters are rejected for sequences that cannot carry them") {
    auto tm = CoefficientSequence::thue_morse();
    Letter inf = Letter::limit(LimitWindow::of({1}, 0));
    CHECK_THROWS_AS(apply(tm, inf), subtile::UnsupportedLimitLetter);
    // a window that is not an accumulation point of the sequence
    Letter wrong = Letter::limit(LimitWindow::of({2, 2}, 0));
    CHECK_THROWS_AS(apply(kOnes, wrong), subtile::UnsupportedLimitLetter);
}

TEST_CASE("apply_word concatenates images in order") {
    Word w = subtile::word_of_indices({0, 1});
    CHECK(apply_word(kOnes, w) == subtile::word_of_indices({0, 1, 0, 0, 2}));
    CHECK(apply_word(kOnes, Word{}) == Word{});
    CHECK(apply_word(kOnes, Word{Letter::isolated(4)}) == apply(kOnes, Letter::isolated(4)));
}

TEST_CASE("supertiles of the all-ones sequence") {
    CHECK(supertile(kOnes, Letter::isolated(0), 0) == subtile::word_of_indices({0}));
    CHECK(supertile(kOnes, Letter::isolated(0), 2) == subtile::word_of_indices({0, 1, 0, 0, 2}));
    Word k3 = supertile(kOnes, Letter::isolated(0), 3);
    CHECK(k3 == subtile::word_of_indices({0, 1, 0, 0, 2, 0, 1, 0, 1, 0, 1, 3}));
    CHECK(k3.size() == 12);
}

TEST_CASE("supertile budget guard") {
    CHECK_THROWS_AS(supertile(kOnes, Letter::isolated(0), 40, 1000), subtile::BudgetExceeded);
}

TEST_CASE("supertile_size without materialization") {
    CHECK(supertile_size(kOnes, 0, 0) == 1);
    CHECK(supertile_size(kOnes, 0, 1) == 2);
    CHECK(supertile_size(kOnes, 0, 2) == 5);
    CHECK(supertile_size(kOnes, 0, 3) == 12);
    CHECK(supertile_size(kConstLen, 0, 1) == 3);  // constant length, lambda = 3
    CHECK(supertile_size(kConstLen, 0, 4) == 81);
    CHECK(supertile_size(kConstLen, 7, 0) == 1);
}

TEST_CASE("supertile_size matches materialized lengths") {
    for (auto& seq : {kOnes, kConstLen, CoefficientSequence::thue_morse()}) {
        for (std::uint64_t i : {0ull, 1ull, 5ull}) {
            for (unsigned k = 0; k <= 8; ++k) {
                mpz_class predicted = supertile_size(seq, i, k);
                if (predicted > 100000) continue;
                Word w = supertile(seq, Letter::isolated(i), k, 200000);
                CHECK(predicted == static_cast<long>(w.size()));
            }
        }
    }
}

TEST_CASE("supertile sizes grow at least geometrically with factor 2") {
    mpz_class two_k = 1;
    for (unsigned k = 0; k <= 20; ++k) {
        CHECK(supertile_size(kOnes, 3, k) >= two_k);
        CHECK(supertile_size(CoefficientSequence::thue_morse(), 1, k) >= two_k);
        two_k *= 2;
    }
}

TEST_CASE("nonzero letter counts of images") {
    // images of [0] and [1] carry exactly one nonzero letter, all others two
    for (std::uint64_t i = 0; i <= 1000; ++i) {
        Word img = apply(CoefficientSequence::thue_morse(), Letter::isolated(i));
        int nonzero = 0;
        for (const Letter& l : img) {
            if (l.index() != 0) ++nonzero;
        }
        CHECK(nonzero == (i <= 1 ? 1 : 2));
    }
}

TEST_CASE("letter histogram") {
    Word w = subtile::word_of_indices({0, 1, 0, 0, 2});
    auto h = letter_histogram(w);
    CHECK(h[Letter::isolated(0)] == 3);
    CHECK(h[Letter::isolated(1)] == 1);
    CHECK(h[Letter::isolated(2)] == 1);
    CHECK(letter_histogram(Word{}).empty());
    auto h1 = letter_histogram(subtile::word_of_indices({0}));
    CHECK(h1.size() == 1);
    CHECK(h1[Letter::isolated(0)] == 1);
}

TEST_CASE("truncated matrix layout") {
    auto op = truncated_matrix(kOnes, 4);
    long want[4][4] = {{1, 2, 1, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 0}};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) CHECK(op.at(i, j) == want[i][j]);
    }

    auto op2 = truncated_matrix(kConstLen, 3);
    long want2[3][3] = {{2, 2, 1}, {1, 0, 1}, {0, 1, 0}};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(op2.at(i, j) == want2[i][j]);
    }

    CHECK(truncated_matrix(kOnes, 8).at(3, 1) == 0);
    CHECK_THROWS_AS(truncated_matrix(kOnes, 2), subtile::InvalidArgument);
}

TEST_CASE("column sums equal image lengths") {
    for (auto& seq : {kOnes, kConstLen, CoefficientSequence::thue_morse()}) {
        auto op = truncated_matrix(seq, 40);
        for (std::size_t j = 1; j + 1 < op.size; ++j) {
            long sum = 0;
            for (std::size_t i = 0; i < op.size; ++i) sum += op.at(i, j);
            CHECK(sum == static_cast<long>(apply(seq, Letter::isolated(j)).size()));
        }
    }
}

TEST_CASE("power iteration approximates the inflation factor") {
    auto op = truncated_matrix(kConstLen, 60);
    auto lam = power_iteration(op);
    CHECK(std::abs(lam.midpoint().to_double() - 3.0) < 1e-6);

    auto op2 = truncated_matrix(kOnes, 60);
    auto lam2 = power_iteration(op2);
    CHECK(std::abs(lam2.midpoint().to_double() - 2.5) < 1e-6);
}

TEST_CASE("quasicompactness counting bound") {
    // for k = C+2 and F = {[0], ..., [C+1]}: letters of rho^{C+2}([i])
    // outside F number at most 2^{C+2}, while the whole supertile has at
    // least 2^{C+2} + 1 letters
    for (auto& seq :
         {kOnes, kConstLen, CoefficientSequence::thue_morse(),
          CoefficientSequence::eventually_periodic({}, {1, 0, 2}),
          CoefficientSequence::eventually_periodic({1}, {2, 0, 0, 1})}) {
        const long c = seq.zero_run_c();
        const unsigned k = static_cast<unsigned>(c) + 2;
        const mpz_class bound = mpz_class(1) << k;
        for (std::uint64_t i = 0; i <= 50; ++i) {
            auto counts = supertile_counts(seq, i, k);
            mpz_class outside = 0, total = 0;
            for (std::size_t j = 0; j < counts.size(); ++j) {
                total += counts[j];
                if (j > static_cast<std::size_t>(c) + 1) outside += counts[j];
            }
            CHECK(outside <= bound);
            CHECK(total >= bound + 1);
        }
    }
}
