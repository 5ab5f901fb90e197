#include "doctest.h"

#include <random>

#include "kron/rat_matrix.hpp"

using namespace kron;

namespace {

// Independent determinant oracle: cofactor expansion.
Rat det_cofactor(const RatMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 0) return Rat(1);
    if (n == 1) return m.at(0, 0);
    Rat total(0);
    for (std::size_t j = 0; j < n; ++j) {
        if (m.at(0, j) == 0) continue;
        RatMatrix minor(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = m.at(r, c);
            }
        }
        Rat term = m.at(0, j) * det_cofactor(minor);
        total += (j % 2 == 0) ? term : -term;
    }
    return total;
}

RatMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols) {
    std::uniform_int_distribution<long> num(-6, 6);
    std::uniform_int_distribution<long> den(1, 4);
    RatMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rat(num(rng), den(rng));
    return m;
}

}  // namespace

TEST_SUITE("rat_matrix") {

TEST_CASE("parse and print rationals") {
    CHECK(parse_rat("3/4") == rat(3, 4));
    CHECK(parse_rat("-6/8") == rat(-3, 4));
    CHECK(parse_rat(" 7 ") == rat(7));
    CHECK(rat_to_string(rat(-3, 4)) == "-3/4");
    CHECK_THROWS_AS(parse_rat("1/0"), Error);
    CHECK_THROWS_AS(parse_rat("a/b"), Error);
    CHECK_THROWS_AS(parse_rat(""), Error);
}

TEST_CASE("determinant matches cofactor oracle on random matrices") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 1 + trial % 5;
        RatMatrix m = random_matrix(rng, n, n);
        CHECK(m.determinant() == det_cofactor(m));
    }
}

TEST_CASE("inverse and multiplication") {
    std::mt19937 rng(99);
    int invertible = 0;
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 2 + trial % 4;
        RatMatrix m = random_matrix(rng, n, n);
        if (m.determinant() == 0) continue;
        ++invertible;
        CHECK(m * m.inverse() == RatMatrix::identity(n));
    }
    CHECK(invertible > 10);
    CHECK_THROWS_AS(RatMatrix::zero(3, 3).inverse(), Error);
}

TEST_CASE("nullspace vectors are annihilated and complete the rank") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        RatMatrix m = random_matrix(rng, 3, 5);
        RatMatrix ns = m.nullspace();
        CHECK(ns.cols() == 5 - m.rank());
        CHECK((m * ns).is_zero());
        CHECK(ns.rank() == ns.cols());
    }
}

TEST_CASE("rank of rank-one product") {
    RatMatrix col = RatMatrix::from_ints(3, 1, {1, 2, 3});
    RatMatrix row = RatMatrix::from_ints(1, 3, {4, 5, 6});
    CHECK((col * row).rank() == 1);
    CHECK(col.rank() == 1);
    CHECK(RatMatrix::zero(4, 2).rank() == 0);
}

TEST_CASE("column space inclusion") {
    RatMatrix a = RatMatrix::from_ints(3, 2, {1, 0, 0, 1, 0, 0});
    RatMatrix b = RatMatrix::from_ints(3, 1, {2, 3, 0});
    RatMatrix c = RatMatrix::from_ints(3, 1, {0, 0, 1});
    CHECK(a.column_space_contains(b));
    CHECK(!a.column_space_contains(c));
    CHECK(same_column_space(a, a.hcat(b)));
}

}  // TEST_SUITE
