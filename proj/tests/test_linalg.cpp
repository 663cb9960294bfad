#include <doctest.h>

#include <random>
#include <sstream>

#include "grapple/linalg.hpp"

using namespace grapple;

namespace {

// Dense Gaussian elimination over Q, kept deliberately naive.
int naive_rank(std::vector<std::vector<Rational>> a) {
    int rows = static_cast<int>(a.size());
    int cols = rows ? static_cast<int>(a[0].size()) : 0;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][c] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(a[r], a[piv]);
        for (int i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c] / a[r][c];
            for (int j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        ++r;
    }
    return r;
}

SparseRationalMatrix random_matrix(std::mt19937_64& rng, int rows, int cols, int density_pct) {
    SparseRationalMatrix M(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
            if (static_cast<int>(rng() % 100) < density_pct) {
                long num = static_cast<long>(rng() % 7) - 3;
                long den = static_cast<long>(rng() % 3) + 1;
                Rational q(num, den);
                q.canonicalize();
                M.add(r, c, q);
            }
    return M;
}

// Low-rank matrix as a product of thin factors so the rank is interesting.
SparseRationalMatrix low_rank(std::mt19937_64& rng, int rows, int cols, int k) {
    return random_matrix(rng, rows, k, 60).multiply(random_matrix(rng, k, cols, 60));
}

}  // namespace

TEST_CASE("rank of trivial matrices") {
    CHECK(rank(SparseRationalMatrix(5, 7)) == 0);
    SparseRationalMatrix I(6, 6);
    for (int i = 0; i < 6; ++i) I.add(i, i, 1);
    CHECK(rank(I) == 6);
    CHECK(rank(SparseRationalMatrix(0, 4)) == 0);
    CHECK(rank(SparseRationalMatrix(4, 0)) == 0);
}

TEST_CASE("rank agrees with naive elimination on random matrices") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        int rows = 1 + static_cast<int>(rng() % 9);
        int cols = 1 + static_cast<int>(rng() % 9);
        SparseRationalMatrix M = trial % 2 ? random_matrix(rng, rows, cols, 40)
                                           : low_rank(rng, rows, cols, 1 + static_cast<int>(rng() % 3));
        int oracle = naive_rank(M.dense());
        CHECK(rank(M) == oracle);
        CHECK(rank_exact(M) == oracle);
    }
}

TEST_CASE("kernel basis has dimension cols - rank and lies in the kernel") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        int rows = 1 + static_cast<int>(rng() % 6);
        int cols = 1 + static_cast<int>(rng() % 8);
        SparseRationalMatrix M = low_rank(rng, rows, cols, 1 + static_cast<int>(rng() % 3));
        auto ker = kernel_basis(M);
        CHECK(static_cast<int>(ker.size()) == cols - naive_rank(M.dense()));
        auto dense = M.dense();
        for (const auto& v : ker) {
            REQUIRE(static_cast<int>(v.size()) == cols);
            for (int r = 0; r < rows; ++r) {
                Rational s = 0;
                for (int c = 0; c < cols; ++c) s += dense[r][c] * v[c];
                CHECK(s == 0);
            }
        }
        // kernel vectors are independent
        if (!ker.empty()) {
            std::vector<std::vector<Rational>> rowsv(ker.begin(), ker.end());
            CHECK(naive_rank(rowsv) == static_cast<int>(ker.size()));
        }
    }
}

TEST_CASE("in_image membership") {
    SparseRationalMatrix M(3, 2);
    M.add(0, 0, 1);
    M.add(1, 0, 1);
    M.add(2, 1, 2);
    CHECK(in_image(M, {Rational(3), Rational(3), Rational(1)}));
    CHECK_FALSE(in_image(M, {Rational(1), Rational(0), Rational(0)}));
    CHECK(in_image(M, {Rational(0), Rational(0), Rational(0)}));
}

TEST_CASE("multiply and is_zero") {
    SparseRationalMatrix A(2, 2), B(2, 2);
    A.add(0, 1, 1);  // nilpotent
    B.add(0, 1, 1);
    CHECK(A.multiply(B).is_zero());
    CHECK_FALSE(A.is_zero());
    CHECK(A.nonzeros() == 1);
}

TEST_CASE("prime set validation") {
    auto saved = default_primes();
    CHECK_THROWS_AS(set_primes({4}), std::invalid_argument);
    CHECK_THROWS_AS(set_primes({2}), std::invalid_argument);
    CHECK_THROWS_AS(set_primes({}), std::invalid_argument);
    set_primes({1000003});
    CHECK(default_primes().size() == 1);
    SparseRationalMatrix I(3, 3);
    for (int i = 0; i < 3; ++i) I.add(i, i, Rational(1, 1000003));
    CHECK(rank(I) == 3);  // denominators vanishing mod p fall back to exact
    set_primes(saved);
    CHECK(default_primes() == saved);
}

TEST_CASE("matrix market export") {
    SparseRationalMatrix M(2, 3);
    M.add(1, 2, Rational(-1, 2));
    std::ostringstream os;
    export_matrix_market(M, os);
    std::string s = os.str();
    CHECK(s.find("%%MatrixMarket") == 0);
    CHECK(s.find("2 3 1") != std::string::npos);
    CHECK(s.find("2 3 -1/2") != std::string::npos);
}
