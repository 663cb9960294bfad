#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace grapple {

typedef mpq_class Rational;

struct IncompleteCodomain : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RankMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

typedef std::vector<std::pair<int, Rational>> SparseColumn;

/// Column-major sparse matrix with exact rational entries.
class SparseRationalMatrix {
public:
    SparseRationalMatrix() = default;
    SparseRationalMatrix(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    void add(int r, int c, const Rational& q);
    const SparseColumn& column(int c) const { return cols_data_[c]; }
    void set_column(int c, SparseColumn col);
    std::size_t nonzeros() const;
    bool is_zero() const;

    SparseRationalMatrix multiply(const SparseRationalMatrix& rhs) const;
    std::vector<std::vector<Rational>> dense() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<SparseColumn> cols_data_;
};

const std::vector<std::uint64_t>& default_primes();
/// Replaces the prime set used by rank(); not thread-safe.
void set_primes(const std::vector<std::uint64_t>& primes);

/// Rank modulo p. Returns -1 when some denominator vanishes mod p.
int rank_mod_p(const SparseRationalMatrix& M, std::uint64_t p);
int rank_exact(const SparseRationalMatrix& M);

/// Multi-modular rank certified by exact elimination; throws RankMismatch
/// if the two methods disagree.
int rank(const SparseRationalMatrix& M);

std::vector<std::vector<Rational>> kernel_basis(const SparseRationalMatrix& M);
bool in_image(const SparseRationalMatrix& M, const std::vector<Rational>& v);

void export_matrix_market(const SparseRationalMatrix& M, std::ostream& os);

struct SliceReport {
    std::string slice;
    int dim_basis = 0;
    int rank_in = 0;
    int rank_out = 0;
    int dim_H = 0;
    std::string exactness = "exact";  // exact | lower-bound | upper-bound
};

}  // namespace grapple
