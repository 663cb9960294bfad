#include "grapple/linalg.hpp"

#include <algorithm>
#include <map>
#include <ostream>

namespace grapple {

SparseRationalMatrix::SparseRationalMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), cols_data_(cols) {}

void SparseRationalMatrix::add(int r, int c, const Rational& q) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("matrix index");
    Rational v = q;
    v.canonicalize();
    if (v == 0) return;
    SparseColumn& col = cols_data_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const std::pair<int, Rational>& e, int row) { return e.first < row; });
    if (it != col.end() && it->first == r) {
        it->second += v;
        if (it->second == 0) col.erase(it);
    } else {
        col.insert(it, {r, v});
    }
}

void SparseRationalMatrix::set_column(int c, SparseColumn col) {
    std::sort(col.begin(), col.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseColumn clean;
    for (auto& e : col) {
        if (!clean.empty() && clean.back().first == e.first)
            clean.back().second += e.second;
        else
            clean.push_back(e);
    }
    clean.erase(std::remove_if(clean.begin(), clean.end(), [](const auto& e) { return e.second == 0; }),
                clean.end());
    cols_data_[c] = std::move(clean);
}

std::size_t SparseRationalMatrix::nonzeros() const {
    std::size_t n = 0;
    for (auto& c : cols_data_) n += c.size();
    return n;
}

bool SparseRationalMatrix::is_zero() const { return nonzeros() == 0; }

SparseRationalMatrix SparseRationalMatrix::multiply(const SparseRationalMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("matrix shape mismatch");
    SparseRationalMatrix out(rows_, rhs.cols_);
    for (int j = 0; j < rhs.cols_; ++j) {
        std::map<int, Rational> acc;
        for (auto& [k, b] : rhs.cols_data_[j])
            for (auto& [i, a] : cols_data_[k]) acc[i] += a * b;
        SparseColumn col;
        for (auto& [i, q] : acc)
            if (q != 0) col.push_back({i, q});
        out.cols_data_[j] = std::move(col);
    }
    return out;
}

std::vector<std::vector<Rational>> SparseRationalMatrix::dense() const {
    std::vector<std::vector<Rational>> D(rows_, std::vector<Rational>(cols_));
    for (int j = 0; j < cols_; ++j)
        for (auto& [i, q] : cols_data_[j]) D[i][j] = q;
    return D;
}

namespace {
std::vector<std::uint64_t>& prime_set() {
    static std::vector<std::uint64_t> primes = {
        2305843009213693951ULL, 4611686018427387847ULL, 2305843009212693901ULL};
    return primes;
}
}  // namespace

const std::vector<std::uint64_t>& default_primes() { return prime_set(); }

void set_primes(const std::vector<std::uint64_t>& primes) {
    if (primes.empty()) throw std::invalid_argument("empty prime set");
    for (auto p : primes) {
        if (p < 3 || p >= (1ULL << 63)) throw std::invalid_argument("prime out of range");
        for (std::uint64_t q = 2; q * q <= p && q < 1000000; ++q)
            if (p % q == 0) throw std::invalid_argument(std::to_string(p) + " is not prime");
    }
    prime_set() = primes;
}

namespace {

typedef unsigned __int128 u128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((u128)a * b % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

std::uint64_t mpz_mod(const mpz_class& z, std::uint64_t p) {
    return mpz_fdiv_ui(z.get_mpz_t(), p);
}

typedef std::vector<std::pair<int, std::uint64_t>> ModColumn;

}  // namespace

int rank_mod_p(const SparseRationalMatrix& M, std::uint64_t p) {
    // Column reduction keyed by lowest row index.
    std::map<int, ModColumn> pivots;
    int r = 0;
    for (int j = 0; j < M.cols(); ++j) {
        std::map<int, std::uint64_t> v;
        for (auto& [i, q] : M.column(j)) {
            std::uint64_t den = mpz_mod(q.get_den(), p);
            if (den == 0) return -1;
            std::uint64_t num = mpz_mod(q.get_num(), p);
            std::uint64_t x = mulmod(num, powmod(den, p - 2, p), p);
            if (x) v[i] = x;
        }
        while (!v.empty()) {
            auto lead = v.begin();
            auto pit = pivots.find(lead->first);
            if (pit == pivots.end()) {
                std::uint64_t inv = powmod(lead->second, p - 2, p);
                ModColumn col;
                for (auto& [i, x] : v) col.push_back({i, mulmod(x, inv, p)});
                pivots.emplace(lead->first, std::move(col));
                ++r;
                break;
            }
            std::uint64_t f = lead->second;
            for (auto& [i, x] : pit->second) {
                std::uint64_t sub = mulmod(f, x, p);
                std::uint64_t& cur = v[i];
                cur = cur >= sub ? cur - sub : cur + (p - sub);
                if (cur == 0) v.erase(i);
            }
        }
    }
    return r;
}

namespace {

// Exact reduction; returns pivot columns keyed by leading row.
std::map<int, SparseColumn> exact_pivots(const SparseRationalMatrix& M) {
    std::map<int, SparseColumn> pivots;
    for (int j = 0; j < M.cols(); ++j) {
        std::map<int, Rational> v;
        for (auto& [i, q] : M.column(j)) v[i] = q;
        while (!v.empty()) {
            auto lead = v.begin();
            auto pit = pivots.find(lead->first);
            if (pit == pivots.end()) {
                Rational inv = 1 / lead->second;
                SparseColumn col;
                for (auto& [i, x] : v) col.push_back({i, x * inv});
                pivots.emplace(lead->first, std::move(col));
                break;
            }
            Rational f = lead->second;
            for (auto& [i, x] : pit->second) {
                Rational& cur = v[i];
                cur -= f * x;
                if (cur == 0) v.erase(i);
            }
        }
    }
    return pivots;
}

}  // namespace

int rank_exact(const SparseRationalMatrix& M) { return static_cast<int>(exact_pivots(M).size()); }

int rank(const SparseRationalMatrix& M) {
    int modular = -1;
    for (auto p : default_primes()) {
        int r = rank_mod_p(M, p);
        if (r < 0) continue;
        if (modular >= 0 && r != modular)
            throw RankMismatch("modular ranks disagree");
        modular = std::max(modular, r);
    }
    int exact = rank_exact(M);
    if (modular >= 0 && modular != exact)
        throw RankMismatch("modular rank " + std::to_string(modular) + " != exact rank " +
                           std::to_string(exact));
    return exact;
}

std::vector<std::vector<Rational>> kernel_basis(const SparseRationalMatrix& M) {
    auto A = M.dense();
    int m = M.rows(), n = M.cols();
    std::vector<int> pivot_col;
    int row = 0;
    for (int c = 0; c < n && row < m; ++c) {
        int sel = -1;
        for (int i = row; i < m; ++i)
            if (A[i][c] != 0) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(A[sel], A[row]);
        Rational inv = 1 / A[row][c];
        for (int k = c; k < n; ++k) A[row][k] *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == row || A[i][c] == 0) continue;
            Rational f = A[i][c];
            for (int k = c; k < n; ++k) A[i][k] -= f * A[row][k];
        }
        pivot_col.push_back(c);
        ++row;
    }
    std::vector<bool> is_pivot(n, false);
    for (int c : pivot_col) is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (int f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(n);
        v[f] = 1;
        for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = -A[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

bool in_image(const SparseRationalMatrix& M, const std::vector<Rational>& v) {
    if ((int)v.size() != M.rows()) throw std::invalid_argument("vector length mismatch");
    SparseRationalMatrix aug(M.rows(), M.cols() + 1);
    for (int j = 0; j < M.cols(); ++j) aug.set_column(j, M.column(j));
    SparseColumn col;
    for (int i = 0; i < M.rows(); ++i)
        if (v[i] != 0) col.push_back({i, v[i]});
    aug.set_column(M.cols(), col);
    return rank(aug) == rank(M);
}

void export_matrix_market(const SparseRationalMatrix& M, std::ostream& os) {
    os << "%%MatrixMarket matrix coordinate rational general\n";
    os << M.rows() << " " << M.cols() << " " << M.nonzeros() << "\n";
    for (int j = 0; j < M.cols(); ++j)
        for (auto& [i, q] : M.column(j))
            os << (i + 1) << " " << (j + 1) << " " << q.get_num().get_str() << "/"
               << q.get_den().get_str() << "\n";
}

}  // namespace grapple
