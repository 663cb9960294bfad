#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "grapple/graphcore.hpp"
#include "grapple/propcalc.hpp"

namespace grapple {

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct TruncationMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GradedSpace {
    std::vector<std::pair<int, int>> pieces;  // (degree, dimension)
    int dim() const;
    std::vector<int> degrees() const;  // degree of every basis vector
};

GradedSpace make_space(const std::vector<std::pair<int, int>>& pieces, int max_dim = 8);

/// Sign of permuting graded elements: perm[i] is the old position of the
/// element placed at position i.
int koszul_sign(const std::vector<int>& degrees, const std::vector<int>& perm);

/// Dense tensor with m output and n input slots, indices out-first, row-major.
struct Tensor {
    int m = 0;
    int n = 0;
    int dim = 0;
    std::vector<Rational> data;
    Tensor() = default;
    Tensor(int m_, int n_, int dim_);
    std::size_t index(const std::vector<int>& outs, const std::vector<int>& ins) const;
    bool operator==(const Tensor& o) const { return m == o.m && n == o.n && dim == o.dim && data == o.data; }
};

typedef std::map<std::pair<int, int>, Tensor> Rep;  // corolla (m,n) -> value

Tensor symmetrize(const Tensor& t);
Tensor random_symmetric_tensor(int m, int n, int dim, std::uint64_t seed);
Tensor partial_trace(const Tensor& t, int i, int j);

/// Contraction along internal edges; legs in label order. Requires even c,d
/// and corolla values symmetric in their outputs and inputs.
Tensor evaluate(const PropGraph& g, const Rep& rho, int dim);
/// Trace of a single prop graph: out-leg i glued to in-leg j (0-based).
PropGraph prop_trace(const PropGraph& g, int i, int j);
std::vector<std::pair<int, int>> prop_profiles(const PropGraph& g);

// --- polyvector fields ------------------------------------------------------

/// Polynomial polyvector field on V*: coordinates x_i of degree |v_i| and
/// odd partners psi_i of degree 1-|v_i|. Monomials are exponent vectors over
/// (x_1..x_N, psi_1..psi_N).
struct PolyVector {
    GradedSpace space;
    int truncation = 0;  // maximal polynomial degree in the x's
    std::map<std::vector<int>, Rational> terms;

    int N() const { return space.dim(); }
    void add(const std::vector<int>& mono, const Rational& q);
    bool is_zero() const { return terms.empty(); }
    bool operator==(const PolyVector& o) const { return terms == o.terms; }
};

int var_degree(const GradedSpace& V, int var);
int monomial_degree(const GradedSpace& V, const std::vector<int>& mono);
/// Degree of a homogeneous polyvector (throws if inhomogeneous or zero).
int polyvector_degree(const PolyVector& p);

/// Linear Poisson structure of a Lie algebra: c[i][j][k] is the coefficient
/// of v_k in [v_i, v_j].
PolyVector linear_poisson(const std::vector<std::vector<std::vector<Rational>>>& c, int truncation = 1);
/// Component with n psi's and m x's.
PolyVector component(const PolyVector& p, int n, int m);
PolyVector schouten_bracket(const PolyVector& a, const PolyVector& b);
PolyVector& operator+=(PolyVector& a, const PolyVector& b);
PolyVector scale(const Rational& q, const PolyVector& a);

}  // namespace grapple
