#include "grapple/endrep.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace grapple {

int GradedSpace::dim() const {
    int d = 0;
    for (auto [deg, n] : pieces) d += n;
    return d;
}

std::vector<int> GradedSpace::degrees() const {
    std::vector<int> out;
    for (auto [deg, n] : pieces)
        for (int i = 0; i < n; ++i) out.push_back(deg);
    return out;
}

GradedSpace make_space(const std::vector<std::pair<int, int>>& pieces, int max_dim) {
    GradedSpace V{pieces};
    for (auto [deg, n] : pieces)
        if (n < 0) throw DimensionError("negative dimension");
    if (V.dim() > max_dim) throw DimensionError("total dimension " + std::to_string(V.dim()) + " exceeds " + std::to_string(max_dim));
    return V;
}

int koszul_sign(const std::vector<int>& degrees, const std::vector<int>& perm) {
    int s = 1;
    for (std::size_t a = 0; a < perm.size(); ++a)
        for (std::size_t b = a + 1; b < perm.size(); ++b)
            if (perm[a] > perm[b] && degrees[perm[a]] % 2 != 0 && degrees[perm[b]] % 2 != 0) s = -s;
    return s;
}

// ---------------------------------------------------------------------------

Tensor::Tensor(int m_, int n_, int dim_) : m(m_), n(n_), dim(dim_) {
    std::size_t size = 1;
    for (int i = 0; i < m + n; ++i) size *= static_cast<std::size_t>(dim);
    data.assign(size, Rational(0));
}

std::size_t Tensor::index(const std::vector<int>& outs, const std::vector<int>& ins) const {
    std::size_t k = 0;
    for (int a : outs) k = k * dim + a;
    for (int a : ins) k = k * dim + a;
    return k;
}

namespace {

// Calls f for every multi-index in [0,dim)^len.
template <class F>
void for_each_index(int len, int dim, F&& f) {
    std::vector<int> idx(len, 0);
    if (dim == 0 && len > 0) return;
    for (;;) {
        f(idx);
        int i = len - 1;
        while (i >= 0 && ++idx[i] == dim) idx[i--] = 0;
        if (i < 0) return;
    }
}

}  // namespace

Tensor symmetrize(const Tensor& t) {
    Tensor r(t.m, t.n, t.dim);
    std::vector<int> po(t.m), pi(t.n);
    Rational count = 0;
    std::iota(po.begin(), po.end(), 0);
    do {
        std::iota(pi.begin(), pi.end(), 0);
        do {
            count += 1;
            for_each_index(t.m + t.n, t.dim, [&](const std::vector<int>& idx) {
                std::vector<int> outs(t.m), ins(t.n), so(t.m), si(t.n);
                for (int a = 0; a < t.m; ++a) outs[a] = idx[a];
                for (int b = 0; b < t.n; ++b) ins[b] = idx[t.m + b];
                for (int a = 0; a < t.m; ++a) so[a] = outs[po[a]];
                for (int b = 0; b < t.n; ++b) si[b] = ins[pi[b]];
                r.data[r.index(outs, ins)] += t.data[t.index(so, si)];
            });
        } while (std::next_permutation(pi.begin(), pi.end()));
    } while (std::next_permutation(po.begin(), po.end()));
    for (auto& q : r.data) q /= count;
    return r;
}

Tensor random_symmetric_tensor(int m, int n, int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coef(-3, 3);
    Tensor t(m, n, dim);
    for (auto& q : t.data) q = coef(rng);
    return symmetrize(t);
}

Tensor partial_trace(const Tensor& t, int i, int j) {
    if (i < 0 || i >= t.m || j < 0 || j >= t.n) throw ArityError("partial trace index out of range");
    Tensor r(t.m - 1, t.n - 1, t.dim);
    for_each_index(t.m + t.n - 2, t.dim, [&](const std::vector<int>& idx) {
        std::vector<int> outs(idx.begin(), idx.begin() + (t.m - 1)), ins(idx.begin() + (t.m - 1), idx.end());
        Rational s = 0;
        for (int a = 0; a < t.dim; ++a) {
            std::vector<int> o = outs, n = ins;
            o.insert(o.begin() + i, a);
            n.insert(n.begin() + j, a);
            s += t.data[t.index(o, n)];
        }
        r.data[r.index(outs, ins)] = s;
    });
    return r;
}

std::vector<std::pair<int, int>> prop_profiles(const PropGraph& g) {
    std::vector<std::pair<int, int>> p(g.V, {0, 0});
    for (auto [a, b] : g.edges) {
        p[a].first++;
        p[b].second++;
    }
    for (int v : g.out) p[v].first++;
    for (int v : g.in) p[v].second++;
    return p;
}

Tensor evaluate(const PropGraph& g, const Rep& rho, int dim) {
    if (g.c % 2 != 0 || g.d % 2 != 0) throw ParityError("evaluation sandbox supports even (c,d) only");
    if (dim < 1 || dim > 8) throw DimensionError("dimension out of range");
    const int E = static_cast<int>(g.edges.size());
    const int m = static_cast<int>(g.out.size()), n = static_cast<int>(g.in.size());
    // slots of every vertex: variables in the order edges, out-legs, in-legs
    std::vector<std::vector<int>> vout(g.V), vin(g.V);
    for (int j = 0; j < E; ++j) {
        vout.at(g.edges[j].first).push_back(j);
        vin.at(g.edges[j].second).push_back(j);
    }
    for (int i = 0; i < m; ++i) vout.at(g.out[i]).push_back(E + i);
    for (int i = 0; i < n; ++i) vin.at(g.in[i]).push_back(E + m + i);
    std::vector<const Tensor*> val(g.V);
    for (int v = 0; v < g.V; ++v) {
        auto it = rho.find({static_cast<int>(vout[v].size()), static_cast<int>(vin[v].size())});
        if (it == rho.end()) throw MissingValue("no value for corolla (" + std::to_string(vout[v].size()) + "," + std::to_string(vin[v].size()) + ")");
        if (it->second.dim != dim) throw DimensionError("corolla value of the wrong dimension");
        val[v] = &it->second;
    }
    Tensor r(m, n, dim);
    for_each_index(E + m + n, dim, [&](const std::vector<int>& idx) {
        Rational p = 1;
        for (int v = 0; v < g.V && p != 0; ++v) {
            std::vector<int> o, i;
            for (int x : vout[v]) o.push_back(idx[x]);
            for (int x : vin[v]) i.push_back(idx[x]);
            p *= val[v]->data[val[v]->index(o, i)];
        }
        if (p == 0) return;
        std::vector<int> o(idx.begin() + E, idx.begin() + E + m), i(idx.begin() + E + m, idx.end());
        r.data[r.index(o, i)] += p;
    });
    return r;
}

PropGraph prop_trace(const PropGraph& g, int i, int j) {
    if (i < 0 || i >= static_cast<int>(g.out.size()) || j < 0 || j >= static_cast<int>(g.in.size()))
        throw ArityError("trace leg index out of range");
    PropGraph r = g;
    r.edges.push_back({g.out[i], g.in[j]});
    r.out.erase(r.out.begin() + i);
    r.in.erase(r.in.begin() + j);
    return r;
}

// ---------------------------------------------------------------------------

int var_degree(const GradedSpace& V, int var) {
    const int N = V.dim();
    auto deg = V.degrees();
    return var < N ? deg[var] : 1 - deg[var - N];
}

int monomial_degree(const GradedSpace& V, const std::vector<int>& mono) {
    int d = 0;
    for (std::size_t v = 0; v < mono.size(); ++v) d += mono[v] * var_degree(V, static_cast<int>(v));
    return d;
}

int polyvector_degree(const PolyVector& p) {
    if (p.terms.empty()) throw std::invalid_argument("degree of the zero polyvector");
    int d = monomial_degree(p.space, p.terms.begin()->first);
    for (const auto& [mono, q] : p.terms)
        if (monomial_degree(p.space, mono) != d) throw std::invalid_argument("inhomogeneous polyvector");
    return d;
}

void PolyVector::add(const std::vector<int>& mono, const Rational& q) {
    if (q == 0) return;
    int xdeg = 0;
    for (int v = 0; v < N(); ++v) xdeg += mono[v];
    if (xdeg > truncation) return;
    Rational& c = terms[mono];
    c += q;
    if (c == 0) terms.erase(mono);
}

namespace {

bool odd_var(const GradedSpace& V, int v) { return var_degree(V, v) % 2 != 0; }

// Product of monomials with the sign of sorting odd variables.
int mono_mul(const GradedSpace& V, const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& out) {
    const int n = static_cast<int>(a.size());
    out.assign(n, 0);
    int s = 1;
    for (int v = 0; v < n; ++v) {
        out[v] = a[v] + b[v];
        if (odd_var(V, v) && out[v] > 1) return 0;
    }
    // every odd variable of b moves left past the odd variables of a with larger index
    for (int w = 0; w < n; ++w) {
        if (!b[w] || !odd_var(V, w)) continue;
        for (int v = w + 1; v < n; ++v)
            if (a[v] && odd_var(V, v)) s = -s;
    }
    return s;
}

// Left (from the front) or right (from the back) derivative of a monomial.
int mono_deriv(const GradedSpace& V, const std::vector<int>& a, int v, bool left, std::vector<int>& out) {
    if (a[v] == 0) return 0;
    out = a;
    int c = out[v]--;
    if (odd_var(V, v)) {
        int passed = 0;
        const int n = static_cast<int>(a.size());
        for (int w = 0; w < n; ++w) {
            if (w == v || !odd_var(V, w) || !a[w]) continue;
            if (left ? w < v : w > v) ++passed;
        }
        if (passed % 2) c = -c;
    }
    return c;
}

}  // namespace

PolyVector& operator+=(PolyVector& a, const PolyVector& b) {
    for (const auto& [m, q] : b.terms) a.add(m, q);
    return a;
}

PolyVector scale(const Rational& q, const PolyVector& a) {
    PolyVector r = a;
    r.terms.clear();
    for (const auto& [m, c] : a.terms) r.add(m, q * c);
    return r;
}

PolyVector linear_poisson(const std::vector<std::vector<std::vector<Rational>>>& c, int truncation) {
    const int N = static_cast<int>(c.size());
    PolyVector p;
    p.space = make_space({{0, N}});
    p.truncation = truncation;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k) {
                if (i == j || c[i][j][k] == 0) continue;
                // (1/2) c_ij^k x_k psi_i psi_j, written in sorted order
                std::vector<int> mono(2 * N, 0);
                mono[k] = 1;
                mono[N + i] = 1;
                mono[N + j] = 1;
                p.add(mono, Rational(i < j ? 1 : -1, 2) * c[i][j][k]);
            }
    return p;
}

PolyVector component(const PolyVector& p, int n, int m) {
    PolyVector r = p;
    r.terms.clear();
    const int N = p.N();
    for (const auto& [mono, q] : p.terms) {
        int xs = 0, ps = 0;
        for (int v = 0; v < N; ++v) {
            xs += mono[v];
            ps += mono[N + v];
        }
        if (xs == m && ps == n) r.terms[mono] = q;
    }
    return r;
}

PolyVector schouten_bracket(const PolyVector& a, const PolyVector& b) {
    if (a.truncation != b.truncation) throw TruncationMismatch("polyvectors truncated at different orders");
    if (a.space.pieces != b.space.pieces) throw DimensionError("polyvectors on different spaces");
    const int N = a.N();
    PolyVector r;
    r.space = a.space;
    r.truncation = a.truncation;
    // (F,G) = sum_i F d<x_i d>psi_i G - F d<psi_i d>x_i G
    for (const auto& [ma, qa] : a.terms)
        for (const auto& [mb, qb] : b.terms)
            for (int i = 0; i < N; ++i) {
                for (int pass = 0; pass < 2; ++pass) {
                    int va = pass == 0 ? i : N + i, vb = pass == 0 ? N + i : i;
                    std::vector<int> da, db, prod;
                    int ca = mono_deriv(a.space, ma, va, false, da);
                    if (!ca) continue;
                    int cb = mono_deriv(a.space, mb, vb, true, db);
                    if (!cb) continue;
                    int s = mono_mul(a.space, da, db, prod);
                    if (!s) continue;
                    r.add(prod, qa * qb * ca * cb * s * (pass == 0 ? 1 : -1));
                }
            }
    return r;
}

}  // namespace grapple
