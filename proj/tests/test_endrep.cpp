#include <doctest.h>

#include <numeric>
#include <random>

#include "grapple/endrep.hpp"

using namespace grapple;

namespace {

// Sign of sorting by adjacent transpositions, tracking odd-odd swaps.
int bubble_sign(const std::vector<int>& degrees, std::vector<int> seq) {
    int s = 1;
    for (std::size_t pass = 0; pass < seq.size(); ++pass)
        for (std::size_t i = 0; i + 1 < seq.size(); ++i)
            if (seq[i] > seq[i + 1]) {
                if (degrees[seq[i]] % 2 && degrees[seq[i + 1]] % 2) s = -s;
                std::swap(seq[i], seq[i + 1]);
            }
    return s;
}

typedef std::vector<std::vector<std::vector<Rational>>> Structure;

Structure zero_structure(int N) { return Structure(N, std::vector<std::vector<Rational>>(N, std::vector<Rational>(N, 0))); }

void set_bracket(Structure& c, int i, int j, int k, const Rational& q) {
    c[i][j][k] = q;
    c[j][i][k] = -q;
}

bool jacobi_holds(const Structure& c) {
    const int N = static_cast<int>(c.size());
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
                for (int l = 0; l < N; ++l) {
                    Rational s = 0;
                    for (int m = 0; m < N; ++m)
                        s += c[i][j][m] * c[m][k][l] + c[j][k][m] * c[m][i][l] + c[k][i][m] * c[m][j][l];
                    if (s != 0) return false;
                }
    return true;
}

Rep random_rep(int dim, std::uint64_t seed, int max_arity) {
    Rep rho;
    for (int m = 0; m <= max_arity; ++m)
        for (int n = 0; m + n <= max_arity; ++n) rho[{m, n}] = random_symmetric_tensor(m, n, dim, seed * 131 + m * 11 + n);
    return rho;
}

PropGraph prop(int V, std::vector<std::pair<int, int>> e, std::vector<int> in, std::vector<int> out) {
    PropGraph g;
    g.c = 0;
    g.d = 0;
    g.V = V;
    g.edges = std::move(e);
    g.in = std::move(in);
    g.out = std::move(out);
    return g;
}

}  // namespace

TEST_CASE("Koszul signs against bubble sort") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        int n = 1 + static_cast<int>(rng() % 6);
        std::vector<int> deg(n), perm(n);
        for (auto& d : deg) d = static_cast<int>(rng() % 4) - 1;
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        CHECK(koszul_sign(deg, perm) == bubble_sign(deg, perm));
    }
    CHECK(koszul_sign({1, 1}, {1, 0}) == -1);
    CHECK(koszul_sign({1, 2}, {1, 0}) == 1);
}

TEST_CASE("graded spaces") {
    GradedSpace V = make_space({{0, 2}, {1, 1}});
    CHECK(V.dim() == 3);
    CHECK(V.degrees() == std::vector<int>{0, 0, 1});
    CHECK_THROWS_AS(make_space({{0, 9}}), DimensionError);
    CHECK_THROWS_AS(make_space({{0, -1}}), DimensionError);
}

TEST_CASE("evaluation of the one-vertex wheel is the trace") {
    const int dim = 3;
    Tensor A(1, 1, dim);
    Rational tr = 0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            A.data[A.index({i}, {j})] = Rational(i * 3 + j + 1, 2);
            if (i == j) tr += A.data[A.index({i}, {j})];
        }
    Rep rho;
    rho[{1, 1}] = A;
    Tensor t = evaluate(prop(1, {{0, 0}}, {}, {}), rho, dim);
    REQUIRE(t.data.size() == 1);
    CHECK(t.data[0] == tr);
    CHECK_THROWS_AS(evaluate(prop(1, {{0, 0}}, {}, {}), Rep{}, dim), MissingValue);
    PropGraph odd = prop(1, {{0, 0}}, {}, {});
    odd.d = 1;
    CHECK_THROWS_AS(evaluate(odd, rho, dim), ParityError);
}

TEST_CASE("evaluation commutes with traces") {
    std::vector<PropGraph> graphs = {
        prop(1, {}, {0, 0}, {0, 0}),
        prop(2, {{0, 1}}, {0, 1}, {1, 0}),
        prop(2, {{0, 1}, {1, 0}}, {0, 1, 1}, {0, 1}),
        prop(3, {{0, 1}, {1, 2}}, {0, 2}, {1, 2}),
    };
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
        for (int dim = 1; dim <= 3; ++dim) {
            Rep rho = random_rep(dim, seed, 6);
            for (const auto& g : graphs) {
                Tensor full = evaluate(g, rho, dim);
                for (int i = 0; i < static_cast<int>(g.out.size()); ++i)
                    for (int j = 0; j < static_cast<int>(g.in.size()); ++j)
                        CHECK(evaluate(prop_trace(g, i, j), rho, dim) == partial_trace(full, i, j));
            }
        }
}

TEST_CASE("Schouten bracket of linear Poisson structures") {
    // abelian
    CHECK(schouten_bracket(linear_poisson(zero_structure(2)), linear_poisson(zero_structure(2))).is_zero());
    // 2-dim non-abelian: [e0, e1] = e1
    Structure c = zero_structure(2);
    set_bracket(c, 0, 1, 1, 1);
    PolyVector pi = linear_poisson(c);
    CHECK_FALSE(pi.is_zero());
    CHECK(schouten_bracket(pi, pi).is_zero());
    // so(3)
    Structure so3 = zero_structure(3);
    set_bracket(so3, 0, 1, 2, 1);
    set_bracket(so3, 1, 2, 0, 1);
    set_bracket(so3, 2, 0, 1, 1);
    CHECK(schouten_bracket(linear_poisson(so3), linear_poisson(so3)).is_zero());
    // Jacobi fails exactly when [pi, pi] is nonzero
    std::mt19937_64 rng(17);
    int failures_seen = 0;
    for (int t = 0; t < 40; ++t) {
        int N = 2 + static_cast<int>(rng() % 2);
        Structure s = zero_structure(N);
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j)
                for (int k = 0; k < N; ++k)
                    if (rng() % 3 == 0) set_bracket(s, i, j, k, static_cast<long>(rng() % 5) - 2);
        PolyVector p = linear_poisson(s);
        bool jac = jacobi_holds(s);
        if (!jac) ++failures_seen;
        CHECK(schouten_bracket(p, p).is_zero() == jac);
    }
    CHECK(failures_seen > 0);
}

TEST_CASE("graded antisymmetry of the Schouten bracket") {
    std::mt19937_64 rng(23);
    GradedSpace V = make_space({{0, 2}, {1, 1}});
    const int N = V.dim();
    auto random_mono = [&]() {
        PolyVector p;
        p.space = V;
        p.truncation = 3;
        std::vector<int> mono(2 * N, 0);
        for (int v = 0; v < 2 * N; ++v) {
            bool odd = var_degree(V, v) % 2 != 0;
            mono[v] = static_cast<int>(rng() % (odd ? 2 : 3));
        }
        p.add(mono, static_cast<long>(rng() % 5) + 1);
        return p;
    };
    int checked = 0;
    for (int t = 0; t < 100; ++t) {
        PolyVector a = random_mono(), b = random_mono();
        if (a.is_zero() || b.is_zero()) continue;
        int da = polyvector_degree(a), db = polyvector_degree(b);
        int s = ((da - 1) * (db - 1)) % 2 ? 1 : -1;
        CHECK(schouten_bracket(a, b) == scale(s, schouten_bracket(b, a)));
        ++checked;
    }
    CHECK(checked > 50);
}
