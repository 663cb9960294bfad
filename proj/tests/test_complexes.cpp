#include <doctest.h>

#include <map>
#include <random>

#include "grapple/complexes.hpp"
#include "oracles.hpp"

using namespace grapple;

namespace {

DirectedGraph G(const std::string& s) { return parse_graph(s); }

struct Filter {
    bool undirected = false;
    bool connected = true;
    int min_valency = 0;
    bool no_passing = false;
    bool acyclic = false;
};

bool connected(const DirectedGraph& g) {
    if (g.vertex_count == 0) return false;
    std::vector<int> comp(g.vertex_count);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    for (auto [t, h] : g.edges) comp[find(t)] = find(h);
    for (int v = 0; v < g.vertex_count; ++v)
        if (find(v) != find(0)) return false;
    return true;
}

bool acyclic(const DirectedGraph& g) {
    // repeatedly strip sources
    std::vector<int> indeg(g.vertex_count, 0);
    for (auto [t, h] : g.edges) ++indeg[h];
    std::vector<bool> gone(g.vertex_count, false);
    for (int round = 0; round < g.vertex_count; ++round) {
        int s = -1;
        for (int v = 0; v < g.vertex_count; ++v)
            if (!gone[v] && indeg[v] == 0) s = v;
        if (s < 0) return false;
        gone[s] = true;
        for (auto [t, h] : g.edges)
            if (t == s) --indeg[h];
    }
    return true;
}

bool passes(const DirectedGraph& g, const Filter& f) {
    std::vector<int> in(g.vertex_count, 0), out(g.vertex_count, 0);
    for (auto [t, h] : g.edges) {
        ++out[t];
        ++in[h];
    }
    for (int v = 0; v < g.vertex_count; ++v) {
        if (in[v] + out[v] < f.min_valency) return false;
        if (f.no_passing && in[v] == 1 && out[v] == 1) return false;
    }
    if (f.connected && !connected(g)) return false;
    if (f.acyclic && !acyclic(g)) return false;
    return true;
}

// Number of isomorphism classes without odd automorphisms, by exhaustive search
// over edge multisets.
int brute_basis_size(int v, int e, int d, const Filter& f) {
    std::vector<std::pair<int, int>> slots;
    for (int a = 0; a < v; ++a)
        for (int b = 0; b < v; ++b)
            if (a != b && (!f.undirected || a < b)) slots.push_back({a, b});
    std::set<std::vector<std::pair<int, int>>> seen;
    int count = 0;
    std::vector<int> pick;
    std::function<void(int)> rec = [&](int from) {
        if (static_cast<int>(pick.size()) == e) {
            DirectedGraph g;
            g.vertex_count = v;
            for (int s : pick) g.edges.push_back(slots[s]);
            if (!passes(g, f)) return;
            auto cert = oracle::brute_cert(g, f.undirected);
            if (!seen.insert(cert).second) return;
            if (!oracle::brute_zero(g, d, f.undirected)) ++count;
            return;
        }
        for (int s = from; s < static_cast<int>(slots.size()); ++s) {
            pick.push_back(s);
            rec(s);
            pick.pop_back();
        }
    };
    rec(0);
    return count;
}

// Vertex splitting on trivalent-and-up undirected graphs: both halves keep at
// least two old half-edges; the new edge goes last in the orientation.
GraphVector split_oracle(const ComplexSpec& spec, const std::string& key) {
    DirectedGraph g = from_cgraph(decode_key(key));
    GraphVector out(spec.name());
    for (int v = 0; v < g.vertex_count; ++v) {
        std::vector<std::pair<int, int>> half;  // (edge, end) at v
        for (int j = 0; j < static_cast<int>(g.edges.size()); ++j) {
            if (g.edges[j].first == v) half.push_back({j, 0});
            if (g.edges[j].second == v) half.push_back({j, 1});
        }
        int k = static_cast<int>(half.size());
        for (int mask = 0; mask < (1 << k); ++mask) {
            int cnt = __builtin_popcount(mask);
            if (cnt < 2 || k - cnt < 2) continue;
            DirectedGraph s = g;
            int w = s.vertex_count++;
            for (int b = 0; b < k; ++b)
                if (mask >> b & 1) {
                    auto& ed = s.edges[half[b].first];
                    (half[b].second == 0 ? ed.first : ed.second) = w;
                }
            s.edges.push_back({v, w});
            out += element(spec, s);
        }
    }
    return out;
}

GraphVector basis_vector(const ComplexSpec& spec, const std::string& key, const Rational& q = 1) {
    GraphVector x(spec.name());
    x.add_term(key, q);
    return x;
}

}  // namespace

TEST_CASE("degree and loop order") {
    DirectedGraph edge = G("V=2 E=[(0,1)]");
    DirectedGraph k4 = G("V=4 E=[(0,1),(0,2),(0,3),(1,2),(1,3),(2,3)]");
    for (int d = 1; d <= 5; ++d) CHECK(degree(spec_dcGC(d), edge) == 1);
    CHECK(degree(spec_GC(2), k4) == 0);
    CHECK(degree(spec_GC(2), G("V=1 E=[]")) == 0);
    for (int d = 2; d <= 4; ++d)
        for (int v = 1; v <= 6; ++v)
            for (int e = 0; e <= 9; ++e) CHECK(graph_degree(d, v, e) == d * (v - 1) - (d - 1) * e);
    CHECK(loop_order(k4) == 3);
    CHECK(loop_order(edge) == 0);
    CHECK(loop_order(G("V=6 E=[(0,1),(1,2),(2,0),(3,4),(4,5),(5,3)]")) == 2);
}

TEST_CASE("named basis slices") {
    CHECK(generate_basis(spec_dGC(2), 2, 1).keys.empty());
    CHECK(generate_basis(spec_GC(2), 4, 6).keys.size() == 1);
    CHECK(generate_basis(spec_GC(2), 3, 3).keys.empty());
    CHECK(generate_basis(spec_GC(2), 4, 6).keys[0] == element(spec_GC(2), G("V=4 E=[(0,1),(0,2),(0,3),(1,2),(1,3),(2,3)]")).terms().begin()->first);
}

TEST_CASE("basis sizes match exhaustive enumeration") {
    struct Case {
        ComplexSpec spec;
        Filter f;
        int vmax, emax;
    };
    std::vector<Case> cases = {
        {spec_dGC(2), {false, true, 2, true, false}, 4, 6},
        {spec_dGC(3), {false, true, 2, true, false}, 4, 6},
        {spec_dcGC(2), {false, true, 0, false, false}, 4, 5},
        {spec_GC(2), {true, true, 3, false, false}, 6, 9},
        {spec_GC(3), {true, true, 3, false, false}, 6, 9},
        {spec_GC_ge2(2), {true, true, 2, false, false}, 5, 7},
        {spec_GC_or(2), {false, true, 2, true, true}, 4, 6},
        {spec_GC_or(3), {false, true, 2, true, true}, 4, 6},
    };
    for (const auto& c : cases) {
        for (int v = 1; v <= c.vmax; ++v)
            for (int e = 0; e <= c.emax; ++e) {
                if (c.spec.undirected() && v == 6 && e < 9) continue;
                CAPTURE(c.spec.name());
                CAPTURE(v);
                CAPTURE(e);
                CHECK(static_cast<int>(generate_basis(c.spec, v, e).keys.size()) ==
                      brute_basis_size(v, e, c.spec.d, c.f));
            }
    }
}

TEST_CASE("tetrahedron is closed and the triangle dies") {
    ComplexSpec gc = spec_GC(2);
    GraphVector k4 = element(gc, G("V=4 E=[(0,1),(0,2),(0,3),(1,2),(1,3),(2,3)]"));
    REQUIRE(k4.size() == 1);
    CHECK(differential(gc, k4).empty());
    CHECK(split_oracle(gc, k4.terms().begin()->first).empty());
    CHECK(element(gc, G("V=3 E=[(0,1),(1,2),(2,0)]")).empty());
}

TEST_CASE("GC_2 differential agrees with vertex splitting up to a scalar per slice") {
    ComplexSpec gc = spec_GC(2);
    for (auto [v, e] : std::vector<std::pair<int, int>>{{4, 6}, {5, 8}, {6, 9}, {6, 10}, {5, 7}, {6, 8}}) {
        BasisSlice b = generate_basis(gc, v, e);
        std::optional<Rational> lambda;
        for (const auto& k : b.keys) {
            GraphVector lib = differential(gc, basis_vector(gc, k));
            GraphVector ref = split_oracle(gc, k);
            CHECK(lib.empty() == ref.empty());
            if (lib.empty()) continue;
            const auto& [k0, q0] = *ref.terms().begin();
            Rational ratio = lib.coeff(k0) / q0;
            if (!lambda) lambda = ratio;
            CHECK(ratio == *lambda);
            CHECK(lib == *lambda * ref);
        }
    }
}

TEST_CASE("differential squares to zero on generated slices") {
    for (const ComplexSpec& spec : {spec_dGC(2), spec_dGC(3), spec_GC(2), spec_GC(3), spec_GC_or(2), spec_GC_or(3)}) {
        for (int v = 1; v <= 4; ++v)
            for (int e = 0; e <= 2 * v - 1; ++e)
                for (const auto& k : generate_basis(spec, v, e).keys) {
                    GraphVector x = basis_vector(spec, k);
                    CHECK(differential(spec, differential(spec, x)).empty());
                }
    }
}

TEST_CASE("edge is a Maurer-Cartan element") {
    for (int d = 1; d <= 4; ++d) {
        CHECK(lie_bracket(spec_full(Family::dFGC, d), mc_edge(spec_full(Family::dFGC, d)),
                          mc_edge(spec_full(Family::dFGC, d)))
                  .empty());
        CHECK(lie_bracket(spec_full(Family::FGC, d), mc_edge(spec_full(Family::FGC, d)),
                          mc_edge(spec_full(Family::FGC, d)))
                  .empty());
        CHECK(vector_degree(spec_full(Family::dFGC, d), mc_edge(spec_full(Family::dFGC, d))) == 1);
    }
}

TEST_CASE("differential of a point is a multiple of the edge") {
    for (int d = 2; d <= 3; ++d) {
        ComplexSpec full = spec_full(Family::dFGC, d);
        GraphVector dp = differential(full, element(full, G("V=1 E=[]")));
        GraphVector edge = mc_edge(full);
        REQUIRE(dp.size() == 1);
        CHECK(dp.terms().begin()->first == edge.terms().begin()->first);
    }
}

TEST_CASE("graded antisymmetry, Jacobi and Leibniz on random small graphs") {
    std::mt19937_64 rng(31);
    for (int d : {2, 3}) {
        ComplexSpec full = spec_full(Family::dFGC, d);
        std::vector<GraphVector> pool;
        for (int v = 1; v <= 3; ++v)
            for (int e = 0; e <= 3; ++e)
                for (const auto& k : generate_basis(full, v, e).keys) pool.push_back(basis_vector(full, k));
        REQUIRE(pool.size() >= 10);
        auto pick = [&]() -> const GraphVector& { return pool[rng() % pool.size()]; };
        for (int t = 0; t < 25; ++t) {
            const GraphVector& x = pick();
            const GraphVector& y = pick();
            const GraphVector& z = pick();
            int a = vector_degree(full, x), b = vector_degree(full, y);
            Rational sab = (a * b) % 2 ? -1 : 1;
            CHECK(lie_bracket(full, x, y) == Rational(-1) * sab * lie_bracket(full, y, x));
            GraphVector lhs = lie_bracket(full, x, lie_bracket(full, y, z));
            GraphVector rhs = lie_bracket(full, lie_bracket(full, x, y), z) + sab * lie_bracket(full, y, lie_bracket(full, x, z));
            CHECK(lhs == rhs);
            GraphVector dl = differential(full, lie_bracket(full, x, y));
            Rational sa = a % 2 ? -1 : 1;
            CHECK(dl == lie_bracket(full, differential(full, x), y) + sa * lie_bracket(full, x, differential(full, y)));
        }
    }
}

TEST_CASE("bracket with the empty graph scales by twice the loop order") {
    ComplexSpec gc = spec_GC(2);
    GraphVector k4 = element(gc, G("V=4 E=[(0,1),(0,2),(0,3),(1,2),(1,3),(2,3)]"));
    CHECK(bracket_with_empty(gc, k4) == Rational(6) * k4);
    ComplexSpec full = spec_full(Family::dFGC, 3);
    GraphVector ed = mc_edge(full);
    CHECK(bracket_with_empty(full, ed).empty());
}

TEST_CASE("direct sum map") {
    ComplexSpec gc2 = spec_GC_ge2(2);
    ComplexSpec dc = spec_dcGC(2);
    GraphVector e = mc_edge(gc2);
    GraphVector img = direct_sum_map(e);
    CHECK(img == Rational(2) * mc_edge(dc));
    GraphVector k4 = element(spec_GC(2), G("V=4 E=[(0,1),(0,2),(0,3),(1,2),(1,3),(2,3)]"));
    GraphVector k4u(gc2.name());
    for (auto& [k, q] : k4.terms()) k4u.add_term(k, q);
    GraphVector dk = direct_sum_map(k4u);
    CHECK_FALSE(dk.empty());
    Rational total = 0;
    for (auto& [k, q] : dk.terms()) total += abs(q);
    CHECK(total <= 64);
    // The edge maps to twice the directed edge, so the two differentials
    // [edge, .] are intertwined up to that factor.
    for (int v = 1; v <= 4; ++v)
        for (int ed = 0; ed <= 2 * v - 1; ++ed)
            for (const auto& k : generate_basis(gc2, v, ed).keys) {
                GraphVector x = basis_vector(gc2, k);
                CHECK(direct_sum_map(differential(gc2, x)) == Rational(2) * differential(dc, direct_sum_map(x)));
            }
}

TEST_CASE("direct sum map is a morphism of Lie algebras") {
    ComplexSpec ug = spec_full(Family::FGC, 2);
    ComplexSpec gc2 = spec_GC_ge2(2);
    ComplexSpec dg = spec_full(Family::dFGC, 2);
    std::vector<GraphVector> pool;
    for (int v = 1; v <= 3; ++v)
        for (int e = 0; e <= 3; ++e)
            for (const auto& k : generate_basis(gc2, v, e).keys) pool.push_back(basis_vector(gc2, k));
    pool.push_back(mc_edge(gc2));
    auto as_full = [&](const GraphVector& x, const ComplexSpec& s) {
        GraphVector r(s.name());
        for (auto& [k, q] : x.terms()) r.add_term(k, q);
        return r;
    };
    for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t j = i; j < pool.size(); ++j) {
            GraphVector br = lie_bracket(ug, as_full(pool[i], ug), as_full(pool[j], ug));
            GraphVector lhs = direct_sum_map(as_full(br, gc2));
            GraphVector rhs = lie_bracket(dg, as_full(direct_sum_map(pool[i]), dg), as_full(direct_sum_map(pool[j]), dg));
            CHECK(as_full(lhs, dg) == rhs);
        }
}

TEST_CASE("cohomology of small slices") {
    CohomologyReport r = cohomology_dims(spec_GC(2), 3, 0, 0);
    REQUIRE(r.slices.size() == 1);
    CHECK(r.slices[0].dim_H == 1);
    CHECK(r.slices[0].exactness == "exact");
    for (int loop = 1; loop <= 2; ++loop) {
        CohomologyReport o = cohomology_dims(spec_GC_or(2), loop, 0, 0);
        CHECK(o.slices[0].dim_H == 0);
    }
    // an empty slice has no cohomology
    CohomologyReport e = cohomology_dims(spec_GC(2), 1, -3, -3);
    CHECK(e.slices[0].dim_basis == 0);
    CHECK(e.slices[0].dim_H == 0);
}

TEST_CASE("assembled differential matrices") {
    ComplexSpec gc = spec_GC(2);
    BasisSlice a = generate_basis(gc, 4, 6), b = generate_basis(gc, 5, 7);
    auto op = [&](const GraphVector& x) { return differential(gc, x); };
    SparseRationalMatrix M = assemble(op, a, b, gc);
    CHECK(M.cols() == 1);
    CHECK(M.rows() == static_cast<int>(b.keys.size()));
    CHECK(M.is_zero());
    BasisSlice none;
    none.spec = gc;
    SparseRationalMatrix Z = assemble(op, none, b, gc);
    CHECK(Z.cols() == 0);
    ComplexSpec dg = spec_dGC(2);
    BasisSlice s3 = generate_basis(dg, 3, 4), s4 = generate_basis(dg, 4, 5), s5 = generate_basis(dg, 5, 6);
    auto dop = [&](const GraphVector& x) { return differential(dg, x); };
    SparseRationalMatrix D1 = assemble(dop, s3, s4, dg), D2 = assemble(dop, s4, s5, dg);
    CHECK(D2.multiply(D1).is_zero());
}

TEST_CASE("family lookup") {
    for (const auto& n : family_names()) CHECK_NOTHROW(spec_by_name(n, 2));
    CHECK_THROWS_AS(spec_by_name("nope", 2), std::invalid_argument);
}
