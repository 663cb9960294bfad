#include "grapple/propcalc.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "parse_util.hpp"

namespace grapple {

namespace detail {

int relative_sign(const std::vector<long>& from, const std::vector<long>& to) {
    if (from.size() != to.size()) throw std::logic_error("relative_sign: size mismatch");
    // sequences are short; a linear scan beats hashing
    std::vector<int> seq;
    seq.reserve(from.size());
    for (long a : from) {
        auto it = std::find(to.begin(), to.end(), a);
        if (it == to.end()) throw std::logic_error("relative_sign: atom mismatch");
        seq.push_back(static_cast<int>(it - to.begin()));
    }
    return sort_sign(seq);
}

}  // namespace detail

using detail::relative_sign;

namespace {

// Atom ids for sign bookkeeping: kind in the high bits, index in the low bits.
enum AtomKind : long { kGV = 1, kGO, kGI, kXV, kXO, kXI, kNew };
long atom(long kind, long idx) { return (kind << 32) | idx; }

bool is_leg_color(int col) { return col < 0; }
bool is_out_leg(int col) { return col >= kOutLegColor && col < kInLegColor; }
bool is_in_leg(int col) { return col >= kInLegColor && col < 0; }

bool internal_edge(const CEdge& e) { return e.color != kLegEdgeColor; }

Rational factorial(int n) {
    mpz_class f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return Rational(f);
}

// Explicit wedge (out-legs)(in-legs)(odd internal vertices)(odd edges) of a
// labeled graph whose vertex order may be arbitrary.
std::vector<Obj> labeled_wedge(const CGraph& g) {
    std::vector<std::pair<int, int>> outs, ins;
    std::vector<Obj> w;
    for (int v = 0; v < g.n(); ++v) {
        if (!g.odd[v]) continue;
        if (is_out_leg(g.color[v])) outs.push_back({g.color[v], v});
        else if (is_in_leg(g.color[v])) ins.push_back({g.color[v], v});
    }
    std::sort(outs.begin(), outs.end());
    std::sort(ins.begin(), ins.end());
    for (auto& p : outs) w.push_back({false, p.second});
    for (auto& p : ins) w.push_back({false, p.second});
    for (int v = 0; v < g.n(); ++v)
        if (g.odd[v] && !is_leg_color(g.color[v])) w.push_back({false, v});
    for (int j = 0; j < static_cast<int>(g.edges.size()); ++j)
        if (g.edges[j].odd) w.push_back({true, j});
    return w;
}

// (leg vertex, attached vertex) for out-leg / in-leg number i.
std::pair<int, int> leg_anchor(const CGraph& g, int leg_color) {
    for (int v = 0; v < g.n(); ++v) {
        if (g.color[v] != leg_color) continue;
        for (const auto& e : g.edges) {
            if (e.color != kLegEdgeColor) continue;
            if (e.h == v) return {v, e.t};
            if (e.t == v) return {v, e.h};
        }
        throw InvalidGraph("leg without edge");
    }
    throw InvalidGraph("missing leg " + std::to_string(leg_color));
}

}  // namespace

std::string prop_family(int c, int d) { return "Prop_" + std::to_string(c) + "," + std::to_string(d); }
std::string der_family(int c, int d) { return "Der_" + std::to_string(c) + "," + std::to_string(d); }

// ---------------------------------------------------------------------------

CGraph prop_cgraph(const PropGraph& g) {
    PropParams p{g.c, g.d};
    CGraph cg;
    for (int v = 0; v < g.V; ++v) cg.add_vertex(0, p.vertex_odd());
    for (auto [a, b] : g.edges) {
        if (a < 0 || b < 0 || a >= g.V || b >= g.V) throw InvalidGraph("edge endpoint out of range");
        if (a == b && !g.wheels) throw WheelForbidden("tadpole in a graph without wheels");
        CEdge e;
        e.t = a;
        e.h = b;
        e.odd = p.edge_odd();
        cg.add_edge(e);
    }
    for (std::size_t i = 0; i < g.out.size(); ++i) {
        if (g.out[i] < 0 || g.out[i] >= g.V) throw InvalidGraph("leg vertex out of range");
        int l = cg.add_vertex(kOutLegColor + static_cast<int>(i), p.out_odd());
        CEdge e;
        e.t = g.out[i];
        e.h = l;
        e.color = kLegEdgeColor;
        cg.add_edge(e);
    }
    for (std::size_t j = 0; j < g.in.size(); ++j) {
        if (g.in[j] < 0 || g.in[j] >= g.V) throw InvalidGraph("leg vertex out of range");
        int l = cg.add_vertex(kInLegColor + static_cast<int>(j), p.in_odd());
        CEdge e;
        e.t = l;
        e.h = g.in[j];
        e.color = kLegEdgeColor;
        cg.add_edge(e);
    }
    if (!g.wheels && has_directed_cycle(cg)) throw WheelForbidden("directed cycle in a graph without wheels");
    return cg;
}

PropGraph prop_from_cgraph(const CGraph& g, int c, int d, bool wheels) {
    PropGraph p;
    p.c = c;
    p.d = d;
    p.wheels = wheels;
    std::vector<int> idx(g.n(), -1);
    for (int v = 0; v < g.n(); ++v)
        if (!is_leg_color(g.color[v])) idx[v] = p.V++;
    auto [m, n] = leg_counts(g);
    p.out.assign(m, -1);
    p.in.assign(n, -1);
    for (const auto& e : g.edges) {
        if (internal_edge(e)) {
            p.edges.push_back({idx[e.t], idx[e.h]});
        } else if (is_out_leg(g.color[e.h])) {
            p.out.at(g.color[e.h] - kOutLegColor) = idx[e.t];
        } else {
            p.in.at(g.color[e.t] - kInLegColor) = idx[e.h];
        }
    }
    return p;
}

PropGraph parse_prop(const std::string& text) {
    detail::Cursor cur(text);
    PropGraph g;
    cur.expect_word("PROP");
    g.c = static_cast<int>(cur.keyed_int("c"));
    g.d = static_cast<int>(cur.keyed_int("d"));
    g.V = static_cast<int>(cur.keyed_int("V"));
    if (g.V < 0) throw ParseError("negative vertex count", cur.i);
    cur.expect_word("E");
    cur.expect('=');
    cur.ws();
    std::size_t at_e = cur.i;
    g.edges = cur.pair_list();
    for (auto [t, h] : g.edges)
        if (t < 0 || h < 0 || t >= g.V || h >= g.V) throw ParseError("edge endpoint out of range", at_e);
    cur.expect_word("IN");
    cur.expect('=');
    cur.ws();
    std::size_t at_in = cur.i;
    g.in = cur.int_list();
    for (int v : g.in)
        if (v < 0 || v >= g.V) throw ParseError("leg vertex out of range", at_in);
    cur.expect_word("OUT");
    cur.expect('=');
    cur.ws();
    std::size_t at_out = cur.i;
    g.out = cur.int_list();
    for (int v : g.out)
        if (v < 0 || v >= g.V) throw ParseError("leg vertex out of range", at_out);
    if (cur.peek_word("WHEELS")) g.wheels = cur.keyed_int("WHEELS") != 0;
    if (!cur.at_end()) throw ParseError("trailing input", cur.i);
    return g;
}

std::string serialize_prop(const PropGraph& g) {
    return "PROP c=" + std::to_string(g.c) + " d=" + std::to_string(g.d) + " V=" + std::to_string(g.V) +
           " E=" + detail::pair_list_str(g.edges) + " IN=" + detail::int_list_str(g.in) +
           " OUT=" + detail::int_list_str(g.out) + " WHEELS=" + (g.wheels ? "1" : "0");
}

GraphVector prop_element(const PropGraph& g, const Rational& q) {
    CGraph cg = prop_cgraph(g);
    auto w = labeled_wedge(cg);
    GraphVector out(prop_family(g.c, g.d));
    out.add_graph(cg, q, &w);
    return out;
}

std::vector<std::pair<int, int>> vertex_profiles(const CGraph& g) {
    std::vector<std::pair<int, int>> prof(g.n(), {0, 0});
    for (const auto& e : g.edges) {
        prof[e.t].first++;
        prof[e.h].second++;
    }
    std::vector<std::pair<int, int>> out;
    for (int v = 0; v < g.n(); ++v)
        if (!is_leg_color(g.color[v])) out.push_back(prof[v]);
    return out;
}

std::pair<int, int> leg_counts(const CGraph& g) {
    int m = 0, n = 0;
    for (int col : g.color) {
        if (is_out_leg(col)) ++m;
        else if (is_in_leg(col)) ++n;
    }
    return {m, n};
}

int prop_degree(const PropParams& p, const CGraph& g) {
    int V = 0, E = 0;
    for (int col : g.color)
        if (!is_leg_color(col)) ++V;
    for (const auto& e : g.edges)
        if (internal_edge(e)) ++E;
    auto [m, n] = leg_counts(g);
    return p.D() * V - (p.D() - 1) * E - p.c * m - p.d * n;
}

GraphVector corolla(int c, int d, int m, int n) {
    PropGraph g;
    g.c = c;
    g.d = d;
    g.V = 1;
    g.out.assign(m, 0);
    g.in.assign(n, 0);
    return prop_element(g);
}

// ---------------------------------------------------------------------------

Derivation::Derivation(int c, int d, int degree, Fn fn, int bound)
    : c_(c), d_(d), degree_(degree), bound_(bound), fn_(std::move(fn)),
      cache_(std::make_shared<std::map<std::pair<int, int>, GraphVector>>()) {}

GraphVector Derivation::on(int m, int n) const {
    if (bound_ >= 0 && m + n > bound_)
        throw MissingValue("derivation value on corolla (" + std::to_string(m) + "," + std::to_string(n) +
                           ") beyond arity " + std::to_string(bound_));
    if (!fn_) return GraphVector(prop_family(c_, d_));
    auto it = cache_->find({m, n});
    if (it != cache_->end()) return it->second;
    GraphVector v = fn_(m, n);
    (*cache_)[{m, n}] = v;
    return v;
}

void substitute_vertex(const PropParams& p, const CGraph& g, int v, const CGraph& x, const Rational& q,
                       GraphVector& out) {
    // Orientation atoms: an internal edge contributes an out-half (parity c)
    // followed by an in-half (parity d); legs are vertices of parity c / d.
    auto half_odd = [&](bool is_out) { return is_out ? p.out_odd() : p.in_odd(); };
    const int ge = static_cast<int>(g.edges.size());
    const int xe = static_cast<int>(x.edges.size());

    std::vector<long> outh, inh;       // odd atoms of the halves at v, in leg order
    std::vector<int> out_edge, in_edge;  // edge of g carrying each half
    for (int j = 0; j < ge; ++j) {
        const CEdge& e = g.edges[j];
        if (e.t == v) out_edge.push_back(j);
        if (e.h == v) in_edge.push_back(j);
    }
    auto [xm, xn] = leg_counts(x);
    if (xm != static_cast<int>(out_edge.size()) || xn != static_cast<int>(in_edge.size()))
        throw ArityError("substituted graph has the wrong number of legs");
    for (int j : out_edge) {
        const CEdge& e = g.edges[j];
        long a = internal_edge(e) ? atom(kGO, j) : atom(kGV, e.h);
        if (half_odd(true)) outh.push_back(a);
    }
    for (int j : in_edge) {
        const CEdge& e = g.edges[j];
        long a = internal_edge(e) ? atom(kGI, j) : atom(kGV, e.t);
        if (half_odd(false)) inh.push_back(a);
    }

    std::vector<long> s1;
    for (int u = 0; u < g.n(); ++u)
        if (g.odd[u]) s1.push_back(atom(kGV, u));
    for (int j = 0; j < ge; ++j) {
        if (!internal_edge(g.edges[j])) continue;
        if (p.out_odd()) s1.push_back(atom(kGO, j));
        if (p.in_odd()) s1.push_back(atom(kGI, j));
    }
    std::vector<long> moved(outh);
    moved.insert(moved.end(), inh.begin(), inh.end());
    std::vector<long> rest;
    for (long a : s1)
        if (a != atom(kGV, v) && std::find(moved.begin(), moved.end(), a) == moved.end()) rest.push_back(a);
    std::vector<long> t1 = rest;
    t1.insert(t1.end(), moved.begin(), moved.end());
    if (g.odd[v]) t1.push_back(atom(kGV, v));
    int sign = relative_sign(s1, t1);

    // X in canonical form has its legs first; its orientation is legs ^ objects.
    std::vector<long> s2 = rest;
    s2.insert(s2.end(), moved.begin(), moved.end());
    for (int w = 0; w < x.n(); ++w)
        if (x.odd[w] && !is_leg_color(x.color[w])) s2.push_back(atom(kXV, w));
    for (int k = 0; k < xe; ++k) {
        if (!internal_edge(x.edges[k])) continue;
        if (is_leg_color(x.color[x.edges[k].t]) || is_leg_color(x.color[x.edges[k].h]))
            throw InvalidGraph("internal edge at a leg");
        if (p.out_odd()) s2.push_back(atom(kXO, k));
        if (p.in_odd()) s2.push_back(atom(kXI, k));
    }
    for (int w = 0; w < x.n(); ++w) {
        if (!is_leg_color(x.color[w])) continue;
        for (int w2 = 0; w2 < w; ++w2)
            if (!is_leg_color(x.color[w2])) throw InvalidGraph("legs must precede internal vertices");
    }

    CGraph r;
    std::vector<int> gmap(g.n(), -1), xmap(x.n(), -1);
    std::vector<long> rv_atom;
    for (int u = 0; u < g.n(); ++u) {
        if (u == v) continue;
        gmap[u] = r.add_vertex(g.color[u], g.odd[u]);
        rv_atom.push_back(atom(kGV, u));
    }
    for (int w = 0; w < x.n(); ++w) {
        if (is_leg_color(x.color[w])) continue;
        xmap[w] = r.add_vertex(x.color[w], x.odd[w]);
        rv_atom.push_back(atom(kXV, w));
    }
    std::vector<int> out_target(xm), in_target(xn);
    for (int i = 0; i < xm; ++i) {
        auto [leg, at] = leg_anchor(x, kOutLegColor + i);
        if (is_leg_color(x.color[at])) throw InvalidGraph("leg-to-leg edge in a substituted graph");
        out_target[i] = xmap[at];
    }
    for (int i = 0; i < xn; ++i) {
        auto [leg, at] = leg_anchor(x, kInLegColor + i);
        if (is_leg_color(x.color[at])) throw InvalidGraph("leg-to-leg edge in a substituted graph");
        in_target[i] = xmap[at];
    }
    std::vector<long> s3;
    for (int u = 0; u < r.n(); ++u)
        if (r.odd[u]) s3.push_back(rv_atom[u]);
    std::vector<int> out_rank(ge, -1), in_rank(ge, -1);
    for (std::size_t i = 0; i < out_edge.size(); ++i) out_rank[out_edge[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < in_edge.size(); ++i) in_rank[in_edge[i]] = static_cast<int>(i);
    for (int j = 0; j < ge; ++j) {
        CEdge e = g.edges[j];
        e.t = e.t == v ? out_target[out_rank[j]] : gmap[e.t];
        e.h = e.h == v ? in_target[in_rank[j]] : gmap[e.h];
        r.add_edge(e);
        if (internal_edge(e)) {
            if (p.out_odd()) s3.push_back(atom(kGO, j));
            if (p.in_odd()) s3.push_back(atom(kGI, j));
        }
    }
    for (int k = 0; k < xe; ++k) {
        CEdge e = x.edges[k];
        if (!internal_edge(e)) continue;
        e.t = xmap[e.t];
        e.h = xmap[e.h];
        r.add_edge(e);
        if (p.out_odd()) s3.push_back(atom(kXO, k));
        if (p.in_odd()) s3.push_back(atom(kXI, k));
    }
    sign *= relative_sign(s2, s3);
    out.add_graph(r, sign * q);
}

GraphVector apply_derivation(const Derivation& D, const GraphVector& g) {
    PropParams p{D.c(), D.d()};
    GraphVector out(prop_family(D.c(), D.d()));
    std::map<std::pair<int, int>, std::vector<std::pair<CGraph, Rational>>> cache;
    auto decoded = [&](int m, int n) -> const std::vector<std::pair<CGraph, Rational>>& {
        auto it = cache.find({m, n});
        if (it != cache.end()) return it->second;
        std::vector<std::pair<CGraph, Rational>> xs;
        GraphVector xv = D.on(m, n);
        for (const auto& [xk, xq] : xv.terms()) xs.push_back({decode_key(xk), xq});
        return cache.emplace(std::make_pair(m, n), std::move(xs)).first->second;
    };
    for (const auto& [key, q] : g.terms()) {
        CGraph cg = decode_key(key);
        std::vector<int> prof_out(cg.n(), 0), prof_in(cg.n(), 0);
        for (const auto& e : cg.edges) {
            prof_out[e.t]++;
            prof_in[e.h]++;
        }
        for (int v = 0; v < cg.n(); ++v) {
            if (is_leg_color(cg.color[v])) continue;
            if (cg.color[v] != 0) throw FamilyMismatch("derivations act on unlabeled internal vertices");
            const auto& xv = decoded(prof_out[v], prof_in[v]);
            for (const auto& [x, xq] : xv) substitute_vertex(p, cg, v, x, q * xq, out);
        }
    }
    return out;
}

Derivation der_bracket(const Derivation& D1, const Derivation& D2) {
    if (D1.c() != D2.c() || D1.d() != D2.d()) throw FamilyMismatch("derivations of different props");
    int s = (D1.degree() * D2.degree()) % 2 ? -1 : 1;
    Derivation a = D1, b = D2;
    auto fn = [a, b, s](int m, int n) {
        GraphVector r = apply_derivation(b, a.on(m, n));
        GraphVector t = apply_derivation(a, b.on(m, n));
        t *= Rational(s);
        r -= t;
        return r;
    };
    int bound = -1;
    if (D1.bound() >= 0 && D2.bound() >= 0) bound = std::min(D1.bound(), D2.bound());
    return Derivation(D1.c(), D1.d(), D1.degree() + D2.degree(), fn, bound);
}

Derivation compose_derivations(const Derivation& first, const Derivation& second) {
    Derivation a = first, b = second;
    auto fn = [a, b](int m, int n) { return apply_derivation(b, a.on(m, n)); };
    int bound = -1;
    if (first.bound() >= 0 && second.bound() >= 0) bound = std::min(first.bound(), second.bound());
    return Derivation(first.c(), first.d(), first.degree() + second.degree(), fn, bound);
}

// ---------------------------------------------------------------------------

namespace {

// Calls f for every assignment of m out-legs and n in-legs to k vertices.
void for_each_assignment(int k, int m, int n, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> a(m + n, 0);
    if (k == 0) {
        if (m + n == 0) f(a);
        return;
    }
    for (;;) {
        f(a);
        int i = 0;
        while (i < m + n && ++a[i] == k) a[i++] = 0;
        if (i == m + n) return;
    }
}

CGraph attach_legs(const CGraph& gamma, const PropParams& p, const std::vector<int>& at, int m) {
    CGraph g = gamma;
    for (std::size_t i = 0; i < at.size(); ++i) {
        bool is_out = static_cast<int>(i) < m;
        int idx = is_out ? static_cast<int>(i) : static_cast<int>(i) - m;
        int l = g.add_vertex(is_out ? kOutLegColor + idx : kInLegColor + idx, is_out ? p.out_odd() : p.in_odd());
        CEdge e;
        e.color = kLegEdgeColor;
        e.t = is_out ? at[i] : l;
        e.h = is_out ? l : at[i];
        g.add_edge(e);
    }
    return g;
}

}  // namespace

GraphVector f_star_value(int c, int d, const GraphVector& gamma, int m, int n) {
    PropParams p{c, d};
    GraphVector out(prop_family(c, d));
    for (const auto& [key, q] : gamma.terms()) {
        CGraph g = decode_key(key);
        for (int v = 0; v < g.n(); ++v)
            if (g.color[v] != 0 || g.odd[v] != p.vertex_odd()) throw ParityError("graph does not match dFGC_" + std::to_string(p.D()));
        for (const auto& e : g.edges)
            if (e.undirected || e.odd != p.edge_odd()) throw ParityError("graph does not match dFGC_" + std::to_string(p.D()));
        for_each_assignment(g.n(), m, n, [&](const std::vector<int>& at) {
            CGraph x = attach_legs(g, p, at, m);
            auto w = labeled_wedge(x);
            out.add_graph(x, q, &w);
        });
    }
    return out;
}

Derivation f_star(int c, int d, const GraphVector& gamma) {
    int deg = 0;
    bool first = true;
    for (const auto& [key, q] : gamma.terms()) {
        int dg = graph_degree(c + d + 1, key_vertices(key), key_edges(key));
        if (!first && dg != deg) throw ParityError("inhomogeneous graph vector");
        deg = dg;
        first = false;
    }
    return Derivation(c, d, deg, [c, d, gamma](int m, int n) { return f_star_value(c, d, gamma, m, n); });
}

std::size_t f_star_raw_terms(const CGraph& gamma, int m, int n) {
    std::size_t t = 1;
    for (int i = 0; i < m + n; ++i) t *= static_cast<std::size_t>(gamma.n());
    return t;
}

namespace {
GraphVector edge_graph(int c, int d) {
    ComplexSpec s = spec_full(Family::dFGC, c + d + 1);
    DirectedGraph g;
    g.vertex_count = 2;
    g.edges = {{0, 1}};
    return element(s, g);
}
}  // namespace

Derivation delta_star_derivation(int c, int d) { return f_star(c, d, edge_graph(c, d)); }

GraphVector delta_star(int c, int d, int m, int n) {
    // partitions [m] = I1 u I2, [n] = J1 u J2 of the legs over the two ends of
    // one edge; orientation legs ^ tail ^ head ^ edge
    PropParams p{c, d};
    GraphVector out(prop_family(c, d));
    for (long mi = 0; mi < (1L << m); ++mi)
        for (long nj = 0; nj < (1L << n); ++nj) {
            CGraph g;
            int tail = g.add_vertex(0, p.vertex_odd());
            int head = g.add_vertex(0, p.vertex_odd());
            CEdge e;
            e.t = tail;
            e.h = head;
            e.odd = p.edge_odd();
            g.add_edge(e);
            std::vector<int> at;
            for (int i = 0; i < m; ++i) at.push_back(mi >> i & 1 ? head : tail);
            for (int j = 0; j < n; ++j) at.push_back(nj >> j & 1 ? head : tail);
            CGraph x = attach_legs(g, p, at, m);
            auto w = labeled_wedge(x);
            out.add_graph(x, 1, &w);
        }
    return out;
}

bool has_source_or_target(const CGraph& g) {
    for (auto [o, i] : vertex_profiles(g))
        if (o == 0 || i == 0) return true;
    return false;
}

bool has_passing_vertex(const CGraph& g) {
    for (auto [o, i] : vertex_profiles(g))
        if (o == 1 && i == 1) return true;
    return false;
}

namespace {
GraphVector filter(const GraphVector& x, const std::function<bool(const CGraph&)>& drop) {
    GraphVector out(x.family());
    for (const auto& [key, q] : x.terms())
        if (!drop(decode_key(key))) out.add_term(key, q);
    return out;
}
}  // namespace

GraphVector delta_plus(int c, int d, int m, int n) { return filter(delta_star(c, d, m, n), has_source_or_target); }

GraphVector delta_minimal(int c, int d, int m, int n) {
    if (m < 1 || n < 1 || m + n < 3) throw ArityError("minimal differential needs m,n >= 1 and m+n >= 3");
    return filter(delta_star(c, d, m, n),
                  [](const CGraph& g) { return has_source_or_target(g) || has_passing_vertex(g); });
}

GraphVector delta_star_graph(int c, int d, const GraphVector& g) {
    return apply_derivation(delta_star_derivation(c, d), g);
}

GraphVector delta_plus_graph(int c, int d, const GraphVector& g) {
    return filter(delta_star_graph(c, d, g), has_source_or_target);
}

std::size_t delta_star_raw_terms(int m, int n) {
    std::size_t t = 1;
    for (int i = 0; i < m + n; ++i) t *= 2;
    return t;
}

GraphVector horizontal_compose(const GraphVector& a, const GraphVector& b, int c, int d) {
    GraphVector out(prop_family(c, d));
    for (const auto& [ka, qa] : a.terms()) {
        CGraph ga = decode_key(ka);
        auto [ma, na] = leg_counts(ga);
        std::vector<Obj> wa = standard_wedge(ga);
        for (const auto& [kb, qb] : b.terms()) {
            CGraph gb = decode_key(kb);
            CGraph g = ga;
            std::vector<Obj> w = wa;
            int off = g.n(), eoff = static_cast<int>(g.edges.size());
            for (int v = 0; v < gb.n(); ++v) {
                int col = gb.color[v];
                if (is_out_leg(col)) col += ma;
                else if (is_in_leg(col)) col += na;
                g.add_vertex(col, gb.odd[v]);
            }
            for (CEdge e : gb.edges) {
                e.t += off;
                e.h += off;
                g.add_edge(e);
            }
            for (Obj o : standard_wedge(gb)) w.push_back({o.is_edge, o.idx + (o.is_edge ? eoff : off)});
            out.add_graph(g, qa * qb, &w);
        }
    }
    return out;
}

GraphVector trace(const GraphVector& a, int i, int j, int c, int d, bool wheels_allowed) {
    PropParams p{c, d};
    GraphVector out(prop_family(c, d));
    for (const auto& [key, q] : a.terms()) {
        CGraph g = decode_key(key);
        auto [m, n] = leg_counts(g);
        if (i < 0 || i >= m || j < 0 || j >= n) throw ArityError("trace leg index out of range");
        auto [lo, u] = leg_anchor(g, kOutLegColor + i);
        auto [li, w] = leg_anchor(g, kInLegColor + j);
        std::vector<long> s1;
        for (int x = 0; x < g.n(); ++x)
            if (g.odd[x]) s1.push_back(atom(kGV, x));
        const int ge = static_cast<int>(g.edges.size());
        for (int k = 0; k < ge; ++k) {
            if (!internal_edge(g.edges[k])) continue;
            if (p.out_odd()) s1.push_back(atom(kGO, k));
            if (p.in_odd()) s1.push_back(atom(kGI, k));
        }
        CGraph r;
        std::vector<int> map(g.n(), -1);
        std::vector<long> s3;
        for (int x = 0; x < g.n(); ++x) {
            if (x == lo || x == li) continue;
            int col = g.color[x];
            if (is_out_leg(col) && col - kOutLegColor > i) --col;
            if (is_in_leg(col) && col - kInLegColor > j) --col;
            map[x] = r.add_vertex(col, g.odd[x]);
            if (g.odd[x]) s3.push_back(atom(kGV, x));
        }
        for (int k = 0; k < ge; ++k) {
            CEdge e = g.edges[k];
            if (e.h == lo || e.t == li) continue;
            e.t = map[e.t];
            e.h = map[e.h];
            r.add_edge(e);
            if (internal_edge(e)) {
                if (p.out_odd()) s3.push_back(atom(kGO, k));
                if (p.in_odd()) s3.push_back(atom(kGI, k));
            }
        }
        CEdge ne;
        ne.t = map[u];
        ne.h = map[w];
        ne.odd = p.edge_odd();
        r.add_edge(ne);
        if (p.out_odd()) s3.push_back(atom(kGV, lo));
        if (p.in_odd()) s3.push_back(atom(kGV, li));
        if (!wheels_allowed && has_directed_cycle(r)) throw WheelForbidden("trace creates a directed cycle");
        out.add_graph(r, relative_sign(s1, s3) * q);
    }
    return out;
}

}  // namespace grapple
