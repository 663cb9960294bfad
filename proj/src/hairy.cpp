#include <algorithm>

#include "grapple/propcalc.hpp"
#include "parse_util.hpp"

namespace grapple {

namespace {

bool is_leg_color(int col) { return col < 0; }
bool is_out_leg(int col) { return col >= kOutLegColor && col < kInLegColor; }

Rational factorial(int n) {
    mpz_class f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return Rational(f);
}

// (out-legs)(in-legs)(odd internal vertices)(odd edges), legs sorted by label.
std::vector<Obj> legs_first_wedge(const CGraph& g) {
    std::vector<std::pair<int, int>> legs;
    for (int v = 0; v < g.n(); ++v)
        if (g.odd[v] && is_leg_color(g.color[v])) legs.push_back({g.color[v], v});
    std::sort(legs.begin(), legs.end());
    std::vector<Obj> w;
    for (auto& p : legs) w.push_back({false, p.second});
    for (int v = 0; v < g.n(); ++v)
        if (g.odd[v] && !is_leg_color(g.color[v])) w.push_back({false, v});
    for (int j = 0; j < static_cast<int>(g.edges.size()); ++j)
        if (g.edges[j].odd) w.push_back({true, j});
    return w;
}

int homogeneous_der_degree(const PropParams& p, const GraphVector& h) {
    bool first = true;
    int deg = 0;
    for (const auto& [key, q] : h.terms()) {
        int dg = der_degree(p, decode_key(key));
        if (!first && dg != deg) throw ParityError("inhomogeneous hairy vector");
        deg = dg;
        first = false;
    }
    return deg;
}

}  // namespace

CGraph der_cgraph(const PropParams& p, const DerGraph& g) {
    if (static_cast<int>(g.out_hairs.size()) != g.V || static_cast<int>(g.in_hairs.size()) != g.V)
        throw InvalidGraph("hair counts must be given for every vertex");
    CGraph cg;
    for (int v = 0; v < g.V; ++v) {
        if (g.out_hairs[v] < 0 || g.in_hairs[v] < 0 || g.in_hairs[v] >= kHairBase)
            throw InvalidGraph("hair count out of range");
        cg.add_vertex(hair_color(g.out_hairs[v], g.in_hairs[v]), p.vertex_odd());
    }
    for (auto [a, b] : g.edges) {
        if (a < 0 || b < 0 || a >= g.V || b >= g.V) throw InvalidGraph("edge endpoint out of range");
        CEdge e;
        e.t = a;
        e.h = b;
        e.odd = p.edge_odd();
        cg.add_edge(e);
    }
    return cg;
}

DerGraph der_from_cgraph(const CGraph& g) {
    DerGraph d;
    d.V = g.n();
    for (int v = 0; v < g.n(); ++v) {
        d.out_hairs.push_back(g.color[v] / kHairBase);
        d.in_hairs.push_back(g.color[v] % kHairBase);
    }
    for (const auto& e : g.edges) d.edges.push_back({e.t, e.h});
    return d;
}

GraphVector der_element(int c, int d, const DerGraph& g, const Rational& q) {
    GraphVector out(der_family(c, d));
    out.add_graph(der_cgraph({c, d}, g), q);
    return out;
}

DerGraph parse_der(const std::string& text) {
    detail::Cursor cur(text);
    DerGraph g;
    cur.expect_word("DER");
    g.V = static_cast<int>(cur.keyed_int("V"));
    if (g.V < 0) throw ParseError("negative vertex count", cur.i);
    cur.expect_word("E");
    cur.expect('=');
    cur.ws();
    std::size_t at_e = cur.i;
    g.edges = cur.pair_list();
    for (auto [t, h] : g.edges)
        if (t < 0 || h < 0 || t >= g.V || h >= g.V) throw ParseError("edge endpoint out of range", at_e);
    cur.expect_word("OUT");
    cur.expect('=');
    cur.ws();
    std::size_t at_out = cur.i;
    g.out_hairs = cur.int_list();
    if (static_cast<int>(g.out_hairs.size()) != g.V) throw ParseError("expected one hair count per vertex", at_out);
    cur.expect_word("IN");
    cur.expect('=');
    cur.ws();
    std::size_t at_in = cur.i;
    g.in_hairs = cur.int_list();
    if (static_cast<int>(g.in_hairs.size()) != g.V) throw ParseError("expected one hair count per vertex", at_in);
    if (!cur.at_end()) throw ParseError("trailing input", cur.i);
    der_cgraph({0, 1}, g);  // validation only
    return g;
}

std::string serialize_der(const DerGraph& g) {
    return "DER V=" + std::to_string(g.V) + " E=" + detail::pair_list_str(g.edges) +
           " OUT=" + detail::int_list_str(g.out_hairs) + " IN=" + detail::int_list_str(g.in_hairs);
}

std::pair<int, int> hair_counts(const CGraph& g) {
    int m = 0, n = 0;
    for (int col : g.color) {
        m += col / kHairBase;
        n += col % kHairBase;
    }
    return {m, n};
}

int der_degree(const PropParams& p, const CGraph& g) {
    return p.D() * (g.n() - 1) - (p.D() - 1) * static_cast<int>(g.edges.size());
}

Derivation hairy_to_derivation(int c, int d, const GraphVector& h, int degree) {
    PropParams p{c, d};
    auto fn = [p, h](int m, int n) {
        GraphVector out(prop_family(p.c, p.d));
        for (const auto& [key, q] : h.terms()) {
            CGraph g = decode_key(key);
            if (hair_counts(g) != std::make_pair(m, n)) continue;
            std::vector<int> oc(g.n()), ic(g.n());
            CGraph base;
            Rational mult = 1;
            for (int v = 0; v < g.n(); ++v) {
                oc[v] = g.color[v] / kHairBase;
                ic[v] = g.color[v] % kHairBase;
                mult *= factorial(oc[v]) * factorial(ic[v]);
                base.add_vertex(0, g.odd[v]);
            }
            base.edges = g.edges;
            // distribute labeled legs over the hairs, one set per vertex
            std::vector<int> at(m + n);
            std::function<void(int)> rec = [&](int i) {
                if (i == m + n) {
                    CGraph x = base;
                    for (int k = 0; k < m + n; ++k) {
                        bool is_out = k < m;
                        int lbl = is_out ? k : k - m;
                        int l = x.add_vertex(is_out ? kOutLegColor + lbl : kInLegColor + lbl,
                                             is_out ? p.out_odd() : p.in_odd());
                        CEdge e;
                        e.color = kLegEdgeColor;
                        e.t = is_out ? at[k] : l;
                        e.h = is_out ? l : at[k];
                        x.add_edge(e);
                    }
                    auto w = legs_first_wedge(x);
                    out.add_graph(x, q * mult, &w);
                    return;
                }
                std::vector<int>& cap = i < m ? oc : ic;
                for (int v = 0; v < g.n(); ++v) {
                    if (cap[v] == 0) continue;
                    --cap[v];
                    at[i] = v;
                    rec(i + 1);
                    ++cap[v];
                }
            };
            rec(0);
        }
        return out;
    };
    return Derivation(c, d, degree, fn);
}

GraphVector derivation_to_hairy(const Derivation& D, int max_arity) {
    PropParams p{D.c(), D.d()};
    GraphVector out(der_family(D.c(), D.d()));
    for (int s = 0; s <= max_arity; ++s) {
        for (int m = s; m >= 0; --m) {
            int n = s - m;
            Rational norm = 1 / (factorial(m) * factorial(n));
            GraphVector val = D.on(m, n);
            for (const auto& [key, q] : val.terms()) {
                CGraph g = decode_key(key);
                CGraph h;
                std::vector<int> idx(g.n(), -1);
                for (int v = 0; v < g.n(); ++v)
                    if (!is_leg_color(g.color[v])) idx[v] = h.add_vertex(0, g.odd[v]);
                for (const auto& e : g.edges) {
                    if (e.color == kLegEdgeColor) {
                        if (is_out_leg(g.color[e.h])) h.color[idx[e.t]] += kHairBase;
                        else h.color[idx[e.h]] += 1;
                    } else {
                        CEdge f = e;
                        f.t = idx[e.t];
                        f.h = idx[e.h];
                        h.add_edge(f);
                    }
                }
                // legs are first in the canonical order, so dropping them
                // leaves the standard orientation of the hairy graph
                out.add_graph(h, q * norm);
            }
        }
    }
    return out;
}

Truncated d_star(int c, int d, const GraphVector& h, int max_arity) {
    if (max_arity < 0) throw TruncationRequired("d_star needs an arity bound");
    PropParams p{c, d};
    GraphVector body(der_family(c, d));
    bool has_up = false;
    Rational up_coeff = 0;
    for (const auto& [key, q] : h.terms()) {
        if (key == "UP") {
            has_up = true;
            up_coeff = q;
        } else {
            body.add_term(key, q);
        }
    }
    Truncated t;
    t.max_arity = max_arity;
    t.value = GraphVector(der_family(c, d));
    if (!body.empty()) {
        Derivation Dh = hairy_to_derivation(c, d, body, homogeneous_der_degree(p, body));
        t.value += derivation_to_hairy(der_bracket(delta_star_derivation(c, d), Dh), max_arity);
    }
    if (has_up) t.value += up_coeff * derivation_to_hairy(d_star_up(c, d, max_arity), max_arity);
    return t;
}

namespace {
Derivation corolla_series(int c, int d, int max_arity, const std::function<int(int, int)>& coef) {
    auto fn = [c, d, coef](int m, int n) {
        GraphVector v = corolla(c, d, m, n);
        v *= Rational(coef(m, n));
        return v;
    };
    return Derivation(c, d, 0, fn, max_arity);
}
}  // namespace

Derivation d_star_up(int c, int d, int max_arity) {
    if (max_arity < 0) throw TruncationRequired("d_star_up needs an arity bound");
    return corolla_series(c, d, max_arity, [](int m, int n) { return m - n; });
}

Derivation rescaling_class(int c, int d, int max_arity) {
    if (max_arity < 2) throw TruncationRequired("rescaling class needs an arity bound >= 2");
    return corolla_series(c, d, max_arity, [](int m, int n) { return m + n - 2; });
}

Rational corolla_coefficient(const Derivation& D, int m, int n) {
    GraphVector c = corolla(D.c(), D.d(), m, n);
    if (c.empty()) return 0;  // corolla killed by its own symmetry
    const auto& [key, q] = *c.terms().begin();
    return D.on(m, n).coeff(key) / q;
}

// ---------------------------------------------------------------------------

namespace {

GraphVector wheeled(int c, int d, int V, const std::vector<std::pair<int, int>>& edges) {
    PropGraph g;
    g.c = c;
    g.d = d;
    g.V = V;
    g.edges = edges;
    return prop_element(g);
}

}  // namespace

Prop231 prop231_cocycles(int c, int d) {
    Prop231 r;
    // A: tadpole, out 1, in 2; B: tadpole, out 2, in 1; edge B -> A.
    r.two_vertex = wheeled(c, d, 2, {{0, 0}, {1, 1}, {1, 0}});
    if ((c + d) % 2 == 0) return r;
    r.three_terms.push_back(wheeled(c, d, 3, {{0, 0}, {1, 1}, {2, 2}, {2, 1}, {1, 0}}));  // chain C -> B -> A
    r.three_terms.push_back(wheeled(c, d, 3, {{0, 0}, {1, 1}, {2, 2}, {1, 0}, {2, 0}}));  // B -> A <- C
    r.three_terms.push_back(wheeled(c, d, 3, {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}}));  // B <- A -> C
    // Signs: the one-dimensional kernel of delta+ on the span of the three terms.
    std::vector<std::string> codomain;
    std::vector<GraphVector> images;
    for (const auto& t : r.three_terms) {
        images.push_back(delta_plus_graph(c, d, t));
        for (const auto& [k, q] : images.back().terms())
            if (std::find(codomain.begin(), codomain.end(), k) == codomain.end()) codomain.push_back(k);
    }
    std::sort(codomain.begin(), codomain.end());
    SparseRationalMatrix M(static_cast<int>(codomain.size()), 3);
    for (int j = 0; j < 3; ++j)
        for (const auto& [k, q] : images[j].terms())
            M.add(static_cast<int>(std::lower_bound(codomain.begin(), codomain.end(), k) - codomain.begin()), j, q);
    auto ker = kernel_basis(M);
    if (ker.size() != 1) throw ParityError("three-term wheeled class has no unique closed combination");
    auto coeffs = ker[0];
    // normalise: first coefficient +1 relative to the displayed graph
    Rational scale = 0;
    for (int j = 0; j < 3 && scale == 0; ++j)
        if (coeffs[j] != 0) scale = coeffs[j];
    r.three_term = GraphVector(prop_family(c, d));
    for (int j = 0; j < 3; ++j) {
        Rational u = coeffs[j] / scale;
        r.three_term_coeffs.push_back(u);
        r.three_term += u * r.three_terms[j];
    }
    return r;
}

std::vector<std::string> wheeled_basis(int c, int d, int v, int e) {
    ComplexSpec s = spec_full(Family::dFGC, c + d + 1);
    s.connected = true;
    s.allow_tadpoles = true;
    s.min_valency = 2;
    std::vector<std::string> out;
    BasisSlice slice = generate_basis(s, v, e);
    for (const auto& k : slice.keys)
        if (!has_source_or_target(decode_key(k))) out.push_back(k);
    return out;
}

bool is_plus_exact(int c, int d, const GraphVector& x) {
    if (x.empty()) return true;
    int V = key_vertices(x.terms().begin()->first);
    int E = key_edges(x.terms().begin()->first);
    for (const auto& [k, q] : x.terms())
        if (key_vertices(k) != V || key_edges(k) != E) throw ParityError("inhomogeneous vector");
    if (V < 2) return false;
    auto domain = wheeled_basis(c, d, V - 1, E - 1);
    std::vector<std::string> rows;
    for (const auto& [k, q] : x.terms()) rows.push_back(k);
    std::vector<GraphVector> images;
    for (const auto& k : domain) {
        GraphVector g(prop_family(c, d));
        g.add_term(k, 1);
        images.push_back(delta_plus_graph(c, d, g));
        for (const auto& [ik, q] : images.back().terms()) rows.push_back(ik);
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    auto row_of = [&](const std::string& k) {
        return static_cast<int>(std::lower_bound(rows.begin(), rows.end(), k) - rows.begin());
    };
    SparseRationalMatrix M(static_cast<int>(rows.size()), static_cast<int>(domain.size()));
    for (std::size_t j = 0; j < images.size(); ++j)
        for (const auto& [k, q] : images[j].terms()) M.add(row_of(k), static_cast<int>(j), q);
    std::vector<Rational> target(rows.size(), 0);
    for (const auto& [k, q] : x.terms()) target[row_of(k)] = q;
    return in_image(M, target);
}

}  // namespace grapple
