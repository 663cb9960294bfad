#include "grapple/polydiff.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "grapple/complexes.hpp"
#include "parse_util.hpp"

namespace grapple {

namespace {

bool is_input(int col) { return col > kPolyInColor && col < 0; }
int input_label(int col) { return col - kPolyInColor; }
bool is_internal(int col) { return col >= 0; }

CEdge make_edge(int t, int h, int color, bool odd) {
    CEdge e;
    e.t = t;
    e.h = h;
    e.color = color;
    e.odd = odd;
    return e;
}

// Fixed vertex layout used when building graphs: output, inputs 1..k, internal.
struct Layout {
    CGraph g;
    int out = 0;
    std::vector<int> in;  // in[j-1]
    std::vector<int> internal;
};

Layout make_layout(int k, int V) {
    Layout L;
    L.out = L.g.add_vertex(kPolyOutColor, false);
    for (int j = 1; j <= k; ++j) L.in.push_back(L.g.add_vertex(kPolyInColor + j, false));
    for (int v = 0; v < V; ++v) L.internal.push_back(L.g.add_vertex(0, false));
    return L;
}

struct Decoded {
    CGraph g;
    int out = -1;
    int k = 0;
    std::vector<int> input_of;  // per vertex: label, or 0
};

Decoded decode_poly(const std::string& key) {
    Decoded d;
    d.g = decode_key(key);
    d.input_of.assign(d.g.n(), 0);
    for (int v = 0; v < d.g.n(); ++v) {
        int col = d.g.color[v];
        if (col == kPolyOutColor) d.out = v;
        else if (is_input(col)) {
            d.input_of[v] = input_label(col);
            d.k = std::max(d.k, input_label(col));
        }
    }
    if (d.out < 0) throw InvalidGraph("graph without output vertex");
    return d;
}

}  // namespace

std::string poly_family() { return "O(Holieb_0,1)"; }

CGraph poly_cgraph(const PolyGraph& p, std::vector<Obj>* wedge) {
    if (p.k < 0 || p.V < 0) throw InvalidGraph("negative size");
    Layout L = make_layout(p.k, p.V);
    auto check_v = [&](int v) {
        if (v < 0 || v >= p.V) throw InvalidGraph("internal vertex out of range");
    };
    std::vector<Obj> w;
    for (auto [v, j] : p.e_in) {
        check_v(v);
        if (j < 1 || j > p.k) throw InvalidGraph("input label out of range");
        w.push_back({true, static_cast<int>(L.g.edges.size())});
        L.g.add_edge(make_edge(L.in[j - 1], L.internal[v], kPolyInEdge, true));
    }
    for (auto [a, b] : p.e_int) {
        check_v(a);
        check_v(b);
        w.push_back({true, static_cast<int>(L.g.edges.size())});
        L.g.add_edge(make_edge(L.internal[a], L.internal[b], 0, true));
    }
    for (int v : p.e_out) {
        check_v(v);
        L.g.add_edge(make_edge(L.internal[v], L.out, kPolyOutEdge, false));
    }
    if (wedge) *wedge = w;
    return L.g;
}

PolyGraph poly_from_cgraph(const CGraph& g) {
    PolyGraph p;
    std::vector<int> idx(g.n(), -1);
    for (int v = 0; v < g.n(); ++v) {
        if (is_internal(g.color[v])) idx[v] = p.V++;
        else if (is_input(g.color[v])) p.k = std::max(p.k, input_label(g.color[v]));
    }
    for (const auto& e : g.edges) {
        if (e.color == kPolyInEdge) p.e_in.push_back({idx[e.h], input_label(g.color[e.t])});
        else if (e.color == kPolyOutEdge) p.e_out.push_back(idx[e.t]);
        else p.e_int.push_back({idx[e.t], idx[e.h]});
    }
    return p;
}

PolyGraph parse_poly(const std::string& text) {
    detail::Cursor cur(text);
    PolyGraph p;
    cur.expect_word("POLY");
    p.k = static_cast<int>(cur.keyed_int("k"));
    p.V = static_cast<int>(cur.keyed_int("V"));
    if (p.k < 0 || p.V < 0) throw ParseError("negative size", cur.i);
    cur.expect_word("E_int");
    cur.expect('=');
    cur.ws();
    std::size_t at = cur.i;
    p.e_int = cur.pair_list();
    for (auto [a, b] : p.e_int)
        if (a < 0 || b < 0 || a >= p.V || b >= p.V) throw ParseError("internal vertex out of range", at);
    cur.expect_word("E_out");
    cur.expect('=');
    cur.ws();
    at = cur.i;
    p.e_out = cur.int_list();
    for (int a : p.e_out)
        if (a < 0 || a >= p.V) throw ParseError("internal vertex out of range", at);
    cur.expect_word("E_in");
    cur.expect('=');
    cur.ws();
    at = cur.i;
    p.e_in = cur.pair_list();
    for (auto [a, j] : p.e_in)
        if (a < 0 || a >= p.V || j < 1 || j > p.k) throw ParseError("edge endpoint out of range", at);
    if (!cur.at_end()) throw ParseError("trailing input", cur.i);
    return p;
}

std::string serialize_poly(const PolyGraph& p) {
    return "POLY k=" + std::to_string(p.k) + " V=" + std::to_string(p.V) + " E_int=" + detail::pair_list_str(p.e_int) +
           " E_out=" + detail::int_list_str(p.e_out) + " E_in=" + detail::pair_list_str(p.e_in);
}

GraphVector poly_element(const PolyGraph& p, const Rational& q) {
    std::vector<Obj> w;
    CGraph g = poly_cgraph(p, &w);
    GraphVector x(poly_family());
    x.add_graph(g, q, &w);
    return x;
}

int poly_arity(const CGraph& g) {
    int k = 0;
    for (int col : g.color)
        if (is_input(col)) ++k;
    return k;
}

int poly_internal_vertices(const CGraph& g) {
    int n = 0;
    for (int col : g.color)
        if (is_internal(col)) ++n;
    return n;
}

int poly_degree(const CGraph& g) {
    int odd_edges = 0;
    for (const auto& e : g.edges)
        if (e.color != kPolyOutEdge) ++odd_edges;
    return 2 * poly_internal_vertices(g) - odd_edges;
}

int poly_edge_count(const CGraph& g) { return static_cast<int>(g.edges.size()); }

GraphVector poly_unit() {
    PolyGraph p;
    p.k = 1;
    return poly_element(p);
}

GraphVector bare_product() {
    PolyGraph p;
    p.k = 2;
    return poly_element(p);
}

GraphVector polydiff_generator(const PropGraph& e, const std::vector<std::vector<int>>& blocks) {
    if (e.c != 0 || e.d != 1) throw ParityError("polydifferential graphs are built from the (0,1) prop");
    const int n = static_cast<int>(e.in.size());
    std::vector<int> block_of(n, 0);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (int leg : blocks[b]) {
            if (leg < 1 || leg > n || block_of[leg - 1] != 0) throw PartitionError("blocks do not partition the in-legs");
            block_of[leg - 1] = static_cast<int>(b) + 1;
        }
    for (int j = 0; j < n; ++j)
        if (block_of[j] == 0) throw PartitionError("blocks do not partition the in-legs");
    // in-legs come first in the orientation of e, in label order, then edges
    PolyGraph p;
    p.k = static_cast<int>(blocks.size());
    p.V = e.V;
    p.e_int = e.edges;
    p.e_out = e.out;
    for (int j = 0; j < n; ++j) p.e_in.push_back({e.in[j], block_of[j]});
    return poly_element(p);
}

GraphVector operad_compose(const GraphVector& a, int i, const GraphVector& b) {
    GraphVector out(poly_family());
    for (const auto& [ka, qa] : a.terms()) {
        Decoded A = decode_poly(ka);
        if (i < 1 || i > A.k) throw ArityError("composition slot out of range");
        auto wa = standard_wedge(A.g);
        for (const auto& [kb, qb] : b.terms()) {
            Decoded B = decode_poly(kb);
            auto wb = standard_wedge(B.g);
            const int kB = B.k;
            const int k = A.k + kB - 1;
            auto new_label_a = [&](int j) { return j < i ? j : j + kB - 1; };
            auto new_label_b = [&](int l) { return i + l - 1; };

            std::vector<int> hang;     // edges of A at input i
            std::vector<int> outs_b;   // out-edges of B
            for (int j = 0; j < static_cast<int>(A.g.edges.size()); ++j) {
                const CEdge& e = A.g.edges[j];
                if (e.color == kPolyInEdge && A.input_of[e.t] == i) hang.push_back(j);
            }
            for (int j = 0; j < static_cast<int>(B.g.edges.size()); ++j)
                if (B.g.edges[j].color == kPolyOutEdge) outs_b.push_back(j);

            // choice[h]: index into outs_b (glue) or outs_b.size()+l-1 (attach to input l of B)
            const int nopt = static_cast<int>(outs_b.size()) + kB;
            std::vector<int> choice(hang.size(), 0);
            std::vector<bool> used(outs_b.size(), false);
            std::function<void(std::size_t)> rec = [&](std::size_t h) {
                if (h == hang.size()) {
                    Layout L = make_layout(k, 0);
                    std::vector<int> amap(A.g.n(), -1), bmap(B.g.n(), -1);
                    amap[A.out] = L.out;
                    bmap[B.out] = L.out;
                    for (int v = 0; v < A.g.n(); ++v) {
                        if (A.input_of[v] > 0 && A.input_of[v] != i) amap[v] = L.in[new_label_a(A.input_of[v]) - 1];
                        else if (is_internal(A.g.color[v])) amap[v] = L.g.add_vertex(A.g.color[v], A.g.odd[v]);
                    }
                    for (int v = 0; v < B.g.n(); ++v) {
                        if (B.input_of[v] > 0) bmap[v] = L.in[new_label_b(B.input_of[v]) - 1];
                        else if (is_internal(B.g.color[v])) bmap[v] = L.g.add_vertex(B.g.color[v], B.g.odd[v]);
                    }
                    std::vector<int> aedge(A.g.edges.size(), -1), bedge(B.g.edges.size(), -1);
                    std::vector<int> hang_pos(A.g.edges.size(), -1);
                    for (std::size_t t = 0; t < hang.size(); ++t) hang_pos[hang[t]] = static_cast<int>(t);
                    for (int j = 0; j < static_cast<int>(A.g.edges.size()); ++j) {
                        CEdge e = A.g.edges[j];
                        if (hang_pos[j] >= 0) {
                            int ch = choice[hang_pos[j]];
                            if (ch < static_cast<int>(outs_b.size())) {
                                e.t = bmap[B.g.edges[outs_b[ch]].t];
                                e.color = 0;
                            } else {
                                e.t = L.in[new_label_b(ch - static_cast<int>(outs_b.size()) + 1) - 1];
                            }
                            e.h = amap[e.h];
                        } else {
                            e.t = amap[e.t];
                            e.h = amap[e.h];
                        }
                        aedge[j] = static_cast<int>(L.g.edges.size());
                        L.g.add_edge(e);
                    }
                    for (int j = 0; j < static_cast<int>(B.g.edges.size()); ++j) {
                        auto it = std::find(outs_b.begin(), outs_b.end(), j);
                        if (it != outs_b.end() && used[it - outs_b.begin()]) continue;
                        CEdge e = B.g.edges[j];
                        e.t = bmap[e.t];
                        e.h = bmap[e.h];
                        bedge[j] = static_cast<int>(L.g.edges.size());
                        L.g.add_edge(e);
                    }
                    std::vector<Obj> w;
                    for (Obj o : wa) w.push_back(o.is_edge ? Obj{true, aedge[o.idx]} : Obj{false, amap[o.idx]});
                    for (Obj o : wb) w.push_back(o.is_edge ? Obj{true, bedge[o.idx]} : Obj{false, bmap[o.idx]});
                    out.add_graph(L.g, qa * qb, &w);
                    return;
                }
                for (int c = 0; c < nopt; ++c) {
                    if (c < static_cast<int>(outs_b.size())) {
                        if (used[c]) continue;
                        used[c] = true;
                        choice[h] = c;
                        rec(h + 1);
                        used[c] = false;
                    } else {
                        choice[h] = c;
                        rec(h + 1);
                    }
                }
            };
            rec(0);
        }
    }
    return out;
}

GraphVector relabel_inputs(const GraphVector& x, const std::vector<int>& perm) {
    GraphVector out(poly_family());
    for (const auto& [key, q] : x.terms()) {
        CGraph g = decode_key(key);
        if (poly_arity(g) != static_cast<int>(perm.size())) throw ArityError("relabeling of the wrong size");
        for (int v = 0; v < g.n(); ++v)
            if (is_input(g.color[v])) g.color[v] = kPolyInColor + perm.at(input_label(g.color[v]) - 1);
        out.add_graph(g, q);
    }
    return out;
}

GraphVector antisymmetrize_inputs(const GraphVector& x) {
    GraphVector out(poly_family());
    std::map<int, GraphVector> by_arity;
    for (const auto& [key, q] : x.terms()) {
        int k = poly_arity(decode_key(key));
        auto it = by_arity.try_emplace(k, GraphVector(poly_family())).first;
        it->second.add_term(key, q);
    }
    for (auto& [k, part] : by_arity) {
        std::vector<int> perm(k);
        std::iota(perm.begin(), perm.end(), 1);
        Rational count = 0;
        GraphVector acc(poly_family());
        do {
            std::vector<int> seq(perm.begin(), perm.end());
            GraphVector t = relabel_inputs(part, perm);
            t *= Rational(sort_sign(seq));
            acc += t;
            count += 1;
        } while (std::next_permutation(perm.begin(), perm.end()));
        acc *= 1 / count;
        out += acc;
    }
    return out;
}

GraphVector def_delta0(const GraphVector& x, Delta0Mode mode) {
    GraphVector out(poly_family());
    for (const auto& [key, q] : x.terms()) {
        CGraph g = decode_key(key);
        const int k = poly_arity(g);
        // outer multiplications: a new isolated input in front or at the end
        if (mode == Delta0Mode::Full) {
            for (int side = 0; side < 2; ++side) {
                CGraph h = g;
                for (int v = 0; v < h.n(); ++v)
                    if (is_input(h.color[v]) && side == 0) h.color[v] += 1;
                h.add_vertex(kPolyInColor + (side == 0 ? 1 : k + 1), false);
                out.add_graph(h, side == 0 ? q : ((k + 1) % 2 ? -q : q));
            }
        }
        for (int i = 1; i <= k; ++i) {
            int vi = -1;
            for (int v = 0; v < g.n(); ++v)
                if (g.color[v] == kPolyInColor + i) vi = v;
            std::vector<int> at;
            for (int j = 0; j < static_cast<int>(g.edges.size()); ++j)
                if (g.edges[j].t == vi) at.push_back(j);
            const Rational s = i % 2 ? -q : q;
            const std::size_t total = std::size_t(1) << at.size();
            for (std::size_t mask = 0; mask < total; ++mask) {
                if (mode == Delta0Mode::Normalized && (mask == 0 || mask == total - 1)) continue;
                CGraph h = g;
                for (int v = 0; v < h.n(); ++v)
                    if (is_input(h.color[v]) && input_label(h.color[v]) > i) h.color[v] += 1;
                int vn = h.add_vertex(kPolyInColor + i + 1, false);
                for (std::size_t t = 0; t < at.size(); ++t)
                    if (mask >> t & 1) h.edges[at[t]].t = vn;
                out.add_graph(h, s);
            }
        }
    }
    return out;
}

GraphVector poly_delta(const GraphVector& x) {
    GraphVector out(poly_family());
    for (const auto& [key, q] : x.terms()) {
        CGraph g = decode_key(key);
        for (int v = 0; v < g.n(); ++v) {
            if (!is_internal(g.color[v])) continue;
            std::vector<std::pair<int, bool>> halves;  // (edge, is tail)
            for (int j = 0; j < static_cast<int>(g.edges.size()); ++j) {
                if (g.edges[j].t == v) halves.push_back({j, true});
                if (g.edges[j].h == v) halves.push_back({j, false});
            }
            const std::size_t total = std::size_t(1) << halves.size();
            for (std::size_t mask = 0; mask < total; ++mask) {
                CGraph h = g;
                int vn = h.add_vertex(0, g.odd[v]);
                for (std::size_t t = 0; t < halves.size(); ++t) {
                    if (!(mask >> t & 1)) continue;
                    CEdge& e = h.edges[halves[t].first];
                    (halves[t].second ? e.t : e.h) = vn;
                }
                h.add_edge(make_edge(v, vn, 0, true));
                out.add_graph(h, q);
            }
        }
    }
    return out;
}

std::vector<std::string> enumerate_polygraphs(const PolyEnumeration& o) {
    std::set<std::string> level, all;
    // isolated internal vertices only as seeds; otherwise they are created by edges
    int seed_internal = o.nonisolated_internal ? 0 : o.max_internal;
    for (int V = 0; V <= seed_internal; ++V)
        for (int k = 0; k <= o.max_inputs; ++k) {
            Layout L = make_layout(k, V);
            level.insert(canonical_form(L.g, nullptr, true).key);
        }
    all = level;
    for (int e = 1; e <= o.max_edges; ++e) {
        std::set<std::string> next;
        for (const auto& key : level) {
            CGraph g = decode_key(key);
            std::vector<int> internal, inputs;
            int outv = -1;
            for (int v = 0; v < g.n(); ++v) {
                if (is_internal(g.color[v])) internal.push_back(v);
                else if (is_input(g.color[v])) inputs.push_back(v);
                else outv = v;
            }
            int V = static_cast<int>(internal.size());
            auto add = [&](CEdge ce, int fresh) {
                CGraph h = g;
                for (int f = 0; f < fresh; ++f) h.add_vertex(0, false);
                h.add_edge(ce);
                next.insert(canonical_form(h, nullptr, true).key);
            };
            // endpoints g.n() and g.n()+1 stand for new internal vertices
            std::vector<int> ends = internal;
            for (int f = 0; f < 2 && V + f < o.max_internal; ++f) ends.push_back(g.n() + f);
            auto fresh_of = [&](int a, int b) { return std::max(a, b) < g.n() ? 0 : std::max(a, b) - g.n() + 1; };
            for (int a : ends) {
                if (a > g.n()) continue;
                add(make_edge(a, outv, kPolyOutEdge, false), fresh_of(a, 0));
                for (int j : inputs) add(make_edge(j, a, kPolyInEdge, true), fresh_of(a, 0));
                for (int b : ends) {
                    if (a == g.n() + 1 || (b == g.n() + 1 && a != g.n())) continue;
                    add(make_edge(a, b, 0, true), fresh_of(a, b));
                }
            }
        }
        all.insert(next.begin(), next.end());
        level = std::move(next);
    }
    std::vector<std::string> out;
    for (const auto& key : all) {
        CGraph g = decode_key(key);
        Canon c = canonical_form(g);
        if (c.zero) continue;
        std::vector<int> deg(g.n(), 0);
        for (const auto& e : g.edges) {
            deg[e.t]++;
            deg[e.h]++;
        }
        bool ok = true;
        for (int v = 0; v < g.n(); ++v) {
            if (o.nonisolated_inputs && is_input(g.color[v]) && deg[v] == 0) ok = false;
            if (o.nonisolated_internal && is_internal(g.color[v]) && deg[v] == 0) ok = false;
        }
        if (ok) out.push_back(key);
    }
    return out;
}

Delta0Report delta0_cohomology(int max_edges, int max_internal) {
    Delta0Report r;
    r.max_edges = max_edges;
    r.max_internal = max_internal;
    PolyEnumeration o;
    o.max_edges = max_edges;
    o.max_internal = max_internal;
    o.max_inputs = max_edges;
    auto keys = enumerate_polygraphs(o);
    // slices: fixed edge count and internal vertex count, graded by arity
    std::map<std::pair<int, int>, std::map<int, std::vector<std::string>>> slices;
    for (const auto& k : keys) {
        CGraph g = decode_key(k);
        slices[{poly_edge_count(g), poly_internal_vertices(g)}][poly_arity(g)].push_back(k);
    }
    auto op = [](const std::string& key) {
        GraphVector x(poly_family());
        x.add_term(key, 1);
        return def_delta0(x);
    };
    for (auto& [ev, graded] : slices) {
        std::map<int, int> rank_out;
        static const std::vector<std::string> none;
        for (auto& [k, basis] : graded) {
            auto it = graded.find(k + 1);
            auto M = assemble_keys(op, basis, it == graded.end() ? none : it->second);
            rank_out[k] = rank(M);
            for (const auto& key : basis)
                if (!def_delta0(op(key)).empty()) r.squares_to_zero = false;
        }
        for (auto& [k, basis] : graded) {
            SliceReport s;
            s.slice = "edges=" + std::to_string(ev.first) + ",internal=" + std::to_string(ev.second) +
                      ",arity=" + std::to_string(k);
            s.dim_basis = static_cast<int>(basis.size());
            s.rank_out = rank_out[k];
            s.rank_in = graded.count(k - 1) ? rank_out[k - 1] : 0;
            s.dim_H = s.dim_basis - s.rank_in - s.rank_out;
            r.slices.push_back(s);
            // expected: the skew-symmetrized graphs with univalent inputs
            int expected = 0;
            std::vector<GraphVector> skew;
            std::vector<std::string> rows;
            for (const auto& key : basis) {
                CGraph g = decode_key(key);
                std::vector<int> deg(g.n(), 0);
                for (const auto& e : g.edges) deg[e.t]++;
                bool univalent = true;
                for (int v = 0; v < g.n(); ++v)
                    if (is_input(g.color[v]) && deg[v] != 1) univalent = false;
                if (!univalent) continue;
                GraphVector x(poly_family());
                x.add_term(key, 1);
                skew.push_back(antisymmetrize_inputs(x));
                for (const auto& [kk, q] : skew.back().terms()) rows.push_back(kk);
            }
            if (!skew.empty()) {
                std::sort(rows.begin(), rows.end());
                rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
                SparseRationalMatrix S(static_cast<int>(rows.size()), static_cast<int>(skew.size()));
                for (std::size_t j = 0; j < skew.size(); ++j)
                    for (const auto& [kk, q] : skew[j].terms())
                        S.add(static_cast<int>(std::lower_bound(rows.begin(), rows.end(), kk) - rows.begin()),
                              static_cast<int>(j), q);
                expected = rank(S);
            }
            if (expected != s.dim_H) r.matches_univalent = false;
        }
    }
    return r;
}

}  // namespace grapple
