#include "grapple/complexes.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

namespace grapple {

std::string ComplexSpec::name() const {
    return (undirected() ? "FGC_" : "dFGC_") + std::to_string(d);
}

ComplexSpec spec_full(Family f, int d) {
    ComplexSpec s;
    s.family = f;
    s.d = d;
    s.connected = false;
    s.min_valency = 0;
    return s;
}

ComplexSpec spec_dcGC(int d) {
    ComplexSpec s = spec_full(Family::dFGC, d);
    s.connected = true;
    return s;
}

ComplexSpec spec_dcGC_ge2(int d) {
    ComplexSpec s = spec_dcGC(d);
    s.min_valency = 2;
    return s;
}

ComplexSpec spec_dGC(int d) {
    ComplexSpec s = spec_dcGC_ge2(d);
    s.exclude_passing = true;
    return s;
}

ComplexSpec spec_GC_ge2(int d) {
    ComplexSpec s = spec_full(Family::FGC, d);
    s.connected = true;
    s.min_valency = 2;
    return s;
}

ComplexSpec spec_GC(int d) {
    ComplexSpec s = spec_GC_ge2(d);
    s.min_valency = 3;
    return s;
}

ComplexSpec spec_GC_or(int d) {
    ComplexSpec s = spec_full(Family::FGCor, d);
    s.connected = true;
    s.min_valency = 2;
    s.exclude_passing = true;
    return s;
}

const std::vector<std::string>& family_names() {
    static const std::vector<std::string> names = {"dgc", "dcgc", "dcgc2", "gc", "gc2", "gcor", "dfgc", "fgc", "fgcor"};
    return names;
}

ComplexSpec spec_by_name(const std::string& name, int d) {
    if (name == "dgc") return spec_dGC(d);
    if (name == "dcgc") return spec_dcGC(d);
    if (name == "dcgc2") return spec_dcGC_ge2(d);
    if (name == "gc") return spec_GC(d);
    if (name == "gc2") return spec_GC_ge2(d);
    if (name == "gcor") return spec_GC_or(d);
    if (name == "dfgc") return spec_full(Family::dFGC, d);
    if (name == "fgc") return spec_full(Family::FGC, d);
    if (name == "fgcor") return spec_full(Family::FGCor, d);
    throw std::invalid_argument("unknown family '" + name + "'");
}

int BasisSlice::index_of(const std::string& key) const {
    auto it = std::lower_bound(keys.begin(), keys.end(), key);
    if (it == keys.end() || *it != key) return -1;
    return static_cast<int>(it - keys.begin());
}

int graph_degree(int d, int v, int e) { return d * (v - 1) + (1 - d) * e; }

int degree(const ComplexSpec& spec, const CGraph& g) {
    return graph_degree(spec.d, g.n(), static_cast<int>(g.edges.size()));
}

int degree(const ComplexSpec& spec, const DirectedGraph& g) {
    return graph_degree(spec.d, g.vertex_count, static_cast<int>(g.edges.size()));
}

int components(const CGraph& g) {
    std::vector<int> parent(g.n());
    for (int i = 0; i < g.n(); ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    int comps = g.n();
    for (const CEdge& e : g.edges) {
        int a = find(e.t), b = find(e.h);
        if (a != b) {
            parent[a] = b;
            --comps;
        }
    }
    return comps;
}

int loop_order(const CGraph& g) { return static_cast<int>(g.edges.size()) - g.n() + components(g); }

int loop_order(const DirectedGraph& g) {
    return loop_order(to_cgraph(g, {2}, {false, true}));
}

bool has_directed_cycle(const CGraph& g) {
    int n = g.n();
    std::vector<std::vector<int>> out(n);
    std::vector<int> indeg(n, 0);
    for (const CEdge& e : g.edges) {
        out[e.t].push_back(e.h);
        ++indeg[e.h];
    }
    std::vector<int> stack;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) stack.push_back(v);
    int seen = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        ++seen;
        for (int w : out[v])
            if (--indeg[w] == 0) stack.push_back(w);
    }
    return seen != n;
}

bool is_member(const ComplexSpec& spec, const CGraph& g) {
    if (g.n() < 1) return false;
    std::vector<int> in(g.n(), 0), out(g.n(), 0);
    for (const CEdge& e : g.edges) {
        if (e.t == e.h && !spec.allow_tadpoles) return false;
        if (e.undirected != spec.undirected()) return false;
        ++out[e.t];
        ++in[e.h];
    }
    for (int v = 0; v < g.n(); ++v) {
        if (in[v] + out[v] < spec.min_valency) return false;
        if (spec.exclude_passing && !spec.undirected() && in[v] == 1 && out[v] == 1) return false;
    }
    if (spec.connected && components(g) != 1) return false;
    if (spec.oriented() && has_directed_cycle(g)) return false;
    return true;
}

GraphVector element(const ComplexSpec& spec, const DirectedGraph& g, const Rational& q) {
    GraphVector x(spec.name());
    CanonicalizeResult r = canonicalize(g, spec.conv(), spec.flags());
    if (!r.zero_by_symmetry) x.add_term(r.key.bytes, r.sign > 0 ? q : Rational(-q));
    return x;
}

CGraph key_graph(const std::string& key) { return decode_key(key); }

int key_vertices(const std::string& key) { return std::stoi(key.substr(0, key.find(','))); }

int key_edges(const std::string& key) { return static_cast<int>(decode_key(key).edges.size()); }

std::size_t max_slice_size() {
    const char* env = std::getenv("GRAPPLE_MAX_SLICE");
    if (env && *env) {
        long long v = std::atoll(env);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return 2000000;
}

namespace {

CEdge make_edge(const ComplexSpec& spec, int t, int h) {
    CEdge e;
    e.t = t;
    e.h = h;
    e.odd = !spec.conv().odd();
    e.undirected = spec.undirected();
    e.flip_odd = spec.undirected() && spec.conv().odd();
    return e;
}

bool parallel_odd(const CGraph& g, const CEdge& ne) {
    if (!ne.odd && !(ne.undirected && ne.flip_odd && ne.t == ne.h)) return false;
    if (ne.undirected && ne.flip_odd && ne.t == ne.h) return true;
    for (const CEdge& e : g.edges) {
        if (e.t == ne.t && e.h == ne.h) return true;
        if (ne.undirected && e.t == ne.h && e.h == ne.t) return true;
    }
    return false;
}

}  // namespace

BasisSlice generate_basis(const ComplexSpec& spec, int v, int e) {
    if (v < 1 || e < 0) throw std::invalid_argument("generate_basis needs v >= 1, e >= 0");
    BasisSlice slice;
    slice.spec = spec;
    slice.v = v;
    slice.e = e;
    std::size_t cap = max_slice_size();

    CGraph start;
    for (int i = 0; i < v; ++i) start.add_vertex(0, spec.conv().odd());
    std::set<std::string> level = {canonical_form(start, nullptr, true).key};
    for (int step = 0; step < e; ++step) {
        int remaining = e - step - 1;
        std::set<std::string> next;
        for (const std::string& k : level) {
            CGraph g = decode_key(k);
            for (int t = 0; t < v; ++t) {
                for (int h = spec.undirected() ? t : 0; h < v; ++h) {
                    if (t == h && !spec.allow_tadpoles) continue;
                    CEdge ne = make_edge(spec, t, h);
                    if (parallel_odd(g, ne)) continue;
                    CGraph g2 = g;
                    g2.add_edge(ne);
                    if (spec.oriented() && has_directed_cycle(g2)) continue;
                    if (spec.min_valency > 0) {
                        std::vector<int> deg(v, 0);
                        for (const CEdge& x : g2.edges) {
                            ++deg[x.t];
                            ++deg[x.h];
                        }
                        int deficit = 0;
                        for (int u = 0; u < v; ++u) deficit += std::max(0, spec.min_valency - deg[u]);
                        if (deficit > 2 * remaining) continue;
                    }
                    next.insert(canonical_form(g2, nullptr, true).key);
                }
            }
            if (next.size() > cap) throw ResourceLimit("basis slice exceeds GRAPPLE_MAX_SLICE");
        }
        level = std::move(next);
    }
    for (const std::string& k : level) {
        CGraph g = decode_key(k);
        if (!is_member(spec, g)) continue;
        if (canonical_form(g).zero) continue;
        slice.keys.push_back(k);
    }
    std::sort(slice.keys.begin(), slice.keys.end());
    return slice;
}

void insert_at_vertex(const CGraph& g1, const std::vector<Obj>& w1, int v, const CGraph& g2,
                      const std::vector<Obj>& w2, const InsertSink& sink,
                      const std::vector<int>* attach_to) {
    int n1 = g1.n();
    int n2 = g2.n();
    std::vector<int> targets;
    if (attach_to) {
        targets = *attach_to;
    } else {
        for (int w = 0; w < n2; ++w) targets.push_back(w);
    }
    int sign = 1;
    if (g1.odd[v]) {
        auto pos = std::find(w1.begin(), w1.end(), Obj{false, v});
        if (pos == w1.end()) throw std::logic_error("odd vertex missing from wedge");
        if ((w1.end() - pos - 1) % 2 != 0) sign = -1;
    }
    auto vmap = [&](int u) { return u < v ? u : u - 1; };
    int off = n1 - 1;
    int e1 = static_cast<int>(g1.edges.size());

    CGraph base;
    for (int u = 0; u < n1; ++u)
        if (u != v) base.add_vertex(g1.color[u], g1.odd[u]);
    for (int w = 0; w < n2; ++w) base.add_vertex(g2.color[w], g2.odd[w]);
    std::vector<std::pair<int, int>> halves;  // (edge, end)
    for (int j = 0; j < e1; ++j) {
        CEdge e = g1.edges[j];
        if (e.t == v) halves.push_back({j, 0});
        if (e.h == v) halves.push_back({j, 1});
        e.t = e.t == v ? -1 : vmap(e.t);
        e.h = e.h == v ? -1 : vmap(e.h);
        base.add_edge(e);
    }
    for (const CEdge& e : g2.edges) {
        CEdge x = e;
        x.t += off;
        x.h += off;
        base.add_edge(x);
    }
    std::vector<Obj> wedge;
    for (const Obj& o : w1) {
        if (!o.is_edge && o.idx == v) continue;
        wedge.push_back(o.is_edge ? o : Obj{false, vmap(o.idx)});
    }
    for (const Obj& o : w2) wedge.push_back(o.is_edge ? Obj{true, o.idx + e1} : Obj{false, o.idx + off});

    if (targets.empty()) {
        if (halves.empty()) sink(base, wedge, sign);
        return;
    }
    std::size_t k = halves.size();
    std::vector<std::size_t> choice(k, 0);
    for (;;) {
        CGraph g = base;
        for (std::size_t i = 0; i < k; ++i) {
            auto [j, end] = halves[i];
            int tgt = targets[choice[i]] + off;
            if (end == 0)
                g.edges[j].t = tgt;
            else
                g.edges[j].h = tgt;
        }
        sink(g, wedge, sign);
        std::size_t i = 0;
        while (i < k && ++choice[i] == targets.size()) choice[i++] = 0;
        if (i == k) break;
    }
}

GraphVector pre_lie(const ComplexSpec& spec, const GraphVector& x, const GraphVector& y) {
    GraphVector out(spec.name());
    for (auto& [kx, qx] : x.terms()) {
        CGraph gx = decode_key(kx);
        std::vector<Obj> wx = standard_wedge(gx);
        for (auto& [ky, qy] : y.terms()) {
            CGraph gy = decode_key(ky);
            std::vector<Obj> wy = standard_wedge(gy);
            Rational q = qx * qy;
            for (int v = 0; v < gx.n(); ++v) {
                insert_at_vertex(gx, wx, v, gy, wy, [&](const CGraph& g, const std::vector<Obj>& w, int s) {
                    if (!spec.allow_tadpoles)
                        for (const CEdge& e : g.edges)
                            if (e.t == e.h) return;
                    out.add_graph(g, s > 0 ? q : Rational(-q), &w);
                });
            }
        }
    }
    return out;
}

GraphVector lie_bracket(const ComplexSpec& spec, const GraphVector& x, const GraphVector& y) {
    if (x.family() != spec.name() || y.family() != spec.name())
        throw FamilyMismatch("bracket arguments not in " + spec.name());
    GraphVector out(spec.name());
    for (auto& [kx, qx] : x.terms()) {
        GraphVector gx(spec.name());
        gx.add_term(kx, qx);
        CGraph cx = decode_key(kx);
        int dx = degree(spec, cx);
        for (auto& [ky, qy] : y.terms()) {
            GraphVector gy(spec.name());
            gy.add_term(ky, qy);
            int dy = degree(spec, decode_key(ky));
            out += pre_lie(spec, gx, gy);
            GraphVector back = pre_lie(spec, gy, gx);
            if ((dx * dy) % 2 == 0)
                out -= back;
            else
                out += back;
        }
    }
    return out;
}

GraphVector mc_edge(const ComplexSpec& spec) {
    DirectedGraph e;
    e.vertex_count = 2;
    e.edges = {{0, 1}};
    return element(spec, e);
}

GraphVector differential(const ComplexSpec& spec, const GraphVector& x) {
    ComplexSpec ambient = spec;
    ambient.connected = false;
    ambient.min_valency = 0;
    ambient.exclude_passing = false;
    GraphVector r = lie_bracket(ambient, mc_edge(ambient), x);
    for (auto& [k, q] : r.terms()) {
        if (!is_member(spec, decode_key(k)))
            throw IncompleteCodomain("differential leaves the family: " + serialize_graph(from_cgraph(decode_key(k))));
    }
    return r;
}

int vector_degree(const ComplexSpec& spec, const GraphVector& x) {
    if (x.empty()) throw std::invalid_argument("degree of zero vector");
    int deg = 0;
    bool first = true;
    for (auto& [k, q] : x.terms()) {
        int dk = degree(spec, decode_key(k));
        if (!first && dk != deg) throw std::invalid_argument("inhomogeneous vector");
        deg = dk;
        first = false;
    }
    return deg;
}

GraphVector bracket_with_empty(const ComplexSpec& spec, const GraphVector& x) {
    GraphVector out(spec.name());
    for (auto& [k, q] : x.terms()) out.add_term(k, q * 2 * loop_order(decode_key(k)));
    return out;
}

GraphVector direct_sum_map(const GraphVector& x) {
    ComplexSpec target = spec_dcGC(2);
    if (x.family() != spec_GC_ge2(2).name()) throw FamilyMismatch("direct_sum_map expects FGC_2");
    GraphVector out(target.name());
    for (auto& [k, q] : x.terms()) {
        CGraph g = decode_key(k);
        std::size_t m = g.edges.size();
        for (std::size_t mask = 0; mask < (std::size_t(1) << m); ++mask) {
            CGraph h = g;
            for (std::size_t j = 0; j < m; ++j) {
                CEdge& e = h.edges[j];
                e.undirected = false;
                e.flip_odd = false;
                if (mask >> j & 1) std::swap(e.t, e.h);
            }
            out.add_graph(h, q);
        }
    }
    return out;
}

SparseRationalMatrix assemble_keys(const std::function<GraphVector(const std::string&)>& op,
                                   const std::vector<std::string>& domain,
                                   const std::vector<std::string>& codomain, bool allow_outside) {
    std::map<std::string, int> row;
    for (std::size_t i = 0; i < codomain.size(); ++i) row[codomain[i]] = static_cast<int>(i);
    SparseRationalMatrix M(static_cast<int>(codomain.size()), static_cast<int>(domain.size()));
    for (std::size_t j = 0; j < domain.size(); ++j) {
        GraphVector img = op(domain[j]);
        SparseColumn col;
        for (auto& [k, q] : img.terms()) {
            auto it = row.find(k);
            if (it == row.end()) {
                if (allow_outside) continue;
                throw IncompleteCodomain("image term outside codomain basis");
            }
            col.push_back({it->second, q});
        }
        M.set_column(static_cast<int>(j), std::move(col));
    }
    return M;
}

SparseRationalMatrix assemble(const std::function<GraphVector(const GraphVector&)>& op,
                              const BasisSlice& domain, const BasisSlice& codomain,
                              const ComplexSpec& spec) {
    return assemble_keys(
        [&](const std::string& k) {
            GraphVector x(spec.name());
            x.add_term(k, 1);
            return op(x);
        },
        domain.keys, codomain.keys);
}

std::optional<std::pair<int, int>> slice_for(const ComplexSpec& spec, int loop, int deg) {
    int v = deg + (spec.d - 1) * loop + 1;
    int e = loop + v - 1;
    if (v < 1 || e < 0) return std::nullopt;
    return std::make_pair(v, e);
}

CohomologyReport cohomology_dims(const ComplexSpec& spec, int loop, int deg_lo, int deg_hi) {
    CohomologyReport rep;
    rep.spec = spec;
    rep.loop = loop;
    std::map<int, BasisSlice> bases;
    std::map<int, bool> truncated;
    for (int k = deg_lo - 1; k <= deg_hi + 1; ++k) {
        BasisSlice b;
        auto ve = slice_for(spec, loop, k);
        truncated[k] = false;
        // the valency bound alone can rule a cell out
        bool possible = ve && !(spec.min_valency > 0 && 2 * ve->second < spec.min_valency * ve->first);
        if (ve) {
            b.v = ve->first;
            b.e = ve->second;
        }
        if (possible) {
            try {
                b = generate_basis(spec, ve->first, ve->second);
            } catch (const ResourceLimit&) {
                truncated[k] = true;
            }
            b.v = ve->first;
            b.e = ve->second;
        }
        b.spec = spec;
        bases[k] = std::move(b);
    }
    std::map<int, int> rank_out;
    for (int k = deg_lo - 1; k <= deg_hi; ++k) {
        if (truncated[k] || truncated[k + 1] || bases[k].keys.empty() || bases[k + 1].keys.empty()) {
            rank_out[k] = 0;
            continue;
        }
        SparseRationalMatrix M =
            assemble([&](const GraphVector& x) { return differential(spec, x); }, bases[k], bases[k + 1], spec);
        rank_out[k] = rank(M);
    }
    for (int k = deg_lo; k <= deg_hi; ++k) {
        SliceReport s;
        const BasisSlice& b = bases[k];
        s.slice = "loop=" + std::to_string(loop) + ",deg=" + std::to_string(k) +
                  (b.v > 0 ? ",v=" + std::to_string(b.v) + ",e=" + std::to_string(b.e) : std::string(",none"));
        s.dim_basis = static_cast<int>(b.keys.size());
        s.rank_out = rank_out[k];
        s.rank_in = rank_out[k - 1];
        s.dim_H = s.dim_basis - s.rank_out - s.rank_in;
        if (truncated[k])
            s.exactness = "lower-bound";
        else if (truncated[k - 1] || truncated[k + 1])
            s.exactness = "upper-bound";
        rep.slices.push_back(s);
        rep.degrees.push_back(k);
    }
    return rep;
}

}  // namespace grapple
