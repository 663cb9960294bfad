#include "grapple/graphcore.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>
#include <tuple>

namespace grapple {

int sort_sign(std::vector<int> seq) {
    // parity via cycle decomposition of the order-isomorphic permutation
    std::vector<int> idx(seq.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return seq[a] < seq[b]; });
    std::vector<bool> seen(idx.size(), false);
    int sign = 1;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (seen[i]) continue;
        std::size_t len = 0;
        for (std::size_t j = i; !seen[j]; j = idx[j]) {
            seen[j] = true;
            ++len;
        }
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

std::vector<Obj> standard_wedge(const CGraph& g) {
    std::vector<Obj> w;
    for (int v = 0; v < g.n(); ++v)
        if (g.odd[v]) w.push_back({false, v});
    for (int j = 0; j < (int)g.edges.size(); ++j)
        if (g.edges[j].odd) w.push_back({true, j});
    return w;
}

namespace {

typedef std::vector<std::vector<int>> Partition;

struct Search {
    const CGraph& g;
    const std::vector<Obj>& wedge;
    std::vector<int> best;
    int best_sign = 0;
    std::vector<int> best_vperm, best_eperm;
    bool zero = false;
    bool keep_going = false;

    Search(const CGraph& g_, const std::vector<Obj>& w) : g(g_), wedge(w) {}

    std::vector<std::vector<std::pair<int, int>>> inc;  // vertex -> (edge, role)

    void build_incidence() {
        inc.assign(g.n(), {});
        for (int j = 0; j < (int)g.edges.size(); ++j) {
            const CEdge& e = g.edges[j];
            if (e.t == e.h) {
                inc[e.t].push_back({j, e.undirected ? 4 : 3});
            } else if (e.undirected) {
                inc[e.t].push_back({j, 2});
                inc[e.h].push_back({j, 2});
            } else {
                inc[e.t].push_back({j, 0});
                inc[e.h].push_back({j, 1});
            }
        }
    }

    static int edge_class(const CEdge& e) {
        return e.color * 8 + (e.odd ? 4 : 0) + (e.undirected ? 2 : 0) + (e.flip_odd ? 1 : 0);
    }

    void refine(Partition& cells) const {
        std::vector<int> cell_of(g.n());
        for (;;) {
            for (int c = 0; c < (int)cells.size(); ++c)
                for (int v : cells[c]) cell_of[v] = c;
            bool changed = false;
            Partition next;
            for (auto& cell : cells) {
                if (cell.size() == 1) {
                    next.push_back(cell);
                    continue;
                }
                std::vector<std::pair<std::vector<int>, int>> sigs;
                for (int v : cell) {
                    std::vector<std::tuple<int, int, int>> s;
                    for (auto [j, role] : inc[v]) {
                        const CEdge& e = g.edges[j];
                        int other = (role == 1) ? e.t : e.h;
                        if (role == 2) other = (e.t == v) ? e.h : e.t;
                        s.emplace_back(role, edge_class(e), cell_of[other]);
                    }
                    std::sort(s.begin(), s.end());
                    std::vector<int> flat;
                    for (auto& [a, b, c] : s) {
                        flat.push_back(a);
                        flat.push_back(b);
                        flat.push_back(c);
                    }
                    sigs.push_back({std::move(flat), v});
                }
                std::sort(sigs.begin(), sigs.end());
                std::size_t i = 0;
                int parts = 0;
                while (i < sigs.size()) {
                    std::size_t k = i;
                    std::vector<int> part;
                    while (k < sigs.size() && sigs[k].first == sigs[i].first) part.push_back(sigs[k++].second);
                    std::sort(part.begin(), part.end());
                    next.push_back(std::move(part));
                    ++parts;
                    i = k;
                }
                if (parts > 1) changed = true;
            }
            cells = std::move(next);
            if (!changed) return;
        }
    }

    void leaf(const Partition& cells) {
        int n = g.n();
        std::vector<int> pi(n);
        for (int c = 0; c < n; ++c) pi[cells[c][0]] = c;
        std::vector<int> cert;
        cert.reserve(3 + 2 * n + 3 * g.edges.size());
        cert.push_back(n);
        std::vector<int> inv(n);
        for (int v = 0; v < n; ++v) inv[pi[v]] = v;
        for (int i = 0; i < n; ++i) {
            cert.push_back(g.color[inv[i]]);
            cert.push_back(g.odd[inv[i]] ? 1 : 0);
        }
        int m = static_cast<int>(g.edges.size());
        cert.push_back(m);
        int flips = 1;
        std::vector<std::array<int, 4>> ce(m);
        for (int j = 0; j < m; ++j) {
            const CEdge& e = g.edges[j];
            int a = pi[e.t], b = pi[e.h];
            if (e.undirected && a > b) {
                std::swap(a, b);
                if (e.flip_odd) flips = -flips;
            }
            ce[j] = {a, b, edge_class(e), j};
        }
        std::vector<int> order(m);
        for (int j = 0; j < m; ++j) order[j] = j;
        std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
            return std::tie(ce[x][0], ce[x][1], ce[x][2]) < std::tie(ce[y][0], ce[y][1], ce[y][2]);
        });
        std::vector<int> epos(m);
        for (int p = 0; p < m; ++p) {
            epos[order[p]] = p;
            cert.push_back(ce[order[p]][0]);
            cert.push_back(ce[order[p]][1]);
            cert.push_back(ce[order[p]][2]);
        }
        if (!best.empty() && cert > best) return;

        // canonical wedge ranks
        std::vector<int> vrank(n, -1), erank(m, -1);
        int r = 0;
        for (int i = 0; i < n; ++i)
            if (g.odd[inv[i]]) vrank[inv[i]] = r++;
        for (int p = 0; p < m; ++p)
            if (g.edges[order[p]].odd) erank[order[p]] = r++;
        std::vector<int> seq;
        seq.reserve(wedge.size());
        for (const Obj& o : wedge) seq.push_back(o.is_edge ? erank[o.idx] : vrank[o.idx]);
        int sign = sort_sign(seq) * flips;

        if (best.empty() || cert < best) {
            best = std::move(cert);
            best_sign = sign;
            best_vperm = pi;
            best_eperm = epos;
            best_inv = inv;
        } else {
            // same certificate: an automorphism, odd if the signs differ
            if (sign != best_sign) zero = true;
            if (autos.size() >= kMaxAutos) return;
            std::vector<int> gamma(n);
            for (int v = 0; v < n; ++v) gamma[v] = best_inv[pi[v]];
            autos.push_back(std::move(gamma));
        }
    }

    static constexpr std::size_t kMaxAutos = 64;
    std::vector<int> best_inv;
    std::vector<std::vector<int>> autos;
    std::vector<int> path;

    // orbit representative of v under the known automorphisms fixing the path
    std::vector<int> orbits() const {
        std::vector<int> root(g.n());
        for (int v = 0; v < g.n(); ++v) root[v] = v;
        auto find = [&](int v) {
            while (root[v] != v) v = root[v] = root[root[v]];
            return v;
        };
        for (const auto& a : autos) {
            bool fixes = true;
            for (int u : path)
                if (a[u] != u) fixes = false;
            if (!fixes) continue;
            for (int v = 0; v < g.n(); ++v) {
                int x = find(v), y = find(a[v]);
                if (x != y) root[std::max(x, y)] = std::min(x, y);
            }
        }
        for (int v = 0; v < g.n(); ++v) root[v] = find(v);
        return root;
    }

    void recurse(Partition cells) {
        if (zero && !keep_going) return;
        refine(cells);
        int target = -1;
        for (int c = 0; c < (int)cells.size(); ++c)
            if (cells[c].size() > 1) {
                target = c;
                break;
            }
        if (target < 0) {
            leaf(cells);
            return;
        }
        std::vector<int> explored;
        for (int v : cells[target]) {
            if (!explored.empty()) {
                auto orb = orbits();
                bool seen = false;
                for (int u : explored)
                    if (orb[u] == orb[v]) seen = true;
                if (seen) continue;
            }
            explored.push_back(v);
            Partition next;
            for (int c = 0; c < (int)cells.size(); ++c) {
                if (c != target) {
                    next.push_back(cells[c]);
                    continue;
                }
                next.push_back({v});
                std::vector<int> rest;
                for (int u : cells[c])
                    if (u != v) rest.push_back(u);
                next.push_back(std::move(rest));
            }
            path.push_back(v);
            recurse(std::move(next));
            path.pop_back();
            if (zero && !keep_going) return;
        }
    }
};

bool has_forced_zero(const CGraph& g) {
    std::map<std::tuple<int, int, int>, int> odd_parallel;
    for (const CEdge& e : g.edges) {
        if (e.undirected && e.t == e.h && e.flip_odd) return true;
        if (!e.odd) continue;
        int a = e.t, b = e.h;
        if (e.undirected && a > b) std::swap(a, b);
        if (++odd_parallel[{a, b, Search::edge_class(e)}] > 1) return true;
    }
    return false;
}

std::string encode(const std::vector<int>& cert) {
    std::string s;
    for (std::size_t i = 0; i < cert.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(cert[i]);
    }
    return s;
}

}  // namespace

Canon canonical_form(const CGraph& g, const std::vector<Obj>* wedge, bool key_even_if_zero) {
    for (const CEdge& e : g.edges)
        if (e.t < 0 || e.h < 0 || e.t >= g.n() || e.h >= g.n())
            throw InvalidGraph("edge endpoint out of range");
    std::vector<Obj> std_w;
    if (!wedge) {
        std_w = standard_wedge(g);
        wedge = &std_w;
    }
    Canon out;
    bool forced = has_forced_zero(g);
    if (forced && !key_even_if_zero) {
        out.zero = true;
        return out;
    }
    Search s(g, *wedge);
    s.keep_going = key_even_if_zero;
    s.zero = forced;
    s.build_incidence();
    Partition init;
    std::vector<int> vs(g.n());
    for (int v = 0; v < g.n(); ++v) vs[v] = v;
    std::stable_sort(vs.begin(), vs.end(), [&](int a, int b) {
        return std::make_pair(g.color[a], (int)g.odd[a]) < std::make_pair(g.color[b], (int)g.odd[b]);
    });
    for (std::size_t i = 0; i < vs.size();) {
        std::size_t k = i;
        std::vector<int> cell;
        while (k < vs.size() && g.color[vs[k]] == g.color[vs[i]] && g.odd[vs[k]] == g.odd[vs[i]])
            cell.push_back(vs[k++]);
        init.push_back(std::move(cell));
        i = k;
    }
    if (g.n() == 0) {
        s.leaf(init);
    } else {
        s.recurse(std::move(init));
    }
    if (s.zero && !key_even_if_zero) {
        out.zero = true;
        return out;
    }
    out.zero = s.zero;
    out.sign = s.best_sign;
    out.key = encode(s.best);
    out.vperm = s.best_vperm;
    out.eperm = s.best_eperm;
    return out;
}

CGraph decode_key(const std::string& key) {
    std::vector<int> c;
    std::stringstream ss(key);
    std::string tok;
    while (std::getline(ss, tok, ',')) c.push_back(std::stoi(tok));
    CGraph g;
    std::size_t p = 0;
    int n = c.at(p++);
    for (int i = 0; i < n; ++i) {
        int col = c.at(p++);
        bool odd = c.at(p++) != 0;
        g.add_vertex(col, odd);
    }
    int m = c.at(p++);
    for (int j = 0; j < m; ++j) {
        CEdge e;
        e.t = c.at(p++);
        e.h = c.at(p++);
        int cls = c.at(p++);
        e.color = cls / 8;
        e.odd = cls & 4;
        e.undirected = cls & 2;
        e.flip_odd = cls & 1;
        g.add_edge(e);
    }
    return g;
}

CGraph to_cgraph(const DirectedGraph& g, const OrientationConvention& conv, const FamilySpec& fam) {
    CGraph c;
    for (int v = 0; v < g.vertex_count; ++v) c.add_vertex(0, conv.odd());
    for (auto [t, h] : g.edges) {
        if (t < 0 || h < 0 || t >= g.vertex_count || h >= g.vertex_count)
            throw InvalidGraph("edge endpoint out of range");
        if (t == h && !fam.allow_tadpoles) throw InvalidGraph("self-loop not allowed in this family");
        CEdge e;
        e.t = t;
        e.h = h;
        e.odd = !conv.odd();
        e.undirected = fam.undirected;
        e.flip_odd = fam.undirected && conv.odd();
        c.add_edge(e);
    }
    return c;
}

DirectedGraph from_cgraph(const CGraph& g) {
    DirectedGraph d;
    d.vertex_count = g.n();
    for (const CEdge& e : g.edges) d.edges.push_back({e.t, e.h});
    return d;
}

CanonicalizeResult canonicalize(const DirectedGraph& g, const OrientationConvention& conv,
                                const FamilySpec& fam) {
    if (g.vertex_count < 0) throw InvalidGraph("negative vertex count");
    CGraph c = to_cgraph(g, conv, fam);
    Canon k = canonical_form(c);
    CanonicalizeResult r;
    if (k.zero) {
        r.zero_by_symmetry = true;
        return r;
    }
    r.key.bytes = k.key;
    r.sign = k.sign * g.orient;
    return r;
}

namespace {

struct Cursor {
    const std::string& s;
    std::size_t i = 0;
    explicit Cursor(const std::string& str) : s(str) {}
    void ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool peek(char c) {
        ws();
        return i < s.size() && s[i] == c;
    }
    void expect(char c) {
        ws();
        if (i >= s.size() || s[i] != c) throw ParseError(std::string("expected '") + c + "'", i);
        ++i;
    }
    void expect_word(const std::string& w) {
        ws();
        if (s.compare(i, w.size(), w) != 0) throw ParseError("expected '" + w + "'", i);
        i += w.size();
    }
    long integer() {
        ws();
        std::size_t start = i;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (start == i || (i == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
            throw ParseError("expected integer", start);
        return std::stol(s.substr(start, i - start));
    }
    bool at_end() {
        ws();
        return i >= s.size();
    }
};

}  // namespace

DirectedGraph parse_graph(const std::string& text) {
    Cursor c(text);
    DirectedGraph g;
    c.expect_word("V");
    c.expect('=');
    std::size_t at = c.i;
    long v = c.integer();
    if (v < 0) throw ParseError("negative vertex count", at);
    g.vertex_count = static_cast<int>(v);
    c.expect_word("E");
    c.expect('=');
    c.expect('[');
    if (!c.peek(']')) {
        for (;;) {
            c.expect('(');
            c.ws();
            std::size_t pos = c.i;
            long t = c.integer();
            c.expect(',');
            long h = c.integer();
            c.expect(')');
            if (t < 0 || h < 0 || t >= v || h >= v) throw ParseError("edge endpoint out of range", pos);
            g.edges.push_back({static_cast<int>(t), static_cast<int>(h)});
            if (c.peek(',')) {
                c.expect(',');
                continue;
            }
            break;
        }
    }
    c.expect(']');
    if (!c.at_end()) {
        c.expect_word("O");
        c.expect('=');
        c.ws();
        if (c.i < text.size() && (text[c.i] == '+' || text[c.i] == '-')) {
            g.orient = text[c.i] == '-' ? -1 : 1;
            ++c.i;
        } else {
            throw ParseError("expected '+' or '-'", c.i);
        }
    }
    if (!c.at_end()) throw ParseError("trailing characters", c.i);
    return g;
}

std::string serialize_graph(const DirectedGraph& g) {
    std::string s = "V=" + std::to_string(g.vertex_count) + " E=[";
    for (std::size_t j = 0; j < g.edges.size(); ++j) {
        if (j) s += ',';
        s += "(" + std::to_string(g.edges[j].first) + "," + std::to_string(g.edges[j].second) + ")";
    }
    s += "]";
    if (g.orient < 0) s += " O=-";
    return s;
}

// ---------------------------------------------------------------------------

void GraphVector::check(const GraphVector& o) const {
    if (!family_.empty() && !o.family_.empty() && family_ != o.family_)
        throw FamilyMismatch("cannot combine '" + family_ + "' with '" + o.family_ + "'");
}

void GraphVector::add_term(const std::string& key, const Rational& q) {
    if (q == 0) return;
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(key, q);
        return;
    }
    it->second += q;
    if (it->second == 0) terms_.erase(it);
}

void GraphVector::add_graph(const CGraph& g, const Rational& q, const std::vector<Obj>* wedge) {
    if (q == 0) return;
    Canon c = canonical_form(g, wedge);
    if (c.zero) return;
    add_term(c.key, c.sign > 0 ? q : Rational(-q));
}

Rational GraphVector::coeff(const std::string& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? Rational(0) : it->second;
}

GraphVector& GraphVector::operator+=(const GraphVector& o) {
    check(o);
    if (family_.empty()) family_ = o.family_;
    for (auto& [k, q] : o.terms_) add_term(k, q);
    return *this;
}

GraphVector& GraphVector::operator-=(const GraphVector& o) {
    check(o);
    if (family_.empty()) family_ = o.family_;
    for (auto& [k, q] : o.terms_) add_term(k, -q);
    return *this;
}

GraphVector& GraphVector::operator*=(const Rational& q) {
    if (q == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, c] : terms_) c *= q;
    return *this;
}

GraphVector vector_add(const GraphVector& a, const GraphVector& b) {
    GraphVector r = a;
    r += b;
    return r;
}

GraphVector vector_scale(const Rational& q, const GraphVector& a) {
    GraphVector r = a;
    r *= q;
    return r;
}

GraphVector operator+(GraphVector a, const GraphVector& b) { return a += b; }
GraphVector operator-(GraphVector a, const GraphVector& b) { return a -= b; }
GraphVector operator*(const Rational& q, GraphVector a) { return a *= q; }

std::string rational_str(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace grapple
