#include <algorithm>
#include <functional>

#include "grapple/polydiff.hpp"

namespace grapple {

namespace {

struct Node {
    int arity = 0;
    std::vector<int> child;  // node index per slot, -1 for a leaf
};

// Nodes listed in orientation order; generator of arity n has degree 2-n.
struct Tree {
    std::vector<Node> nodes;
    int root = 0;
};

bool odd_node(const Node& n) { return n.arity % 2 != 0; }

void preorder(const Tree& t, int v, std::vector<int>& out) {
    out.push_back(v);
    for (int c : t.nodes[v].child)
        if (c >= 0) preorder(t, c, out);
}

std::string key_of(const Tree& t, int v) {
    std::string s = "m" + std::to_string(t.nodes[v].arity) + "(";
    for (std::size_t i = 0; i < t.nodes[v].child.size(); ++i) {
        if (i) s += ',';
        int c = t.nodes[v].child[i];
        s += c < 0 ? "|" : key_of(t, c);
    }
    return s + ")";
}

// Key and the sign relating the given orientation to the preorder one.
std::pair<std::string, int> canonical(const Tree& t) {
    std::vector<int> pre;
    preorder(t, t.root, pre);
    std::vector<int> pos(t.nodes.size());
    for (std::size_t i = 0; i < pre.size(); ++i) pos[pre[i]] = static_cast<int>(i);
    std::vector<int> seq;
    for (std::size_t v = 0; v < t.nodes.size(); ++v)
        if (odd_node(t.nodes[v])) seq.push_back(pos[v]);
    return {key_of(t, t.root), sort_sign(seq)};
}

struct TreeParser {
    const std::string& s;
    std::size_t i = 0;
    Tree t;
    int node() {
        if (i >= s.size() || s[i] != 'm') throw ParseError("expected tree node", i);
        ++i;
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (start == i) throw ParseError("expected arity", i);
        int n = std::stoi(s.substr(start, i - start));
        int me = static_cast<int>(t.nodes.size());
        t.nodes.push_back({n, {}});
        if (i >= s.size() || s[i] != '(') throw ParseError("expected '('", i);
        ++i;
        std::vector<int> ch;
        for (int k = 0; k < n; ++k) {
            if (k) {
                if (i >= s.size() || s[i] != ',') throw ParseError("expected ','", i);
                ++i;
            }
            if (i < s.size() && s[i] == '|') {
                ++i;
                ch.push_back(-1);
            } else {
                ch.push_back(node());
            }
        }
        if (i >= s.size() || s[i] != ')') throw ParseError("expected ')'", i);
        ++i;
        t.nodes[me].child = ch;
        return me;
    }
};

Tree parse_tree(const std::string& key) {
    TreeParser p{key};
    p.t.root = p.node();
    if (p.i != key.size()) throw ParseError("trailing input", p.i);
    return p.t;
}

void add_to(CassVector& v, const std::string& k, const Rational& q) {
    Rational& c = v[k];
    c += q;
    if (c == 0) v.erase(k);
}

// Signed terms (k, l, sign) of the differential of the arity-n generator.
std::vector<std::tuple<int, int, int>> generator_terms(int n) {
    std::vector<std::tuple<int, int, int>> t;
    for (int k = 0; k <= n; ++k)
        for (int l = 0; l <= n - k; ++l) {
            int e = k + l * (n - k - l) + 1;
            t.push_back({k, l, e % 2 ? -1 : 1});
        }
    return t;
}

}  // namespace

std::string cass_generator_key(int n) {
    Tree t;
    t.nodes.push_back({n, std::vector<int>(n, -1)});
    return key_of(t, 0);
}

int cass_tree_arity(const std::string& key) {
    Tree t = parse_tree(key);
    int leaves = 0;
    for (const auto& n : t.nodes)
        for (int c : n.child) leaves += c < 0;
    return leaves;
}

int cass_tree_degree(const std::string& key) {
    int d = 0;
    for (const auto& n : parse_tree(key).nodes) d += 2 - n.arity;
    return d;
}

int cass_tree_vertices(const std::string& key) { return static_cast<int>(parse_tree(key).nodes.size()); }

CassVector cass_compose(const std::string& x, int i, const std::string& y) {
    Tree a = parse_tree(x), b = parse_tree(y);
    const int off = static_cast<int>(a.nodes.size());
    for (auto& n : b.nodes) {
        for (int& c : n.child)
            if (c >= 0) c += off;
        a.nodes.push_back(n);
    }
    int seen = 0;
    bool done = false;
    std::function<void(int)> walk = [&](int v) {
        for (int& c : a.nodes[v].child) {
            if (done) return;
            if (c >= 0) {
                walk(c);
            } else if (++seen == i) {
                c = b.root + off;
                done = true;
            }
        }
    };
    walk(a.root);
    if (!done) throw ArityError("composition slot out of range");
    CassVector r;
    auto [k, s] = canonical(a);
    add_to(r, k, s);
    return r;
}

CassVector cass_differential(const CassVector& x) {
    CassVector out;
    for (const auto& [key, q] : x) {
        Tree t = parse_tree(key);
        // the canonical tree lists its nodes in preorder
        int prefix = 0;
        for (std::size_t p = 0; p < t.nodes.size(); ++p) {
            const Node v = t.nodes[p];
            const int n = v.arity;
            for (auto [k, l, s] : generator_terms(n)) {
                Tree u;
                std::vector<int> remap(t.nodes.size());
                for (std::size_t j = 0; j < t.nodes.size(); ++j) remap[j] = static_cast<int>(j <= p ? j : j + 1);
                for (std::size_t j = 0; j < t.nodes.size(); ++j) {
                    if (j == p + 1) u.nodes.push_back({});  // inner node slot
                    Node nn = t.nodes[j];
                    for (int& c : nn.child)
                        if (c >= 0) c = remap[c];
                    u.nodes.push_back(nn);
                }
                if (p + 1 == t.nodes.size()) u.nodes.push_back({});
                const int inner = static_cast<int>(p) + 1;
                Node outer{n - l + 1, {}}, in{l, {}};
                const Node& old = u.nodes[p];
                for (int j = 0; j < k; ++j) outer.child.push_back(old.child[j]);
                outer.child.push_back(inner);
                for (int j = k; j < k + l; ++j) in.child.push_back(old.child[j]);
                for (int j = k + l; j < n; ++j) outer.child.push_back(old.child[j]);
                u.nodes[p] = outer;
                u.nodes[inner] = in;
                u.root = remap[t.root];
                auto [ck, cs] = canonical(u);
                add_to(out, ck, q * (prefix % 2 ? -s : s) * cs);
            }
            prefix += 2 - n;
        }
    }
    return out;
}

CassVector cass_differential_generator(int n) {
    CassVector g;
    g[cass_generator_key(n)] = 1;
    return cass_differential(g);
}

std::size_t cass_term_count(int n) { return generator_terms(n).size(); }

// ---------------------------------------------------------------------------

namespace {

GraphVector eval_node(const PolyFamily& F, const Tree& t, int v) {
    auto it = F.find(t.nodes[v].arity);
    if (it == F.end()) throw MissingValue("no value on the arity-" + std::to_string(t.nodes[v].arity) + " generator");
    GraphVector val = it->second;
    int offset = 0;
    for (std::size_t s = 0; s < t.nodes[v].child.size(); ++s) {
        int c = t.nodes[v].child[s];
        if (c < 0) continue;
        GraphVector sub = eval_node(F, t, c);
        int ar = 0;
        std::vector<int> pre;
        preorder(t, c, pre);
        for (int u : pre)
            for (int cc : t.nodes[u].child) ar += cc < 0;
        val = operad_compose(val, static_cast<int>(s) + 1 + offset, sub);
        offset += ar - 1;
    }
    return val;
}

}  // namespace

GraphVector evaluate_tree(const PolyFamily& F, const std::string& key) {
    Tree t = parse_tree(key);
    return eval_node(F, t, t.root);
}

GraphVector evaluate_cass(const PolyFamily& F, const CassVector& x) {
    GraphVector out(poly_family());
    for (const auto& [key, q] : x) out += q * evaluate_tree(F, key);
    return out;
}

GraphVector truncate_internal(const GraphVector& x, int order) {
    GraphVector out(x.family());
    for (const auto& [key, q] : x.terms())
        if (poly_internal_vertices(decode_key(key)) <= order) out.add_term(key, q);
    return out;
}

GraphVector hkr_leading_terms(int n, int p_max) {
    GraphVector out(poly_family());
    if (n == 2) out += bare_product();
    Rational fact = 1;
    for (int p = 0; p <= p_max; ++p) {
        if (p > 0) fact *= p;
        PolyGraph g;
        g.k = n;
        g.V = 1;
        g.e_out.assign(p, 0);
        for (int j = 1; j <= n; ++j) g.e_in.push_back({0, j});
        out += poly_element(g, 1 / fact);
    }
    return out;
}

PolyFamily hkr_family(int n_max, int p_max) {
    PolyFamily F;
    for (int n = 0; n <= n_max; ++n) F[n] = hkr_leading_terms(n, p_max);
    return F;
}

BoundaryReport boundary_condition_check(const PolyFamily& F, int n_max, int p_max) {
    BoundaryReport r;
    for (int n = 0; n <= n_max; ++n) {
        GraphVector expected = hkr_leading_terms(n, p_max);
        GraphVector actual(poly_family());
        auto it = F.find(n);
        if (it != F.end()) {
            GraphVector low = truncate_internal(it->second, 1);
            for (const auto& [key, q] : low.terms()) {
                CGraph g = decode_key(key);
                int outs = 0;
                for (const auto& e : g.edges) outs += e.color == kPolyOutEdge;
                if (outs <= p_max) actual.add_term(key, q);
            }
        }
        std::vector<std::string> keys;
        for (const auto& [k, q] : expected.terms()) keys.push_back(k);
        for (const auto& [k, q] : actual.terms()) keys.push_back(k);
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        for (const auto& k : keys) {
            Rational e = expected.coeff(k), a = actual.coeff(k);
            if (e == a) continue;
            r.pass = false;
            std::string what = e == 0 ? "unexpected" : (a == 0 ? "missing" : "coefficient");
            r.mismatches.push_back("n=" + std::to_string(n) + " " + what + " " + serialize_poly(poly_from_cgraph(decode_key(k))) +
                                   " expected " + rational_str(e) + " got " + rational_str(a));
        }
    }
    return r;
}

DefValue def_differential(const PolyFamily& F, const PolyFamily& G, int g, int max_arity, int max_internal) {
    if (max_arity < 0 || max_internal < 0) throw TruncationRequired("deformation differential needs truncation orders");
    DefValue r;
    r.max_arity = max_arity;
    r.max_internal = max_internal;
    auto get = [](const PolyFamily& P, int n, bool required) {
        auto it = P.find(n);
        if (it != P.end()) return it->second;
        if (required) throw TruncationRequired("morphism not given in arity " + std::to_string(n));
        return GraphVector(poly_family());
    };
    const int gs = g % 2 ? -1 : 1;
    for (int n = 0; n <= max_arity; ++n) {
        GraphVector val = poly_delta(get(G, n, false));
        for (auto [k, l, s] : generator_terms(n)) {
            const int a = n - l + 1;
            const int slot = k + 1;
            GraphVector Ga = get(G, a, false), Gb = get(G, l, false);
            GraphVector t = operad_compose(Ga, slot, get(F, l, true));
            GraphVector u = operad_compose(get(F, a, true), slot, Gb);
            if ((g * (2 - a)) % 2) u *= Rational(-1);
            t += u;
            t *= Rational(-gs * s);
            val += t;
        }
        r.value[n] = truncate_internal(val, max_internal);
    }
    return r;
}

}  // namespace grapple
