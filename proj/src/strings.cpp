#include <algorithm>

#include "grapple/propcalc.hpp"

namespace grapple {

std::string aux_name(const AuxElement& x) {
    static const char* names[] = {"alpha_dot", "alpha_up",  "alpha_down", "alpha_updown", "beta_dot_up",
                                  "beta_up",   "beta_dot_down", "beta_down", "gamma", "cycle"};
    return std::string(names[static_cast<int>(x.kind)]) + "_" + std::to_string(x.n);
}

StringClassification classify_strings(const CGraph& g) {
    const int n = g.n();
    std::vector<int> oh(n), ih(n), oe(n, 0), ie(n, 0);
    for (int v = 0; v < n; ++v) {
        if (g.color[v] < 0) throw InvalidGraph("classify_strings expects a hairy graph");
        oh[v] = g.color[v] / kHairBase;
        ih[v] = g.color[v] % kHairBase;
    }
    for (const auto& e : g.edges) {
        oe[e.t]++;
        ie[e.h]++;
    }
    std::vector<bool> stringy(n);
    for (int v = 0; v < n; ++v) {
        int out = oe[v] + oh[v], in = ie[v] + ih[v];
        stringy[v] = out + in <= 1 || (out == 1 && in == 1);
    }

    StringClassification r;
    for (int v = 0; v < n; ++v)
        if (!stringy[v]) {
            r.core.push_back(v);
            for (int k = 0; k < oh[v]; ++k) r.strings.push_back({AuxKind::BetaUp, 0});
            for (int k = 0; k < ih[v]; ++k) r.strings.push_back({AuxKind::BetaDown, 0});
        }

    // stringy components; passing vertices force every path to be a directed chain
    std::vector<int> succ(n, -1), pred(n, -1);
    std::vector<bool> core_after(n, false), core_before(n, false);
    for (const auto& e : g.edges) {
        if (stringy[e.t] && stringy[e.h]) {
            succ[e.t] = e.h;
            pred[e.h] = e.t;
        } else if (stringy[e.t]) {
            core_after[e.t] = true;
        } else if (stringy[e.h]) {
            core_before[e.h] = true;
        }
    }
    std::vector<bool> seen(n, false);
    for (int s = 0; s < n; ++s) {
        if (!stringy[s] || seen[s]) continue;
        // walk back to the start of the chain (or around a cycle)
        int start = s;
        while (pred[start] >= 0 && pred[start] != s) start = pred[start];
        if (pred[start] == s) {
            // closed cycle of stringy vertices
            int len = 0, v = s;
            do {
                seen[v] = true;
                ++len;
                v = succ[v];
            } while (v >= 0 && v != s);
            r.strings.push_back({AuxKind::Cycle, len});
            continue;
        }
        std::vector<int> chain;
        for (int v = start; v >= 0 && !seen[v]; v = succ[v]) {
            seen[v] = true;
            chain.push_back(v);
        }
        int len = static_cast<int>(chain.size());
        int first = chain.front(), last = chain.back();
        bool in_hair = ih[first] > 0, out_hair = oh[last] > 0;
        bool from_core = core_before[first], to_core = core_after[last];
        if (from_core && to_core) {
            r.strings.push_back({AuxKind::Gamma, len});
        } else if (from_core) {
            r.strings.push_back({out_hair ? AuxKind::BetaUp : AuxKind::BetaDotUp, len});
        } else if (to_core) {
            r.strings.push_back({in_hair ? AuxKind::BetaDown : AuxKind::BetaDotDown, len});
        } else if (in_hair && out_hair) {
            r.strings.push_back({AuxKind::AlphaUpDown, len});
        } else if (out_hair) {
            r.strings.push_back({AuxKind::AlphaUp, len});
        } else if (in_hair) {
            r.strings.push_back({AuxKind::AlphaDown, len});
        } else {
            r.strings.push_back({AuxKind::AlphaDot, len});
        }
    }
    std::sort(r.strings.begin(), r.strings.end());
    return r;
}

AuxVector aux_differential(const AuxElement& x) {
    AuxVector r;
    const int n = x.n;
    const bool odd = n % 2 != 0;
    auto put = [&](AuxKind k, int q) { r[{k, n + 1}] += q; };
    switch (x.kind) {
    case AuxKind::AlphaDot:
        if (odd) put(AuxKind::AlphaDot, 1);
        break;
    case AuxKind::AlphaUp:
        put(AuxKind::AlphaDot, odd ? -1 : 1);
        if (!odd) put(AuxKind::AlphaUp, 1);
        break;
    case AuxKind::AlphaDown:
        put(AuxKind::AlphaDot, odd ? -1 : 1);
        if (!odd) put(AuxKind::AlphaDown, 1);
        break;
    case AuxKind::AlphaUpDown:
        put(AuxKind::AlphaUp, 1);
        put(AuxKind::AlphaDown, -1);
        if (odd) put(AuxKind::AlphaUpDown, -1);
        break;
    case AuxKind::BetaDotUp:
        if (!odd) put(AuxKind::BetaDotUp, 1);
        break;
    case AuxKind::BetaUp:
        put(AuxKind::BetaDotUp, 1);
        if (odd) put(AuxKind::BetaUp, -1);
        break;
    case AuxKind::BetaDotDown:
        if (!odd) put(AuxKind::BetaDotDown, 1);
        break;
    case AuxKind::BetaDown:
        put(AuxKind::BetaDotDown, 1);
        if (odd) put(AuxKind::BetaDown, -1);
        break;
    case AuxKind::Gamma:
        if (odd) put(AuxKind::Gamma, 1);
        break;
    case AuxKind::Cycle:
        break;
    }
    for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
    return r;
}

namespace {

std::vector<AuxElement> aux_generators(const std::string& which, int n) {
    std::vector<AuxElement> g;
    if (which == "empty-core") {
        if (n >= 1) g.push_back({AuxKind::AlphaDot, n});
        if (n >= 1) g.push_back({AuxKind::AlphaUp, n});
        if (n >= 1) g.push_back({AuxKind::AlphaDown, n});
        if (n >= 0) g.push_back({AuxKind::AlphaUpDown, n});
    } else if (which == "up") {
        if (n >= 1) g.push_back({AuxKind::BetaDotUp, n});
        g.push_back({AuxKind::BetaUp, n});
    } else if (which == "down") {
        if (n >= 1) g.push_back({AuxKind::BetaDotDown, n});
        g.push_back({AuxKind::BetaDown, n});
    } else if (which == "edge") {
        if (n >= 1) g.push_back({AuxKind::Gamma, n});
    } else {
        throw std::invalid_argument("unknown auxiliary complex '" + which + "'");
    }
    return g;
}

// Degree of a string element: one per stringy vertex, shifted by -1 for the
// free strings (the lone hair has degree -1).
int aux_degree(const std::string& which, int n) { return which == "empty-core" ? n - 1 : n; }

int rank_between(const std::vector<AuxElement>& from, const std::vector<AuxElement>& to) {
    if (from.empty() || to.empty()) return 0;
    SparseRationalMatrix M(static_cast<int>(to.size()), static_cast<int>(from.size()));
    for (std::size_t j = 0; j < from.size(); ++j)
        for (const auto& [y, q] : aux_differential(from[j])) {
            auto it = std::find(to.begin(), to.end(), y);
            if (it == to.end()) throw IncompleteCodomain("auxiliary differential leaves the complex");
            M.add(static_cast<int>(it - to.begin()), static_cast<int>(j), q);
        }
    return rank(M);
}

}  // namespace

AuxReport aux_cohomology(const std::string& which, int n_max) {
    AuxReport r;
    std::vector<std::vector<AuxElement>> gens;
    for (int n = 0; n <= n_max; ++n) gens.push_back(aux_generators(which, n));
    for (int n = 0; n <= n_max; ++n) {
        int dim = static_cast<int>(gens[n].size());
        int out = n < n_max ? rank_between(gens[n], gens[n + 1]) : 0;
        int in = n > 0 ? rank_between(gens[n - 1], gens[n]) : 0;
        r.degrees.push_back(aux_degree(which, n));
        r.dims.push_back(dim);
        r.cohomology.push_back(dim - out - in);
        r.complete.push_back(n < n_max);
    }
    return r;
}

}  // namespace grapple
