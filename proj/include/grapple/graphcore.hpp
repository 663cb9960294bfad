#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace grapple {

typedef mpq_class Rational;

struct InvalidGraph : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FamilyMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(const std::string& what, std::size_t off)
        : std::runtime_error(what + " at byte " + std::to_string(off)), offset(off) {}
};

// ---------------------------------------------------------------------------
// Colored multigraph with parity data. This is the common currency of every
// family: legs, hairs, white vertices etc. are all encoded as colors.

struct CEdge {
    int t = 0;
    int h = 0;
    int color = 0;
    bool odd = false;
    bool undirected = false;
    bool flip_odd = false;  // reversing an undirected edge costs a sign
};

struct CGraph {
    std::vector<int> color;   // per vertex
    std::vector<bool> odd;    // per vertex
    std::vector<CEdge> edges;

    int n() const { return static_cast<int>(color.size()); }
    int add_vertex(int c, bool is_odd) {
        color.push_back(c);
        odd.push_back(is_odd);
        return n() - 1;
    }
    void add_edge(const CEdge& e) { edges.push_back(e); }
};

/// An odd object in a wedge product: a vertex or an edge of a CGraph.
struct Obj {
    bool is_edge = false;
    int idx = 0;
    bool operator==(const Obj& o) const { return is_edge == o.is_edge && idx == o.idx; }
};

/// Odd vertices by index, then odd edges by index.
std::vector<Obj> standard_wedge(const CGraph& g);

struct Canon {
    bool zero = false;      // odd automorphism
    int sign = 1;           // given orientation = sign * canonical orientation
    std::string key;
    std::vector<int> vperm;  // old vertex -> canonical vertex
    std::vector<int> eperm;  // old edge -> canonical edge
};

/// Canonical form under vertex relabeling (and edge flips for undirected
/// edges). The orientation of g is the wedge of its odd objects taken in the
/// order `wedge` (default: standard_wedge). With key_even_if_zero the key is
/// filled in for symmetry-killed graphs too (used by enumeration).
Canon canonical_form(const CGraph& g, const std::vector<Obj>* wedge = nullptr,
                     bool key_even_if_zero = false);

/// Reconstructs the canonical representative stored in a key. Its standard
/// wedge is the canonical orientation.
CGraph decode_key(const std::string& key);

/// Sign of the permutation sorting a sequence of distinct integers.
int sort_sign(std::vector<int> seq);

// ---------------------------------------------------------------------------
// Plain directed graphs of the Kontsevich-type complexes.

struct DirectedGraph {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;
    int orient = 1;  // optional O=- flag negates the element
};

struct OrientationConvention {
    int d = 2;
    bool odd() const { return d % 2 != 0; }
};

struct FamilySpec {
    bool undirected = false;
    bool allow_tadpoles = false;
};

struct GraphKey {
    std::string bytes;
    bool operator<(const GraphKey& o) const { return bytes < o.bytes; }
    bool operator==(const GraphKey& o) const { return bytes == o.bytes; }
};

struct CanonicalizeResult {
    bool zero_by_symmetry = false;
    GraphKey key;
    int sign = 1;
};

CGraph to_cgraph(const DirectedGraph& g, const OrientationConvention& conv, const FamilySpec& fam);
DirectedGraph from_cgraph(const CGraph& g);

CanonicalizeResult canonicalize(const DirectedGraph& g, const OrientationConvention& conv,
                                const FamilySpec& fam);

DirectedGraph parse_graph(const std::string& text);
std::string serialize_graph(const DirectedGraph& g);

// ---------------------------------------------------------------------------

/// Finite linear combination of canonical keys with rational coefficients.
class GraphVector {
public:
    GraphVector() = default;
    explicit GraphVector(std::string family) : family_(std::move(family)) {}

    const std::string& family() const { return family_; }
    const std::map<std::string, Rational>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const std::string& key, const Rational& q);
    /// Canonicalizes g and adds q * g.
    void add_graph(const CGraph& g, const Rational& q, const std::vector<Obj>* wedge = nullptr);
    Rational coeff(const std::string& key) const;

    GraphVector& operator+=(const GraphVector& o);
    GraphVector& operator-=(const GraphVector& o);
    GraphVector& operator*=(const Rational& q);
    bool operator==(const GraphVector& o) const { return family_ == o.family_ && terms_ == o.terms_; }
    bool operator!=(const GraphVector& o) const { return !(*this == o); }

private:
    void check(const GraphVector& o) const;
    std::string family_;
    std::map<std::string, Rational> terms_;
};

GraphVector vector_add(const GraphVector& a, const GraphVector& b);
GraphVector vector_scale(const Rational& q, const GraphVector& a);
GraphVector operator+(GraphVector a, const GraphVector& b);
GraphVector operator-(GraphVector a, const GraphVector& b);
GraphVector operator*(const Rational& q, GraphVector a);

std::string rational_str(const Rational& q);

}  // namespace grapple
