#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "grapple/complexes.hpp"
#include "grapple/graphcore.hpp"

namespace grapple {

struct ArityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct WheelForbidden : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingValue : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TruncationRequired : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Vertex colors of labeled graphs: legs sort before internal vertices so the
// standard wedge reads (out-legs)(in-legs)(internal vertices)(edges).
constexpr int kOutLegColor = -2000;
constexpr int kInLegColor = -1000;
constexpr int kLegEdgeColor = 1;
constexpr int kHairBase = 64;

inline int hair_color(int out_hairs, int in_hairs) { return out_hairs * kHairBase + in_hairs; }

struct PropParams {
    int c = 0;
    int d = 1;
    int D() const { return c + d + 1; }
    bool vertex_odd() const { return D() % 2 != 0; }
    bool edge_odd() const { return (c + d) % 2 != 0; }
    bool out_odd() const { return c % 2 != 0; }
    bool in_odd() const { return d % 2 != 0; }
};

std::string prop_family(int c, int d);
std::string der_family(int c, int d);

/// Graph built from corollas with labeled legs; in[j] / out[i] is the vertex
/// carrying in-leg j+1 / out-leg i+1.
struct PropGraph {
    int c = 0;
    int d = 1;
    int V = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> in;
    std::vector<int> out;
    bool wheels = true;
};

CGraph prop_cgraph(const PropGraph& g);
PropGraph prop_from_cgraph(const CGraph& g, int c, int d, bool wheels);
PropGraph parse_prop(const std::string& text);
std::string serialize_prop(const PropGraph& g);
GraphVector prop_element(const PropGraph& g, const Rational& q = 1);

/// (out, in) counts of every vertex with non-negative color, legs included.
std::vector<std::pair<int, int>> vertex_profiles(const CGraph& g);
/// Numbers of out-legs and in-legs.
std::pair<int, int> leg_counts(const CGraph& g);
int prop_degree(const PropParams& p, const CGraph& g);

GraphVector corolla(int c, int d, int m, int n);

/// A derivation given by its values on corollas; values are memoized.
class Derivation {
public:
    typedef std::function<GraphVector(int, int)> Fn;
    Derivation() = default;
    Derivation(int c, int d, int degree, Fn fn, int bound = -1);

    int c() const { return c_; }
    int d() const { return d_; }
    int degree() const { return degree_; }
    int bound() const { return bound_; }
    GraphVector on(int m, int n) const;

private:
    int c_ = 0, d_ = 1, degree_ = 0, bound_ = -1;
    Fn fn_;
    std::shared_ptr<std::map<std::pair<int, int>, GraphVector>> cache_;
};

/// Substitutes x (labeled, profile of v) into vertex v of g; adds to out.
void substitute_vertex(const PropParams& p, const CGraph& g, int v, const CGraph& x, const Rational& q,
                       GraphVector& out);
GraphVector apply_derivation(const Derivation& D, const GraphVector& g);
/// [D1, D2] = D1 D2 - (-1)^{|D1||D2|} D2 D1, where D1 D2 applies D1 first.
Derivation der_bracket(const Derivation& D1, const Derivation& D2);
Derivation compose_derivations(const Derivation& first, const Derivation& second);

/// Value of the derivation attached to a graph of dFGC_{c+d+1} on corolla (m,n).
GraphVector f_star_value(int c, int d, const GraphVector& gamma, int m, int n);
Derivation f_star(int c, int d, const GraphVector& gamma);
std::size_t f_star_raw_terms(const CGraph& gamma, int m, int n);

Derivation delta_star_derivation(int c, int d);
GraphVector delta_star(int c, int d, int m, int n);
GraphVector delta_plus(int c, int d, int m, int n);
GraphVector delta_minimal(int c, int d, int m, int n);
GraphVector delta_star_graph(int c, int d, const GraphVector& g);
GraphVector delta_plus_graph(int c, int d, const GraphVector& g);
bool has_source_or_target(const CGraph& g);
bool has_passing_vertex(const CGraph& g);
/// Raw partition terms of the corolla differential before canonicalization.
std::size_t delta_star_raw_terms(int m, int n);

GraphVector horizontal_compose(const GraphVector& a, const GraphVector& b, int c, int d);
GraphVector trace(const GraphVector& a, int i, int j, int c, int d, bool wheels_allowed = true);

// --- derivation complex, hairy graphs --------------------------------------

struct DerGraph {
    int V = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> out_hairs;
    std::vector<int> in_hairs;
};

CGraph der_cgraph(const PropParams& p, const DerGraph& g);
DerGraph der_from_cgraph(const CGraph& g);
GraphVector der_element(int c, int d, const DerGraph& g, const Rational& q = 1);
/// `DER V=<int> E=[(t,h),...] OUT=[o_1,...,o_V] IN=[i_1,...,i_V]` with hair counts per vertex.
DerGraph parse_der(const std::string& text);
std::string serialize_der(const DerGraph& g);
std::pair<int, int> hair_counts(const CGraph& g);
int der_degree(const PropParams& p, const CGraph& g);

Derivation hairy_to_derivation(int c, int d, const GraphVector& h, int degree);
GraphVector derivation_to_hairy(const Derivation& D, int max_arity);

struct Truncated {
    GraphVector value;
    int max_arity = 0;
    bool truncated = true;
};

Truncated d_star(int c, int d, const GraphVector& h, int max_arity);
Derivation d_star_up(int c, int d, int max_arity);
Derivation rescaling_class(int c, int d, int max_arity);
Rational corolla_coefficient(const Derivation& D, int m, int n);

// --- strings of the proof of acyclicity ------------------------------------

enum class AuxKind { AlphaDot, AlphaUp, AlphaDown, AlphaUpDown, BetaDotUp, BetaUp, BetaDotDown, BetaDown, Gamma, Cycle };

struct AuxElement {
    AuxKind kind = AuxKind::AlphaDot;
    int n = 0;
    bool operator<(const AuxElement& o) const {
        return static_cast<int>(kind) != static_cast<int>(o.kind) ? kind < o.kind : n < o.n;
    }
    bool operator==(const AuxElement& o) const { return kind == o.kind && n == o.n; }
};

std::string aux_name(const AuxElement& x);

struct StringClassification {
    std::vector<int> core;
    std::vector<AuxElement> strings;
};

StringClassification classify_strings(const CGraph& hairy);

typedef std::map<AuxElement, Rational> AuxVector;
AuxVector aux_differential(const AuxElement& x);

struct AuxReport {
    std::vector<int> degrees;
    std::vector<int> dims;
    std::vector<int> cohomology;
    std::vector<bool> complete;
};

/// Which: "empty-core", "up", "down", "edge". Truncated at string length n_max.
AuxReport aux_cohomology(const std::string& which, int n_max);

// --- explicit wheeled classes ----------------------------------------------

struct Prop231 {
    GraphVector two_vertex;
    std::vector<GraphVector> three_terms;  // displayed order, unit coefficients
    GraphVector three_term;                // closed signed combination (empty if c+d even)
    std::vector<Rational> three_term_coeffs;
};

Prop231 prop231_cocycles(int c, int d);
/// Basis of connected leg-free wheeled graphs without sources or targets.
std::vector<std::string> wheeled_basis(int c, int d, int v, int e);
bool is_plus_exact(int c, int d, const GraphVector& x);

}  // namespace grapple
