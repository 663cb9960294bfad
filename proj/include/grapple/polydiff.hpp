#pragma once

#include <map>
#include <string>
#include <vector>

#include "grapple/graphcore.hpp"
#include "grapple/linalg.hpp"
#include "grapple/propcalc.hpp"

namespace grapple {

struct PartitionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// White vertices sort before internal ones in canonical order.
constexpr int kPolyOutColor = -5000;
constexpr int kPolyInColor = -4000;  // plus the input label 1..k
constexpr int kPolyOutEdge = 2;      // internal -> output, even
constexpr int kPolyInEdge = 3;       // input -> internal, odd

/// Graph of the polydifferential operad built from the (0,1) prop: V internal
/// vertices, k labeled inputs, one output. e_in holds (internal vertex, input label).
struct PolyGraph {
    int k = 0;
    int V = 0;
    std::vector<std::pair<int, int>> e_int;
    std::vector<int> e_out;
    std::vector<std::pair<int, int>> e_in;
};

std::string poly_family();
/// Orientation: input edges in listed order, then internal edges.
CGraph poly_cgraph(const PolyGraph& g, std::vector<Obj>* wedge = nullptr);
PolyGraph poly_from_cgraph(const CGraph& g);
PolyGraph parse_poly(const std::string& text);
std::string serialize_poly(const PolyGraph& g);
GraphVector poly_element(const PolyGraph& g, const Rational& q = 1);

int poly_arity(const CGraph& g);
int poly_internal_vertices(const CGraph& g);
int poly_degree(const CGraph& g);
int poly_edge_count(const CGraph& g);

GraphVector poly_unit();
GraphVector bare_product();

/// blocks[i] lists the (1-based) in-legs of e sent to input i+1.
GraphVector polydiff_generator(const PropGraph& e, const std::vector<std::vector<int>>& blocks);

GraphVector operad_compose(const GraphVector& a, int i, const GraphVector& b);
/// perm[j-1] is the new label of input j.
GraphVector relabel_inputs(const GraphVector& x, const std::vector<int>& perm);
GraphVector antisymmetrize_inputs(const GraphVector& x);

enum class Delta0Mode { Normalized, Split, Full };
/// Splitting differential on input vertices. Normalized drops splits with an
/// empty side; Full adds the two outer multiplication terms.
GraphVector def_delta0(const GraphVector& x, Delta0Mode mode = Delta0Mode::Normalized);
/// Differential induced by the prop differential on internal vertices.
GraphVector poly_delta(const GraphVector& x);

struct PolyEnumeration {
    int max_edges = 0;
    int max_internal = 0;
    int max_inputs = 0;
    bool nonisolated_inputs = true;
    bool nonisolated_internal = true;
};
std::vector<std::string> enumerate_polygraphs(const PolyEnumeration& opts);

struct Delta0Report {
    int max_edges = 0;
    int max_internal = 0;
    std::vector<SliceReport> slices;
    bool matches_univalent = true;
    bool squares_to_zero = true;
};
Delta0Report delta0_cohomology(int max_edges, int max_internal);

// --- curved A-infinity operad ------------------------------------------------

/// Planar tree of generators; key format "m<n>(child,...)" with "|" for leaves.
typedef std::map<std::string, Rational> CassVector;

std::string cass_generator_key(int n);
int cass_tree_arity(const std::string& key);
int cass_tree_degree(const std::string& key);
int cass_tree_vertices(const std::string& key);
/// Composition of trees in the free operad, x o_i y (1-based slot).
CassVector cass_compose(const std::string& x, int i, const std::string& y);
CassVector cass_differential(const CassVector& x);
CassVector cass_differential_generator(int n);
std::size_t cass_term_count(int n);

typedef std::map<int, GraphVector> PolyFamily;  // arity -> value on the generator

/// Image of a tree under the morphism given on generators.
GraphVector evaluate_tree(const PolyFamily& F, const std::string& key);
GraphVector evaluate_cass(const PolyFamily& F, const CassVector& x);
/// Truncation of a vector to graphs with at most `order` internal vertices.
GraphVector truncate_internal(const GraphVector& x, int order);

/// Leading terms of the boundary condition, p up to p_max output edges.
GraphVector hkr_leading_terms(int n, int p_max);
PolyFamily hkr_family(int n_max, int p_max);

struct BoundaryReport {
    bool pass = true;
    std::vector<std::string> mismatches;
};
BoundaryReport boundary_condition_check(const PolyFamily& F, int n_max, int p_max);

struct DefValue {
    PolyFamily value;
    int max_arity = 0;
    int max_internal = 0;
    bool truncated = true;
};
/// Differential of the deformation complex of F at the element G of degree g.
DefValue def_differential(const PolyFamily& F, const PolyFamily& G, int g, int max_arity, int max_internal);

}  // namespace grapple
