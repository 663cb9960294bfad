#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "grapple/graphcore.hpp"
#include "grapple/linalg.hpp"

namespace grapple {

struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Family { dFGC, FGC, FGCor };

struct ComplexSpec {
    Family family = Family::dFGC;
    int d = 2;
    bool connected = true;
    int min_valency = 1;
    bool exclude_passing = false;
    bool allow_tadpoles = false;

    bool undirected() const { return family == Family::FGC; }
    bool oriented() const { return family == Family::FGCor; }
    std::string name() const;
    OrientationConvention conv() const { return {d}; }
    FamilySpec flags() const { return {undirected(), allow_tadpoles}; }
};

ComplexSpec spec_dGC(int d);         // connected, >=2-valent, no passing vertices
ComplexSpec spec_dcGC(int d);        // connected directed
ComplexSpec spec_dcGC_ge2(int d);
ComplexSpec spec_GC(int d);          // connected, >=3-valent, undirected
ComplexSpec spec_GC_ge2(int d);
ComplexSpec spec_GC_or(int d);       // connected, oriented, no passing vertices
ComplexSpec spec_full(Family f, int d);
/// Lookup by short name: dgc, dcgc, dcgc2, gc, gc2, gcor, dfgc, fgc, fgcor.
ComplexSpec spec_by_name(const std::string& name, int d);
const std::vector<std::string>& family_names();

struct BasisSlice {
    ComplexSpec spec;
    int v = 0;
    int e = 0;
    std::vector<std::string> keys;
    int index_of(const std::string& key) const;
};

int degree(const ComplexSpec& spec, const CGraph& g);
int degree(const ComplexSpec& spec, const DirectedGraph& g);
int graph_degree(int d, int v, int e);
int loop_order(const CGraph& g);
int loop_order(const DirectedGraph& g);
int components(const CGraph& g);

bool is_member(const ComplexSpec& spec, const CGraph& g);
bool has_directed_cycle(const CGraph& g);

/// Element of the complex given by a single graph (zero if symmetry-killed).
GraphVector element(const ComplexSpec& spec, const DirectedGraph& g, const Rational& q = 1);
CGraph key_graph(const std::string& key);
int key_vertices(const std::string& key);
int key_edges(const std::string& key);

/// Size cap for enumeration levels, from GRAPPLE_MAX_SLICE (default 2000000).
std::size_t max_slice_size();

BasisSlice generate_basis(const ComplexSpec& spec, int v, int e);

/// Substitution of G2 into vertex v of G1: v is moved to the end of the
/// orientation and replaced by the orientation of G2; every half-edge at v is
/// reattached to every vertex of G2 independently.
typedef std::function<void(const CGraph&, const std::vector<Obj>&, int sign)> InsertSink;
void insert_at_vertex(const CGraph& g1, const std::vector<Obj>& w1, int v, const CGraph& g2,
                      const std::vector<Obj>& w2, const InsertSink& sink,
                      const std::vector<int>* attach_to = nullptr);

/// Pre-Lie product x o y = sum over vertices of x of insertions of y.
GraphVector pre_lie(const ComplexSpec& spec, const GraphVector& x, const GraphVector& y);
GraphVector lie_bracket(const ComplexSpec& spec, const GraphVector& x, const GraphVector& y);

/// delta = [edge, .]; throws IncompleteCodomain if a surviving term leaves
/// the family.
GraphVector differential(const ComplexSpec& spec, const GraphVector& x);
GraphVector mc_edge(const ComplexSpec& spec);

/// Degree of a homogeneous vector (throws if empty or inhomogeneous).
int vector_degree(const ComplexSpec& spec, const GraphVector& x);

/// Bracket with the extended element: multiplies each graph by twice its loop order.
GraphVector bracket_with_empty(const ComplexSpec& spec, const GraphVector& x);

/// Undirected GC_2^{>=2} graph -> sum over all edge directions in dcGC_2.
GraphVector direct_sum_map(const GraphVector& x);

SparseRationalMatrix assemble(const std::function<GraphVector(const GraphVector&)>& op,
                              const BasisSlice& domain, const BasisSlice& codomain,
                              const ComplexSpec& spec);
SparseRationalMatrix assemble_keys(const std::function<GraphVector(const std::string&)>& op,
                                   const std::vector<std::string>& domain,
                                   const std::vector<std::string>& codomain, bool allow_outside = false);

struct CohomologyReport {
    ComplexSpec spec;
    int loop = 0;
    std::vector<SliceReport> slices;
    std::vector<int> degrees;
};

/// Slice of fixed loop order and degree, or nullopt if it has no (v,e).
std::optional<std::pair<int, int>> slice_for(const ComplexSpec& spec, int loop, int deg);
CohomologyReport cohomology_dims(const ComplexSpec& spec, int loop, int deg_lo, int deg_hi);

}  // namespace grapple
