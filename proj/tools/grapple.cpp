// grapple: command-line front end for the graph complex engine.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "grapple/complexes.hpp"
#include "grapple/endrep.hpp"
#include "grapple/polydiff.hpp"
#include "grapple/propcalc.hpp"
#include "grapple/verify.hpp"

using nlohmann::json;
using namespace grapple;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string format = "json";
    std::string family = "dgc";
    int c = -1, d = -1;
    int v = -1, e = -1, min_valency = -1;
    int loop = -1;
    std::string window = "-2..2";
    int m = -1, n = -1, i = -1;
    std::string graph, graph2;
    std::string variant = "star";
    int max_v = -1, max_e = -1, max_arity = -1, n_max = -1, max_edges = -1, max_internal = -1;
    int samples = 12, seeds = 100;
    std::uint64_t seed = kDefaultSeed;
    int jobs = 1;
    std::vector<std::uint64_t> primes;
    std::string output;
    std::string check;
};

int require(int value, const char* flag) {
    if (value < 0) throw UsageError(std::string("missing required option --") + flag);
    return value;
}

int or_default(int value, int fallback) { return value < 0 ? fallback : value; }

std::string require_text(const std::string& s, const char* flag) {
    if (s.empty()) throw UsageError(std::string("missing required option --") + flag);
    return s;
}

// Runs f(0..count-1) on a small pool; results are indexed so order never depends on scheduling.
void parallel_for(int count, int jobs, const std::function<void(int)>& f) {
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int k = 0; k < count; ++k) f(k);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&]() {
            for (int k = next++; k < count; k = next++) {
                try {
                    f(k);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
}

// --- rendering -------------------------------------------------------------

std::string scalar_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void flatten(const json& v, const std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it)
            flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    } else if (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_array())) {
        for (std::size_t k = 0; k < v.size(); ++k) flatten(v[k], path + "[" + std::to_string(k) + "]", out);
    } else {
        out.push_back({path, scalar_text(v)});
    }
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

// `table` names an array of flat records rendered as CSV rows.
void emit(const json& doc, const Options& o, const std::string& table = "") {
    if (o.format == "json") {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    if (o.format == "csv" && !table.empty() && doc.contains(table) && doc[table].is_array()) {
        const json& rows = doc[table];
        std::vector<std::string> cols;
        for (const auto& r : rows)
            for (auto it = r.begin(); it != r.end(); ++it)
                if (std::find(cols.begin(), cols.end(), it.key()) == cols.end()) cols.push_back(it.key());
        for (std::size_t k = 0; k < cols.size(); ++k) std::cout << (k ? "," : "") << csv_cell(cols[k]);
        std::cout << "\n";
        for (const auto& r : rows) {
            for (std::size_t k = 0; k < cols.size(); ++k)
                std::cout << (k ? "," : "") << (r.contains(cols[k]) ? csv_cell(scalar_text(r[cols[k]])) : "");
            std::cout << "\n";
        }
        return;
    }
    std::vector<std::pair<std::string, std::string>> flat;
    flatten(doc, "", flat);
    if (o.format == "csv") {
        std::cout << "key,value\n";
        for (const auto& [k, v] : flat) std::cout << csv_cell(k) << "," << csv_cell(v) << "\n";
    } else {
        for (const auto& [k, v] : flat) std::cout << k << ": " << v << "\n";
    }
}

typedef std::function<std::string(const std::string&)> Render;

json terms_json(const GraphVector& x, const Render& render) {
    json arr = json::array();
    for (const auto& [k, q] : x.terms()) arr.push_back({{"graph", render(k)}, {"coeff", rational_str(q)}});
    return arr;
}

std::string render_plain(const std::string& key) { return serialize_graph(from_cgraph(key_graph(key))); }

// --- graph complex commands ------------------------------------------------

ComplexSpec spec_of(const Options& o) {
    ComplexSpec s = spec_by_name(o.family, or_default(o.d, 2));
    if (o.min_valency >= 0) s.min_valency = o.min_valency;
    return s;
}

GraphVector parse_element(const ComplexSpec& s, const std::string& text, json& info) {
    DirectedGraph g = parse_graph(text);
    GraphVector x = element(s, g);
    info = {{"graph", text}, {"zero_by_symmetry", x.empty()}};
    if (!x.empty()) info["degree"] = degree(s, g);
    return x;
}

int cmd_basis(const Options& o) {
    ComplexSpec s = spec_of(o);
    int v = require(o.v, "v"), e = require(o.e, "e");
    BasisSlice b = generate_basis(s, v, e);
    json graphs = json::array();
    for (std::size_t k = 0; k < b.keys.size(); ++k)
        graphs.push_back({{"index", k}, {"graph", render_plain(b.keys[k])}});
    emit({{"family", o.family},
          {"d", s.d},
          {"min_valency", s.min_valency},
          {"slice", "v=" + std::to_string(v) + ",e=" + std::to_string(e)},
          {"degree", graph_degree(s.d, v, e)},
          {"dim_basis", b.keys.size()},
          {"graphs", graphs}},
         o, "graphs");
    return 0;
}

int cmd_degree(const Options& o) {
    ComplexSpec s = spec_of(o);
    DirectedGraph g = parse_graph(require_text(o.graph, "graph"));
    CanonicalizeResult c = canonicalize(g, s.conv(), s.flags());
    json doc = {{"family", o.family},
                {"d", s.d},
                {"graph", o.graph},
                {"vertices", g.vertex_count},
                {"edges", g.edges.size()},
                {"degree", degree(s, g)},
                {"loop_order", loop_order(g)},
                {"zero_by_symmetry", c.zero_by_symmetry},
                {"member", is_member(s, to_cgraph(g, s.conv(), s.flags()))}};
    if (!c.zero_by_symmetry) {
        doc["canonical"] = render_plain(c.key.bytes);
        doc["sign"] = c.sign;
    }
    emit(doc, o);
    return 0;
}

int cmd_diff(const Options& o) {
    ComplexSpec s = spec_of(o);
    json info;
    GraphVector x = parse_element(s, require_text(o.graph, "graph"), info);
    GraphVector y = differential(s, x);
    emit({{"family", o.family}, {"d", s.d}, {"input", info}, {"terms", terms_json(y, render_plain)}}, o, "terms");
    return 0;
}

int cmd_bracket(const Options& o) {
    ComplexSpec s = spec_of(o);
    json a, b;
    GraphVector x = parse_element(s, require_text(o.graph, "graph"), a);
    GraphVector y = parse_element(s, require_text(o.graph2, "graph2"), b);
    GraphVector z = lie_bracket(spec_full(s.family, s.d), x, y);
    emit({{"family", o.family}, {"d", s.d}, {"left", a}, {"right", b}, {"terms", terms_json(z, render_plain)}}, o,
         "terms");
    return 0;
}

std::pair<int, int> parse_window(const std::string& w) {
    auto dots = w.find("..");
    if (dots == std::string::npos) throw UsageError("degree window must look like LO..HI");
    try {
        std::size_t used = 0;
        int lo = std::stoi(w.substr(0, dots), &used);
        if (used != dots) throw UsageError("bad degree window '" + w + "'");
        std::string rest = w.substr(dots + 2);
        int hi = std::stoi(rest, &used);
        if (used != rest.size() || hi < lo) throw UsageError("bad degree window '" + w + "'");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw UsageError("bad degree window '" + w + "'");
    }
}

int cmd_cohomology(const Options& o) {
    ComplexSpec s = spec_of(o);
    int L = require(o.loop, "loop");
    auto [lo, hi] = parse_window(o.window);
    int count = hi - lo + 1;
    std::vector<CohomologyReport> reps(count);
    parallel_for(count, o.jobs, [&](int k) { reps[k] = cohomology_dims(s, L, lo + k, lo + k); });
    json rows = json::array();
    for (int k = 0; k < count; ++k)
        for (std::size_t j = 0; j < reps[k].slices.size(); ++j) {
            const SliceReport& r = reps[k].slices[j];
            rows.push_back({{"degree", reps[k].degrees[j]},
                            {"slice", r.slice},
                            {"dim_basis", r.dim_basis},
                            {"rank", r.rank_out},
                            {"rank_in", r.rank_in},
                            {"dim_H", r.dim_H},
                            {"exactness_flag", r.exactness}});
        }
    emit({{"family", o.family}, {"d", s.d}, {"loop", L}, {"window", json::array({lo, hi})}, {"slices", rows}}, o,
         "slices");
    return 0;
}

int cmd_export(const Options& o) {
    ComplexSpec s = spec_of(o);
    int v = require(o.v, "v"), e = require(o.e, "e");
    BasisSlice dom = generate_basis(s, v, e);
    BasisSlice cod = generate_basis(s, v + 1, e + 1);
    SparseRationalMatrix M = assemble([&](const GraphVector& x) { return differential(s, x); }, dom, cod, s);
    if (o.output.empty()) {
        export_matrix_market(M, std::cout);
        return 0;
    }
    std::ofstream f(o.output);
    if (!f) throw UsageError("cannot open " + o.output);
    export_matrix_market(M, f);
    emit({{"family", o.family},
          {"d", s.d},
          {"domain", "v=" + std::to_string(v) + ",e=" + std::to_string(e)},
          {"rows", M.rows()},
          {"cols", M.cols()},
          {"nonzeros", M.nonzeros()},
          {"file", o.output}},
         o);
    return 0;
}

// --- props and derivations -------------------------------------------------

std::pair<int, int> prop_cd(const Options& o) { return {or_default(o.c, 0), or_default(o.d, 1)}; }

Render render_prop(int c, int d) {
    return [c, d](const std::string& key) { return serialize_prop(prop_from_cgraph(decode_key(key), c, d, true)); };
}

std::string render_der(const std::string& key) {
    if (key == "UP") return key;
    return serialize_der(der_from_cgraph(decode_key(key)));
}

int cmd_delta_star(const Options& o) {
    auto [c, d] = prop_cd(o);
    int m = require(o.m, "m"), n = require(o.n, "n");
    GraphVector x;
    if (o.variant == "star") x = delta_star(c, d, m, n);
    else if (o.variant == "plus") x = delta_plus(c, d, m, n);
    else if (o.variant == "minimal") x = delta_minimal(c, d, m, n);
    else throw UsageError("--variant must be star, plus or minimal");
    emit({{"c", c}, {"d", d}, {"m", m}, {"n", n}, {"variant", o.variant}, {"terms", terms_json(x, render_prop(c, d))}},
         o, "terms");
    return 0;
}

int cmd_d_star(const Options& o) {
    auto [c, d] = prop_cd(o);
    std::string text = require_text(o.graph, "graph");
    if (o.max_arity < 0) throw TruncationRequired("d-star needs --max-arity");
    GraphVector h(der_family(c, d));
    if (text == "UP") h.add_term("UP", 1);
    else h = der_element(c, d, parse_der(text));
    Truncated t = d_star(c, d, h, o.max_arity);
    emit({{"c", c},
          {"d", d},
          {"input", text},
          {"max_arity", t.max_arity},
          {"truncated", t.truncated},
          {"terms", terms_json(t.value, render_der)}},
         o, "terms");
    return 0;
}

int cmd_f_star(const Options& o) {
    auto [c, d] = prop_cd(o);
    int m = require(o.m, "m"), n = require(o.n, "n");
    ComplexSpec s = spec_full(Family::dFGC, c + d + 1);
    GraphVector gamma = element(s, parse_graph(require_text(o.graph, "graph")));
    GraphVector x = f_star_value(c, d, gamma, m, n);
    emit({{"c", c}, {"d", d}, {"m", m}, {"n", n}, {"graph", o.graph}, {"terms", terms_json(x, render_prop(c, d))}}, o,
         "terms");
    return 0;
}

// --- polydifferential operators --------------------------------------------

std::string render_poly(const std::string& key) { return serialize_poly(poly_from_cgraph(decode_key(key))); }

int cmd_cass_diff(const Options& o) {
    int n = require(o.n, "n");
    CassVector x = cass_differential_generator(n);
    json terms = json::array();
    for (const auto& [k, q] : x) terms.push_back({{"tree", k}, {"coeff", rational_str(q)}});
    emit({{"n", n}, {"generator", cass_generator_key(n)}, {"term_count", x.size()}, {"terms", terms}}, o, "terms");
    return 0;
}

int cmd_o_compose(const Options& o) {
    int i = require(o.i, "i");
    GraphVector a = poly_element(parse_poly(require_text(o.graph, "graph")));
    GraphVector b = poly_element(parse_poly(require_text(o.graph2, "graph2")));
    GraphVector x = operad_compose(a, i, b);
    emit({{"left", o.graph}, {"right", o.graph2}, {"i", i}, {"terms", terms_json(x, render_poly)}}, o, "terms");
    return 0;
}

// --- verification ----------------------------------------------------------

int cmd_verify(const Options& o) {
    VerifyParams p;
    p.family = o.family;
    p.c = o.c;
    p.d = o.d;
    p.max_v = o.max_v;
    p.max_e = o.max_e;
    p.max_arity = o.max_arity;
    p.n_max = o.n_max;
    p.max_edges = o.max_edges;
    p.max_internal = o.max_internal;
    p.samples = o.samples;
    p.seeds = o.seeds;
    p.seed = o.seed;
    std::vector<std::string> names;
    if (o.check == "all") names = check_names();
    else if (std::find(check_names().begin(), check_names().end(), o.check) != check_names().end())
        names = {o.check};
    else throw UsageError("unknown check '" + o.check + "'");

    std::vector<CheckResult> results(names.size());
    parallel_for(static_cast<int>(names.size()), o.jobs, [&](int k) { results[k] = run_check(names[k], p); });
    bool all = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
    json doc;
    if (names.size() == 1) {
        doc = to_json(results[0]);
    } else {
        json arr = json::array();
        for (const auto& r : results) arr.push_back(to_json(r));
        doc = {{"checks", arr}, {"result", all ? "PASS" : "FAIL"}, {"seed", o.seed}};
    }
    if (o.format == "text") {
        for (const auto& r : results) std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "\n";
    } else if (o.format == "csv") {
        std::cout << "check,result\n";
        for (const auto& r : results) std::cout << r.name << "," << (r.pass ? "PASS" : "FAIL") << "\n";
    } else {
        emit(doc, o);
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Graph complexes, wheeled props and polydifferential operators"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML-style key=value file; command-line flags take precedence");
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--family", o.family, "Graph family: dgc dcgc dcgc2 gc gc2 gcor dfgc fgc fgcor; "
                                         "verify d-squared also takes prop cass delta0");
    app.add_option("--c", o.c, "Prop parameter c (default 0)");
    app.add_option("--d", o.d, "Dimension d (default 2 for graphs, 1 for props)");
    app.add_option("--v", o.v, "Vertex count");
    app.add_option("--e", o.e, "Edge count");
    app.add_option("--min-valency", o.min_valency, "Override the family valency bound");
    app.add_option("--loop", o.loop, "Loop order");
    app.add_option("--degree-window", o.window, "Degree range LO..HI")->capture_default_str();
    app.add_option("--m", o.m, "Output legs");
    app.add_option("--n", o.n, "Input legs, or the arity for cass-diff");
    app.add_option("--i", o.i, "Composition slot (1-based)");
    app.add_option("--graph", o.graph, "Graph in the line grammar of the command");
    app.add_option("--graph2", o.graph2, "Second graph");
    app.add_option("--variant", o.variant, "delta-star variant: star, plus or minimal")->capture_default_str();
    app.add_option("--max-v", o.max_v, "Vertex bound for verification");
    app.add_option("--max-e", o.max_e, "Edge bound for verification");
    app.add_option("--max-arity", o.max_arity, "Corolla arity bound m+n");
    app.add_option("--n-max", o.n_max, "String length or operad arity bound");
    app.add_option("--max-edges", o.max_edges, "Edge bound for polydifferential graphs");
    app.add_option("--max-internal", o.max_internal, "Internal vertex bound for polydifferential graphs");
    app.add_option("--samples", o.samples, "Random samples for jacobi and leibniz")->capture_default_str();
    app.add_option("--seeds", o.seeds, "Seeds for mc-representation")->capture_default_str();
    app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
    app.add_option("--jobs", o.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--primes", o.primes, "Primes for modular rank");
    app.add_option("--output", o.output, "Output file for export");

    std::map<std::string, std::function<int(const Options&)>> handlers;
    auto sub = [&](const char* name, const char* help, std::function<int(const Options&)> fn) {
        CLI::App* s = app.add_subcommand(name, help);
        s->fallthrough();
        handlers[name] = std::move(fn);
        return s;
    };
    sub("basis", "Basis of a graph complex slice", cmd_basis);
    sub("degree", "Degree and loop order of a graph", cmd_degree);
    sub("diff", "Differential of a graph", cmd_diff);
    sub("bracket", "Lie bracket of two graphs", cmd_bracket);
    sub("cohomology", "Cohomology dimensions at fixed loop order", cmd_cohomology);
    sub("delta-star", "Prop differential on a corolla", cmd_delta_star);
    sub("d-star", "Derivation differential of a hairy graph", cmd_d_star);
    sub("f-star", "Derivation attached to a graph, on a corolla", cmd_f_star);
    sub("cass-diff", "Differential of a curved A-infinity generator", cmd_cass_diff);
    sub("o-compose", "Operadic composition of polydifferential graphs", cmd_o_compose);
    sub("export", "Differential matrix in MatrixMarket format", cmd_export);
    CLI::App* verify = sub("verify", "Run a named check or all", cmd_verify);
    verify->add_option("check", o.check, "Check name or all")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        if (!o.primes.empty()) set_primes(o.primes);
        for (CLI::App* s : app.get_subcommands()) return handlers.at(s->get_name())(o);
    } catch (const ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const InvalidGraph& e) {
        std::cerr << "invalid graph: " << e.what() << "\n";
        return 2;
    } catch (const TruncationRequired& e) {
        std::cerr << "truncation required: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
