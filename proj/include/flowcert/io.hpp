#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "flowcert/conditions.hpp"
#include "flowcert/section.hpp"
#include "flowcert/synthesis.hpp"

namespace flowcert {

struct ParseError : GraphError {
    using GraphError::GraphError;
};

// Line-oriented graph file: `V n`, then `E u v weight duration` (0-based
// vertices, rational weights p/q). The canonical dump is the hash input.
struct GraphFile {
    TransitionGraph graph;
    Cochain1 weights;
};

std::string dump_graph(const TransitionGraph& g, const Cochain1& w);
GraphFile parse_graph(std::istream& in);
GraphFile load_graph(const std::string& path);
void save_graph(const std::string& path, const TransitionGraph& g, const Cochain1& w);

// FNV-1a over the canonical dump.
std::string graph_hash(const TransitionGraph& g, const Cochain1& w);

// Class file: `C edge weight` lines overriding graph weights, or `XI c0 c1`
// coefficients (resolved by the caller against a form pullback).
struct ClassFile {
    std::vector<std::pair<int, Rat>> edge_weights;
    std::vector<double> coefficients;
};
ClassFile load_class(const std::string& path);

void write_recurrence_report(std::ostream& out, const std::string& hash,
                             const RecurrenceReport& rep);
void write_conditions_report(std::ostream& out, const std::string& hash,
                             const ConditionsReport& cr);
void write_refusal(std::ostream& out, const std::string& hash, const Refusal& r);
void write_certificate(std::ostream& out, const std::string& hash, const TransitionGraph& g,
                       const LyapunovCertificate& cert);
void write_section_report(std::ostream& out, const std::string& hash, const CircleMap& map,
                          const CrossSection& K);

struct ParsedCertificate {
    std::string hash;
    Rat lambda, zero_tol, epsilon0;
    Cochain1 xi, omega3;
    Potential0 f, L1;
    std::vector<bool> in_r_xi;
    std::vector<int> r_xi_component;
    std::vector<char> edge_interior;  // claimed (L2) edges
};
ParsedCertificate parse_certificate(std::istream& in);
ParsedCertificate load_certificate(const std::string& path);

// Independent certificate checker: recomputes every verdict from the raw
// data with its own SCC and cycle machinery (no synthesis code).
struct VerifyResult {
    bool ok = false;
    std::string reason;
};
VerifyResult verify_certificate(const ParsedCertificate& cert, const GraphFile& gf);

}  // namespace flowcert
