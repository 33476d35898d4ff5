#pragma once

#include <optional>

#include "flowcert/fixtures.hpp"
#include "flowcert/io.hpp"

namespace flowcert {

// One analysis/synthesis run. Exactly one of graph_file / fixture drives it.
struct RunSpec {
    std::string graph_file;
    std::string fixture;                  // example1|example2|example3|ring|rigid|g1|g3|g4|g5|cycle3
    std::vector<double> fixture_params;   // mu nu [a b] for flows

    int resolution = 32;      // >= 4 per axis
    double tau = 0.0;         // <= 0: fixture default
    double pad = -1.0;        // < 0: fixture default (multiples of one box diameter)

    std::string class_file;               // explicit cochain, overrides coefficients
    std::vector<double> xi_coeffs;        // class coefficients (pull back of a linear form)

    std::optional<double> eta_class;      // override tolerances
    std::optional<double> eta_tight;

    bool synthesize = true;
    bool want_section = false;
    double theta = 0.5;

    std::string out_dir;  // empty: no files written
};

struct RunResult {
    TransitionGraph graph;
    Cochain1 xi;
    std::string hash;
    ZeroTol tol;
    RecurrenceReport rep;
    ConditionsReport conditions;
    std::optional<LyapunovCertificate> cert;
    std::optional<Refusal> refusal;
    std::optional<CircleMap> circle;
    std::optional<CrossSection> section;
    std::optional<BoxGrid> grid;  // present for flow-driven runs
    int exit_code = 0;            // 0 certificate/analysis, 2 refusal
};

RunResult run(const RunSpec& spec);

// Independent re-check of a written certificate against a graph file.
// Throws GraphMismatch when the hashes disagree.
bool verify_files(const std::string& cert_path, const std::string& graph_path);

}  // namespace flowcert
