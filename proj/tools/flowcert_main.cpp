/*
 * flowcert — discretize a flow into a weighted transition graph, compute the
 * twisted chain recurrent set, decide the Lyapunov conditions, and when they
 * hold synthesize and verify a certified Lyapunov 1-form in the given class.
 *
 * Subcommands: analyze, synthesize, section, verify, fixtures.
 * Exit codes: 0 success, 2 refusal (with witness), 1 error.
 */

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "flowcert/run.hpp"

using namespace flowcert;

namespace {

struct EtaOpts {
    double eta_class = 0, eta_tight = 0;
    CLI::Option* oc = nullptr;
    CLI::Option* ot = nullptr;
};

void add_run_options(CLI::App* cmd, RunSpec& spec, EtaOpts& eta) {
    cmd->add_option("--graph", spec.graph_file, "graph file (V/E lines)");
    cmd->add_option("--fixture", spec.fixture,
                    "built-in fixture: example1|example2|example3|ring|rigid|g1|g3|g4|g5|cycle3");
    cmd->add_option("--params", spec.fixture_params, "fixture parameters (mu nu [a b])");
    cmd->add_option("--grid", spec.resolution, "boxes per axis (flow fixtures, >= 4)");
    cmd->add_option("--tau", spec.tau, "time step per edge (<= 0: fixture default)");
    cmd->add_option("--pad", spec.pad, "image inflation radius (< 0: fixture default)");
    cmd->add_option("--class-file", spec.class_file, "cochain file (C edge weight lines)");
    cmd->add_option("--xi", spec.xi_coeffs, "class coefficients per axis");
    eta.oc = cmd->add_option("--eta-class", eta.eta_class, "sign-classification tolerance");
    eta.ot = cmd->add_option("--eta-tight", eta.eta_tight, "exact-attainment tolerance");
    cmd->add_option("--out", spec.out_dir, "output directory for reports");
}

int execute(RunSpec& spec, const EtaOpts& eta) {
    if (eta.oc && eta.oc->count()) spec.eta_class = eta.eta_class;
    if (eta.ot && eta.ot->count()) spec.eta_tight = eta.eta_tight;
    if (spec.out_dir.empty()) {
        if (const char* env = std::getenv("FLOWCERT_OUT")) spec.out_dir = env;
    }
    RunResult r = run(spec);
    int nR = 0, nRxi = 0, nCxi = 0;
    for (int v = 0; v < r.rep.vertex_count; ++v) {
        nR += r.rep.in_r[size_t(v)];
        nRxi += r.rep.in_r_xi[size_t(v)];
        nCxi += r.rep.in_c_xi[size_t(v)];
    }
    std::cout << "vertices " << r.rep.vertex_count << ", edges " << r.graph.edge_count()
              << ", |R| " << nR << ", |R_xi| " << nRxi << ", |C_xi| " << nCxi << "\n";
    std::cout << "condition (A): " << (r.conditions.a.holds ? "holds" : "fails")
              << ", condition (B): " << (r.conditions.b.holds ? "holds" : "fails")
              << ", C_xi closed: " << (r.conditions.c_xi_closed ? "yes" : "no") << "\n";
    if (r.conditions.b.bound_b)
        std::cout << "bound b = " << rat_str(*r.conditions.b.bound_b)
                  << ", scaling s = " << rat_str(*r.conditions.b.scaling_s) << "\n";
    if (r.cert)
        std::cout << "certificate: lambda = " << rat_str(r.cert->lambda)
                  << ", margin = " << rat_str(r.cert->epsilon0)
                  << (r.cert->valid() ? " (valid)" : " (INVALID)") << "\n";
    if (r.refusal)
        std::cout << "refusal: condition (" << r.refusal->condition
                  << "), witness pairing = " << rat_str(r.refusal->pairing) << "\n";
    if (r.section)
        std::cout << "cross section at theta = " << rat_str(r.section->theta) << ": "
                  << r.section->edges.size() << " edges\n";
    if (!spec.out_dir.empty()) std::cout << "reports written to " << spec.out_dir << "\n";
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified Lyapunov 1-forms on discretized flows"};
    app.require_subcommand(1);

    RunSpec spec;
    EtaOpts eta;
    auto* analyze = app.add_subcommand("analyze", "recurrence and condition reports only");
    add_run_options(analyze, spec, eta);

    auto* synth = app.add_subcommand("synthesize", "analysis plus certificate synthesis");
    add_run_options(synth, spec, eta);

    auto* section = app.add_subcommand("section", "synthesize and extract a cross section");
    add_run_options(section, spec, eta);
    double theta = 0.5;
    section->add_option("--theta", theta, "section level in [0, 1)");

    auto* verify = app.add_subcommand("verify", "independently re-check a certificate");
    std::string cert_path, graph_path;
    verify->add_option("--cert", cert_path, "certificate file")->required();
    verify->add_option("--graph", graph_path, "graph file")->required();

    auto* fixtures_cmd = app.add_subcommand("fixtures", "list or run built-in fixtures");
    fixtures_cmd->require_subcommand(1);
    auto* fx_list = fixtures_cmd->add_subcommand("list", "list fixture names");
    auto* fx_run = fixtures_cmd->add_subcommand("run", "synthesize a fixture");
    std::string fx_name;
    fx_run->add_option("name", fx_name, "fixture name")->required();
    std::string fx_out;
    fx_run->add_option("--out", fx_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            spec.synthesize = false;
            return execute(spec, eta);
        }
        if (synth->parsed()) return execute(spec, eta);
        if (section->parsed()) {
            spec.want_section = true;
            spec.theta = theta;
            return execute(spec, eta);
        }
        if (verify->parsed()) {
            bool ok = verify_files(cert_path, graph_path);
            std::cout << (ok ? "certificate verified" : "certificate REJECTED") << "\n";
            return ok ? 0 : 1;
        }
        if (fx_list->parsed()) {
            std::cout << "graph fixtures: g1 g3 g4 g5 cycle3\n";
            std::cout << "flow fixtures:  example1 example2 example3 ring rigid\n";
            return 0;
        }
        if (fx_run->parsed()) {
            RunSpec fs;
            fs.fixture = fx_name;
            fs.out_dir = fx_out;
            EtaOpts none;
            return execute(fs, none);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
