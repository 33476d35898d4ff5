#include "flowcert/run.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

namespace flowcert {

namespace {

fixtures::FlowFixture flow_fixture(const RunSpec& spec) {
    const auto& p = spec.fixture_params;
    auto get = [&](size_t i, double dflt) { return i < p.size() ? p[i] : dflt; };
    if (spec.fixture == "example1") return fixtures::example1();
    if (spec.fixture == "example2")
        return fixtures::example2(get(0, 0.0), get(1, -1.0), get(2, 1.0), get(3, 1.0));
    if (spec.fixture == "example3") return fixtures::example3(get(0, std::sqrt(2.0)), get(1, -1.0));
    if (spec.fixture == "ring") return fixtures::ring();
    if (spec.fixture == "rigid") return fixtures::rigid(get(0, 1.0), get(1, 1.0));
    throw ParseError("unknown flow fixture: " + spec.fixture);
}

std::optional<fixtures::GraphFixture> graph_fixture(const std::string& name) {
    if (name == "g1") return fixtures::g1();
    if (name == "g3") return fixtures::g3();
    if (name == "g4") return fixtures::g4();
    if (name == "g5") return fixtures::g5();
    if (name == "cycle3") return fixtures::cycle3();
    return std::nullopt;
}

void write_plot_csv(std::ostream& out, const BoxGrid& grid, const RunResult& r) {
    out << "box,i,j,cx,cy,scc,in_r,in_r_xi,L1,f,angle\n";
    for (int b = 0; b < grid.box_count(); ++b) {
        auto cell = grid.cell_of(b);
        Pt c = grid.center(b);
        out << b << "," << cell[0] << "," << cell[1] << "," << c[0] << "," << c[1] << ","
            << r.rep.scc_id[size_t(b)] << "," << (r.rep.in_r[size_t(b)] ? 1 : 0) << ","
            << (r.rep.in_r_xi[size_t(b)] ? 1 : 0) << ",";
        if (r.cert)
            out << rat_to_double(r.cert->L1.v[size_t(b)]) << ","
                << rat_to_double(r.cert->f.v[size_t(b)]);
        else
            out << ",";
        out << ",";
        if (r.circle) out << rat_to_double(r.circle->angle[size_t(b)]);
        out << "\n";
    }
}

}  // namespace

RunResult run(const RunSpec& spec) {
    if (spec.graph_file.empty() == spec.fixture.empty())
        throw ParseError("run: exactly one of graph file / fixture must be given");

    RunResult res;
    double xi_norm1 = 0.0;
    for (double c : spec.xi_coeffs) xi_norm1 += std::abs(c);

    if (!spec.graph_file.empty()) {
        GraphFile gf = load_graph(spec.graph_file);
        res.graph = std::move(gf.graph);
        res.xi = std::move(gf.weights);
    } else if (auto gfx = graph_fixture(spec.fixture)) {
        res.graph = std::move(gfx->graph);
        res.xi = std::move(gfx->xi);
    } else {
        if (spec.resolution < 4) throw ParseError("run: resolution must be >= 4 per axis");
        fixtures::FlowFixture ff = flow_fixture(spec);
        if (!spec.xi_coeffs.empty()) ff.xi_coeffs = spec.xi_coeffs;
        BoxGrid grid;
        grid.space = ff.field.space;
        grid.res = {spec.resolution, spec.resolution, 1};
        double tau = spec.tau > 0 ? spec.tau : ff.tau;
        double pad = spec.pad >= 0 ? spec.pad : ff.pad_factor * grid.delta();
        res.graph = box_map(ff.field, grid, tau, pad);
        ClosedOneForm form = ClosedOneForm::linear(ff.field.space, ff.xi_coeffs);
        res.xi = pull_back(form, res.graph);
        res.grid = grid;
        xi_norm1 = 0.0;
        for (double c : ff.xi_coeffs) xi_norm1 += std::abs(c);
        // class-scale tolerance: one jump's worth of pairing
        res.tol.eta_class = rat_quantize(xi_norm1 * (pad + grid.delta()));
        res.tol.eta_tight = rat_quantize(1e-7 * std::max(1.0, xi_norm1));
    }
    if (!spec.class_file.empty()) {
        ClassFile cf = load_class(spec.class_file);
        for (auto& [e, w] : cf.edge_weights) {
            if (e < 0 || e >= res.xi.size()) throw ParseError("class file: edge out of range");
            res.xi.w[size_t(e)] = w;
        }
        if (!cf.coefficients.empty())
            throw ParseError("class file: XI coefficients need a flow fixture context");
    }
    if (spec.eta_class) res.tol.eta_class = rat_quantize(*spec.eta_class);
    if (spec.eta_tight) res.tol.eta_tight = rat_quantize(*spec.eta_tight);

    res.hash = graph_hash(res.graph, res.xi);
    res.rep = scc_decompose(res.graph);
    // edges whose trajectories cross half a period are circulating routes,
    // not part of the class restricted to an R_xi neighborhood
    std::optional<std::vector<char>> locality;
    if (res.grid) {
        locality.emplace(size_t(res.graph.edge_count()), 1);
        const PhaseSpace& sp = res.grid->space;
        for (int e = 0; e < res.graph.edge_count(); ++e) {
            const Polyline& path = res.graph.edges[size_t(e)].path;
            for (int d = 0; d < sp.dim && (*locality)[size_t(e)]; ++d) {
                if (!sp.axis[size_t(d)].periodic) continue;
                double lo = path.front()[d], hi = lo;
                for (const Pt& p : path) {
                    lo = std::min(lo, p[d]);
                    hi = std::max(hi, p[d]);
                }
                if (hi - lo > sp.axis[size_t(d)].extent() / 2) (*locality)[size_t(e)] = 0;
            }
        }
    }
    compute_r_xi(res.graph, res.xi, res.rep, res.tol, locality ? &*locality : nullptr);
    res.conditions = evaluate_conditions(res.graph, res.xi, res.rep, res.tol);

    if (spec.synthesize) {
        PipelineResult pr = pipeline(res.graph, res.xi, res.rep, res.tol);
        if (std::holds_alternative<LyapunovCertificate>(pr)) {
            res.cert = std::get<LyapunovCertificate>(pr);
            res.exit_code = 0;
        } else {
            res.refusal = std::get<Refusal>(pr);
            res.exit_code = 2;
        }
    }
    if (spec.want_section && res.cert) {
        bool rxi_empty = true;
        for (bool b : res.rep.in_r_xi) rxi_empty = rxi_empty && !b;
        if (rxi_empty && is_integral(res.graph, res.xi, res.tol.eta_tight)) {
            res.circle = build_circle_map(res.graph, *res.cert, res.tol.eta_tight);
            res.section = extract_cross_section(res.graph, *res.cert, *res.circle,
                                                rat_quantize(spec.theta));
        }
    }

    if (!spec.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(spec.out_dir);
        auto path = [&](const char* name) { return (fs::path(spec.out_dir) / name).string(); };
        save_graph(path("graph.txt"), res.graph, res.xi);
        {
            std::ofstream out(path("recurrence.report"));
            write_recurrence_report(out, res.hash, res.rep);
        }
        {
            std::ofstream out(path("conditions.report"));
            write_conditions_report(out, res.hash, res.conditions);
        }
        if (res.cert) {
            std::ofstream out(path("lyapunov.cert"));
            write_certificate(out, res.hash, res.graph, *res.cert);
        }
        if (res.refusal) {
            std::ofstream out(path("refusal.report"));
            write_refusal(out, res.hash, *res.refusal);
        }
        if (res.circle && res.section) {
            std::ofstream out(path("section.report"));
            write_section_report(out, res.hash, *res.circle, *res.section);
        }
        if (res.grid) {
            std::ofstream out(path("plot.csv"));
            write_plot_csv(out, *res.grid, res);
        }
    }
    return res;
}

bool verify_files(const std::string& cert_path, const std::string& graph_path) {
    ParsedCertificate cert = load_certificate(cert_path);
    GraphFile gf = load_graph(graph_path);
    VerifyResult vr = verify_certificate(cert, gf);
    if (!vr.ok && vr.reason.rfind("GraphMismatch", 0) == 0) throw GraphMismatch(vr.reason);
    return vr.ok;
}

}  // namespace flowcert
