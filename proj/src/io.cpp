#include "flowcert/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace flowcert {

std::string dump_graph(const TransitionGraph& g, const Cochain1& w) {
    std::ostringstream os;
    os << "V " << g.vertex_count << "\n";
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edges[size_t(e)];
        os << "E " << ed.from << " " << ed.to << " " << rat_str(w.w[size_t(e)]) << " "
           << ed.duration << "\n";
    }
    return os.str();
}

GraphFile parse_graph(std::istream& in) {
    GraphFile gf;
    std::string line;
    bool have_v = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "V") {
            if (!(ls >> gf.graph.vertex_count)) throw ParseError("graph file: bad V line");
            have_v = true;
        } else if (tag == "E") {
            int u, v;
            std::string w;
            double dur = 1.0;
            if (!(ls >> u >> v >> w)) throw ParseError("graph file: bad E line");
            ls >> dur;
            gf.graph.add_edge(u, v, dur);
            gf.weights.w.push_back(rat_parse(w));
        } else {
            throw ParseError("graph file: unknown tag '" + tag + "'");
        }
    }
    if (!have_v) throw ParseError("graph file: missing V line");
    gf.graph.finalize();
    return gf;
}

GraphFile load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file: " + path);
    return parse_graph(in);
}

void save_graph(const std::string& path, const TransitionGraph& g, const Cochain1& w) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write graph file: " + path);
    out << dump_graph(g, w);
}

std::string graph_hash(const TransitionGraph& g, const Cochain1& w) {
    std::string s = dump_graph(g, w);
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

ClassFile load_class(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open class file: " + path);
    ClassFile cf;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "C") {
            int e;
            std::string w;
            if (!(ls >> e >> w)) throw ParseError("class file: bad C line");
            cf.edge_weights.emplace_back(e, rat_parse(w));
        } else if (tag == "XI") {
            double c;
            while (ls >> c) cf.coefficients.push_back(c);
        } else {
            throw ParseError("class file: unknown tag '" + tag + "'");
        }
    }
    return cf;
}

void write_recurrence_report(std::ostream& out, const std::string& hash,
                             const RecurrenceReport& rep) {
    out << "# recurrence v1\n";
    out << "GRAPH_HASH " << hash << "\n";
    out << "VERTICES " << rep.vertex_count << "\n";
    out << "SCC_COUNT " << rep.scc_count() << "\n";
    for (int s = 0; s < rep.scc_count(); ++s) {
        out << "SCC " << s << " nontrivial=" << (rep.scc_nontrivial[size_t(s)] ? 1 : 0);
        if (rep.has_xi && rep.scc_nontrivial[size_t(s)]) {
            out << " class=" << scc_sign_class_name(SccSignClass(rep.scc_class[size_t(s)]))
                << " min_mean=" << rat_str(rep.scc_min_mean[size_t(s)])
                << " max_mean=" << rat_str(rep.scc_max_mean[size_t(s)]);
        }
        out << "\n";
    }
    for (int v = 0; v < rep.vertex_count; ++v) {
        out << "VERTEX " << v << " scc=" << rep.scc_id[size_t(v)]
            << " in_r=" << (rep.in_r[size_t(v)] ? 1 : 0);
        if (rep.has_xi)
            out << " in_r_xi=" << (rep.in_r_xi[size_t(v)] ? 1 : 0)
                << " in_c_xi=" << (rep.in_c_xi[size_t(v)] ? 1 : 0)
                << " zero_component=" << rep.r_xi_component[size_t(v)];
        out << "\n";
    }
}

void write_conditions_report(std::ostream& out, const std::string& hash,
                             const ConditionsReport& cr) {
    out << "# conditions v1\n";
    out << "GRAPH_HASH " << hash << "\n";
    out << "CONDITION_A " << (cr.a.holds ? "true" : "false") << "\n";
    if (!cr.a.holds) {
        out << "A_VIOLATION_PAIRING " << rat_str(cr.a.violation_pairing) << "\n";
        out << "A_WITNESS_CYCLE";
        for (auto [e, s] : cr.a.violating_cycle) out << " " << e << ":" << s;
        out << "\n";
    }
    out << "CONDITION_B " << (cr.b.holds ? "true" : "false") << "\n";
    if (cr.b.bound_b) out << "B_BOUND " << rat_str(*cr.b.bound_b) << "\n";
    if (cr.b.scaling_s) out << "B_SCALING " << rat_str(*cr.b.scaling_s) << "\n";
    if (!cr.b.holds && !cr.b.witness_cycle.empty()) {
        out << "B_WITNESS_PAIRING " << rat_str(cr.b.witness_pairing) << "\n";
        out << "B_WITNESS_CYCLE";
        for (auto [e, s] : cr.b.witness_cycle) out << " " << e << ":" << s;
        out << "\n";
    }
    out << "C_XI_CLOSED " << (cr.c_xi_closed ? "true" : "false") << "\n";
    if (cr.drift) {
        out << "DRIFT_MU " << rat_str(cr.drift->mu) << "\n";
        out << "DRIFT_NU " << rat_str(cr.drift->nu) << "\n";
        out << "DRIFT_K " << cr.drift->k << "\n";
        out << "DRIFT_T " << cr.drift->T << "\n";
        out << "DRIFT_M " << rat_str(cr.drift->M) << "\n";
        out << "DRIFT_ETA " << rat_str(cr.drift->eta) << "\n";
        out << "DRIFT_C " << rat_str(cr.drift->c) << "\n";
        out << "DRIFT_MU_PAPER " << rat_str(cr.drift->mu_paper) << "\n";
        out << "DRIFT_NU_PAPER " << rat_str(cr.drift->nu_paper) << "\n";
    }
    out << "FRIED_VERDICT " << (cr.fried.verdict ? "true" : "false") << "\n";
    if (cr.fried.any_direction)
        out << "FRIED_MAX_NORMALIZED " << rat_str(cr.fried.max_normalized) << "\n";
    for (const auto& [scc, val] : cr.fried.basis_max_per_scc)
        out << "FRIED_BASIS_MAX scc=" << scc << " value=" << rat_str(val) << "\n";
}

void write_refusal(std::ostream& out, const std::string& hash, const Refusal& r) {
    out << "# refusal v1\n";
    out << "GRAPH_HASH " << hash << "\n";
    out << "CONDITION " << r.condition << "\n";
    out << "PAIRING " << rat_str(r.pairing) << "\n";
    out << "WITNESS";
    for (auto [e, s] : r.witness) out << " " << e << ":" << s;
    out << "\n";
}

void write_certificate(std::ostream& out, const std::string& hash, const TransitionGraph& g,
                       const LyapunovCertificate& cert) {
    out << "# lyapunov-cert v1\n";
    out << "GRAPH_HASH " << hash << "\n";
    out << "LAMBDA " << rat_str(cert.lambda) << "\n";
    out << "ZERO_TOL " << rat_str(cert.zero_tol) << "\n";
    out << "EPSILON0 " << rat_str(cert.epsilon0) << "\n";
    for (int e = 0; e < g.edge_count(); ++e)
        out << "XI " << e << " " << rat_str(cert.xi.w[size_t(e)]) << "\n";
    for (int e = 0; e < g.edge_count(); ++e)
        out << "OMEGA3 " << e << " " << rat_str(cert.omega3.w[size_t(e)]) << "\n";
    for (int v = 0; v < int(cert.f.v.size()); ++v)
        out << "F " << v << " " << rat_str(cert.f.v[size_t(v)]) << "\n";
    for (int v = 0; v < int(cert.L1.v.size()); ++v)
        out << "L1 " << v << " " << rat_str(cert.L1.v[size_t(v)]) << "\n";
    for (int v = 0; v < int(cert.in_r_xi.size()); ++v)
        if (cert.in_r_xi[size_t(v)])
            out << "RXI " << v << " " << cert.r_xi_component[size_t(v)] << "\n";
    for (int e = 0; e < g.edge_count(); ++e)
        if (cert.edge_interior[size_t(e)]) out << "INTERIOR " << e << "\n";
}

void write_section_report(std::ostream& out, const std::string& hash, const CircleMap& map,
                          const CrossSection& K) {
    out << "# section v1\n";
    out << "GRAPH_HASH " << hash << "\n";
    out << "THETA " << rat_str(K.theta) << "\n";
    for (size_t i = 0; i < map.lift.size(); ++i)
        out << "ANGLE " << i << " " << rat_str(map.angle[i]) << " lift=" << rat_str(map.lift[i])
            << "\n";
    for (size_t i = 0; i < K.edges.size(); ++i)
        out << "K_EDGE " << K.edges[i] << " at=" << rat_str(K.crossing_at[i]) << "\n";
}

ParsedCertificate parse_certificate(std::istream& in) {
    ParsedCertificate c;
    std::map<int, Rat> xi, om, f, l1;
    std::map<int, int> rxi;
    std::vector<int> interior;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "GRAPH_HASH") {
            ls >> c.hash;
        } else if (tag == "LAMBDA") {
            std::string s;
            ls >> s;
            c.lambda = rat_parse(s);
        } else if (tag == "ZERO_TOL") {
            std::string s;
            ls >> s;
            c.zero_tol = rat_parse(s);
        } else if (tag == "EPSILON0") {
            std::string s;
            ls >> s;
            c.epsilon0 = rat_parse(s);
        } else if (tag == "XI" || tag == "OMEGA3" || tag == "F" || tag == "L1") {
            int i;
            std::string s;
            if (!(ls >> i >> s)) throw ParseError("cert: bad " + tag + " line");
            Rat q = rat_parse(s);
            if (tag == "XI") xi[i] = q;
            if (tag == "OMEGA3") om[i] = q;
            if (tag == "F") f[i] = q;
            if (tag == "L1") l1[i] = q;
        } else if (tag == "RXI") {
            int v, comp;
            if (!(ls >> v >> comp)) throw ParseError("cert: bad RXI line");
            rxi[v] = comp;
        } else if (tag == "INTERIOR") {
            int e;
            if (!(ls >> e)) throw ParseError("cert: bad INTERIOR line");
            interior.push_back(e);
        } else {
            throw ParseError("cert: unknown tag '" + tag + "'");
        }
    }
    auto to_vec = [](const std::map<int, Rat>& m) {
        std::vector<Rat> v;
        v.resize(m.empty() ? 0 : size_t(m.rbegin()->first + 1), Rat(0));
        for (const auto& [i, q] : m) v[size_t(i)] = q;
        return v;
    };
    c.xi.w = to_vec(xi);
    c.omega3.w = to_vec(om);
    c.f.v = to_vec(f);
    c.L1.v = to_vec(l1);
    c.in_r_xi.assign(c.f.v.size(), false);
    c.r_xi_component.assign(c.f.v.size(), -1);
    c.edge_interior.assign(c.omega3.w.size(), 0);
    for (int e : interior) {
        if (e < 0 || e >= int(c.edge_interior.size()))
            throw ParseError("cert: INTERIOR edge out of range");
        c.edge_interior[size_t(e)] = 1;
    }
    for (const auto& [v, comp] : rxi) {
        if (v < 0 || v >= int(c.in_r_xi.size())) throw ParseError("cert: RXI vertex out of range");
        c.in_r_xi[size_t(v)] = true;
        c.r_xi_component[size_t(v)] = comp;
    }
    return c;
}

ParsedCertificate load_certificate(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open certificate: " + path);
    return parse_certificate(in);
}

}  // namespace flowcert
