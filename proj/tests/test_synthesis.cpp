#include <doctest.h>

#include <random>

#include "flowcert/fixtures.hpp"
#include "flowcert/forms.hpp"
#include "flowcert/synthesis.hpp"
#include "oracles.hpp"

using namespace flowcert;

namespace {

RecurrenceReport analyzed(const TransitionGraph& g, const Cochain1& xi,
                          const ZeroTol& tol = ZeroTol{}) {
    auto rep = scc_decompose(g);
    compute_r_xi(g, xi, rep, tol);
    return rep;
}

}  // namespace

TEST_CASE("decompose_word follows the inductive construction") {
    CHECK(decompose_word("a", 3) == std::vector<std::string>{"a"});
    CHECK(decompose_word("aa", 3) == std::vector<std::string>{"aa"});
    CHECK(decompose_word("abcabc", 3) == std::vector<std::string>{"abca", "b", "c"});
    CHECK_THROWS_AS(decompose_word("", 3), EmptyInput);
}

TEST_CASE("decompose_word properties on random words") {
    std::mt19937 rng(5);
    for (int t = 0; t < 500; ++t) {
        int alphabet = 1 + int(rng() % 10);
        int len = 1 + int(rng() % 40);
        std::string w;
        for (int i = 0; i < len; ++i) w.push_back(char('a' + rng() % size_t(alphabet)));
        auto blocks = decompose_word(w, alphabet);
        std::string joined;
        int distinct = 0;
        {
            std::string seen;
            for (char c : w)
                if (seen.find(c) == std::string::npos) seen.push_back(c);
            distinct = int(seen.size());
        }
        for (const auto& b : blocks) {
            REQUIRE_FALSE(b.empty());
            CHECK(b.front() == b.back());
            joined += b;
        }
        CHECK(joined == w);
        CHECK(int(blocks.size()) <= distinct);
    }
}

TEST_CASE("sup_potential fixture values") {
    auto g1 = fixtures::g1();
    auto rep = analyzed(g1.graph, g1.xi);
    auto f = sup_potential(g1.graph, g1.xi, rep);
    CHECK(f.v[0] == 0);  // all C_xi walks have negative weight
    CHECK(f.v[1] == 0);
    CHECK(f.v[2] == 0);

    // no recurrence at all: empty domain
    TransitionGraph chain;
    chain.vertex_count = 2;
    chain.add_edge(0, 1);
    chain.finalize();
    Cochain1 cw;
    cw.w = {Rat(3)};
    auto crep = analyzed(chain, cw);
    auto cf = sup_potential(chain, cw, crep);
    CHECK(cf.v == std::vector<Rat>{Rat(0), Rat(0)});
}

TEST_CASE("sup_potential on a two-vertex all-negative SCC") {
    TransitionGraph g;
    g.vertex_count = 2;
    g.add_edge(0, 1);
    g.add_edge(1, 0);
    g.finalize();
    Cochain1 xi;
    xi.w = {Rat(1), Rat(-3)};  // cycle mean -1
    auto rep = analyzed(g, xi);
    auto f = sup_potential(g, xi, rep);
    CHECK(f.v[0] == Rat(1));
    CHECK(f.v[1] == Rat(0));
    // omega1 = xi + df is nonpositive on C_xi-internal edges
    Cochain1 omega1 = xi;
    auto df = coboundary(g, f);
    for (int e = 0; e < g.edge_count(); ++e) omega1.w[size_t(e)] += df.w[size_t(e)];
    CHECK(omega1.w[0] == Rat(0));
    CHECK(omega1.w[1] == Rat(-2));
}

TEST_CASE("sup_potential Bellman optimality") {
    std::mt19937 rng(9);
    int checked = 0;
    for (int t = 0; t < 200 && checked < 50; ++t) {
        auto [g, xi] = oracle::random_graph(rng, 7, 12, 3);
        auto rep = analyzed(g, xi);
        auto b = check_condition_b(g, xi, rep, ZeroTol{});
        if (!b.holds) continue;
        Potential0 f;
        try {
            f = sup_potential(g, xi, rep);
        } catch (const NotApplicable&) {
            continue;
        }
        ++checked;
        for (int v = 0; v < g.vertex_count; ++v) {
            CHECK(f.v[size_t(v)] >= 0);
            if (!rep.in_c_xi[size_t(v)]) continue;
            for (int e : g.out_edges[size_t(v)]) {
                int to = g.edges[size_t(e)].to;
                if (!rep.in_c_xi[size_t(to)]) continue;
                CHECK(f.v[size_t(v)] >= xi.w[size_t(e)] + f.v[size_t(to)]);
            }
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("zero_on_r_xi fixtures") {
    auto g1 = fixtures::g1();
    auto rep = analyzed(g1.graph, g1.xi);
    auto out = zero_on_r_xi(g1.graph, g1.xi, rep, rat_parse("1/1000000000"));
    CHECK(out.w == g1.xi.w);  // already zero on the self-loop

    // R_xi subgraph a 2-cycle with weights (+1, -1): zeroed by a potential
    TransitionGraph g;
    g.vertex_count = 2;
    g.add_edge(0, 1);
    g.add_edge(1, 0);
    g.finalize();
    Cochain1 xi;
    xi.w = {Rat(1), Rat(-1)};
    auto rep2 = analyzed(g, xi);
    REQUIRE(rep2.in_r_xi == std::vector<bool>{true, true});
    auto out2 = zero_on_r_xi(g, xi, rep2, rat_parse("1/1000000000"));
    CHECK(out2.w == std::vector<Rat>{Rat(0), Rat(0)});

    // empty R_xi: unchanged
    auto g3 = fixtures::g3();
    auto rep3 = analyzed(g3.graph, g3.xi);
    auto out3 = zero_on_r_xi(g3.graph, g3.xi, rep3, rat_parse("1/1000000000"));
    CHECK(out3.w == g3.xi.w);
}

TEST_CASE("extend_form mirrors zero_on_r_xi semantics") {
    auto g1 = fixtures::g1();
    // sub = {2}, omega_sub = 0 on the self-loop, xi as in the fixture
    Cochain1 zero = Cochain1::zeros(g1.graph);
    auto out = extend_form(g1.graph, {2}, zero, g1.xi, rat_parse("1/1000000000"));
    CHECK(out.w == g1.xi.w);

    // empty sub leaves xi unchanged
    auto out2 = extend_form(g1.graph, {}, zero, g1.xi, rat_parse("1/1000000000"));
    CHECK(out2.w == g1.xi.w);

    // mismatched pairings on an internal cycle
    auto g5 = fixtures::g5();
    Cochain1 zero5 = Cochain1::zeros(g5.graph);
    CHECK_THROWS_AS(extend_form(g5.graph, {0, 1}, zero5, g5.xi, rat_parse("1/1000000000")),
                    NotCohomologous);
}

TEST_CASE("conley_potential levels") {
    auto g1 = fixtures::g1();
    auto rep = analyzed(g1.graph, g1.xi);
    auto L1 = conley_potential(g1.graph, rep);
    CHECK(L1.v[0] == Rat(1));
    CHECK(L1.v[1] == Rat(1));
    CHECK(L1.v[2] == Rat(0));

    // single SCC: constant
    TransitionGraph g;
    g.vertex_count = 2;
    g.add_edge(0, 1);
    g.add_edge(1, 0);
    g.finalize();
    auto rep2 = scc_decompose(g);
    auto L2 = conley_potential(g, rep2);
    CHECK(L2.v[0] == L2.v[1]);

    // pure DAG: strictly decreasing on every edge
    TransitionGraph dag;
    dag.vertex_count = 4;
    dag.add_edge(0, 1);
    dag.add_edge(1, 2);
    dag.add_edge(0, 3);
    dag.add_edge(3, 2);
    dag.finalize();
    auto rep3 = scc_decompose(dag);
    auto L3 = conley_potential(dag, rep3);
    for (const auto& e : dag.edges) CHECK(L3.v[size_t(e.to)] < L3.v[size_t(e.from)]);
}

TEST_CASE("combine on the three-vertex fixture") {
    auto g1 = fixtures::g1();
    auto rep = analyzed(g1.graph, g1.xi);
    auto f = sup_potential(g1.graph, g1.xi, rep);
    auto omega2 = zero_on_r_xi(g1.graph, g1.xi, rep, rat_parse("1/1000000000"));
    auto L1 = conley_potential(g1.graph, rep);
    auto cert = combine(g1.graph, g1.xi, omega2, f, L1, rep, ZeroTol{});
    CHECK(cert.lambda == Rat(1));
    CHECK(cert.omega3.w == std::vector<Rat>{Rat(-1), Rat(-1), Rat(-1), Rat(0)});
    CHECK(cert.valid());
    CHECK(cert.epsilon0 == Rat(1));
}

TEST_CASE("combine rejects a positive C_xi-internal weight") {
    auto g1 = fixtures::g1();
    auto rep = analyzed(g1.graph, g1.xi);
    Cochain1 bad = g1.xi;
    bad.w[0] = Rat(1);  // positive weight on a C_xi-internal edge
    auto f = Potential0::zeros(g1.graph);
    auto L1 = conley_potential(g1.graph, rep);
    CHECK_THROWS_AS(combine(g1.graph, g1.xi, bad, f, L1, rep, ZeroTol{}),
                    SynthesisContractViolated);
}

TEST_CASE("fully recurrent exact class gives the zero form") {
    TransitionGraph g;
    g.vertex_count = 3;
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 0);
    g.finalize();
    Potential0 p;
    p.v = {Rat(0), Rat(2), Rat(-1)};
    Cochain1 xi = coboundary(g, p);  // exact class on one SCC
    auto pr = pipeline(g, xi, ZeroTol{});
    REQUIRE(std::holds_alternative<LyapunovCertificate>(pr));
    const auto& cert = std::get<LyapunovCertificate>(pr);
    CHECK(cert.omega3.w == std::vector<Rat>(3, Rat(0)));
    CHECK(cert.valid());
}

TEST_CASE("pipeline fixture outcomes") {
    auto g1 = fixtures::g1();
    auto pr1 = pipeline(g1.graph, g1.xi, ZeroTol{});
    REQUIRE(std::holds_alternative<LyapunovCertificate>(pr1));
    CHECK(std::get<LyapunovCertificate>(pr1).valid());

    auto g3 = fixtures::g3();
    auto pr3 = pipeline(g3.graph, g3.xi, ZeroTol{});
    REQUIRE(std::holds_alternative<Refusal>(pr3));
    const auto& ref = std::get<Refusal>(pr3);
    CHECK(ref.condition == "B");
    CHECK(ref.pairing == Rat(1));

    auto g5 = fixtures::g5();
    auto pr5 = pipeline(g5.graph, g5.xi, ZeroTol{});
    REQUIRE(std::holds_alternative<Refusal>(pr5));
    CHECK(std::get<Refusal>(pr5).condition == "A");
}

TEST_CASE("certificates preserve the class and verify from scratch") {
    std::mt19937 rng(13);
    int emitted = 0;
    for (int t = 0; t < 300 && emitted < 60; ++t) {
        auto [g, xi] = oracle::random_graph(rng, 8, 14, 3);
        auto pr = pipeline(g, xi, ZeroTol{});
        if (!std::holds_alternative<LyapunovCertificate>(pr)) continue;
        ++emitted;
        const auto& cert = std::get<LyapunovCertificate>(pr);
        CHECK(cert.valid());
        CycleBasis basis(g);
        CHECK(basis.pair_all(cert.omega3.w) == basis.pair_all(xi.w));
        // independent per-edge re-check
        auto rep = analyzed(g, xi);
        for (int e = 0; e < g.edge_count(); ++e) {
            if (rep.edge_in_r_xi_interior(g, e))
                CHECK(cert.omega3.w[size_t(e)] == 0);
            else
                CHECK(cert.omega3.w[size_t(e)] < 0);
        }
    }
    CHECK(emitted > 0);
}

TEST_CASE("monotone trajectories under omega3") {
    auto g1 = fixtures::g1();
    auto pr = pipeline(g1.graph, g1.xi, ZeroTol{});
    const auto& cert = std::get<LyapunovCertificate>(pr);
    auto rep = analyzed(g1.graph, g1.xi);
    std::mt19937 rng(17);
    for (int t = 0; t < 100; ++t) {
        int v = int(rng() % size_t(g1.graph.vertex_count));
        Rat cum = 0;
        for (int step = 0; step < 12; ++step) {
            const auto& outs = g1.graph.out_edges[size_t(v)];
            if (outs.empty()) break;
            int e = outs[rng() % outs.size()];
            Rat before = cum;
            cum += cert.omega3.w[size_t(e)];
            if (rep.edge_in_r_xi_interior(g1.graph, e))
                CHECK(cum == before);  // constant inside R_xi
            else
                CHECK(cum < before);  // strictly decreasing outside
            v = g1.graph.edges[size_t(e)].to;
        }
    }
}
