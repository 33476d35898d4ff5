#include <doctest.h>

#include <random>

#include "flowcert/synthesis.hpp"
#include "flowcert/fixtures.hpp"
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

TEST_CASE("condition (A) fixtures") {
    auto g1 = fixtures::g1();
    auto rep1 = analyzed(g1.graph, g1.xi);
    auto a1 = check_condition_a(g1.graph, g1.xi, rep1, rat_parse("1/1000000000"));
    CHECK(a1.holds);
    CHECK(a1.witness.v[2] == 0);

    auto g5 = fixtures::g5();
    auto rep5 = analyzed(g5.graph, g5.xi);
    auto a5 = check_condition_a(g5.graph, g5.xi, rep5, rat_parse("1/1000000000"));
    CHECK_FALSE(a5.holds);
    CHECK(rat_abs(a5.violation_pairing) == Rat(1));
    CHECK_FALSE(a5.violating_cycle.empty());

    // empty R_xi: vacuously true
    auto g3 = fixtures::g3();
    auto rep3 = analyzed(g3.graph, g3.xi);
    auto a3 = check_condition_a(g3.graph, g3.xi, rep3, rat_parse("1/1000000000"));
    CHECK(a3.holds);
}

TEST_CASE("condition (A) witness integrates xi exactly") {
    auto g4 = fixtures::g4();
    auto rep = analyzed(g4.graph, g4.xi);
    auto a = check_condition_a(g4.graph, g4.xi, rep, rat_parse("1/1000000000"));
    REQUIRE(a.holds);
    for (int e = 0; e < g4.graph.edge_count(); ++e) {
        if (!rep.edge_in_r_xi_interior(g4.graph, e)) continue;
        const auto& ed = g4.graph.edges[size_t(e)];
        CHECK(a.witness.v[size_t(ed.to)] - a.witness.v[size_t(ed.from)] == g4.xi.w[size_t(e)]);
    }
}

TEST_CASE("condition (B) fixtures") {
    auto g1 = fixtures::g1();
    auto rep1 = analyzed(g1.graph, g1.xi);
    auto b1 = check_condition_b(g1.graph, g1.xi, rep1, ZeroTol{});
    CHECK(b1.holds);
    REQUIRE(b1.bound_b.has_value());
    CHECK(*b1.bound_b == Rat(2));  // max closed-walk weight through {0,1} is -2
    CHECK(*b1.scaling_s == Rat(1, 2));

    auto g3 = fixtures::g3();
    auto rep3 = analyzed(g3.graph, g3.xi);
    auto b3 = check_condition_b(g3.graph, g3.xi, rep3, ZeroTol{});
    CHECK_FALSE(b3.holds);
    CHECK(b3.witness_pairing == Rat(1));

    auto g4 = fixtures::g4();
    auto rep4 = analyzed(g4.graph, g4.xi);
    auto b4 = check_condition_b(g4.graph, g4.xi, rep4, ZeroTol{});
    CHECK_FALSE(b4.holds);
    CHECK(b4.witness_pairing > 0);
}

TEST_CASE("c_xi closed proxy") {
    auto g1 = fixtures::g1();
    auto rep1 = analyzed(g1.graph, g1.xi);
    CHECK(check_c_xi_closed(rep1));

    auto g4 = fixtures::g4();
    auto rep4 = analyzed(g4.graph, g4.xi);
    CHECK_FALSE(check_c_xi_closed(rep4));  // SCC {0,1,2} mixes
}

TEST_CASE("drift certificate on the all-negative fixture") {
    auto g1 = fixtures::g1();
    auto rep = analyzed(g1.graph, g1.xi);
    auto b = check_condition_b(g1.graph, g1.xi, rep, ZeroTol{});
    auto cert = drift_certificate(g1.graph, g1.xi, rep, b);
    CHECK(cert.mu == Rat(1));
    CHECK(cert.nu == Rat(0));
    CHECK(cert.k == 2);
    CHECK(cert.M == Rat(1));
    CHECK(validate_drift(g1.graph, g1.xi, rep, cert, 1000, 99));
}

TEST_CASE("paper constants") {
    CHECK(paper_mu(3, 2) == Rat(1, 12));
    CHECK(paper_nu(3, Rat(1)) == rat_parse("11/2"));
    CHECK(paper_T(Rat(1, 2), Rat(1, 2)) == 5);
    CHECK_THROWS_AS(paper_T(Rat(1), Rat(0)), NotApplicable);
}

TEST_CASE("drift bound holds for every sampled walk") {
    std::mt19937 rng(77);
    int validated = 0;
    for (int t = 0; t < 200 && validated < 40; ++t) {
        auto [g, xi] = oracle::random_graph(rng, 7, 12, 3);
        auto rep = analyzed(g, xi);
        auto b = check_condition_b(g, xi, rep, ZeroTol{});
        if (!b.holds) continue;
        bool any_cxi = false;
        for (bool c : rep.in_c_xi) any_cxi = any_cxi || c;
        if (!any_cxi) continue;
        auto cert = drift_certificate(g, xi, rep, b);
        CHECK(validate_drift(g, xi, rep, cert, 200, unsigned(t)));
        ++validated;
    }
    CHECK(validated > 0);
}

TEST_CASE("fried_check fixtures") {
    auto g1 = fixtures::g1();
    auto rep1 = analyzed(g1.graph, g1.xi);
    auto f1 = fried_check(g1.graph, g1.xi, rep1, ZeroTol{});
    CHECK(f1.verdict);
    CHECK(f1.max_normalized < 0);
    // the basis cycle of the {0,1} SCC pairs -2 at norm 1
    bool found = false;
    for (auto& [scc, val] : f1.basis_max_per_scc)
        if (val == Rat(-2)) found = true;
    CHECK(found);

    auto g3 = fixtures::g3();
    auto rep3 = analyzed(g3.graph, g3.xi);
    auto f3 = fried_check(g3.graph, g3.xi, rep3, ZeroTol{});
    CHECK_FALSE(f3.verdict);
    CHECK(f3.max_normalized >= Rat(1));

    // zero cochain evaluated against a report with nonempty C_xi
    Cochain1 zero = Cochain1::zeros(g1.graph);
    auto f0 = fried_check(g1.graph, zero, rep1, ZeroTol{});
    CHECK_FALSE(f0.verdict);
    CHECK(f0.max_normalized == Rat(0));
}

TEST_CASE("oracle equivalence for conditions (A) and (B)") {
    std::mt19937 rng(97);
    for (int t = 0; t < 400; ++t) {
        auto [g, xi] = oracle::random_graph(rng, 8, 14, 3);
        auto rep = analyzed(g, xi);
        oracle::IntGraph ig(g, xi);
        auto oc = oracle::twisted_oracle(ig, 2 * g.vertex_count);

        for (int e = 0; e < g.edge_count(); ++e) {
            INFO("graph #" << t << " edge " << e);
            CHECK(bool(oc.interior_edge[size_t(e)]) == rep.edge_in_r_xi_interior(g, e));
        }
        auto a = check_condition_a(g, xi, rep, rat_parse("1/1000000000"));
        INFO("graph #" << t << " (A)");
        CHECK(a.holds == oracle::condition_a_oracle(ig, oc));
        auto b = check_condition_b(g, xi, rep, ZeroTol{});
        INFO("graph #" << t << " (B)");
        CHECK(b.holds == oracle::condition_b_oracle(ig, oc, 16));
    }
}

TEST_CASE("fried verdict equals condition (B) on random integer graphs") {
    std::mt19937 rng(101);
    for (int t = 0; t < 500; ++t) {
        auto [g, xi] = oracle::random_graph(rng, 8, 14, 3);
        auto rep = analyzed(g, xi);
        auto b = check_condition_b(g, xi, rep, ZeroTol{});
        auto f = fried_check(g, xi, rep, ZeroTol{}, 200, unsigned(1000 + t));
        INFO("graph #" << t);
        CHECK(f.verdict == b.holds);
    }
}

TEST_CASE("necessity: valid certificate with closed C_xi implies (B)") {
    std::mt19937 rng(113);
    int seen = 0;
    for (int t = 0; t < 300 && seen < 60; ++t) {
        auto [g, xi] = oracle::random_graph(rng, 8, 14, 3);
        auto rep = analyzed(g, xi);
        auto pr = pipeline(g, xi, rep, ZeroTol{});
        if (!std::holds_alternative<LyapunovCertificate>(pr)) continue;
        if (!std::get<LyapunovCertificate>(pr).valid()) continue;
        if (!check_c_xi_closed(rep)) continue;
        ++seen;
        auto b = check_condition_b(g, xi, rep, ZeroTol{});
        CHECK(b.holds);
    }
    CHECK(seen > 0);
}
