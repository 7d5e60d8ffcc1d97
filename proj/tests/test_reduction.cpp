#include "fluxcharge/analysis.hpp"
#include "fluxcharge/dynamics.hpp"
#include "fluxcharge/errors.hpp"
#include "fluxcharge/linalg.hpp"
#include "fluxcharge/reduction.hpp"

#include "support/fixtures.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace fluxcharge;
using fluxcharge::testing::analyze_fixture;
using fluxcharge::testing::load_fixture;
using fluxcharge::testing::rational_matrix;

namespace {

const Elimination& record_for(const ReducedSystem& rs, const std::string& variable) {
    for (const Elimination& rec : rs.eliminations)
        if (rec.variable == variable) return rec;
    FAIL("no elimination record for " + variable);
    throw std::logic_error("unreachable");
}

void check_record(const ReducedSystem& rs, const std::string& variable,
                  Elimination::FixedBy fixed_by, const std::string& source,
                  const RationalVector& expression) {
    INFO(variable);
    const Elimination& rec = record_for(rs, variable);
    CHECK(rec.fixed_by == fixed_by);
    CHECK(rec.source == source);
    CHECK(rec.expression == expression);
}

AnalyzeOptions default_frame() {
    AnalyzeOptions options;
    options.use_variable_choice = false;
    return options;
}

} // namespace

TEST_CASE("tetrahedral circuit: connection matrix and null classification") {
    const AnalysisResult result = analyze_fixture("mixed_k4.json", default_frame());
    CHECK(result.lagrangian.connection == rational_matrix(" 1 0 0 -1;"
                                                          " 0 0 -1 1;"
                                                          " 0 0 0 0;"
                                                          "-1 0 1 0"));
    CHECK(result.lagrangian.connection.row_labels ==
          std::vector<std::string>{"l1", "l2", "l3", "l4"});
    CHECK(result.lagrangian.loop_charge_vars ==
          std::vector<std::string>{"q_l1", "q_l2", "q_l3", "q_l4"});

    const NullClassification& nc = result.classification;
    CHECK(nc.gauge_left == RationalVector{1, 1, 1, 1});
    CHECK(nc.gauge_right == RationalVector{1, 1, 1, 1});
    REQUIRE(nc.capacitive_loops.size() == 1);
    CHECK(nc.capacitive_loops[0].description == "cycle(e5,e3,e4)");
    CHECK(nc.capacitive_loops[0].vector == RationalVector{0, 0, 1, 0});
    CHECK(nc.capacitive_loops[0].matches_loop == "l3");
    CHECK(nc.inductive_loops.empty());
    REQUIRE(nc.inductive_cuts.size() == 1);
    CHECK(nc.inductive_cuts[0].description == "cut{v2}");
    CHECK(nc.inductive_cuts[0].vector == RationalVector{0, 1, 0, 0});
    CHECK(nc.capacitive_cuts.empty());
}

TEST_CASE("tetrahedral circuit: default-frame elimination and canonical pairs") {
    const AnalysisResult result = analyze_fixture("mixed_k4.json", default_frame());
    const ReducedSystem& rs = result.reduced;
    CHECK(rs.pair_count == 2);
    CHECK(rs.charge_survivors == std::vector<std::size_t>{0, 1});
    CHECK(rs.flux_survivors == std::vector<std::size_t>{0, 2});

    REQUIRE(rs.eliminations.size() == 4);
    check_record(rs, "q_l4", Elimination::FixedBy::gauge, "gauge", {0, 0, 0, 0});
    check_record(rs, "q_l3", Elimination::FixedBy::constraint, "cycle(e5,e3,e4)",
                 {Rational(1, 3), Rational(1, 3), 0, 0});
    check_record(rs, "phi_v4", Elimination::FixedBy::gauge, "gauge", {0, 0, 0, 0});
    check_record(rs, "phi_v2", Elimination::FixedBy::constraint, "cut{v2}",
                 {Rational(1, 3), 0, Rational(1, 3), 0});

    CHECK(rs.embed_charge == rational_matrix("1 0; 0 1; 1/3 1/3; 0 0"));
    CHECK(rs.embed_flux == rational_matrix("1 0; 1/3 1/3; 0 1; 0 0"));
    CHECK(rs.reduced_connection == rational_matrix("1 0; 0 -1"));
    CHECK(rs.Q_defs == rational_matrix("1 0 0 0; 0 -1 0 0"));
    CHECK(rs.Phi_defs == rational_matrix("1 0 0 0; 0 0 1 0"));
    CHECK(rs.Q_defs.row_labels == std::vector<std::string>{"Q1", "Q2"});

    // The kinetic-form identity D'^T S' = M' certifies the pairs are canonical.
    CHECK((rs.Q_defs * rs.embed_charge).transposed() * (rs.Phi_defs * rs.embed_flux) ==
          rs.reduced_connection);
}

TEST_CASE("tetrahedral circuit: the declared variable choice reproduces the "
          "equal-parameter Hamiltonian") {
    const AnalysisResult result = analyze_fixture("mixed_k4.json");
    const ReducedSystem& rs = result.reduced;
    CHECK(rs.Q_defs == rational_matrix("0 1 0 -1; -1 1 0 0"));
    CHECK(rs.Phi_defs == rational_matrix("1 0 -1 0; -1 0 0 1"));
    CHECK(rs.charge_reconstruction == rational_matrix("1 -1; 1 0; 2/3 -1/3; 0 0"));
    CHECK(rs.flux_reconstruction == rational_matrix("0 -1; -1/3 -2/3; -1 -1; 0 0"));

    const HamiltonianExpr& h = rs.hamiltonian_expr;
    CHECK(h.quadratic_Q == rational_matrix("2/3 -1/3; -1/3 2/3"));
    CHECK(h.quadratic_Phi == rational_matrix("2/3 1/3; 1/3 2/3"));
    CHECK(h.cosine_terms.empty());
    CHECK(h.constant == 0);
}

TEST_CASE("bridged square: constraint, absent flux, and both Hamiltonian forms") {
    const AnalysisResult result = analyze_fixture("bridged_square.json");
    const ReducedSystem& rs = result.reduced;
    CHECK(rs.pair_count == 3);

    const NullClassification& nc = result.classification;
    CHECK(nc.capacitive_loops.empty());
    CHECK(nc.inductive_loops.empty());
    REQUIRE(nc.inductive_cuts.size() == 1);
    CHECK(nc.inductive_cuts[0].description == "cut{v1,v2}");
    REQUIRE(nc.capacitive_cuts.size() == 1);
    CHECK(nc.capacitive_cuts[0].description == "cut{v1,v4,v5}");

    check_record(rs, "q_l4", Elimination::FixedBy::gauge, "gauge", {0, 0, 0, 0});
    check_record(rs, "phi_v6", Elimination::FixedBy::gauge, "gauge", {0, 0, 0, 0, 0, 0});
    check_record(rs, "phi_v2", Elimination::FixedBy::constraint, "cut{v1,v2}",
                 {-1, 0, Rational(1, 2), Rational(1, 2), 0, 0});
    check_record(rs, "phi_v5", Elimination::FixedBy::absent, "cut{v1,v4,v5}",
                 {0, 0, 0, 0, 0, 0});

    CHECK(rs.reduced_connection == rational_matrix("0 0 -1; 2 1/2 -1/2; 0 -1 0"));

    const HamiltonianExpr& h = rs.hamiltonian_expr;
    CHECK(h.quadratic_Q == rational_matrix("2 0 0; 0 1 0; 0 0 1"));
    CHECK(h.quadratic_Phi ==
          rational_matrix("1 -1/2 1/2; -1/2 3/4 -1/4; 1/2 -1/4 3/4"));

    // One capacitive cut means one completion column for branch reconstruction.
    REQUIRE(rs.completion);
    CHECK(rs.completion->pivot_edges.size() == 1);
    CHECK(rs.completion->crossing.rows() == 8);
}

TEST_CASE("both embeddings of the bridged square share their normal modes") {
    const AnalysisResult first = analyze_fixture("bridged_square.json");
    const AnalysisResult first_default =
        analyze_fixture("bridged_square.json", default_frame());
    const AnalysisResult second = analyze_fixture("bridged_square_alt.json", default_frame());

    const std::vector<double> reference =
        normal_mode_frequencies(first.reduced.hamiltonian_expr);
    REQUIRE(reference.size() == 3);
    // Exact spectrum of the equal-parameter circuit: (sqrt(5)-1)/2, 1/sqrt(2),
    // (sqrt(5)+1)/2.
    CHECK(reference[0] == Catch::Approx((std::sqrt(5.0) - 1) / 2).epsilon(1e-12));
    CHECK(reference[1] == Catch::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(reference[2] == Catch::Approx((std::sqrt(5.0) + 1) / 2).epsilon(1e-12));

    for (const AnalysisResult* other : {&first_default, &second}) {
        const std::vector<double> freqs =
            normal_mode_frequencies(other->reduced.hamiltonian_expr);
        REQUIRE(freqs.size() == reference.size());
        for (std::size_t i = 0; i < freqs.size(); ++i)
            CHECK(freqs[i] == Catch::Approx(reference[i]).margin(1e-10));
    }
}

TEST_CASE("toroidal complete circuit: constraints pin the topological charges") {
    const AnalysisResult result = analyze_fixture("k5_torus.json");
    const ReducedSystem& rs = result.reduced;
    CHECK(rs.pair_count == 3);

    CHECK(result.lagrangian.connection == rational_matrix(" 0 0 0 0 0;"
                                                          " 0 -1 0 0 1;"
                                                          " 0 1 0 -1 0;"
                                                          " 0 0 1 0 -1;"
                                                          " 0 0 -1 1 0;"
                                                          " 0 0 0 0 0;"
                                                          " 0 0 0 0 0"));

    const NullClassification& nc = result.classification;
    CHECK(nc.gauge_left == RationalVector{1, 1, 1, 1, 1, 0, 0});
    REQUIRE(nc.capacitive_loops.size() == 2);
    CHECK(nc.capacitive_loops[0].description == "cycle(e2,e3,e1)");
    CHECK(nc.capacitive_loops[0].matches_loop == "l6");
    CHECK(nc.capacitive_loops[0].vector == RationalVector{0, 0, 0, 0, 0, 1, 0});
    CHECK(nc.capacitive_loops[1].description == "cycle(e5,e6,e4)");
    CHECK(nc.capacitive_loops[1].matches_loop == "l7");
    CHECK(nc.capacitive_loops[1].vector == RationalVector{0, 0, 0, 0, 0, 0, 1});
    REQUIRE(nc.inductive_loops.size() == 1);
    CHECK(nc.inductive_loops[0].description == "cycle(e10,e7,e8,e9)");
    CHECK(nc.inductive_loops[0].matches_loop == "l1");
    CHECK(nc.inductive_cuts.empty());
    REQUIRE(nc.capacitive_cuts.size() == 1);
    CHECK(nc.capacitive_cuts[0].description == "cut{v1}");

    check_record(rs, "q_l5", Elimination::FixedBy::gauge, "gauge", {0, 0, 0, 0, 0, 0, 0});
    check_record(rs, "q_l6", Elimination::FixedBy::constraint, "cycle(e2,e3,e1)",
                 {0, Rational(-2, 3), Rational(1, 3), Rational(-1, 3), 0, 0, 0});
    check_record(rs, "q_l7", Elimination::FixedBy::constraint, "cycle(e5,e6,e4)",
                 {0, Rational(1, 3), Rational(2, 3), Rational(-2, 3), 0, 0, 0});
    check_record(rs, "q_l1", Elimination::FixedBy::absent, "cycle(e10,e7,e8,e9)",
                 {0, 0, 0, 0, 0, 0, 0});
    check_record(rs, "phi_v5", Elimination::FixedBy::gauge, "gauge", {0, 0, 0, 0, 0});
    check_record(rs, "phi_v1", Elimination::FixedBy::absent, "cut{v1}", {0, 0, 0, 0, 0});

    CHECK(rs.charge_survivors == std::vector<std::size_t>{1, 2, 3});
    CHECK(rs.flux_survivors == std::vector<std::size_t>{1, 2, 3});
    CHECK(rs.reduced_connection == rational_matrix("-1 0 0; 1 0 -1; 0 1 0"));

    // Loop charges of the two topological loops, expressed in the declared
    // canonical charges.
    CHECK(rs.charge_reconstruction.row(5) ==
          RationalVector{Rational(2, 3), Rational(-1, 3), Rational(1, 3)});
    CHECK(rs.charge_reconstruction.row(6) ==
          RationalVector{Rational(-1, 3), Rational(-2, 3), -1});
}

TEST_CASE("two-gon circuits reduce to one canonical pair") {
    SECTION("LC loop") {
        const AnalysisResult result = analyze_fixture("lc_loop.json");
        const ReducedSystem& rs = result.reduced;
        CHECK(rs.pair_count == 1);
        CHECK(rs.reduced_connection == rational_matrix("-1"));
        CHECK(rs.hamiltonian_expr.quadratic_Q == rational_matrix("1"));
        CHECK(rs.hamiltonian_expr.quadratic_Phi == rational_matrix("1"));
        CHECK(rs.hamiltonian_expr.cosine_terms.empty());
    }
    SECTION("capacitor shunting a Josephson element") {
        const AnalysisResult result = analyze_fixture("junction_loop.json");
        const HamiltonianExpr& h = result.reduced.hamiltonian_expr;
        CHECK(h.quadratic_Q == rational_matrix("1"));
        CHECK(h.quadratic_Phi == rational_matrix("0"));
        REQUIRE(h.cosine_terms.size() == 1);
        CHECK(h.cosine_terms[0].coefficient == 1);
        CHECK_FALSE(h.cosine_terms[0].charge_space);
        CHECK(h.cosine_terms[0].argument == RationalVector{1});
        CHECK(h.cosine_terms[0].edge_id == "e2");
    }
}

TEST_CASE("energy terms carry the exact branch arguments") {
    const AnalysisResult result = analyze_fixture("junction_loop.json");
    const std::vector<EnergyTerm>& terms = result.lagrangian.energy_terms;
    REQUIRE(terms.size() == 2);
    CHECK(terms[0].form == EnergyTerm::Form::quadratic);
    CHECK(terms[0].charge_argument);
    CHECK(terms[0].coefficient == Rational(1, 2));
    CHECK(terms[0].argument == RationalVector{1, -1}); // orientation column
    CHECK(terms[1].form == EnergyTerm::Form::cosine);
    CHECK_FALSE(terms[1].charge_argument);
    CHECK(terms[1].coefficient == 1);
    CHECK(terms[1].argument == RationalVector{-1, 1}); // incidence row
}

TEST_CASE("the two one-sided connection forms must agree") {
    const NetlistDocument doc = load_fixture("mixed_k4.json");
    const EmbeddedCircuit embedded = build_circuit(doc);
    const LoopSet loops = resolve_loops(doc, embedded);
    const RationalMatrix a = incidence_matrix(embedded.circuit);
    RationalMatrix b = orientation_matrix(embedded.circuit, loops);
    std::vector<ElementKind> classes;
    for (const auto& e : embedded.circuit.edges) classes.push_back(e.kind);

    CHECK(connection_matrix(a, b, classes) == rational_matrix(" 1 0 0 -1;"
                                                              " 0 0 -1 1;"
                                                              " 0 0 0 0;"
                                                              "-1 0 1 0"));
    b.at(0, 0) = 2; // breaks B·A = 0
    CHECK_THROWS_MATCHES(connection_matrix(a, b, classes), CircuitError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("one-sided forms")));
}

TEST_CASE("nonlinear elements inside homogeneous constraints are rejected") {
    SECTION("phase-slip edge on a capacitive cycle") {
        NetlistDocument doc = load_fixture("mixed_k4.json");
        for (auto& e : doc.edges)
            if (e.id == "e5") e.kind = "phase_slip";
        try {
            analyze_circuit(doc);
            FAIL("expected an unsupported-structure error");
        } catch (const CircuitError& err) {
            CHECK(err.kind() == ErrorKind::unsupported);
            CHECK_THAT(err.what(), Catch::Matchers::ContainsSubstring(
                                       "capacitive cycle(e5,e3,e4) contains phase-slip edge "
                                       "\"e5\""));
        }
    }
    SECTION("Josephson edge crossing an inductive cut") {
        NetlistDocument doc = load_fixture("mixed_k4.json");
        for (auto& e : doc.edges)
            if (e.id == "e2") e.kind = "josephson";
        try {
            analyze_circuit(doc);
            FAIL("expected an unsupported-structure error");
        } catch (const CircuitError& err) {
            CHECK(err.kind() == ErrorKind::unsupported);
            CHECK_THAT(err.what(),
                       Catch::Matchers::ContainsSubstring(
                           "inductive cut{v2} crosses Josephson edge \"e2\""));
        }
    }
}

TEST_CASE("invalid variable choices are rejected with a reason") {
    NetlistDocument doc = load_fixture("mixed_k4.json");
    REQUIRE(doc.variable_choice);
    SECTION("rows that are singular on the constraint surface") {
        doc.variable_choice->charge_rows[1] = doc.variable_choice->charge_rows[0];
        CHECK_THROWS_MATCHES(analyze_circuit(doc), CircuitError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("singular")));
    }
    SECTION("pairs that fail the kinetic-form identity") {
        doc.variable_choice->charge_rows = {{1, 0, 0, 0}, {0, 1, 0, 0}};
        doc.variable_choice->flux_rows = {{1, 0, 0, 0}, {0, 0, 1, 0}};
        CHECK_THROWS_MATCHES(analyze_circuit(doc), CircuitError,
                             Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring(
                                 "does not equal the reduced connection")));
    }
    SECTION("wrong row count") {
        doc.variable_choice->charge_rows.pop_back();
        CHECK_THROWS_AS(analyze_circuit(doc), CircuitError);
    }
}

TEST_CASE("alternate pivot orderings give a canonically equivalent system") {
    AnalyzeOptions alternate = default_frame();
    alternate.reduction.reference_last = false;
    alternate.reduction.eliminate_highest = false;

    for (const char* name :
         {"mixed_k4.json", "bridged_square.json", "k5_torus.json", "lc_loop.json"}) {
        INFO(name);
        const AnalysisResult standard = analyze_fixture(name, default_frame());
        const AnalysisResult flipped = analyze_fixture(name, alternate);
        CHECK(standard.reduced.pair_count == flipped.reduced.pair_count);

        const std::vector<double> f1 =
            normal_mode_frequencies(standard.reduced.hamiltonian_expr);
        const std::vector<double> f2 =
            normal_mode_frequencies(flipped.reduced.hamiltonian_expr);
        REQUIRE(f1.size() == f2.size());
        for (std::size_t i = 0; i < f1.size(); ++i)
            CHECK(f1[i] == Catch::Approx(f2[i]).margin(1e-10));
    }
}

TEST_CASE("degrees of freedom follow the counting identity") {
    for (const auto& [name, expected] :
         std::vector<std::pair<const char*, std::size_t>>{{"mixed_k4.json", 2},
                                                          {"bridged_square.json", 3},
                                                          {"k5_torus.json", 3},
                                                          {"lc_loop.json", 1},
                                                          {"junction_loop.json", 1},
                                                          {"torus_pair.json", 1}}) {
        INFO(name);
        const AnalysisResult result = analyze_fixture(name, default_frame());
        CHECK(result.reduced.pair_count == expected);
        CHECK(dof_count(result.lagrangian.connection, result.loops, result.classification) ==
              expected);
    }
}

TEST_CASE("expression equality ignores cosine order and provenance") {
    const AnalysisResult result = analyze_fixture("junction_loop.json");
    HamiltonianExpr h = result.reduced.hamiltonian_expr;
    CHECK(expressions_equal(h, result.reduced.hamiltonian_expr));

    HamiltonianExpr relabeled = h;
    relabeled.cosine_terms[0].edge_id = "other";
    CHECK(expressions_equal(h, relabeled));

    HamiltonianExpr scaled = h;
    scaled.cosine_terms[0].coefficient = 2;
    CHECK_FALSE(expressions_equal(h, scaled));

    HamiltonianExpr shifted = h;
    shifted.constant = 1;
    CHECK_FALSE(expressions_equal(h, shifted));
}
