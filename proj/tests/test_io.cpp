#include "fluxcharge/analysis.hpp"
#include "fluxcharge/duality.hpp"
#include "fluxcharge/errors.hpp"
#include "fluxcharge/netlist.hpp"
#include "fluxcharge/report.hpp"

#include "support/fixtures.hpp"

#include <json.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace fluxcharge;
using fluxcharge::testing::analyze_fixture;
using fluxcharge::testing::fixture_path;
using fluxcharge::testing::load_fixture;
using fluxcharge::testing::slurp;

namespace {

const char* good_fixtures[] = {"mixed_k4.json",      "bridged_square.json",
                               "bridged_square_alt.json", "k5_torus.json",
                               "lc_loop.json",       "junction_loop.json",
                               "torus_pair.json",    "planar_mesh.json"};

} // namespace

TEST_CASE("serialization is a fixed point after one round trip") {
    for (const char* name : good_fixtures) {
        INFO(name);
        const NetlistDocument doc = load_fixture(name);
        const std::string once = serialize_netlist(doc);
        const NetlistDocument reparsed = parse_netlist(once);
        CHECK(serialize_netlist(reparsed) == once);

        const AnalysisResult a = analyze_circuit(doc);
        const AnalysisResult b = analyze_circuit(reparsed);
        CHECK(a.reduced.pair_count == b.reduced.pair_count);
        CHECK(expressions_equal(a.reduced.hamiltonian_expr, b.reduced.hamiltonian_expr));
    }
}

TEST_CASE("parsed documents carry the declared structure") {
    const NetlistDocument doc = load_fixture("mixed_k4.json");
    CHECK(doc.version == "fluxcharge/1");
    CHECK(doc.vertices == std::vector<std::string>{"v1", "v2", "v3", "v4"});
    REQUIRE(doc.edges.size() == 6);
    CHECK(doc.edges[0].kind == "inductor");
    CHECK(doc.edges[0].parameter == 1);
    REQUIRE(doc.faces);
    CHECK(doc.faces->size() == 4);
    CHECK((*doc.faces)[0].id == "l1");
    REQUIRE(doc.variable_choice);
    CHECK(doc.variable_choice->charge_rows.size() == 2);
    CHECK(doc.variable_choice->flux_rows.size() == 2);
}

TEST_CASE("malformed documents are rejected with the right error class") {
    struct Case {
        const char* file;
        ErrorKind kind;
        const char* message;
    };
    const Case cases[] = {
        {"bad_syntax.json", ErrorKind::parse, "syntax error"},
        {"bad_version.json", ErrorKind::parse, "unsupported version \"fluxcharge/99\""},
        {"bad_unknown_kind.json", ErrorKind::parse, "unknown kind \"memristor\""},
        {"bad_duplicate_id.json", ErrorKind::parse, "duplicate edge id \"e1\""},
        {"bad_missing_vertex.json", ErrorKind::parse, "references unknown vertex \"v3\""},
        {"bad_nonpositive_parameter.json", ErrorKind::validation, "nonpositive parameter"},
        {"bad_self_loop.json", ErrorKind::validation, "self-loop"},
        {"bad_disconnected.json", ErrorKind::validation, "not connected"},
        {"bad_embedding_incomplete.json", ErrorKind::validation, "incomplete"},
    };
    for (const Case& c : cases) {
        INFO(c.file);
        try {
            build_circuit(parse_netlist(slurp(fixture_path(c.file))));
            FAIL("expected a parse or validation error");
        } catch (const CircuitError& err) {
            CHECK(err.kind() == c.kind);
            CHECK(err.exit_code() == 2);
            CHECK_THAT(err.what(), Catch::Matchers::ContainsSubstring(c.message));
        }
    }
}

TEST_CASE("error kinds map onto process exit codes") {
    CHECK(CircuitError(ErrorKind::parse, "x").exit_code() == 2);
    CHECK(CircuitError(ErrorKind::validation, "x").exit_code() == 2);
    CHECK(CircuitError(ErrorKind::unsupported, "x").exit_code() == 3);
    CHECK(CircuitError(ErrorKind::check, "x").exit_code() == 1);
    CHECK(CircuitError(ErrorKind::internal, "x").exit_code() == 1);
}

TEST_CASE("decimal and exponent parameters stay exact") {
    NetlistDocument doc = load_fixture("lc_loop.json");
    doc.edges[0].parameter = *parse_rational("0.25");
    CHECK(doc.edges[0].parameter == Rational(1, 4));
    const std::string text = serialize_netlist(doc);
    CHECK_THAT(text, Catch::Matchers::ContainsSubstring("\"parameter\": \"1/4\""));

    const NetlistDocument reparsed = parse_netlist(text);
    CHECK(reparsed.edges[0].parameter == Rational(1, 4));

    // A float-typed JSON parameter round-trips through its shortest decimal.
    const std::string numeric = R"({
      "version": "fluxcharge/1",
      "vertices": ["v1", "v2"],
      "edges": [
        {"id": "e1", "from": "v1", "to": "v2", "kind": "capacitor", "parameter": 0.2},
        {"id": "e2", "from": "v1", "to": "v2", "kind": "inductor", "parameter": 3}
      ],
      "embedding": [
        {"vertex": "v1", "order": [{"edge": "e1", "end": "tail"}, {"edge": "e2", "end": "tail"}]},
        {"vertex": "v2", "order": [{"edge": "e1", "end": "head"}, {"edge": "e2", "end": "head"}]}
      ]
    })";
    const NetlistDocument from_numbers = parse_netlist(numeric);
    CHECK(from_numbers.edges[0].parameter == Rational(1, 5));
    CHECK(from_numbers.edges[1].parameter == 3);
}

TEST_CASE("rendering linear combinations of labeled variables") {
    const std::vector<std::string> labels{"a", "b", "c"};
    CHECK(linear_combination({Rational(1, 3), -1, 0}, labels) == "1/3 a - b");
    CHECK(linear_combination({0, 0, 0}, labels) == "0");
    CHECK(linear_combination({-2, 0, 1}, labels) == "-2 a + c");
    CHECK(linear_combination({-1, Rational(5, 2), 0}, labels) == "-a + 5/2 b");
}

TEST_CASE("one-line Hamiltonian rendering") {
    CHECK(hamiltonian_line(analyze_fixture("lc_loop.json").reduced.hamiltonian_expr) ==
          "H = 1/2 Q1^2 + 1/2 Phi1^2");
    CHECK(hamiltonian_line(analyze_fixture("junction_loop.json").reduced.hamiltonian_expr) ==
          "H = 1/2 Q1^2 - cos(Phi1)");
    CHECK(hamiltonian_line(analyze_fixture("mixed_k4.json").reduced.hamiltonian_expr) ==
          "H = 1/3 Q1^2 - 1/3 Q1 Q2 + 1/3 Q2^2 + 1/3 Phi1^2 + 1/3 Phi1 Phi2 + "
          "1/3 Phi2^2");
}

TEST_CASE("machine-readable report carries the exact analysis") {
    const AnalysisResult result = analyze_fixture("mixed_k4.json");
    const std::string text = report_json(result);
    REQUIRE(!text.empty());
    CHECK(text.back() == '\n');
    const nlohmann::json j = nlohmann::json::parse(text);

    CHECK(j["version"] == "fluxcharge/1");
    CHECK(j["circuit"]["vertices"] == 4);
    CHECK(j["circuit"]["edges"] == 6);
    CHECK(j["circuit"]["capacitive_edges"] == 3);
    CHECK(j["embedding"]["genus"] == 0);
    CHECK(j["embedding"]["faces"] == 4);
    CHECK(j["degrees_of_freedom"] == 2);

    CHECK(j["matrices"]["connection"]["row_labels"] ==
          nlohmann::json({"l1", "l2", "l3", "l4"}));
    CHECK(j["matrices"]["connection"]["entries"][0] ==
          nlohmann::json({"1", "0", "0", "-1"}));

    CHECK(j["null_classification"]["capacitive_loops"][0]["description"] ==
          "cycle(e5,e3,e4)");
    CHECK(j["null_classification"]["capacitive_loops"][0]["matches_loop"] == "l3");
    CHECK(j["null_classification"]["inductive_cuts"][0]["description"] == "cut{v2}");

    CHECK(j["eliminations"][1]["variable"] == "q_l3");
    CHECK(j["eliminations"][1]["fixed_by"] == "constraint");
    CHECK(j["eliminations"][1]["expression"] == "q_l3 = 1/3 q_l1 + 1/3 q_l2");

    CHECK(j["canonical_pairs"]["charge_survivors"] == nlohmann::json({"q_l1", "q_l2"}));
    CHECK(j["canonical_pairs"]["definitions"][0] == "Q1 = q_l2 - q_l4");
    CHECK(j["hamiltonian"]["quadratic_Q"]["entries"] ==
          nlohmann::json::array({nlohmann::json::array({"2/3", "-1/3"}),
                                 nlohmann::json::array({"-1/3", "2/3"})}));
    CHECK(j["hamiltonian"]["quadratic_Phi"]["entries"] ==
          nlohmann::json::array({nlohmann::json::array({"2/3", "1/3"}),
                                 nlohmann::json::array({"1/3", "2/3"})}));
    CHECK(j["quantization"]["poisson_bracket"] == "{Phi_j, Q_i} = delta_ij");
    CHECK(j["quantization"]["commutator"] == "[Phi_j, Q_i] = i hbar delta_ij");

    const nlohmann::json junction =
        nlohmann::json::parse(report_json(analyze_fixture("junction_loop.json")));
    CHECK(junction["hamiltonian"]["cosines"][0]["space"] == "flux");
    CHECK(junction["hamiltonian"]["cosines"][0]["coefficient"] == "1");
    CHECK(junction["hamiltonian"]["cosines"][0]["argument"] == nlohmann::json({"1"}));
    CHECK(junction["hamiltonian"]["cosines"][0]["edge"] == "e2");
}

TEST_CASE("human-readable report spells out the reduction") {
    const std::string text = report_text(analyze_fixture("mixed_k4.json"));
    CHECK_THAT(text, Catch::Matchers::StartsWith("flux-charge symmetric circuit analysis"));
    CHECK_THAT(text, Catch::Matchers::ContainsSubstring(
                         "vertices: 4  edges: 6 (capacitive 3, inductive 3)"));
    CHECK_THAT(text,
               Catch::Matchers::ContainsSubstring("genus: 0  faces: 4  loops: 4"));
    CHECK_THAT(text, Catch::Matchers::ContainsSubstring("degrees of freedom: 2"));
    CHECK_THAT(text, Catch::Matchers::ContainsSubstring(
                         "q_l3 = 1/3 q_l1 + 1/3 q_l2  [constraint: cycle(e5,e3,e4)]"));
    CHECK_THAT(text, Catch::Matchers::ContainsSubstring("q_l4 = 0  [gauge]"));
    CHECK_THAT(text, Catch::Matchers::ContainsSubstring(
                         "phi_v2 = 1/3 phi_v1 + 1/3 phi_v3  [constraint: cut{v2}]"));
    CHECK_THAT(text, Catch::Matchers::ContainsSubstring("Q1 = q_l2 - q_l4"));
    CHECK_THAT(text, Catch::Matchers::ContainsSubstring("Phi1 = phi_v1 - phi_v3"));
    CHECK_THAT(text, Catch::Matchers::ContainsSubstring(
                         "H = 1/3 Q1^2 - 1/3 Q1 Q2 + 1/3 Q2^2 + 1/3 Phi1^2 + "
                         "1/3 Phi1 Phi2 + 1/3 Phi2^2"));
}

TEST_CASE("a serialized dual circuit is a valid netlist again") {
    const AnalysisResult primal = analyze_fixture("mixed_k4.json");
    const RationalMatrix a = incidence_matrix(primal.embedded.circuit);
    const RationalMatrix b = orientation_matrix(primal.embedded.circuit, primal.loops);
    const DualCircuit dual = dual_circuit(primal.embedded.circuit, primal.loops, a, b);

    const NetlistDocument dual_doc =
        document_from_circuit(dual.circuit, dual.rotation, &dual.loops);
    const std::string text = serialize_netlist(dual_doc);
    const NetlistDocument reparsed = parse_netlist(text);

    AnalyzeOptions plain;
    plain.use_variable_choice = false;
    const AnalysisResult dual_result = analyze_circuit(reparsed, plain);
    CHECK(dual_result.reduced.pair_count == primal.reduced.pair_count);
    CHECK(dual_result.loops.genus == 0);
    CHECK(dual_result.embedded.circuit.vertices.size() == 4);
    // The declared faces of the dual document must be adopted verbatim.
    REQUIRE(reparsed.faces);
    CHECK(dual_result.loops.labels() == [&] {
        std::vector<std::string> ids;
        for (const auto& w : *reparsed.faces) ids.push_back(w.id);
        return ids;
    }());
}
