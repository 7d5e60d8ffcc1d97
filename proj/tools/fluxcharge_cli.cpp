/// Command-line front end: analyze a netlist, construct its planar dual,
/// integrate the classical dynamics, or run the invariant battery.
#include "fluxcharge/analysis.hpp"
#include "fluxcharge/duality.hpp"
#include "fluxcharge/dynamics.hpp"
#include "fluxcharge/errors.hpp"
#include "fluxcharge/linalg.hpp"
#include "fluxcharge/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using namespace fluxcharge;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CircuitError(ErrorKind::parse, "cannot open \"" + path + "\"");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CircuitError(ErrorKind::parse, "cannot write \"" + path + "\"");
    out << content;
}

int cmd_analyze(const std::string& path, const std::string& out, const std::string& format) {
    const AnalysisResult result = analyze_circuit(parse_netlist(read_file(path)));
    write_output(out, format == "json" ? report_json(result) : report_text(result));
    return 0;
}

int cmd_dualize(const std::string& path, const std::string& out) {
    const NetlistDocument doc = parse_netlist(read_file(path));
    const EmbeddedCircuit embedded = build_circuit(doc);
    const LoopSet loops = resolve_loops(doc, embedded);
    const RationalMatrix a = incidence_matrix(embedded.circuit);
    const RationalMatrix b = orientation_matrix(embedded.circuit, loops);
    const DualCircuit dual = dual_circuit(embedded.circuit, loops, a, b);
    write_output(out, serialize_netlist(document_from_circuit(dual.circuit, dual.rotation,
                                                              &dual.loops)));
    return 0;
}

/// `q=1,phi=0` broadcasts a value to every coordinate of a family;
/// `q2=0.5` / `phi3=-1` address one canonical pair (1-based).
State parse_state(const std::string& spec, std::size_t n) {
    State s;
    s.Q.assign(n, 0.0);
    s.Phi.assign(n, 0.0);
    std::stringstream parts(spec);
    std::string item;
    while (std::getline(parts, item, ',')) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw CircuitError(ErrorKind::validation,
                               "state assignment \"" + item + "\" is not of the form name=value");
        std::string name = item.substr(0, eq);
        double value = 0;
        try {
            std::size_t used = 0;
            value = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw CircuitError(ErrorKind::validation,
                               "state assignment \"" + item + "\" has a malformed value");
        }
        std::vector<double>* family = nullptr;
        std::string index_part;
        if (name.rfind("phi", 0) == 0) {
            family = &s.Phi;
            index_part = name.substr(3);
        } else if (name.rfind("q", 0) == 0) {
            family = &s.Q;
            index_part = name.substr(1);
        } else {
            throw CircuitError(ErrorKind::validation,
                               "state variable \"" + name + "\" is neither q... nor phi...");
        }
        if (index_part.empty()) {
            std::fill(family->begin(), family->end(), value);
            continue;
        }
        std::size_t index = 0;
        try {
            index = std::stoul(index_part);
        } catch (const std::exception&) {
            index = 0;
        }
        if (index < 1 || index > n)
            throw CircuitError(ErrorKind::validation, "state variable \"" + name +
                                                          "\" is out of range (N = " +
                                                          std::to_string(n) + ")");
        (*family)[index - 1] = value;
    }
    return s;
}

int cmd_simulate(const std::string& path, double t_end, double dt, const std::string& state_spec,
                 const std::string& out) {
    const AnalysisResult result = analyze_circuit(parse_netlist(read_file(path)));
    const CompiledHamiltonian h = result.reduced.hamiltonian_expr;
    const State s0 = parse_state(state_spec, result.reduced.pair_count);
    const Trajectory trajectory = integrate(h, s0, dt, t_end);
    write_output(out, export_csv(h, trajectory));

    const KirchhoffReport kirchhoff =
        check_kirchhoff(result.embedded.circuit, result.reduced, trajectory);
    char line[256];
    std::snprintf(line, sizeof line,
                  "samples: %zu  energy drift: %.3g\n"
                  "kirchhoff residuals: loop voltage %.3g, node current %.3g, constitutive %.3g\n",
                  trajectory.samples.size(), energy_drift(h, trajectory),
                  kirchhoff.loop_voltage, kirchhoff.node_current, kirchhoff.constitutive);
    std::cerr << line;
    return 0;
}

int cmd_check(const std::string& path, unsigned long seed) {
    const NetlistDocument doc = parse_netlist(read_file(path));
    const AnalysisResult result = analyze_circuit(doc);
    const Circuit& c = result.embedded.circuit;
    const LoopSet& loops = result.loops;
    const RationalMatrix& a = result.lagrangian.incidence;
    const RationalMatrix& b = result.lagrangian.orientation;
    const RationalMatrix& m = result.lagrangian.connection;

    std::size_t failures = 0;
    auto report = [&](const std::string& name, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "ok   " : "FAIL ") << name;
        if (!ok && !detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    };

    std::cout << "circuit: " << c.vertices.size() << " vertices, " << c.edges.size()
              << " edges, genus " << loops.genus << ", " << loops.faces.size() << " faces, N = "
              << result.reduced.pair_count << "\n";

    report("orientation x incidence vanishes", (b * a).is_zero());

    bool sums_ok = true;
    for (std::size_t e = 0; e < a.rows(); ++e) {
        Rational sum = 0;
        for (std::size_t v = 0; v < a.cols(); ++v) sum += a.at(e, v);
        sums_ok = sums_ok && sum == 0;
    }
    for (std::size_t e = 0; e < b.cols(); ++e) {
        Rational sum = 0;
        for (std::size_t f = 0; f < loops.faces.size(); ++f) sum += b.at(f, e);
        sums_ok = sums_ok && sum == 0;
    }
    report("incidence rows and face columns sum to zero", sums_ok);

    const long euler = static_cast<long>(c.vertices.size()) - static_cast<long>(c.edges.size()) +
                       static_cast<long>(loops.faces.size());
    report("Euler characteristic matches genus",
           euler == 2 - 2 * static_cast<long>(loops.genus));
    report("rank(A) = |V| - 1", rank(a) == c.vertices.size() - 1);
    report("rank(B) = |L| - 1", rank(b) == loops.size() - 1);

    const std::vector<RationalVector> cycles = right_nullspace(b);
    bool cycles_ok = cycles.size() == rank(a);
    const RationalMatrix a_t = a.transposed();
    for (const RationalVector& n : cycles) cycles_ok = cycles_ok && in_row_span(a_t, n);
    report("ker(B) has dimension rank(A) and lies in im(A)", cycles_ok);

    report("N = rank(M) and the counting identity holds",
           dof_count(m, loops, result.classification) == result.reduced.pair_count);
    const RationalMatrix kinetic =
        result.reduced.Q_defs * result.reduced.embed_charge;
    report("reduced connection is certified invertible",
           inverse(result.reduced.reduced_connection).has_value() && inverse(kinetic).has_value());

    const std::string first = serialize_netlist(result.document);
    bool round_trip = false;
    std::string detail;
    try {
        round_trip = serialize_netlist(parse_netlist(first)) == first;
    } catch (const CircuitError& err) {
        detail = err.what();
    }
    report("netlist round trip is stable", round_trip, detail);

    if (loops.genus == 0) {
        try {
            const DualCircuit dual = dual_circuit(c, loops, a, b);
            const RationalMatrix m_dual =
                connection_matrix(incidence_matrix(dual.circuit),
                                  orientation_matrix(dual.circuit, dual.loops), [&] {
                                      std::vector<ElementKind> kinds;
                                      for (const auto& e : dual.circuit.edges)
                                          kinds.push_back(e.kind);
                                      return kinds;
                                  }());
            report("dual connection matrix equals -M^T",
                   dual_connection_check(m, m_dual, dual.map));
        } catch (const CircuitError& err) {
            if (err.kind() != ErrorKind::unsupported) throw;
            std::cout << "skip dual checks: " << err.what() << "\n";
        }
    } else {
        const PlanarizabilityReport planar =
            planarizability_report(c, loops, result.classification);
        report("every topological loop is classified",
               planar.loops.size() == 2 * loops.genus);
        std::cout << (planar.effectively_planar ? "note" : "skip")
                  << ": circuit is" << (planar.effectively_planar ? "" : " not")
                  << " effectively planar\n";
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coordinate(-0.5, 0.5);
    State s0;
    for (std::size_t i = 0; i < result.reduced.pair_count; ++i) {
        s0.Q.push_back(coordinate(rng));
        s0.Phi.push_back(coordinate(rng));
    }
    const CompiledHamiltonian h = result.reduced.hamiltonian_expr;
    const Trajectory trajectory = integrate(h, s0, 1e-3, 10.0);
    const double drift = energy_drift(h, trajectory);
    report("energy drift over t = 10 stays below 1e-6", drift <= 1e-6,
           "drift " + std::to_string(drift));
    const KirchhoffReport kirchhoff = check_kirchhoff(c, result.reduced, trajectory);
    report("Kirchhoff residuals stay below 1e-6", kirchhoff.max_residual() <= 1e-6);

    if (failures == 0) {
        std::cout << "all checks passed\n";
        return 0;
    }
    std::cout << failures << " check(s) failed\n";
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"flux-charge symmetric analysis of superconducting circuit netlists"};
    app.require_subcommand(1);

    std::string input;
    std::string out;
    std::string format = "text";
    std::string state_spec;
    double t_end = 0;
    double dt = 0;
    unsigned long seed = 0;

    CLI::App* analyze = app.add_subcommand("analyze", "report the canonical reduction");
    analyze->add_option("file", input, "netlist document")->required();
    analyze->add_option("--out", out, "write the report here instead of stdout");
    analyze->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"json", "text"}));

    CLI::App* dualize = app.add_subcommand("dualize", "emit the planar dual netlist");
    dualize->add_option("file", input, "netlist document")->required();
    dualize->add_option("--out", out, "write the dual netlist here instead of stdout");

    CLI::App* simulate = app.add_subcommand("simulate", "integrate the classical dynamics");
    simulate->add_option("file", input, "netlist document")->required();
    simulate->add_option("--t-end", t_end, "end time")->required();
    simulate->add_option("--dt", dt, "fixed integrator step")->required();
    simulate->add_option("--state", state_spec, "initial state, e.g. q=1,phi=0 or q2=0.5")
        ->required();
    simulate->add_option("--out", out, "write the CSV here instead of stdout");

    CLI::App* check = app.add_subcommand("check", "run the invariant battery on a netlist");
    check->add_option("file", input, "netlist document")->required();
    check->add_option("--seed", seed, "seed for the dynamics spot check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(input, out, format);
        if (dualize->parsed()) return cmd_dualize(input, out);
        if (simulate->parsed()) return cmd_simulate(input, t_end, dt, state_spec, out);
        return cmd_check(input, seed);
    } catch (const CircuitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
