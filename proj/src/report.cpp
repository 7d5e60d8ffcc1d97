#include "fluxcharge/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace fluxcharge {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Term {
    Rational coefficient;
    std::string symbol;
};

std::string join_terms(const std::vector<Term>& terms) {
    std::string out;
    bool first = true;
    for (const Term& term : terms) {
        if (term.coefficient == 0) continue;
        const Rational magnitude = term.coefficient < 0 ? -term.coefficient : term.coefficient;
        if (first) {
            if (term.coefficient < 0) out += "-";
            first = false;
        } else {
            out += term.coefficient < 0 ? " - " : " + ";
        }
        if (magnitude != 1) out += to_string(magnitude) + " ";
        out += term.symbol;
    }
    return first ? "0" : out;
}

std::vector<Term> quadratic_terms(const RationalMatrix& k, const std::vector<std::string>& labels) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < k.rows(); ++i) {
        terms.push_back({k.at(i, i) / 2, labels[i] + "^2"});
        for (std::size_t j = i + 1; j < k.cols(); ++j)
            terms.push_back({(k.at(i, j) + k.at(j, i)) / 2, labels[i] + " " + labels[j]});
    }
    return terms;
}

ordered_json matrix_json(const RationalMatrix& m) {
    ordered_json j;
    j["row_labels"] = m.row_labels;
    j["col_labels"] = m.col_labels;
    ordered_json rows = ordered_json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m.at(r, c)));
        rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
    return j;
}

ordered_json vector_json(const RationalVector& v) {
    ordered_json arr = ordered_json::array();
    for (const Rational& x : v) arr.push_back(to_string(x));
    return arr;
}

ordered_json null_vector_json(const NullVector& nv) {
    ordered_json j;
    j["description"] = nv.description;
    j["vector"] = vector_json(nv.vector);
    if (nv.matches_loop) j["matches_loop"] = *nv.matches_loop;
    return j;
}

std::string matrix_text(const RationalMatrix& m) {
    std::vector<std::vector<std::string>> cells(m.rows() + 1);
    cells[0].push_back("");
    for (std::size_t c = 0; c < m.cols(); ++c)
        cells[0].push_back(c < m.col_labels.size() ? m.col_labels[c] : "");
    for (std::size_t r = 0; r < m.rows(); ++r) {
        cells[r + 1].push_back(r < m.row_labels.size() ? m.row_labels[r] : "");
        for (std::size_t c = 0; c < m.cols(); ++c) cells[r + 1].push_back(to_string(m.at(r, c)));
    }
    std::vector<std::size_t> widths(m.cols() + 1, 0);
    for (const auto& row : cells)
        for (std::size_t c = 0; c < row.size(); ++c)
            widths[c] = std::max(widths[c], row[c].size());
    std::string out;
    for (const auto& row : cells) {
        out += " ";
        for (std::size_t c = 0; c < row.size(); ++c) {
            out += " ";
            out.append(widths[c] - row[c].size(), ' ');
            out += row[c];
        }
        out += "\n";
    }
    return out;
}

std::string fixed_by_name(Elimination::FixedBy fixed_by) {
    switch (fixed_by) {
    case Elimination::FixedBy::gauge: return "gauge";
    case Elimination::FixedBy::constraint: return "constraint";
    case Elimination::FixedBy::absent: return "absent";
    }
    return "?";
}

std::vector<std::string> survivor_labels(const std::vector<std::string>& names,
                                         const std::vector<std::size_t>& survivors) {
    std::vector<std::string> out;
    for (std::size_t index : survivors) out.push_back(names[index]);
    return out;
}

} // namespace

std::string linear_combination(const RationalVector& coefficients,
                               const std::vector<std::string>& labels) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < coefficients.size(); ++i)
        terms.push_back({coefficients[i], labels[i]});
    return join_terms(terms);
}

std::string hamiltonian_line(const HamiltonianExpr& h) {
    const std::vector<std::string> q_labels = [&] {
        std::vector<std::string> out;
        for (std::size_t i = 1; i <= h.size(); ++i) out.push_back("Q" + std::to_string(i));
        return out;
    }();
    const std::vector<std::string> phi_labels = [&] {
        std::vector<std::string> out;
        for (std::size_t i = 1; i <= h.size(); ++i) out.push_back("Phi" + std::to_string(i));
        return out;
    }();
    std::vector<Term> terms = quadratic_terms(h.quadratic_Q, q_labels);
    const std::vector<Term> flux_terms = quadratic_terms(h.quadratic_Phi, phi_labels);
    terms.insert(terms.end(), flux_terms.begin(), flux_terms.end());
    std::string out = "H = " + join_terms(terms);
    for (const CosineTerm& term : h.cosine_terms) {
        out += " - ";
        if (term.coefficient != 1) out += to_string(term.coefficient) + " ";
        out += "cos(" +
               linear_combination(term.argument, term.charge_space ? q_labels : phi_labels) + ")";
    }
    if (h.constant > 0) out += " + " + to_string(h.constant);
    if (h.constant < 0) out += " - " + to_string(-h.constant);
    return out;
}

std::string report_json(const AnalysisResult& result) {
    const Circuit& c = result.embedded.circuit;
    const ReducedSystem& rs = result.reduced;
    ordered_json j;
    j["version"] = kNetlistVersion;

    std::size_t capacitive = 0;
    for (const auto& e : c.edges) capacitive += is_capacitive(e.kind) ? 1 : 0;
    j["circuit"] = {{"vertices", c.vertices.size()},
                    {"edges", c.edges.size()},
                    {"capacitive_edges", capacitive},
                    {"inductive_edges", c.edges.size() - capacitive}};
    j["embedding"] = {{"genus", result.loops.genus},
                      {"faces", result.loops.faces.size()},
                      {"loops", result.loops.size()}};

    j["matrices"] = {{"incidence", matrix_json(result.lagrangian.incidence)},
                     {"orientation", matrix_json(result.lagrangian.orientation)},
                     {"connection", matrix_json(result.lagrangian.connection)}};

    const NullClassification& nc = result.classification;
    ordered_json classification;
    classification["gauge_left"] = vector_json(nc.gauge_left);
    classification["gauge_right"] = vector_json(nc.gauge_right);
    for (const auto& [key, family] :
         std::initializer_list<std::pair<const char*, const std::vector<NullVector>*>>{
             {"capacitive_loops", &nc.capacitive_loops},
             {"inductive_loops", &nc.inductive_loops},
             {"inductive_cuts", &nc.inductive_cuts},
             {"capacitive_cuts", &nc.capacitive_cuts}}) {
        ordered_json arr = ordered_json::array();
        for (const NullVector& nv : *family) arr.push_back(null_vector_json(nv));
        classification[key] = std::move(arr);
    }
    j["null_classification"] = std::move(classification);

    ordered_json eliminations = ordered_json::array();
    for (const Elimination& rec : rs.eliminations) {
        ordered_json je;
        je["variable"] = rec.variable;
        je["side"] = rec.charge_side ? "charge" : "flux";
        je["fixed_by"] = fixed_by_name(rec.fixed_by);
        je["source"] = rec.source;
        const auto& names =
            rec.charge_side ? result.lagrangian.loop_charge_vars : result.lagrangian.node_flux_vars;
        je["expression"] = rec.variable + " = " + linear_combination(rec.expression, names);
        je["coefficients"] = vector_json(rec.expression);
        eliminations.push_back(std::move(je));
    }
    j["eliminations"] = std::move(eliminations);

    j["degrees_of_freedom"] = rs.pair_count;
    ordered_json pairs;
    pairs["charge_survivors"] =
        survivor_labels(result.lagrangian.loop_charge_vars, rs.charge_survivors);
    pairs["flux_survivors"] =
        survivor_labels(result.lagrangian.node_flux_vars, rs.flux_survivors);
    pairs["Q"] = matrix_json(rs.Q_defs);
    pairs["Phi"] = matrix_json(rs.Phi_defs);
    ordered_json definitions = ordered_json::array();
    for (std::size_t i = 0; i < rs.pair_count; ++i) {
        definitions.push_back(
            rs.charge_labels()[i] + " = " +
            linear_combination(rs.Q_defs.row(i), result.lagrangian.loop_charge_vars));
        definitions.push_back(
            rs.flux_labels()[i] + " = " +
            linear_combination(rs.Phi_defs.row(i), result.lagrangian.node_flux_vars));
    }
    pairs["definitions"] = std::move(definitions);
    pairs["reduced_connection"] = matrix_json(rs.reduced_connection);
    j["canonical_pairs"] = std::move(pairs);

    const HamiltonianExpr& h = rs.hamiltonian_expr;
    ordered_json hamiltonian;
    hamiltonian["quadratic_Q"] = matrix_json(h.quadratic_Q);
    hamiltonian["quadratic_Phi"] = matrix_json(h.quadratic_Phi);
    ordered_json cosines = ordered_json::array();
    for (const CosineTerm& term : h.cosine_terms) {
        ordered_json jt;
        jt["coefficient"] = to_string(term.coefficient);
        jt["space"] = term.charge_space ? "charge" : "flux";
        jt["argument"] = vector_json(term.argument);
        jt["edge"] = term.edge_id;
        cosines.push_back(std::move(jt));
    }
    hamiltonian["cosines"] = std::move(cosines);
    hamiltonian["constant"] = to_string(h.constant);
    hamiltonian["text"] = hamiltonian_line(h);
    j["hamiltonian"] = std::move(hamiltonian);

    j["quantization"] = {{"poisson_bracket", rs.poisson_bracket},
                         {"commutator", rs.commutator}};
    return j.dump(2) + "\n";
}

std::string report_text(const AnalysisResult& result) {
    const Circuit& c = result.embedded.circuit;
    const ReducedSystem& rs = result.reduced;
    std::ostringstream out;

    std::size_t capacitive = 0;
    for (const auto& e : c.edges) capacitive += is_capacitive(e.kind) ? 1 : 0;
    out << "flux-charge symmetric circuit analysis\n";
    out << "vertices: " << c.vertices.size() << "  edges: " << c.edges.size() << " (capacitive "
        << capacitive << ", inductive " << c.edges.size() - capacitive << ")\n";
    out << "genus: " << result.loops.genus << "  faces: " << result.loops.faces.size()
        << "  loops: " << result.loops.size() << "\n";
    out << "degrees of freedom: " << rs.pair_count << "\n\n";

    out << "incidence matrix A (edges x vertices):\n"
        << matrix_text(result.lagrangian.incidence) << "\n";
    out << "orientation matrix B (loops x edges):\n"
        << matrix_text(result.lagrangian.orientation) << "\n";
    out << "connection matrix M (loops x vertices):\n"
        << matrix_text(result.lagrangian.connection) << "\n";

    const NullClassification& nc = result.classification;
    auto list_family = [&](const char* title, const std::vector<NullVector>& family) {
        out << title << ":";
        if (family.empty()) {
            out << " none\n";
            return;
        }
        out << "\n";
        for (const NullVector& nv : family) {
            out << "  " << nv.description;
            if (nv.matches_loop) out << "  [= loop " << *nv.matches_loop << "]";
            out << "\n";
        }
    };
    out << "null directions of M\n";
    out << "gauge (left): " << linear_combination(nc.gauge_left, result.lagrangian.loop_charge_vars)
        << "\n";
    out << "gauge (right): "
        << linear_combination(nc.gauge_right, result.lagrangian.node_flux_vars) << "\n";
    list_family("capacitive loops (charge constraints)", nc.capacitive_loops);
    list_family("inductive loops (dropped charges)", nc.inductive_loops);
    list_family("inductive cuts (flux constraints)", nc.inductive_cuts);
    list_family("capacitive cuts (dropped fluxes)", nc.capacitive_cuts);
    out << "\n";

    out << "eliminations:\n";
    for (const Elimination& rec : rs.eliminations) {
        const auto& names =
            rec.charge_side ? result.lagrangian.loop_charge_vars : result.lagrangian.node_flux_vars;
        out << "  " << rec.variable << " = " << linear_combination(rec.expression, names) << "  ["
            << fixed_by_name(rec.fixed_by);
        if (rec.source != "gauge") out << ": " << rec.source;
        out << "]\n";
    }
    out << "\n";

    out << "canonical pairs (" << rs.poisson_bracket << "; " << rs.commutator << "):\n";
    for (std::size_t i = 0; i < rs.pair_count; ++i) {
        out << "  " << rs.charge_labels()[i] << " = "
            << linear_combination(rs.Q_defs.row(i), result.lagrangian.loop_charge_vars) << "\n";
        out << "  " << rs.flux_labels()[i] << " = "
            << linear_combination(rs.Phi_defs.row(i), result.lagrangian.node_flux_vars) << "\n";
    }
    out << "\n" << hamiltonian_line(rs.hamiltonian_expr) << "\n";
    return out.str();
}

} // namespace fluxcharge
