#include "fluxcharge/duality.hpp"

#include "fluxcharge/errors.hpp"
#include "fluxcharge/linalg.hpp"

#include <algorithm>

namespace fluxcharge {

namespace {

[[noreturn]] void fail_internal(const std::string& message) {
    throw CircuitError(ErrorKind::internal, "duality: " + message);
}

ElementKind swapped_class(ElementKind kind) {
    switch (kind) {
    case ElementKind::capacitor: return ElementKind::inductor;
    case ElementKind::inductor: return ElementKind::capacitor;
    case ElementKind::josephson: return ElementKind::phase_slip;
    case ElementKind::phase_slip: return ElementKind::josephson;
    }
    fail_internal("unknown element kind");
}

/// The dual counterpart of a primal dart: it belongs to the same edge and
/// points the other way, so that its origin is the face the primal dart
/// lies on.
Dart dual_dart(const Dart& d) { return Dart{d.edge, !d.forward}; }

void canonicalize_argument(RationalVector& v) {
    for (const Rational& x : v) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : v) y = -y;
        break;
    }
}

} // namespace

DualCircuit dual_circuit(const Circuit& c, const LoopSet& ls, const RationalMatrix& a,
                         const RationalMatrix& b) {
    // Every edge must lie on exactly two loops; otherwise B^T has a column
    // that is not a valid incidence column and no dual circuit exists.
    std::vector<std::vector<std::size_t>> membership(c.edges.size());
    for (std::size_t l = 0; l < ls.size(); ++l) {
        std::vector<bool> seen(c.edges.size(), false);
        for (const Dart& d : ls.loop(l).darts)
            if (!seen[d.edge]) {
                seen[d.edge] = true;
                membership[d.edge].push_back(l);
            }
    }
    for (std::size_t e = 0; e < c.edges.size(); ++e) {
        if (membership[e].size() == 2) continue;
        std::string loops_list;
        for (std::size_t i = 0; i < membership[e].size(); ++i) {
            if (i) loops_list += ", ";
            loops_list += ls.loop(membership[e][i]).id;
        }
        throw CircuitError(ErrorKind::unsupported,
                           "duality: B^T is not a valid incidence matrix: edge \"" +
                               c.edges[e].id + "\" lies on " +
                               std::to_string(membership[e].size()) + " loop(s) (" + loops_list +
                               "), expected exactly 2");
    }
    if (ls.genus != 0)
        throw CircuitError(ErrorKind::unsupported,
                           "duality: the embedding has genus " + std::to_string(ls.genus) +
                               "; only genus-zero circuits have a planar dual");

    std::vector<std::size_t> face_of(2 * c.edges.size());
    for (std::size_t f = 0; f < ls.faces.size(); ++f)
        for (const Dart& d : ls.faces[f].darts) face_of[d.index()] = f;

    DualCircuit dual;
    for (const LoopWalk& face : ls.faces) dual.circuit.vertices.push_back(face.id);
    dual.map.edge_sign.assign(c.edges.size(), 0);
    for (std::size_t e = 0; e < c.edges.size(); ++e) {
        const std::size_t left = face_of[Dart{e, true}.index()];
        const std::size_t right = face_of[Dart{e, false}.index()];
        CircuitEdge de;
        de.id = c.edges[e].id;
        de.tail = right;
        de.head = left;
        de.kind = swapped_class(c.edges[e].kind);
        de.parameter = c.edges[e].parameter;
        dual.circuit.edges.push_back(std::move(de));
        if (b.at(left, e) == 1 && b.at(right, e) == -1)
            dual.map.edge_sign[e] = 1;
        else if (b.at(left, e) == -1 && b.at(right, e) == 1)
            dual.map.edge_sign[e] = -1;
        else
            fail_internal("orientation column of edge \"" + c.edges[e].id +
                          "\" is not a signed face pair");
    }

    // Rotation at a dual vertex: the dual darts of the face walk, in walk
    // order, each originating at that face.
    dual.rotation.order.resize(ls.faces.size());
    for (std::size_t f = 0; f < ls.faces.size(); ++f)
        for (const Dart& d : ls.faces[f].darts) {
            const Dart x = dual_dart(d);
            if (dual.circuit.dart_origin(x) != f)
                fail_internal("dual dart origin mismatch at face " + ls.faces[f].id);
            dual.rotation.order[f].push_back(x);
        }

    dual.loops = trace_faces(dual.circuit, dual.rotation);
    if (dual.loops.genus != 0 || dual.loops.faces.size() != c.vertices.size())
        fail_internal("dual embedding is not the expected sphere embedding");

    // Each dual face is the orbit of the darts leaving one primal vertex.
    dual.map.vertex_to_loop.assign(c.vertices.size(), 0);
    dual.map.loop_to_vertex.assign(dual.loops.faces.size(), 0);
    std::vector<bool> seen_vertex(c.vertices.size(), false);
    for (std::size_t j = 0; j < dual.loops.faces.size(); ++j) {
        std::optional<std::size_t> vertex;
        for (const Dart& x : dual.loops.faces[j].darts) {
            const std::size_t v = c.dart_origin(dual_dart(x));
            if (!vertex) vertex = v;
            if (*vertex != v)
                fail_internal("dual face " + dual.loops.faces[j].id +
                              " does not surround a single primal vertex");
        }
        if (!vertex || seen_vertex[*vertex]) fail_internal("dual faces do not match vertices");
        seen_vertex[*vertex] = true;
        dual.map.loop_to_vertex[j] = *vertex;
        dual.map.vertex_to_loop[*vertex] = j;
    }

    // The dual orientation matrix must be the transported primal incidence.
    const RationalMatrix b_dual = orientation_matrix(dual.circuit, dual.loops);
    for (std::size_t j = 0; j < dual.loops.size(); ++j)
        for (std::size_t e = 0; e < c.edges.size(); ++e)
            if (b_dual.at(j, e) != a.at(e, dual.map.loop_to_vertex[j]))
                fail_internal("dual orientation matrix does not transpose the incidence matrix");
    return dual;
}

bool dual_connection_check(const RationalMatrix& m, const RationalMatrix& m_dual,
                           const DualMap& dm) {
    if (m_dual.rows() != m.cols() || m_dual.cols() != m.rows()) return false;
    if (dm.vertex_to_loop.size() != m.cols()) return false;
    for (std::size_t l = 0; l < m.rows(); ++l)
        for (std::size_t v = 0; v < m.cols(); ++v)
            if (m_dual.at(dm.vertex_to_loop[v], l) != -m.at(l, v)) return false;
    return true;
}

HamiltonianExpr hamiltonian_dual(const HamiltonianExpr& h) {
    HamiltonianExpr out;
    out.quadratic_Q = h.quadratic_Phi;
    out.quadratic_Phi = h.quadratic_Q;
    out.constant = h.constant;
    for (const CosineTerm& term : h.cosine_terms) {
        CosineTerm dual_term = term;
        dual_term.charge_space = !term.charge_space;
        if (term.charge_space)
            for (auto& x : dual_term.argument) x = -x;
        canonicalize_argument(dual_term.argument);
        out.cosine_terms.push_back(std::move(dual_term));
    }
    return out;
}

bool is_self_dual(const HamiltonianExpr& h) { return expressions_equal(h, hamiltonian_dual(h)); }

VariableChoice dual_variable_choice(const ReducedSystem& primal, const DualMap& dm,
                                    const ReducedSystem& dual_system) {
    const std::size_t n = primal.pair_count;
    if (dual_system.pair_count != n)
        fail_internal("primal and dual systems have different degree-of-freedom counts");

    // The requested reconstruction targets are gauge- and drop-equivalent to
    // vectors on the dual elimination slice; solve for the slice component.
    auto slice_coordinates = [&](const RationalMatrix& embed, bool charge_side,
                                 const RationalMatrix& targets) {
        std::vector<std::size_t> absent_pivots;
        for (const Elimination& rec : dual_system.eliminations)
            if (rec.charge_side == charge_side && rec.fixed_by == Elimination::FixedBy::absent)
                absent_pivots.push_back(rec.index);
        const std::size_t dim = embed.rows();
        RationalMatrix stacked(dim, n + 1 + absent_pivots.size());
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t k = 0; k < n; ++k) stacked.at(r, k) = embed.at(r, k);
        for (std::size_t r = 0; r < dim; ++r) stacked.at(r, n) = 1;
        for (std::size_t p = 0; p < absent_pivots.size(); ++p)
            stacked.at(absent_pivots[p], n + 1 + p) = 1;

        RationalMatrix coords(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            auto sol = solve_affine(stacked, targets.col(i));
            if (!sol)
                fail_internal("transported reconstruction leaves the dual constraint surface");
            for (std::size_t k = 0; k < n; ++k) coords.at(k, i) = sol->particular[k];
        }
        return coords;
    };

    RationalMatrix charge_targets(dual_system.embed_charge.rows(), n);
    for (std::size_t j = 0; j < charge_targets.rows(); ++j)
        for (std::size_t i = 0; i < n; ++i)
            charge_targets.at(j, i) = primal.flux_reconstruction.at(dm.loop_to_vertex[j], i);
    RationalMatrix flux_targets(dual_system.embed_flux.rows(), n);
    for (std::size_t l = 0; l < flux_targets.rows(); ++l)
        for (std::size_t i = 0; i < n; ++i)
            flux_targets.at(l, i) = -primal.charge_reconstruction.at(l, i);

    const RationalMatrix zq = slice_coordinates(dual_system.embed_charge, true, charge_targets);
    const RationalMatrix zphi = slice_coordinates(dual_system.embed_flux, false, flux_targets);
    const auto d_rows = inverse(zq);
    const auto s_rows = inverse(zphi);
    if (!d_rows || !s_rows) fail_internal("transported reconstruction is degenerate");

    VariableChoice choice;
    for (std::size_t i = 0; i < n; ++i) {
        RationalVector drow(dual_system.embed_charge.rows(), Rational(0));
        RationalVector srow(dual_system.embed_flux.rows(), Rational(0));
        for (std::size_t k = 0; k < n; ++k) {
            drow[dual_system.charge_survivors[k]] = d_rows->at(i, k);
            srow[dual_system.flux_survivors[k]] = s_rows->at(i, k);
        }
        choice.charge_rows.push_back(std::move(drow));
        choice.flux_rows.push_back(std::move(srow));
    }
    return choice;
}

PlanarizabilityReport planarizability_report(const Circuit& c, const LoopSet& ls,
                                             const NullClassification& nc) {
    PlanarizabilityReport report;
    report.effectively_planar = true;
    for (const LoopWalk& loop : ls.topological) {
        TopologicalLoopStatus status;
        status.loop_id = loop.id;
        bool any_capacitive = false, any_inductive = false;
        for (const Dart& d : loop.darts)
            (is_capacitive(c.edges[d.edge].kind) ? any_capacitive : any_inductive) = true;
        status.homogeneous = !(any_capacitive && any_inductive);
        status.element_class = status.homogeneous ? (any_capacitive ? "capacitive" : "inductive")
                                                  : "mixed";
        for (const auto* family : {&nc.capacitive_loops, &nc.inductive_loops})
            for (const NullVector& nv : *family)
                if (nv.matches_loop && *nv.matches_loop == loop.id)
                    status.matched_null_vector = nv.description;
        report.effectively_planar = report.effectively_planar && status.homogeneous;
        report.loops.push_back(std::move(status));
    }
    return report;
}

} // namespace fluxcharge
