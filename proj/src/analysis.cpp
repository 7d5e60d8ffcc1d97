#include "fluxcharge/analysis.hpp"

#include "fluxcharge/errors.hpp"

#include <algorithm>
#include <set>

namespace fluxcharge {

namespace {

[[noreturn]] void fail(const std::string& message) {
    throw CircuitError(ErrorKind::validation, "analysis: " + message);
}

std::vector<Dart> resolve_walk(const Circuit& c, const NamedWalk& named) {
    if (named.walk.empty()) fail("loop \"" + named.id + "\" has an empty walk");
    std::vector<Dart> darts;
    for (const WalkStep& step : named.walk)
        darts.push_back(Dart{c.edge_index(step.edge), step.forward});
    for (std::size_t i = 0; i < darts.size(); ++i) {
        const Dart& here = darts[i];
        const Dart& next = darts[(i + 1) % darts.size()];
        if (c.dart_origin(here.twin()) != c.dart_origin(next))
            fail("loop \"" + named.id + "\" is not a closed walk: edge \"" +
                 c.edges[here.edge].id + "\" does not meet edge \"" + c.edges[next.edge].id +
                 "\"");
    }
    return darts;
}

std::vector<bool> walk_parity(std::size_t nedges, const std::vector<Dart>& darts) {
    std::vector<bool> parity(nedges, false);
    for (const Dart& d : darts) parity[d.edge] = !parity[d.edge];
    return parity;
}

/// Incremental GF(2) row basis used to check that declared topological
/// loops complete the face span to the whole cycle space.
struct Gf2Basis {
    std::vector<std::vector<bool>> rows;

    bool insert(std::vector<bool> row) {
        for (const auto& basis_row : rows) {
            std::size_t pivot = 0;
            while (pivot < basis_row.size() && !basis_row[pivot]) ++pivot;
            if (pivot < row.size() && row[pivot])
                for (std::size_t i = 0; i < row.size(); ++i)
                    row[i] = row[i] != basis_row[i];
        }
        if (std::none_of(row.begin(), row.end(), [](bool x) { return x; })) return false;
        rows.push_back(std::move(row));
        // Keep rows ordered by pivot so reduction stays a single pass.
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            return std::find(a.begin(), a.end(), true) - a.begin() <
                   std::find(b.begin(), b.end(), true) - b.begin();
        });
        return true;
    }
};

} // namespace

LoopSet resolve_loops(const NetlistDocument& doc, const EmbeddedCircuit& embedded) {
    const Circuit& c = embedded.circuit;
    LoopSet loops = trace_faces(c, embedded.rotation);
    if (doc.faces) {
        if (doc.faces->size() != loops.faces.size())
            fail("the document declares " + std::to_string(doc.faces->size()) +
                 " faces but the embedding has " + std::to_string(loops.faces.size()));
        // Each declared walk must be one traced boundary (up to the starting
        // dart), each claimed once; the declared order becomes the loop order.
        std::vector<LoopWalk> reordered;
        std::vector<bool> claimed(loops.faces.size(), false);
        for (const NamedWalk& named : *doc.faces) {
            const std::vector<Dart> darts = resolve_walk(c, named);
            std::size_t match = loops.faces.size();
            for (std::size_t t = 0; t < loops.faces.size(); ++t)
                if (!claimed[t] && walks_cyclically_equal(darts, loops.faces[t].darts)) {
                    match = t;
                    break;
                }
            if (match == loops.faces.size())
                fail("declared face \"" + named.id +
                     "\" does not match the boundary walk of any remaining traced face");
            claimed[match] = true;
            reordered.push_back(loops.faces[match]);
            reordered.back().id = named.id;
        }
        loops.faces = std::move(reordered);
    }

    if (doc.topological_loops) {
        if (doc.topological_loops->size() != 2 * loops.genus)
            fail("the document declares " + std::to_string(doc.topological_loops->size()) +
                 " topological loops but the embedding has genus " +
                 std::to_string(loops.genus));
        Gf2Basis basis;
        for (const LoopWalk& face : loops.faces)
            basis.insert(walk_parity(c.edges.size(), face.darts));
        loops.topological.clear();
        for (const NamedWalk& named : *doc.topological_loops) {
            LoopWalk loop;
            loop.id = named.id;
            loop.darts = resolve_walk(c, named);
            if (!basis.insert(walk_parity(c.edges.size(), loop.darts)))
                fail("declared topological loop \"" + named.id +
                     "\" is dependent on the faces and preceding loops");
            loops.topological.push_back(std::move(loop));
        }
    } else {
        loops.topological = topological_loops(c, loops);
    }

    std::set<std::string> loop_ids;
    for (std::size_t l = 0; l < loops.size(); ++l)
        if (!loop_ids.insert(loops.loop(l).id).second)
            fail("duplicate loop id \"" + loops.loop(l).id + "\"");
    return loops;
}

AnalysisResult analyze_circuit(const NetlistDocument& doc, const AnalyzeOptions& options) {
    AnalysisResult result;
    result.document = doc;
    result.embedded = build_circuit(doc);
    const Circuit& c = result.embedded.circuit;
    result.loops = resolve_loops(doc, result.embedded);

    const RationalMatrix a = incidence_matrix(c);
    const RationalMatrix b = orientation_matrix(c, result.loops);
    result.lagrangian = build_lagrangian(c, result.loops, a, b);
    result.classification =
        classify_null_vectors(c, result.loops, b, result.lagrangian.connection, options.reduction);
    const VariableChoice* choice = nullptr;
    if (options.use_variable_choice && doc.variable_choice) choice = &*doc.variable_choice;
    result.reduced = resolve_constraints(c, result.lagrangian, result.classification,
                                         options.reduction, choice);
    return result;
}

} // namespace fluxcharge
