#pragma once

#include "fluxcharge/matrix.hpp"
#include "fluxcharge/netlist.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace fluxcharge {

enum class ElementKind { capacitor, inductor, josephson, phase_slip };

/// Capacitor-like elements store energy as a function of branch charge;
/// inductor-like elements as a function of branch flux.
[[nodiscard]] bool is_capacitive(ElementKind kind);
/// Quadratic elements (capacitor, inductor) versus cosine elements
/// (phase_slip, josephson).
[[nodiscard]] bool is_quadratic(ElementKind kind);

std::string kind_name(ElementKind kind);

struct CircuitEdge {
    std::string id;
    std::size_t tail = 0;
    std::size_t head = 0;
    ElementKind kind = ElementKind::capacitor;
    Rational parameter;
};

/// A dart is a directed half-edge: the forward dart runs tail -> head.
struct Dart {
    std::size_t edge = 0;
    bool forward = true;

    [[nodiscard]] Dart twin() const { return {edge, !forward}; }
    [[nodiscard]] std::size_t index() const { return edge * 2 + (forward ? 0 : 1); }
    static Dart from_index(std::size_t i) { return {i / 2, (i % 2) == 0}; }

    friend bool operator==(const Dart&, const Dart&) = default;
};

/// Connected multigraph of two-terminal elements (self-loops excluded).
struct Circuit {
    std::vector<std::string> vertices;
    std::vector<CircuitEdge> edges;

    [[nodiscard]] std::size_t vertex_index(const std::string& id) const;
    [[nodiscard]] std::size_t edge_index(const std::string& id) const;
    [[nodiscard]] std::size_t dart_origin(Dart d) const {
        return d.forward ? edges[d.edge].tail : edges[d.edge].head;
    }
};

/// Combinatorial embedding: for every vertex, the cyclic order of outgoing
/// darts. Face tracing follows next = rotation-successor of the twin.
struct RotationSystem {
    std::vector<std::vector<Dart>> order; ///< indexed by vertex

    [[nodiscard]] Dart successor(const Circuit& c, Dart d) const;
};

/// A closed walk in the circuit, stored as the sequence of darts traversed.
struct LoopWalk {
    std::string id;
    std::vector<Dart> darts;
};

/// Faces of the embedding plus (for genus > 0) the extra topological loops
/// completing the cycle space.
struct LoopSet {
    std::vector<LoopWalk> faces;
    std::vector<LoopWalk> topological;
    std::size_t genus = 0;

    [[nodiscard]] std::size_t size() const { return faces.size() + topological.size(); }
    [[nodiscard]] const LoopWalk& loop(std::size_t l) const {
        return l < faces.size() ? faces[l] : topological[l - faces.size()];
    }
    [[nodiscard]] std::vector<std::string> labels() const;
};

/// Validate a parsed netlist and build the circuit + rotation system.
/// Throws CircuitError(validation) for: duplicate ids, unknown vertex or
/// edge references, self-loops, nonpositive element parameters,
/// disconnected graphs, and incomplete/inconsistent rotation lists.
struct EmbeddedCircuit {
    Circuit circuit;
    RotationSystem rotation;
};
EmbeddedCircuit build_circuit(const NetlistDocument& doc);

/// Trace the orbits of (twin then rotation-successor) to enumerate faces and
/// derive the genus from the Euler characteristic. Face ids are "l1", "l2",
/// ... in deterministic trace order (ascending dart index of the first dart).
LoopSet trace_faces(const Circuit& c, const RotationSystem& rot);

/// Complete the face span to the full cycle space with 2*genus fundamental
/// cycles (empty list at genus zero). Deterministic: BFS spanning tree over
/// edges in index order, candidate fundamental cycles in non-tree edge
/// order, kept when independent from the face span over GF(2).
std::vector<LoopWalk> topological_loops(const Circuit& c, const LoopSet& faces);

/// Edge-vertex incidence: +1 where the edge arrives, -1 where it leaves.
/// Rows are edges, columns vertices.
RationalMatrix incidence_matrix(const Circuit& c);

/// Loop-edge orientation: +1 / -1 when the loop traverses the edge with /
/// against its direction; 0 when untouched or traversed twice in opposite
/// senses. Rows are loops (faces then topological), columns edges.
RationalMatrix orientation_matrix(const Circuit& c, const LoopSet& loops);

/// Connected components of the subgraph keeping only edges selected by
/// `keep` (size |E|); every vertex appears. Returns per-vertex component ids
/// numbered 0.. in order of first appearance.
std::vector<std::size_t> subgraph_components(const Circuit& c, const std::vector<bool>& keep);

/// Cycle basis of the subgraph keeping only selected edges, as closed walks
/// (one fundamental cycle per non-forest edge, deterministic order).
std::vector<std::vector<Dart>> subgraph_cycle_basis(const Circuit& c, const std::vector<bool>& keep);

/// True when the two closed walks are equal up to a cyclic rotation of the
/// starting dart (same direction of travel).
bool walks_cyclically_equal(const std::vector<Dart>& a, const std::vector<Dart>& b);

/// Rebuild a serializable netlist document from an in-memory circuit and its
/// rotation system, optionally recording the loop set (faces and, when the
/// genus is positive, topological loops).
NetlistDocument document_from_circuit(const Circuit& c, const RotationSystem& rot,
                                      const LoopSet* loops = nullptr);

} // namespace fluxcharge
