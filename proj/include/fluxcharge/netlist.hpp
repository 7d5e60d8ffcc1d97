#pragma once

#include "fluxcharge/matrix.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fluxcharge {

inline constexpr const char* kNetlistVersion = "fluxcharge/1";

/// One end of an edge, as referenced from a vertex's rotation list.
struct EdgeEndRef {
    std::string edge;
    bool at_head = false; ///< false = tail end, true = head end
    /// True when the netlist used the shorthand string form (just the id).
    bool shorthand = false;

    friend bool operator==(const EdgeEndRef&, const EdgeEndRef&) = default;
};

struct NetlistEdge {
    std::string id;
    std::string from;
    std::string to;
    std::string kind; ///< "capacitor" | "inductor" | "josephson" | "phase_slip"
    Rational parameter;

    friend bool operator==(const NetlistEdge&, const NetlistEdge&) = default;
};

struct VertexRotation {
    std::string vertex;
    std::vector<EdgeEndRef> order;

    friend bool operator==(const VertexRotation&, const VertexRotation&) = default;
};

/// A signed edge reference inside a loop walk: "e3" forward, "-e3" backward.
struct WalkStep {
    std::string edge;
    bool forward = true;

    friend bool operator==(const WalkStep&, const WalkStep&) = default;
};

struct NamedWalk {
    std::string id;
    std::vector<WalkStep> walk;

    friend bool operator==(const NamedWalk&, const NamedWalk&) = default;
};

/// Optional user-chosen canonical variables: Q rows over the loop basis,
/// Phi rows over the vertex basis.
struct VariableChoice {
    std::vector<RationalVector> charge_rows;
    std::vector<RationalVector> flux_rows;

    friend bool operator==(const VariableChoice&, const VariableChoice&) = default;
};

/// In-memory form of a versioned netlist document.
struct NetlistDocument {
    std::string version = kNetlistVersion;
    std::vector<std::string> vertices;
    std::vector<NetlistEdge> edges;
    std::vector<VertexRotation> embedding;
    std::optional<std::vector<NamedWalk>> faces;
    std::optional<std::vector<NamedWalk>> topological_loops;
    std::optional<VariableChoice> variable_choice;

    friend bool operator==(const NetlistDocument&, const NetlistDocument&) = default;
};

/// Parse a JSON netlist. Throws CircuitError(parse) with a position-annotated
/// message on syntax errors, and CircuitError(parse) naming the offending id
/// on schema/reference errors.
NetlistDocument parse_netlist(const std::string& text);

/// Deterministic serialization: stable key order, canonical "p/q" rationals.
/// parse(serialize(doc)) == doc and serialize is idempotent across the pair.
std::string serialize_netlist(const NetlistDocument& doc);

} // namespace fluxcharge
