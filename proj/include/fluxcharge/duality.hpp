#pragma once

#include "fluxcharge/circuit.hpp"
#include "fluxcharge/reduction.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fluxcharge {

/// Correspondence between a planar embedded circuit and its constructed
/// dual: faces become vertices, vertices become faces, edges cross their
/// counterparts with the element class swapped.
struct DualMap {
    /// Dual loop (face) index -> primal vertex index.
    std::vector<std::size_t> loop_to_vertex;
    /// Primal vertex index -> dual loop (face) index.
    std::vector<std::size_t> vertex_to_loop;
    /// Per-edge orientation sign relating the dual incidence row to the
    /// primal orientation column (always +1 with the left-face/right-face
    /// direction rule; recorded after verification).
    std::vector<int> edge_sign;
};

/// A constructed dual circuit together with its rotation system, traced
/// faces, and the index correspondence back to the primal circuit. Dual
/// vertex ids are the primal face ids; edge ids are preserved.
struct DualCircuit {
    Circuit circuit;
    RotationSystem rotation;
    LoopSet loops;
    DualMap map;
};

/// Construct the dual of a genus-zero embedded circuit. Each dual edge runs
/// from the dual of the face left of the primal edge to the dual of the face
/// on its right; element classes swap (capacitor <-> inductor, Josephson
/// junction <-> phase slip) and parameters carry over verbatim, so every
/// branch energy is transported unchanged. Fails with an unsupported-structure
/// error when some edge does not separate exactly two loops (a bridge, or any
/// positive-genus embedding): the transposed orientation matrix is then not a
/// valid incidence matrix.
DualCircuit dual_circuit(const Circuit& c, const LoopSet& ls, const RationalMatrix& a,
                         const RationalMatrix& b);

/// Exact check that the dual connection matrix is minus the transpose of the
/// primal one under the DualMap correspondence.
bool dual_connection_check(const RationalMatrix& m, const RationalMatrix& m_dual,
                           const DualMap& dm);

/// Swap charge and flux in a reduced Hamiltonian: quadratic forms exchange,
/// cosine terms change variable space, and the sign picked up by a
/// charge-space argument is absorbed into the canonical form (cosine is
/// even). Applying the transformation twice returns the original expression
/// exactly, provided the cosine arguments are in canonical sign form (first
/// nonzero coefficient positive), as produced by the reduction.
HamiltonianExpr hamiltonian_dual(const HamiltonianExpr& h);

/// True when the Hamiltonian equals its own dual exactly, coefficient by
/// coefficient.
bool is_self_dual(const HamiltonianExpr& h);

/// Variable choice for the analyzed dual circuit that realizes the duality
/// transformation on phase space: the dual system's canonical variables
/// become Q*_i = -Phi_i and Phi*_i = Q_i in terms of the primal ones, so the
/// dual circuit's Hamiltonian reproduces hamiltonian_dual of the primal
/// expression. `dual_system` is the dual circuit's reduction under default
/// options (its elimination slice is reused; only the variable combinations
/// change).
VariableChoice dual_variable_choice(const ReducedSystem& primal, const DualMap& dm,
                                    const ReducedSystem& dual_system);

/// Homogeneity status of one topological loop: the element class of its
/// edges ("capacitive", "inductive", or "mixed") and, when some classified
/// null direction coincides with the loop, that direction's description.
struct TopologicalLoopStatus {
    std::string loop_id;
    std::string element_class;
    bool homogeneous = false;
    std::optional<std::string> matched_null_vector;
};

/// Obstruction diagnosis for nonplanar embeddings: a circuit with positive
/// genus can still be treated as effectively planar when every topological
/// loop is homogeneous, because each such loop charge is non-dynamical
/// (constrained for capacitive loops, absent for inductive ones). Planar
/// circuits yield an empty report with the flag set.
struct PlanarizabilityReport {
    std::vector<TopologicalLoopStatus> loops;
    bool effectively_planar = true;
};

PlanarizabilityReport planarizability_report(const Circuit& c, const LoopSet& ls,
                                             const NullClassification& nc);

} // namespace fluxcharge
