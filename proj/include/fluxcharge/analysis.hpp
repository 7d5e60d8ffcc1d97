#pragma once

#include "fluxcharge/circuit.hpp"
#include "fluxcharge/reduction.hpp"

namespace fluxcharge {

struct AnalyzeOptions {
    ReductionOptions reduction;
    /// Honor the document's variable_choice block when present; with false
    /// the default canonical pairs are produced regardless.
    bool use_variable_choice = true;
};

/// Everything derived from one netlist: the embedded circuit, its loop set,
/// the symmetric Lagrangian data, the classified null directions, and the
/// reduced canonical system with its Hamiltonian.
struct AnalysisResult {
    NetlistDocument document;
    EmbeddedCircuit embedded;
    LoopSet loops;
    SymmetricLagrangian lagrangian;
    NullClassification classification;
    ReducedSystem reduced;
};

/// Trace the loop set of an embedded circuit and reconcile it with the
/// document. Declared faces, if any, are verified against the traced ones
/// (same boundary walk at each position, up to the starting dart) and their
/// ids adopted; declared topological loops are verified to be closed walks
/// completing the face span to the full cycle space and then replace the
/// generated ones.
LoopSet resolve_loops(const NetlistDocument& doc, const EmbeddedCircuit& embedded);

/// Run the full pipeline on a parsed netlist.
AnalysisResult analyze_circuit(const NetlistDocument& doc, const AnalyzeOptions& options = {});

} // namespace fluxcharge
