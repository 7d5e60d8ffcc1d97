#pragma once

#include "fluxcharge/analysis.hpp"

#include <string>

namespace fluxcharge {

/// Machine-readable analysis report: labeled exact matrices, the null
/// classification, elimination records, canonical pair definitions, the
/// Hamiltonian, and the commutation-relation statement. Rationals render as
/// "p/q" strings, losslessly.
std::string report_json(const AnalysisResult& result);

/// Human-readable report with aligned matrices and the Hamiltonian written
/// out term by term.
std::string report_text(const AnalysisResult& result);

/// Render a linear combination of labeled variables, e.g. "1/3 q_l1 - q_l2";
/// all-zero combinations render as "0".
std::string linear_combination(const RationalVector& coefficients,
                               const std::vector<std::string>& labels);

/// One-line rendering of the reduced Hamiltonian ("H = ...").
std::string hamiltonian_line(const HamiltonianExpr& h);

} // namespace fluxcharge
