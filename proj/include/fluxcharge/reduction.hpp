#pragma once

#include "fluxcharge/circuit.hpp"
#include "fluxcharge/linalg.hpp"
#include "fluxcharge/matrix.hpp"
#include "fluxcharge/netlist.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fluxcharge {

/// One constitutive energy term. Quadratic terms are E(x) = x²/(2·parameter)
/// (coefficient = 1/(2·parameter)); cosine terms are E(x) = −coefficient·cos(x)
/// with coefficient = parameter. The argument is an exact linear combination:
/// branch charge Σ_l B_{le} q_l for capacitive-class edges (over loops),
/// branch flux Σ_v A_{ev} φ_v for inductive-class edges (over vertices).
struct EnergyTerm {
    enum class Form { quadratic, cosine };
    Form form = Form::quadratic;
    std::string edge_id;
    bool charge_argument = true;
    Rational coefficient;
    Rational parameter;
    RationalVector argument;
};

/// The full circuit Lagrangian q^T M φ̇ − Σ_e E_e, with the connection matrix
/// M computed from both one-sided forms (capacitive and inductive) and
/// compared exactly.
struct SymmetricLagrangian {
    RationalMatrix incidence;   ///< A: rows edges, cols vertices
    RationalMatrix orientation; ///< B: rows loops, cols edges
    RationalMatrix connection;  ///< M: rows loops, cols vertices
    std::vector<std::string> loop_charge_vars; ///< "q_l1", ...
    std::vector<std::string> node_flux_vars;   ///< "phi_v1", ...
    std::vector<EnergyTerm> energy_terms;      ///< one per edge, edge order
};

/// A left (loop-space) or right (vertex-space) null vector of M together
/// with the combinatorial object it came from.
struct NullVector {
    RationalVector vector;
    std::string description;            ///< "cycle(e3,e4,e5)" or "cut{v2}"
    std::vector<std::size_t> edges;     ///< loops: cycle edges; cuts: crossing edges
    std::vector<std::size_t> vertices;  ///< cuts: the vertex subset
    std::optional<std::string> matches_loop; ///< loop id when the cycle equals a traced loop
};

/// Null vectors of M sorted by the element class that produced them.
/// Capacitive loops and inductive cuts generate stationarity constraints;
/// inductive loops and capacitive cuts are absent from the Lagrangian and
/// their variables drop. The two gauge vectors always annihilate M.
struct NullClassification {
    std::vector<NullVector> capacitive_loops; ///< Δ_C: cycles of the capacitive subgraph
    std::vector<NullVector> inductive_loops;  ///< Δ_I: cycles of the inductive subgraph
    std::vector<NullVector> inductive_cuts;   ///< Γ_I: capacitive-subgraph components
    std::vector<NullVector> capacitive_cuts;  ///< Γ_C: inductive-subgraph components
    RationalVector gauge_left;                ///< face-sum vector (loop space)
    RationalVector gauge_right;               ///< all-ones vector (vertex space)
};

/// Record of one eliminated variable: its value on the reduction slice as an
/// exact combination of the surviving variables of the same side (all-zero
/// for gauge and absent variables).
struct Elimination {
    enum class FixedBy { gauge, constraint, absent };
    bool charge_side = true;
    std::string variable;      ///< "q_l3" or "phi_v2"
    std::size_t index = 0;     ///< loop or vertex index
    FixedBy fixed_by = FixedBy::gauge;
    RationalVector expression; ///< full-space vector supported on survivors
    std::string source;        ///< description of the generating null vector
};

/// A cosine energy term rewritten in canonical variables. The argument sign
/// is canonicalized (first nonzero coefficient positive; cos is even).
struct CosineTerm {
    Rational coefficient;
    bool charge_space = true;  ///< argument over Q (true) or Φ (false)
    RationalVector argument;   ///< length N
    std::string edge_id;
};

/// H = ½ Q^T K_Q Q + ½ Φ^T K_Φ Φ + Σ (−coeff·cos(arg)) + constant.
struct HamiltonianExpr {
    RationalMatrix quadratic_Q;   ///< K_Q, symmetric N×N
    RationalMatrix quadratic_Phi; ///< K_Φ, symmetric N×N
    std::vector<CosineTerm> cosine_terms;
    Rational constant;

    [[nodiscard]] std::size_t size() const { return quadratic_Q.rows(); }
};

/// Exact structural equality of two Hamiltonian expressions (cosine terms
/// compared as multisets; provenance edge ids ignored).
[[nodiscard]] bool expressions_equal(const HamiltonianExpr& a, const HamiltonianExpr& b);

/// Deterministic choices of the reduction. The defaults fix the last face /
/// last vertex as gauge references and eliminate the highest-indexed
/// participating variable; the alternates exist to test canonical
/// invariance across pivot orderings.
struct ReductionOptions {
    bool reference_last = true;
    bool eliminate_highest = true;
};

/// Data for reconstructing capacitive branch-flux velocities: the reduced
/// description leaves one free velocity per capacitive cut, fixed at
/// check time from the constitutive law on a pivot branch per cut.
struct CutCompletion {
    RationalMatrix cut_indicators;        ///< V×K, columns = Γ_C indicators
    RationalMatrix crossing;              ///< A · cut_indicators (E×K)
    std::vector<std::size_t> pivot_edges; ///< K branch indices, deterministic
    RationalMatrix pivot_inverse;         ///< exact inverse of the K×K pivot block
};

/// Output of constraint resolution: N canonical pairs, the slice embeddings
/// and reconstructions, all elimination records, and the reduced Hamiltonian.
struct ReducedSystem {
    std::size_t pair_count = 0; ///< N = rank(M)

    std::vector<std::size_t> charge_survivors; ///< loop indices, ascending
    std::vector<std::size_t> flux_survivors;   ///< vertex indices, ascending

    RationalMatrix Q_defs;   ///< D (N×|𝓛|): Q = D q
    RationalMatrix Phi_defs; ///< S (N×|𝓥|): Φ = S φ

    RationalMatrix reduced_connection;     ///< M' = E_q^T M E_φ (N×N, invertible)
    RationalMatrix embed_charge;           ///< E_q (|𝓛|×N): slice from survivors
    RationalMatrix embed_flux;             ///< E_φ (|𝓥|×N)
    RationalMatrix charge_reconstruction;  ///< R_q = E_q·(D·E_q)⁻¹: q = R_q Q
    RationalMatrix flux_reconstruction;    ///< R_φ = E_φ·(S·E_φ)⁻¹: φ = R_φ Φ

    std::vector<Elimination> eliminations;
    std::vector<EnergyTerm> energy_terms; ///< copied from the Lagrangian
    RationalMatrix orientation;           ///< B, carried for branch reconstruction checks
    std::optional<CutCompletion> completion;

    HamiltonianExpr hamiltonian_expr;

    std::string poisson_bracket = "{Phi_j, Q_i} = delta_ij";
    std::string commutator = "[Phi_j, Q_i] = i hbar delta_ij";

    [[nodiscard]] std::vector<std::string> charge_labels() const; ///< "Q1", ...
    [[nodiscard]] std::vector<std::string> flux_labels() const;   ///< "Phi1", ...
};

/// M_{lv} = ½ Σ_{e∈𝓒} B_{le}A_{ev} − ½ Σ_{e∈𝓘} B_{le}A_{ev}. The two
/// one-sided forms are computed independently and must agree exactly (they
/// do whenever B·A = 0); disagreement signals a bad A or B.
RationalMatrix connection_matrix(const RationalMatrix& a, const RationalMatrix& b,
                                 const std::vector<ElementKind>& classes);

/// Cycle bases of the capacitive-only and inductive-only subgraphs, lifted
/// to loop space: each cycle's signed edge vector χ is solved as B^T ψ = χ
/// (free coordinates zero), so ψ^T B = χ^T and ψ left-annihilates M.
std::pair<std::vector<NullVector>, std::vector<NullVector>>
homogeneous_loops(const Circuit& c, const LoopSet& ls, const RationalMatrix& b);

/// Connected components of the one-class subgraphs, as vertex indicators
/// with the reference component (the one holding the last/first vertex)
/// omitted. Components of the capacitive subgraph are inductive cuts Γ_I;
/// components of the inductive subgraph are capacitive cuts Γ_C. Each
/// indicator right-annihilates M.
std::pair<std::vector<NullVector>, std::vector<NullVector>>
homogeneous_cuts(const Circuit& c, const ReductionOptions& options = {});

/// Assemble the full symmetric Lagrangian (connection matrix via both
/// one-sided forms, per-edge energy terms with exact arguments).
SymmetricLagrangian build_lagrangian(const Circuit& c, const LoopSet& ls,
                                     const RationalMatrix& a, const RationalMatrix& b);

/// Classify all null vectors of M and verify exactly that every listed
/// vector annihilates M and that the families span the two null spaces.
NullClassification classify_null_vectors(const Circuit& c, const LoopSet& ls,
                                         const RationalMatrix& b, const RationalMatrix& m,
                                         const ReductionOptions& options = {});

/// Eliminate all non-dynamical variables: fix the two gauge references,
/// solve the capacitive-loop and inductive-cut stationarity constraints,
/// drop absent variables, and build the canonical pairs. The default
/// variables are Q = M'^T q (survivors), Φ = surviving fluxes; a
/// user-supplied variable choice (D, S) is validated against
/// D'^T·S' = M' and used instead when given.
/// Throws unsupported-constraint errors when a capacitive loop contains a
/// phase-slip element or an inductive cut crosses a Josephson element.
ReducedSystem resolve_constraints(const Circuit& c, const SymmetricLagrangian& lag,
                                  const NullClassification& nc,
                                  const ReductionOptions& options = {},
                                  const VariableChoice* user_choice = nullptr);

/// Rewrite all energy terms in canonical variables: K_Q from capacitive
/// quadratic branches, K_Φ from inductive quadratic branches, cosine terms
/// transported with canonicalized argument signs.
HamiltonianExpr hamiltonian(const ReducedSystem& rs);

/// N = rank(M); for planar circuits additionally asserts the counting
/// identity rank(M) = |𝓥|−|Γ_I|−|Γ_C|−1 = |𝓕|−|Δ_I|−|Δ_C|−1.
std::size_t dof_count(const RationalMatrix& m, const LoopSet& ls, const NullClassification& nc);

} // namespace fluxcharge
