#include "fluxcharge/reduction.hpp"

#include "fluxcharge/errors.hpp"

#include <algorithm>
#include <sstream>

namespace fluxcharge {

namespace {

[[noreturn]] void fail_internal(const std::string& message) {
    throw CircuitError(ErrorKind::internal, "reduction: " + message);
}

void axpy(RationalVector& y, const Rational& a, const RationalVector& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

RationalVector unit_vector(std::size_t dim, std::size_t j) {
    RationalVector v(dim, Rational(0));
    v[j] = 1;
    return v;
}

bool is_zero_vector(const RationalVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

/// Signed edge vector of a closed dart walk.
RationalVector walk_chi(std::size_t nedges, const std::vector<Dart>& walk) {
    RationalVector chi(nedges, Rational(0));
    for (const Dart& d : walk) chi[d.edge] += d.forward ? 1 : -1;
    return chi;
}

std::string cycle_description(const Circuit& c, const std::vector<Dart>& walk) {
    std::string out = "cycle(";
    for (std::size_t i = 0; i < walk.size(); ++i) {
        if (i) out += ",";
        out += c.edges[walk[i].edge].id;
    }
    return out + ")";
}

std::string cut_description(const Circuit& c, const std::vector<std::size_t>& verts) {
    std::string out = "cut{";
    for (std::size_t i = 0; i < verts.size(); ++i) {
        if (i) out += ",";
        out += c.vertices[verts[i]];
    }
    return out + "}";
}

/// Lift a cycle's edge vector into loop space: B^T ψ = χ, free coordinates
/// zero. The lift exists because χ lies in the cycle space (the row space
/// of B) and is unique up to the face-sum gauge vector.
RationalVector lift_cycle(const RationalMatrix& b, const RationalVector& chi) {
    auto sol = solve_affine(b.transposed(), chi);
    if (!sol) fail_internal("cycle vector is outside the row space of B");
    return sol->particular;
}

struct PendingEntry {
    Elimination::FixedBy type = Elimination::FixedBy::gauge;
    RationalVector direction;
    std::optional<RationalVector> equation;
    std::string source;
    std::optional<std::size_t> forced_pivot;
};

struct ProcessedEntry {
    std::size_t pivot = 0;
    RationalVector direction; ///< normalized to one at the pivot
    RationalVector condition; ///< slice equation, normalized, zero at earlier pivots
    RationalVector raw_expression;
    Elimination::FixedBy type = Elimination::FixedBy::gauge;
    std::string source;
};

struct SideOutcome {
    std::vector<Elimination> records;
    std::vector<std::size_t> survivors;
    RationalMatrix embed;
};

/// Process one side's null directions in order. Every direction is first
/// reduced to vanish at already-eliminated coordinates; the pivot is then
/// the highest- (or lowest-) indexed coordinate where the direction and,
/// for constraints, the stationarity equation both participate. The
/// resulting slice system is triangular, so survivor-space expressions
/// follow by back-substitution in reverse order.
///
/// Gauge and absent directions are reduced against their own family only.
/// The slice is valid exactly when the gauge and absent directions, sampled
/// at the chosen pivots, form a nonsingular block (the stationarity
/// equations pair with the constraint directions through a positive
/// definite weighted Gram matrix and annihilate the rest, so they can never
/// spoil it). Keeping the family triangular over its own pivots guarantees
/// that block is unit triangular; mixing constraint directions in could
/// silently move a pivot to a coordinate where the family is degenerate.
/// A family pivot outside the used set always exists: a family vector
/// supported only on constraint pivots would pair to zero with every
/// reduced stationarity equation, which forces it to zero coordinate by
/// coordinate through their unit-triangular structure.
SideOutcome eliminate_side(bool charge_side, std::size_t dim, std::vector<PendingEntry> entries,
                           const std::vector<std::string>& names, const ReductionOptions& opt) {
    std::vector<ProcessedEntry> processed;
    std::vector<bool> used_pivot(dim, false);
    for (PendingEntry& entry : entries) {
        const bool family_only = entry.type != Elimination::FixedBy::constraint;
        RationalVector u = std::move(entry.direction);
        for (const ProcessedEntry& p : processed) {
            if (family_only && p.type == Elimination::FixedBy::constraint) continue;
            if (u[p.pivot] != 0) axpy(u, -u[p.pivot], p.direction);
        }

        std::optional<RationalVector> v;
        if (entry.equation) {
            v = std::move(*entry.equation);
            for (const ProcessedEntry& p : processed)
                if ((*v)[p.pivot] != 0) axpy(*v, -(*v)[p.pivot], p.condition);
        }

        std::optional<std::size_t> pivot;
        if (entry.forced_pivot) {
            if (u[*entry.forced_pivot] == 0)
                fail_internal("gauge direction misses the reference variable " +
                              names[*entry.forced_pivot]);
            pivot = *entry.forced_pivot;
        } else {
            auto pick = [&](auto&& usable) {
                for (std::size_t step = 0; step < dim; ++step) {
                    const std::size_t i = opt.eliminate_highest ? dim - 1 - step : step;
                    if (!used_pivot[i] && usable(i)) return std::optional<std::size_t>(i);
                }
                return std::optional<std::size_t>();
            };
            pivot = pick([&](std::size_t i) { return u[i] != 0 && (!v || (*v)[i] != 0); });
            if (!pivot && v) pivot = pick([&](std::size_t i) { return (*v)[i] != 0; });
            if (!pivot) fail_internal("dependent null directions on the " +
                                      std::string(charge_side ? "charge" : "flux") + " side");
        }
        const std::size_t j = *pivot;
        used_pivot[j] = true;

        ProcessedEntry p;
        p.pivot = j;
        p.type = entry.type;
        p.source = std::move(entry.source);
        if (v) {
            p.condition = std::move(*v);
            const Rational scale = Rational(1) / p.condition[j];
            for (auto& x : p.condition) x *= scale;
        } else {
            p.condition = unit_vector(dim, j);
        }
        if (u[j] != 0) {
            p.direction = std::move(u);
            const Rational scale = Rational(1) / p.direction[j];
            for (auto& x : p.direction) x *= scale;
        } else {
            p.direction = p.condition;
        }
        p.raw_expression = unit_vector(dim, j);
        axpy(p.raw_expression, Rational(-1), p.condition);
        processed.push_back(std::move(p));
    }

    std::vector<RationalVector> resolved(processed.size());
    for (std::size_t k = processed.size(); k-- > 0;) {
        RationalVector expr = processed[k].raw_expression;
        for (std::size_t m = k + 1; m < processed.size(); ++m) {
            const std::size_t jm = processed[m].pivot;
            if (expr[jm] == 0) continue;
            const Rational coef = expr[jm];
            expr[jm] = 0;
            axpy(expr, coef, resolved[m]);
        }
        resolved[k] = std::move(expr);
    }

    SideOutcome out;
    std::vector<bool> eliminated(dim, false);
    for (std::size_t k = 0; k < processed.size(); ++k) {
        Elimination rec;
        rec.charge_side = charge_side;
        rec.index = processed[k].pivot;
        rec.variable = names[rec.index];
        rec.fixed_by = processed[k].type;
        rec.expression = resolved[k];
        rec.source = processed[k].source;
        eliminated[rec.index] = true;
        out.records.push_back(std::move(rec));
    }
    for (std::size_t i = 0; i < dim; ++i)
        if (!eliminated[i]) out.survivors.push_back(i);

    out.embed = RationalMatrix(dim, out.survivors.size());
    for (std::size_t col = 0; col < out.survivors.size(); ++col) {
        out.embed.at(out.survivors[col], col) = 1;
        for (std::size_t k = 0; k < processed.size(); ++k)
            out.embed.at(processed[k].pivot, col) = resolved[k][out.survivors[col]];
    }
    return out;
}

std::size_t reference_index(const RationalVector& support_vector, bool last) {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < support_vector.size(); ++i) {
        if (support_vector[i] == 0) continue;
        if (!found || last) found = i;
        if (!last) break;
    }
    if (!found) fail_internal("empty gauge direction");
    return *found;
}

RationalMatrix matrix_from_rows(const std::vector<RationalVector>& rows, std::size_t cols,
                                const char* what) {
    for (const auto& r : rows)
        if (r.size() != cols)
            throw CircuitError(ErrorKind::validation,
                               std::string("variable_choice: ") + what + " row has length " +
                                   std::to_string(r.size()) + ", expected " + std::to_string(cols));
    return rows_to_matrix(rows, cols);
}

} // namespace

RationalMatrix connection_matrix(const RationalMatrix& a, const RationalMatrix& b,
                                 const std::vector<ElementKind>& classes) {
    if (a.rows() != b.cols() || classes.size() != a.rows())
        fail_internal("connection_matrix: inconsistent dimensions");
    const std::size_t nl = b.rows(), nv = a.cols(), ne = a.rows();
    RationalMatrix capacitive_side(nl, nv), inductive_side(nl, nv);
    for (std::size_t l = 0; l < nl; ++l)
        for (std::size_t e = 0; e < ne; ++e) {
            if (b.at(l, e) == 0) continue;
            RationalMatrix& target = is_capacitive(classes[e]) ? capacitive_side : inductive_side;
            for (std::size_t v = 0; v < nv; ++v) target.at(l, v) += b.at(l, e) * a.at(e, v);
        }
    if (!(capacitive_side == -inductive_side))
        fail_internal("the two one-sided forms of the connection matrix disagree "
                      "(B·A is nonzero: bad incidence or orientation matrix)");
    RationalMatrix m = capacitive_side;
    m.row_labels = b.row_labels;
    m.col_labels = a.col_labels;
    return m;
}

std::pair<std::vector<NullVector>, std::vector<NullVector>>
homogeneous_loops(const Circuit& c, const LoopSet& ls, const RationalMatrix& b) {
    auto collect = [&](bool capacitive) {
        std::vector<NullVector> out;
        std::vector<bool> keep(c.edges.size());
        for (std::size_t e = 0; e < c.edges.size(); ++e)
            keep[e] = is_capacitive(c.edges[e].kind) == capacitive;
        for (const auto& walk : subgraph_cycle_basis(c, keep)) {
            NullVector nv;
            nv.description = cycle_description(c, walk);
            for (const Dart& d : walk) nv.edges.push_back(d.edge);
            const RationalVector chi = walk_chi(c.edges.size(), walk);
            nv.vector = lift_cycle(b, chi);
            for (std::size_t l = 0; l < ls.size(); ++l) {
                const RationalVector row = b.row(l);
                bool same = true, negated = true;
                for (std::size_t e = 0; e < chi.size(); ++e) {
                    same = same && row[e] == chi[e];
                    negated = negated && row[e] == -chi[e];
                }
                if (same || negated) {
                    nv.matches_loop = ls.loop(l).id;
                    break;
                }
            }
            out.push_back(std::move(nv));
        }
        return out;
    };
    return {collect(true), collect(false)};
}

std::pair<std::vector<NullVector>, std::vector<NullVector>>
homogeneous_cuts(const Circuit& c, const ReductionOptions& options) {
    auto collect = [&](bool capacitive_subgraph) {
        std::vector<NullVector> out;
        std::vector<bool> keep(c.edges.size());
        for (std::size_t e = 0; e < c.edges.size(); ++e)
            keep[e] = is_capacitive(c.edges[e].kind) == capacitive_subgraph;
        const std::vector<std::size_t> comp = subgraph_components(c, keep);
        const std::size_t ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
        const std::size_t ref = comp[options.reference_last ? c.vertices.size() - 1 : 0];
        for (std::size_t k = 0; k < ncomp; ++k) {
            if (k == ref) continue;
            NullVector nv;
            nv.vector.assign(c.vertices.size(), Rational(0));
            for (std::size_t v = 0; v < c.vertices.size(); ++v)
                if (comp[v] == k) {
                    nv.vector[v] = 1;
                    nv.vertices.push_back(v);
                }
            for (std::size_t e = 0; e < c.edges.size(); ++e)
                if ((comp[c.edges[e].tail] == k) != (comp[c.edges[e].head] == k))
                    nv.edges.push_back(e);
            nv.description = cut_description(c, nv.vertices);
            out.push_back(std::move(nv));
        }
        return out;
    };
    // Components of the inductive subgraph are capacitive cuts and vice versa.
    return {collect(false), collect(true)};
}

SymmetricLagrangian build_lagrangian(const Circuit& c, const LoopSet& ls,
                                     const RationalMatrix& a, const RationalMatrix& b) {
    SymmetricLagrangian lag;
    lag.incidence = a;
    lag.orientation = b;
    std::vector<ElementKind> classes;
    for (const auto& e : c.edges) classes.push_back(e.kind);
    lag.connection = connection_matrix(a, b, classes);
    for (std::size_t l = 0; l < ls.size(); ++l) lag.loop_charge_vars.push_back("q_" + ls.loop(l).id);
    for (const auto& v : c.vertices) lag.node_flux_vars.push_back("phi_" + v);
    for (std::size_t e = 0; e < c.edges.size(); ++e) {
        EnergyTerm term;
        term.edge_id = c.edges[e].id;
        term.form = is_quadratic(c.edges[e].kind) ? EnergyTerm::Form::quadratic
                                                  : EnergyTerm::Form::cosine;
        term.charge_argument = is_capacitive(c.edges[e].kind);
        term.parameter = c.edges[e].parameter;
        term.coefficient = term.form == EnergyTerm::Form::quadratic
                               ? Rational(1) / (2 * term.parameter)
                               : term.parameter;
        term.argument = term.charge_argument ? b.col(e) : a.row(e);
        lag.energy_terms.push_back(std::move(term));
    }
    return lag;
}

NullClassification classify_null_vectors(const Circuit& c, const LoopSet& ls,
                                         const RationalMatrix& b, const RationalMatrix& m,
                                         const ReductionOptions& options) {
    NullClassification nc;
    std::tie(nc.capacitive_loops, nc.inductive_loops) = homogeneous_loops(c, ls, b);
    std::tie(nc.capacitive_cuts, nc.inductive_cuts) = homogeneous_cuts(c, options);
    nc.gauge_left.assign(ls.size(), Rational(0));
    for (std::size_t l = 0; l < ls.faces.size(); ++l) nc.gauge_left[l] = 1;
    nc.gauge_right.assign(c.vertices.size(), Rational(1));

    const std::size_t n = rank(m);
    auto verify_side = [&](bool left, const std::vector<const std::vector<NullVector>*>& families,
                           const RationalVector& gauge, std::size_t dim) {
        std::vector<RationalVector> stack{gauge};
        for (const auto* family : families)
            for (const auto& nv : *family) stack.push_back(nv.vector);
        for (const auto& v : stack) {
            RationalVector image(left ? m.cols() : m.rows(), Rational(0));
            for (std::size_t r = 0; r < m.rows(); ++r)
                for (std::size_t col = 0; col < m.cols(); ++col)
                    (left ? image[col] : image[r]) += m.at(r, col) * (left ? v[r] : v[col]);
            if (!is_zero_vector(image))
                fail_internal("classified vector does not annihilate the connection matrix");
        }
        if (stack.size() != dim - n || rank(rows_to_matrix(stack, dim)) != dim - n)
            fail_internal("classified vectors do not span the null space (found " +
                          std::to_string(stack.size()) + ", expected " +
                          std::to_string(dim - n) + ")");
    };
    verify_side(true, {&nc.capacitive_loops, &nc.inductive_loops}, nc.gauge_left, m.rows());
    verify_side(false, {&nc.inductive_cuts, &nc.capacitive_cuts}, nc.gauge_right, m.cols());
    return nc;
}

ReducedSystem resolve_constraints(const Circuit& c, const SymmetricLagrangian& lag,
                                  const NullClassification& nc, const ReductionOptions& options,
                                  const VariableChoice* user_choice) {
    const RationalMatrix& a = lag.incidence;
    const RationalMatrix& b = lag.orientation;
    const RationalMatrix& m = lag.connection;
    const std::size_t nl = m.rows(), nv = m.cols();

    std::vector<PendingEntry> charge_entries;
    {
        PendingEntry gauge;
        gauge.type = Elimination::FixedBy::gauge;
        gauge.direction = nc.gauge_left;
        gauge.forced_pivot = reference_index(nc.gauge_left, options.reference_last);
        gauge.source = "gauge";
        charge_entries.push_back(std::move(gauge));
    }
    for (const NullVector& loop : nc.capacitive_loops) {
        for (std::size_t e : loop.edges)
            if (lag.energy_terms[e].form != EnergyTerm::Form::quadratic)
                throw CircuitError(ErrorKind::unsupported,
                                   "nonlinear constraint: capacitive " + loop.description +
                                       " contains phase-slip edge \"" + c.edges[e].id + "\"");
        PendingEntry entry;
        entry.type = Elimination::FixedBy::constraint;
        entry.direction = loop.vector;
        entry.source = loop.description;
        // Stationarity of the capacitive energy along the loop direction:
        // Σ_e χ_e (B^T q)_e / C_e = 0.
        RationalVector chi(c.edges.size(), Rational(0));
        for (std::size_t e = 0; e < c.edges.size(); ++e)
            for (std::size_t l = 0; l < nl; ++l) chi[e] += b.at(l, e) * loop.vector[l];
        RationalVector eq(nl, Rational(0));
        for (std::size_t e = 0; e < c.edges.size(); ++e) {
            if (chi[e] == 0) continue;
            const Rational weight = chi[e] / lag.energy_terms[e].parameter;
            for (std::size_t l = 0; l < nl; ++l) eq[l] += b.at(l, e) * weight;
        }
        entry.equation = std::move(eq);
        charge_entries.push_back(std::move(entry));
    }
    for (const NullVector& loop : nc.inductive_loops) {
        PendingEntry entry;
        entry.type = Elimination::FixedBy::absent;
        entry.direction = loop.vector;
        entry.source = loop.description;
        charge_entries.push_back(std::move(entry));
    }

    std::vector<PendingEntry> flux_entries;
    {
        PendingEntry gauge;
        gauge.type = Elimination::FixedBy::gauge;
        gauge.direction = nc.gauge_right;
        gauge.forced_pivot = reference_index(nc.gauge_right, options.reference_last);
        gauge.source = "gauge";
        flux_entries.push_back(std::move(gauge));
    }
    for (const NullVector& cut : nc.inductive_cuts) {
        for (std::size_t e : cut.edges)
            if (lag.energy_terms[e].form != EnergyTerm::Form::quadratic)
                throw CircuitError(ErrorKind::unsupported,
                                   "nonlinear constraint: inductive " + cut.description +
                                       " crosses Josephson edge \"" + c.edges[e].id + "\"");
        PendingEntry entry;
        entry.type = Elimination::FixedBy::constraint;
        entry.direction = cut.vector;
        entry.source = cut.description;
        // Current conservation across the cut:
        // Σ_e (Aξ)_e (Aφ)_e / L_e = 0 over the crossing branches.
        RationalVector eq(nv, Rational(0));
        for (std::size_t e : cut.edges) {
            Rational crossing = 0;
            for (std::size_t v = 0; v < nv; ++v) crossing += a.at(e, v) * cut.vector[v];
            const Rational weight = crossing / lag.energy_terms[e].parameter;
            for (std::size_t v = 0; v < nv; ++v) eq[v] += a.at(e, v) * weight;
        }
        entry.equation = std::move(eq);
        flux_entries.push_back(std::move(entry));
    }
    for (const NullVector& cut : nc.capacitive_cuts) {
        PendingEntry entry;
        entry.type = Elimination::FixedBy::absent;
        entry.direction = cut.vector;
        entry.source = cut.description;
        flux_entries.push_back(std::move(entry));
    }

    SideOutcome charge = eliminate_side(true, nl, std::move(charge_entries),
                                        lag.loop_charge_vars, options);
    SideOutcome flux = eliminate_side(false, nv, std::move(flux_entries),
                                      lag.node_flux_vars, options);

    ReducedSystem rs;
    rs.pair_count = rank(m);
    if (charge.survivors.size() != rs.pair_count || flux.survivors.size() != rs.pair_count)
        fail_internal("survivor count does not match rank(M)");
    rs.charge_survivors = charge.survivors;
    rs.flux_survivors = flux.survivors;
    rs.embed_charge = charge.embed;
    rs.embed_flux = flux.embed;
    rs.eliminations = std::move(charge.records);
    for (auto& rec : flux.records) rs.eliminations.push_back(std::move(rec));
    rs.energy_terms = lag.energy_terms;
    rs.orientation = b;

    rs.reduced_connection = rs.embed_charge.transposed() * m * rs.embed_flux;
    for (std::size_t i = 0; i < rs.pair_count; ++i) {
        rs.reduced_connection.row_labels.push_back(lag.loop_charge_vars[rs.charge_survivors[i]]);
        rs.reduced_connection.col_labels.push_back(lag.node_flux_vars[rs.flux_survivors[i]]);
    }
    if (!inverse(rs.reduced_connection))
        fail_internal("reduced connection matrix is singular: invalid elimination slice");

    const std::size_t n = rs.pair_count;
    if (user_choice) {
        rs.Q_defs = matrix_from_rows(user_choice->charge_rows, nl, "Q");
        rs.Phi_defs = matrix_from_rows(user_choice->flux_rows, nv, "Phi");
        if (rs.Q_defs.rows() != n || rs.Phi_defs.rows() != n)
            throw CircuitError(ErrorKind::validation,
                               "variable_choice: expected " + std::to_string(n) +
                                   " rows for Q and Phi, got " + std::to_string(rs.Q_defs.rows()) +
                                   " and " + std::to_string(rs.Phi_defs.rows()));
    } else {
        rs.Q_defs = RationalMatrix(n, nl);
        rs.Phi_defs = RationalMatrix(n, nv);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k)
                rs.Q_defs.at(i, rs.charge_survivors[k]) = rs.reduced_connection.at(k, i);
            rs.Phi_defs.at(i, rs.flux_survivors[i]) = 1;
        }
    }
    rs.Q_defs.row_labels = rs.charge_labels();
    rs.Q_defs.col_labels = lag.loop_charge_vars;
    rs.Phi_defs.row_labels = rs.flux_labels();
    rs.Phi_defs.col_labels = lag.node_flux_vars;

    const RationalMatrix d_reduced = rs.Q_defs * rs.embed_charge;
    const RationalMatrix s_reduced = rs.Phi_defs * rs.embed_flux;
    const auto d_inv = inverse(d_reduced);
    const auto s_inv = inverse(s_reduced);
    if (!d_inv || !s_inv)
        throw CircuitError(ErrorKind::validation,
                           "variable_choice: the supplied combinations are singular on the "
                           "constraint surface");
    if (!(d_reduced.transposed() * s_reduced == rs.reduced_connection))
        throw CircuitError(ErrorKind::validation,
                           "variable_choice: D'^T·S' does not equal the reduced connection "
                           "matrix, so q^T M φ̇ ≠ Σ Q_i Φ̇_i");
    rs.charge_reconstruction = rs.embed_charge * *d_inv;
    rs.flux_reconstruction = rs.embed_flux * *s_inv;

    if (!nc.capacitive_cuts.empty()) {
        CutCompletion comp;
        const std::size_t k = nc.capacitive_cuts.size();
        comp.cut_indicators = RationalMatrix(nv, k);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t v = 0; v < nv; ++v)
                comp.cut_indicators.at(v, j) = nc.capacitive_cuts[j].vector[v];
        comp.crossing = a * comp.cut_indicators;
        comp.pivot_edges = rref(comp.crossing.transposed()).pivot_cols;
        if (comp.pivot_edges.size() != k)
            fail_internal("capacitive-cut crossing matrix is rank-deficient");
        RationalMatrix pivot_block(k, k);
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t col = 0; col < k; ++col)
                pivot_block.at(r, col) = comp.crossing.at(comp.pivot_edges[r], col);
        auto pinv = inverse(pivot_block);
        if (!pinv) fail_internal("capacitive-cut pivot block is singular");
        comp.pivot_inverse = *pinv;
        rs.completion = std::move(comp);
    }

    rs.hamiltonian_expr = hamiltonian(rs);
    return rs;
}

HamiltonianExpr hamiltonian(const ReducedSystem& rs) {
    const std::size_t n = rs.pair_count;
    HamiltonianExpr h;
    h.quadratic_Q = RationalMatrix(n, n);
    h.quadratic_Phi = RationalMatrix(n, n);
    h.constant = 0;
    for (const EnergyTerm& term : rs.energy_terms) {
        const RationalMatrix& recon =
            term.charge_argument ? rs.charge_reconstruction : rs.flux_reconstruction;
        RationalVector row(n, Rational(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t full = 0; full < term.argument.size(); ++full)
                row[i] += term.argument[full] * recon.at(full, i);
        if (term.form == EnergyTerm::Form::quadratic) {
            RationalMatrix& k = term.charge_argument ? h.quadratic_Q : h.quadratic_Phi;
            for (std::size_t i = 0; i < n; ++i) {
                if (row[i] == 0) continue;
                for (std::size_t j = 0; j < n; ++j) k.at(i, j) += row[i] * row[j] / term.parameter;
            }
        } else {
            for (const Rational& x : row) {
                if (x == 0) continue;
                if (x < 0)
                    for (auto& y : row) y = -y;
                break;
            }
            CosineTerm cos_term;
            cos_term.coefficient = term.coefficient;
            cos_term.charge_space = term.charge_argument;
            cos_term.argument = row;
            cos_term.edge_id = term.edge_id;
            h.cosine_terms.push_back(std::move(cos_term));
        }
    }
    return h;
}

bool expressions_equal(const HamiltonianExpr& a, const HamiltonianExpr& b) {
    if (!(a.quadratic_Q == b.quadratic_Q) || !(a.quadratic_Phi == b.quadratic_Phi) ||
        a.constant != b.constant || a.cosine_terms.size() != b.cosine_terms.size())
        return false;
    auto key = [](const CosineTerm& t) {
        return std::tuple<bool, RationalVector, Rational>(t.charge_space, t.argument,
                                                          t.coefficient);
    };
    auto sorted = [&](const std::vector<CosineTerm>& terms) {
        std::vector<std::tuple<bool, RationalVector, Rational>> keys;
        for (const auto& t : terms) keys.push_back(key(t));
        std::sort(keys.begin(), keys.end());
        return keys;
    };
    return sorted(a.cosine_terms) == sorted(b.cosine_terms);
}

std::size_t dof_count(const RationalMatrix& m, const LoopSet& ls, const NullClassification& nc) {
    const std::size_t n = rank(m);
    if (ls.genus == 0) {
        const std::size_t by_vertices =
            m.cols() - nc.inductive_cuts.size() - nc.capacitive_cuts.size() - 1;
        const std::size_t by_faces =
            ls.faces.size() - nc.inductive_loops.size() - nc.capacitive_loops.size() - 1;
        if (n != by_vertices || n != by_faces)
            fail_internal("planar counting identity violated: rank " + std::to_string(n) +
                          ", vertex count " + std::to_string(by_vertices) + ", face count " +
                          std::to_string(by_faces));
    }
    return n;
}

std::vector<std::string> ReducedSystem::charge_labels() const {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= pair_count; ++i) out.push_back("Q" + std::to_string(i));
    return out;
}

std::vector<std::string> ReducedSystem::flux_labels() const {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= pair_count; ++i) out.push_back("Phi" + std::to_string(i));
    return out;
}

} // namespace fluxcharge
