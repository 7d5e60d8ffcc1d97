#include "fluxcharge/dynamics.hpp"

#include "fluxcharge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fluxcharge {

namespace {

[[noreturn]] void fail_check(const std::string& message) {
    throw CircuitError(ErrorKind::check, "dynamics: " + message);
}

std::vector<std::vector<double>> to_doubles(const RationalMatrix& m) {
    std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols(), 0.0));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = to_double(m.at(r, c));
    return out;
}

std::vector<double> mat_vec(const std::vector<std::vector<double>>& m, const std::vector<double>& x) {
    std::vector<double> out(m.size(), 0.0);
    for (std::size_t r = 0; r < m.size(); ++r)
        for (std::size_t c = 0; c < x.size(); ++c) out[r] += m[r][c] * x[c];
    return out;
}

bool finite_state(const State& s) {
    auto ok = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    return ok(s.Q) && ok(s.Phi);
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns the
/// eigenvalues; when `vectors` is non-null it receives the orthonormal
/// eigenvector columns.
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> m,
                                       std::vector<std::vector<double>>* vectors) {
    const std::size_t n = m.size();
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += m[p][q] * m[p][q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (m[p][q] == 0.0) continue;
                const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m[k][p], mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m[p][k], mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = m[i][i];
    if (vectors) *vectors = v;
    return eig;
}

} // namespace

CompiledHamiltonian::CompiledHamiltonian(const HamiltonianExpr& h)
    : kq_(to_doubles(h.quadratic_Q)), kphi_(to_doubles(h.quadratic_Phi)),
      constant_(to_double(h.constant)) {
    for (const CosineTerm& term : h.cosine_terms) {
        Cosine cosine;
        cosine.coefficient = to_double(term.coefficient);
        cosine.charge_space = term.charge_space;
        for (const Rational& x : term.argument) cosine.argument.push_back(to_double(x));
        cosines_.push_back(std::move(cosine));
    }
}

double CompiledHamiltonian::energy(const State& s) const {
    double value = constant_;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j)
            value += 0.5 * (kq_[i][j] * s.Q[i] * s.Q[j] + kphi_[i][j] * s.Phi[i] * s.Phi[j]);
    for (const Cosine& cosine : cosines_) {
        double phase = 0.0;
        const std::vector<double>& x = cosine.charge_space ? s.Q : s.Phi;
        for (std::size_t i = 0; i < size(); ++i) phase += cosine.argument[i] * x[i];
        value -= cosine.coefficient * std::cos(phase);
    }
    return value;
}

void CompiledHamiltonian::gradient_Q(const State& s, std::vector<double>& out) const {
    out = mat_vec(kq_, s.Q);
    for (const Cosine& cosine : cosines_) {
        if (!cosine.charge_space) continue;
        double phase = 0.0;
        for (std::size_t i = 0; i < size(); ++i) phase += cosine.argument[i] * s.Q[i];
        const double scale = cosine.coefficient * std::sin(phase);
        for (std::size_t i = 0; i < size(); ++i) out[i] += scale * cosine.argument[i];
    }
}

void CompiledHamiltonian::gradient_Phi(const State& s, std::vector<double>& out) const {
    out = mat_vec(kphi_, s.Phi);
    for (const Cosine& cosine : cosines_) {
        if (cosine.charge_space) continue;
        double phase = 0.0;
        for (std::size_t i = 0; i < size(); ++i) phase += cosine.argument[i] * s.Phi[i];
        const double scale = cosine.coefficient * std::sin(phase);
        for (std::size_t i = 0; i < size(); ++i) out[i] += scale * cosine.argument[i];
    }
}

PhaseVelocity vector_field(const CompiledHamiltonian& h, const State& s) {
    PhaseVelocity rate;
    h.gradient_Q(s, rate.dPhi);
    h.gradient_Phi(s, rate.dQ);
    for (double& x : rate.dQ) x = -x;
    return rate;
}

Trajectory integrate(const CompiledHamiltonian& h, const State& s0, double step, double t_end) {
    if (!(step > 0.0) || !(t_end > 0.0))
        throw std::invalid_argument("integrate: step and t_end must be positive");
    if (s0.Q.size() != h.size() || s0.Phi.size() != h.size())
        throw std::invalid_argument("integrate: state dimension mismatch");

    const std::size_t steps = static_cast<std::size_t>(std::floor(t_end / step));
    Trajectory trajectory;
    trajectory.step = step;
    trajectory.samples.reserve(steps + 1);

    State s = s0;
    s.time = 0.0;
    for (std::size_t n = 0;; ++n) {
        if (!finite_state(s))
            fail_check("trajectory diverged: non-finite state at t = " + std::to_string(s.time));
        trajectory.samples.push_back(s);
        if (n == steps) break;

        auto shifted = [&](const State& base, const PhaseVelocity& k, double scale) {
            State next = base;
            for (std::size_t i = 0; i < h.size(); ++i) {
                next.Q[i] += scale * k.dQ[i];
                next.Phi[i] += scale * k.dPhi[i];
            }
            return next;
        };
        const PhaseVelocity k1 = vector_field(h, s);
        const PhaseVelocity k2 = vector_field(h, shifted(s, k1, step / 2.0));
        const PhaseVelocity k3 = vector_field(h, shifted(s, k2, step / 2.0));
        const PhaseVelocity k4 = vector_field(h, shifted(s, k3, step));
        for (std::size_t i = 0; i < h.size(); ++i) {
            s.Q[i] += step / 6.0 * (k1.dQ[i] + 2.0 * k2.dQ[i] + 2.0 * k3.dQ[i] + k4.dQ[i]);
            s.Phi[i] += step / 6.0 * (k1.dPhi[i] + 2.0 * k2.dPhi[i] + 2.0 * k3.dPhi[i] + k4.dPhi[i]);
        }
        s.time = static_cast<double>(n + 1) * step;
    }
    return trajectory;
}

double energy_drift(const CompiledHamiltonian& h, const Trajectory& t) {
    if (t.samples.empty()) fail_check("energy drift of an empty trajectory");
    const double e0 = h.energy(t.samples.front());
    double drift = 0.0;
    for (const State& s : t.samples) drift = std::max(drift, std::abs(h.energy(s) - e0));
    return drift / std::max(1.0, std::abs(e0));
}

State interpolate_state(const CompiledHamiltonian& h, const Trajectory& t, double time) {
    if (t.samples.size() < 2) fail_check("interpolation needs at least two samples");
    if (time < 0.0 || time > t.samples.back().time)
        fail_check("interpolation time outside the sampled range");
    std::size_t k = static_cast<std::size_t>(std::floor(time / t.step));
    if (k + 1 >= t.samples.size()) k = t.samples.size() - 2;
    const State& s0 = t.samples[k];
    const State& s1 = t.samples[k + 1];
    const PhaseVelocity v0 = vector_field(h, s0);
    const PhaseVelocity v1 = vector_field(h, s1);
    const double dt = s1.time - s0.time;
    const double u = (time - s0.time) / dt;
    const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    const double h10 = u * (1.0 - u) * (1.0 - u);
    const double h01 = u * u * (3.0 - 2.0 * u);
    const double h11 = u * u * (u - 1.0);
    State out;
    out.time = time;
    out.Q.resize(h.size());
    out.Phi.resize(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        out.Q[i] = h00 * s0.Q[i] + h10 * dt * v0.dQ[i] + h01 * s1.Q[i] + h11 * dt * v1.dQ[i];
        out.Phi[i] =
            h00 * s0.Phi[i] + h10 * dt * v0.dPhi[i] + h01 * s1.Phi[i] + h11 * dt * v1.dPhi[i];
    }
    return out;
}

std::vector<double> normal_mode_frequencies(const HamiltonianExpr& h) {
    const std::size_t n = h.size();
    std::vector<std::vector<double>> vectors;
    std::vector<double> eig = jacobi_eigenvalues(to_doubles(h.quadratic_Phi), &vectors);
    double scale = 1.0;
    for (double x : eig) scale = std::max(scale, std::abs(x));
    std::vector<std::vector<double>> root(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        if (eig[i] < -1e-12 * scale)
            fail_check("normal modes need a positive semidefinite flux form");
        const double r = std::sqrt(std::max(eig[i], 0.0));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) root[a][b] += vectors[a][i] * r * vectors[b][i];
    }
    const std::vector<std::vector<double>> kq = to_doubles(h.quadratic_Q);
    std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    g[a][b] += root[a][i] * kq[i][j] * root[j][b];
    std::vector<double> lambda = jacobi_eigenvalues(g, nullptr);
    std::vector<double> omega;
    for (double x : lambda) omega.push_back(std::sqrt(std::max(x, 0.0)));
    std::sort(omega.begin(), omega.end());
    return omega;
}

double KirchhoffReport::max_residual() const {
    return std::max(loop_voltage, std::max(node_current, constitutive));
}

KirchhoffReport check_kirchhoff(const Circuit& c, const ReducedSystem& rs, const Trajectory& t) {
    const CompiledHamiltonian h(rs.hamiltonian_expr);
    const std::size_t ne = c.edges.size();
    const std::size_t n = rs.pair_count;
    const RationalMatrix a = incidence_matrix(c);

    // Branch maps from reduced variables: branch charge is B^T R_q Q (the
    // charge-argument energy terms store the orientation column of their
    // edge) and branch flux is A R_phi Phi.
    const std::vector<std::vector<double>> orientation = to_doubles(rs.orientation);
    const std::size_t loop_count = rs.orientation.rows();
    std::vector<std::vector<double>> charge_map(ne), flux_map(ne);
    std::vector<double> inv_parameter(ne, 0.0), parameter(ne, 0.0);
    for (std::size_t e = 0; e < ne; ++e) {
        const EnergyTerm& term = rs.energy_terms[e];
        parameter[e] = to_double(term.parameter);
        inv_parameter[e] = 1.0 / parameter[e];
        auto mapped_through = [&](const RationalVector& argument, const RationalMatrix& recon) {
            std::vector<double> mapped(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                Rational sum = 0;
                for (std::size_t k = 0; k < argument.size(); ++k)
                    sum += argument[k] * recon.at(k, i);
                mapped[i] = to_double(sum);
            }
            return mapped;
        };
        if (term.charge_argument)
            charge_map[e] = mapped_through(term.argument, rs.charge_reconstruction);
        flux_map[e] = mapped_through(a.row(e), rs.flux_reconstruction);
    }

    std::vector<std::vector<double>> crossing, pivot_inverse;
    std::vector<std::size_t> pivot_edges;
    if (rs.completion) {
        crossing = to_doubles(rs.completion->crossing);
        pivot_inverse = to_doubles(rs.completion->pivot_inverse);
        pivot_edges = rs.completion->pivot_edges;
    }

    KirchhoffReport report;
    for (const State& s : t.samples) {
        const PhaseVelocity velocity = vector_field(h, s);

        std::vector<double> branch_charge(ne, 0.0), branch_flux(ne, 0.0),
            branch_charge_rate(ne, 0.0), branch_flux_rate(ne, 0.0);
        for (std::size_t e = 0; e < ne; ++e)
            for (std::size_t i = 0; i < n; ++i) {
                if (!charge_map[e].empty()) {
                    branch_charge[e] += charge_map[e][i] * s.Q[i];
                    branch_charge_rate[e] += charge_map[e][i] * velocity.dQ[i];
                }
                branch_flux[e] += flux_map[e][i] * s.Phi[i];
                branch_flux_rate[e] += flux_map[e][i] * velocity.dPhi[i];
            }

        // d(branch flux)/dt for a capacitive branch must equal the branch
        // voltage demanded by its constitutive law.
        auto constitutive_rate = [&](std::size_t e) {
            return c.edges[e].kind == ElementKind::capacitor
                       ? branch_charge[e] * inv_parameter[e]
                       : parameter[e] * std::sin(branch_charge[e]);
        };
        if (rs.completion) {
            // Velocities of the dropped capacitive-cut fluxes, recovered
            // exactly from the constitutive law on the pivot branches.
            std::vector<double> gap(pivot_edges.size(), 0.0);
            for (std::size_t k = 0; k < pivot_edges.size(); ++k)
                gap[k] = constitutive_rate(pivot_edges[k]) - branch_flux_rate[pivot_edges[k]];
            const std::vector<double> completion_rate = mat_vec(pivot_inverse, gap);
            for (std::size_t e = 0; e < ne; ++e)
                for (std::size_t k = 0; k < completion_rate.size(); ++k)
                    branch_flux_rate[e] += crossing[e][k] * completion_rate[k];
        }

        // (i) voltage law around every loop.
        std::vector<double> loop_sum(loop_count, 0.0);
        for (std::size_t l = 0; l < loop_count; ++l)
            for (std::size_t e = 0; e < ne; ++e)
                loop_sum[l] += orientation[l][e] * branch_flux_rate[e];
        for (double x : loop_sum) report.loop_voltage = std::max(report.loop_voltage, std::abs(x));

        // (ii) current law at every vertex.
        std::vector<double> node_sum(c.vertices.size(), 0.0);
        for (std::size_t e = 0; e < ne; ++e) {
            double current = 0.0;
            if (is_capacitive(c.edges[e].kind)) {
                current = branch_charge_rate[e];
            } else if (c.edges[e].kind == ElementKind::inductor) {
                current = branch_flux[e] * inv_parameter[e];
            } else {
                current = parameter[e] * std::sin(branch_flux[e]);
            }
            for (std::size_t v = 0; v < c.vertices.size(); ++v)
                node_sum[v] += to_double(a.at(e, v)) * current;
        }
        for (double x : node_sum) report.node_current = std::max(report.node_current, std::abs(x));

        // (iii) constitutive law on every capacitive branch.
        for (std::size_t e = 0; e < ne; ++e) {
            if (!is_capacitive(c.edges[e].kind)) continue;
            const double residual = std::abs(branch_flux_rate[e] - constitutive_rate(e));
            report.constitutive = std::max(report.constitutive, residual);
        }
    }
    return report;
}

std::string export_csv(const CompiledHamiltonian& h, const Trajectory& t) {
    std::string out = "t";
    for (std::size_t i = 1; i <= h.size(); ++i) out += ",Q" + std::to_string(i);
    for (std::size_t i = 1; i <= h.size(); ++i) out += ",Phi" + std::to_string(i);
    out += ",H\n";
    char buffer[64];
    auto append = [&](const char* prefix, double value) {
        std::snprintf(buffer, sizeof buffer, "%s%.17g", prefix, value);
        out += buffer;
    };
    for (const State& s : t.samples) {
        append("", s.time);
        for (std::size_t i = 0; i < h.size(); ++i) append(",", s.Q[i]);
        for (std::size_t i = 0; i < h.size(); ++i) append(",", s.Phi[i]);
        append(",", h.energy(s));
        out += "\n";
    }
    return out;
}

} // namespace fluxcharge
