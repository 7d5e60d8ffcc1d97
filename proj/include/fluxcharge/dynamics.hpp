#pragma once

#include "fluxcharge/circuit.hpp"
#include "fluxcharge/reduction.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace fluxcharge {

/// Phase-space point of a reduced system, in double precision.
struct State {
    std::vector<double> Q;
    std::vector<double> Phi;
    double time = 0.0;
};

/// Uniformly sampled integration result.
struct Trajectory {
    std::vector<State> samples;
    double step = 0.0;
};

/// Double-precision view of a HamiltonianExpr with closed-form gradients.
/// Exact rationals are converted once here, at the dynamics boundary.
/// Implicitly constructible so the dynamics operations accept a
/// HamiltonianExpr directly.
class CompiledHamiltonian {
  public:
    CompiledHamiltonian(const HamiltonianExpr& h);

    std::size_t size() const { return kq_.size(); }
    double energy(const State& s) const;
    /// dH/dQ_i and dH/dPhi_i, written into vectors of size().
    void gradient_Q(const State& s, std::vector<double>& out) const;
    void gradient_Phi(const State& s, std::vector<double>& out) const;

  private:
    std::vector<std::vector<double>> kq_, kphi_;
    struct Cosine {
        double coefficient = 0.0;
        bool charge_space = false;
        std::vector<double> argument;
    };
    std::vector<Cosine> cosines_;
    double constant_ = 0.0;
};

/// Hamilton's equations: dPhi_i/dt = dH/dQ_i, dQ_i/dt = -dH/dPhi_i.
struct PhaseVelocity {
    std::vector<double> dPhi;
    std::vector<double> dQ;
};
PhaseVelocity vector_field(const CompiledHamiltonian& h, const State& s);

/// Fixed-step classical RK4 from s0 to t_end; floor(t_end/step) + 1 samples
/// including the initial one. Throws a check error with the time stamp when
/// the state stops being finite.
Trajectory integrate(const CompiledHamiltonian& h, const State& s0, double step, double t_end);

/// max over samples of |H(s) - H(s0)| / max(1, |H(s0)|).
double energy_drift(const CompiledHamiltonian& h, const Trajectory& t);

/// Cubic Hermite evaluation of the trajectory at an off-grid time inside the
/// sampled range, using exact vector-field derivatives at the bracketing
/// samples.
State interpolate_state(const CompiledHamiltonian& h, const Trajectory& t, double time);

/// Angular frequencies of the quadratic part: sqrt of the eigenvalues of
/// K_Phi^{1/2} K_Q K_Phi^{1/2}, ascending. Requires K_Phi positive
/// semidefinite.
std::vector<double> normal_mode_frequencies(const HamiltonianExpr& h);

/// Maxima over the trajectory of the three Kirchhoff residuals on the
/// original circuit, after reconstructing branch charges and fluxes from the
/// reduced variables (including the capacitive-cut completion velocities).
struct KirchhoffReport {
    double loop_voltage = 0.0;  ///< (i) voltage law around every loop
    double node_current = 0.0;  ///< (ii) current law at every vertex
    double constitutive = 0.0;  ///< (iii) capacitive branch constitutive law
    double max_residual() const;
};
KirchhoffReport check_kirchhoff(const Circuit& c, const ReducedSystem& rs, const Trajectory& t);

/// CSV rendering: header t,Q1..QN,Phi1..PhiN,H then one row per sample, 17
/// significant digits.
std::string export_csv(const CompiledHamiltonian& h, const Trajectory& t);

} // namespace fluxcharge
