#pragma once

// Stochastic ensemble simulation of the classical linear-rotor diffusion
//
//   d_t f + {f, H_rot} = D (sin^2 beta d^2_{p_alpha} + d^2_{p_beta}) f
//                        + (D / I k_B T) (d_{p_alpha} p_alpha + d_{p_beta} p_beta) f,
//
// the friction term being optional. The state is the symmetry axis m and the
// angular momentum J, kept perpendicular to m. In these variables the noise is
// isotropic in the plane perpendicular to m and there is no coordinate
// singularity. An Euler-angle integrator of the same equation is provided as
// an independent oracle.

#include <cstdint>
#include <vector>

#include "anisodec/quadrature.hpp"
#include "anisodec/vec3.hpp"

namespace anisodec {

struct RotorState {
    Vec3 m{0.0, 0.0, 1.0};
    Vec3 J{};
};

struct SimulationConfig {
    double inertia = 0.0;      ///< I, kg m^2
    double D = 0.0;            ///< (J s)^2 / s
    double temperature = 0.0;  ///< K; 0 disables friction
    double dt = 0.0;           ///< s
    std::size_t n_traj = 1;
    std::uint64_t seed = default_mc_seed;
    RotorState initial{};

    /// Friction rate D / (I k_B T), zero without friction.
    double friction_rate() const;
    /// Throws DomainError naming the offending field. With friction the step
    /// must resolve the relaxation time: dt <= 0.01 I k_B T / D.
    void validate() const;
};

inline constexpr double friction_step_fraction = 0.01;

/// One Strang step: half free rotation of m about J, a kick (exact
/// Ornstein-Uhlenbeck update with friction, J += sqrt(2 D dt) xi without),
/// another half rotation. xi1, xi2 are standard normal and act along an
/// orthonormal basis of the plane perpendicular to m.
RotorState step(const RotorState& s, const SimulationConfig& cfg, double xi1, double xi2);

/// Free rotation of m about J by the angle |J| dt / I; J is unchanged.
RotorState drift(const RotorState& s, double inertia, double dt);

struct EnsembleSeries {
    std::vector<double> times;
    std::vector<double> mean_J2;    ///< <J^2>
    std::vector<double> sem_J2;     ///< standard error of <J^2>
    std::vector<double> mean_H;     ///< <J^2 / 2I>
    std::vector<Vec3> mean_J;       ///< <J>
    std::vector<Vec3> sem_J;        ///< componentwise standard error of <J>
    std::vector<double> final_energies;  ///< per trajectory, in trajectory order
    double max_orthogonality_error = 0.0;  ///< max |J.m| / max(|J|, tiny) over all steps
    double max_norm_error = 0.0;           ///< max ||m| - 1| over all steps
};

/// Runs n_traj independent trajectories to t_final (rounded to whole steps),
/// recording ensemble moments at `records` evenly spaced times including 0.
/// Trajectory i draws from CounterRng(seed, i); reductions use compensated
/// sums in a fixed block order, so results do not depend on the thread count.
EnsembleSeries evolve_ensemble(const SimulationConfig& cfg, double t_final, int records = 50);

// ---------------------------------------------------------------------------
// Euler-angle oracle

struct EulerState {
    double alpha = 0.0, beta = constants::pi / 2, p_alpha = 0.0, p_beta = 0.0;

    /// J^2 = p_beta^2 + p_alpha^2 / sin^2 beta.
    double J2() const;
};

inline constexpr double oracle_pole_margin = 0.1;

/// One Euler-Maruyama step of the literal Euler-angle equations:
/// Hamiltonian drift, dp_alpha = sin(beta) sqrt(2 D) dW1, dp_beta = sqrt(2 D) dW2,
/// and friction -gamma p. Throws NumericalError when beta leaves
/// [0.1, pi - 0.1], where the coordinates become unreliable.
EulerState euler_angle_oracle_step(const EulerState& s, const SimulationConfig& cfg, double xi1, double xi2);

struct OracleSeries {
    std::vector<double> times;
    std::vector<double> mean_J2;
    std::vector<double> sem_J2;
    std::size_t rejected = 0;  ///< trajectories that approached a pole
};

/// Ensemble of oracle trajectories started from `initial`; rejected
/// trajectories are dropped from all averages.
OracleSeries evolve_oracle_ensemble(const SimulationConfig& cfg, const EulerState& initial, double t_final,
                                    int records = 50);

// ---------------------------------------------------------------------------
// Analysis helpers

/// Least-squares slope of y against t.
double fit_slope(const std::vector<double>& t, const std::vector<double>& y);

/// Kolmogorov-Smirnov distance between the sample and the exponential law
/// with the given mean.
double ks_statistic_exponential(std::vector<double> sample, double mean);

}  // namespace anisodec
