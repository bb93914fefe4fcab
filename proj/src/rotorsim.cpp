#include "anisodec/rotorsim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "anisodec/errors.hpp"
#include "anisodec/parallel.hpp"
#include "anisodec/units.hpp"

namespace anisodec {

using detail::require;

double SimulationConfig::friction_rate() const {
    if (temperature <= 0.0 || D <= 0.0) return 0.0;
    return D / (inertia * constants::k_B * temperature);
}

void SimulationConfig::validate() const {
    require(inertia > 0.0 && std::isfinite(inertia), "inertia_kg_m2", "must be positive");
    require(D >= 0.0 && std::isfinite(D), "D", "must be non-negative");
    require(temperature >= 0.0 && std::isfinite(temperature), "temperature_K", "must be non-negative");
    require(dt > 0.0 && std::isfinite(dt), "dt_s", "must be positive");
    require(n_traj >= 1, "n_traj", "must be at least 1");
    require(std::abs(norm(initial.m) - 1.0) < 1e-12, "initial.m", "must be a unit vector");
    require(std::abs(dot(initial.m, initial.J)) <= 1e-12 * std::max(norm(initial.J), 1e-300), "initial.J",
            "must be perpendicular to m");
    const double g = friction_rate();
    if (g > 0.0)
        require(dt * g <= friction_step_fraction, "dt_s",
                "must resolve the friction time: dt <= 0.01 I k_B T / D");
}

RotorState drift(const RotorState& s, double inertia, double dt) {
    const double j = norm(s.J);
    if (j == 0.0) return s;
    RotorState out = s;
    out.m = normalized(rotate(s.m, s.J / j, j * dt / inertia));
    return out;
}

RotorState step(const RotorState& s, const SimulationConfig& cfg, double xi1, double xi2) {
    RotorState out = drift(s, cfg.inertia, 0.5 * cfg.dt);
    const auto [e1, e2] = transverse_basis(out.m);
    const Vec3 noise = xi1 * e1 + xi2 * e2;
    const double g = cfg.friction_rate();
    if (g > 0.0) {
        // Exact Ornstein-Uhlenbeck update; stationary variance D / g = I k_B T per component.
        const double decay = std::exp(-g * cfg.dt);
        out.J = decay * out.J + std::sqrt(cfg.D / g * -std::expm1(-2.0 * g * cfg.dt)) * noise;
    } else {
        out.J += std::sqrt(2.0 * cfg.D * cfg.dt) * noise;
    }
    out.J -= dot(out.J, out.m) * out.m;
    out = drift(out, cfg.inertia, 0.5 * cfg.dt);
    out.m = normalized(out.m);
    out.J -= dot(out.J, out.m) * out.m;
    return out;
}

namespace {

// Neumaier compensated sum.
struct Accumulator {
    double sum = 0.0, comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

struct Moments {
    Accumulator j2, j4, jx, jy, jz, jx2, jy2, jz2;
    std::size_t count = 0;

    void add(const Vec3& J) {
        const double s = norm2(J);
        j2.add(s);
        j4.add(s * s);
        jx.add(J.x);
        jy.add(J.y);
        jz.add(J.z);
        jx2.add(J.x * J.x);
        jy2.add(J.y * J.y);
        jz2.add(J.z * J.z);
        ++count;
    }
    void merge(const Moments& o) {
        j2.add(o.j2.value());
        j4.add(o.j4.value());
        jx.add(o.jx.value());
        jy.add(o.jy.value());
        jz.add(o.jz.value());
        jx2.add(o.jx2.value());
        jy2.add(o.jy2.value());
        jz2.add(o.jz2.value());
        count += o.count;
    }
};

double mean_of(const Accumulator& a, std::size_t n) { return a.value() / static_cast<double>(n); }

double sem_of(const Accumulator& a, const Accumulator& a2, std::size_t n) {
    if (n < 2) return 0.0;
    const double nn = static_cast<double>(n);
    const double m = a.value() / nn;
    const double var = std::max(0.0, (a2.value() / nn - m * m) * nn / (nn - 1.0));
    return std::sqrt(var / nn);
}

std::vector<long long> record_steps(long long n_steps, int records) {
    std::vector<long long> at(records);
    for (int r = 0; r < records; ++r) at[r] = records == 1 ? n_steps : n_steps * r / (records - 1);
    return at;
}

constexpr std::size_t reduction_blocks = 64;

}  // namespace

EnsembleSeries evolve_ensemble(const SimulationConfig& cfg, double t_final, int records) {
    cfg.validate();
    require(t_final >= 0.0 && std::isfinite(t_final), "t_final_s", "must be non-negative");
    require(records >= 1, "records", "must be at least 1");
    const long long n_steps = std::llround(t_final / cfg.dt);
    const auto at = record_steps(n_steps, records);

    const std::size_t blocks = std::min(reduction_blocks, cfg.n_traj);
    std::vector<std::vector<Moments>> per_block(blocks, std::vector<Moments>(records));
    std::vector<double> orth(blocks, 0.0), nerr(blocks, 0.0);
    EnsembleSeries out;
    out.final_energies.resize(cfg.n_traj);

    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t lo = cfg.n_traj * b / blocks;
        const std::size_t hi = cfg.n_traj * (b + 1) / blocks;
        auto& mom = per_block[b];
        for (std::size_t traj = lo; traj < hi; ++traj) {
            CounterRng rng(cfg.seed, traj);
            std::normal_distribution<double> normal;
            RotorState s = cfg.initial;
            long long k = 0;
            for (int r = 0; r < records; ++r) {
                for (; k < at[r]; ++k) {
                    const double x1 = normal(rng);
                    const double x2 = normal(rng);
                    s = step(s, cfg, x1, x2);
                    const double jn = norm(s.J);
                    if (jn > 0.0) orth[b] = std::max(orth[b], std::abs(dot(s.J, s.m)) / jn);
                    nerr[b] = std::max(nerr[b], std::abs(norm(s.m) - 1.0));
                }
                mom[r].add(s.J);
            }
            out.final_energies[traj] = norm2(s.J) / (2.0 * cfg.inertia);
        }
    });

    for (int r = 0; r < records; ++r) {
        Moments total;
        for (std::size_t b = 0; b < blocks; ++b) total.merge(per_block[b][r]);
        const std::size_t n = total.count;
        out.times.push_back(static_cast<double>(at[r]) * cfg.dt);
        out.mean_J2.push_back(mean_of(total.j2, n));
        out.sem_J2.push_back(sem_of(total.j2, total.j4, n));
        out.mean_H.push_back(out.mean_J2.back() / (2.0 * cfg.inertia));
        out.mean_J.push_back({mean_of(total.jx, n), mean_of(total.jy, n), mean_of(total.jz, n)});
        out.sem_J.push_back(
            {sem_of(total.jx, total.jx2, n), sem_of(total.jy, total.jy2, n), sem_of(total.jz, total.jz2, n)});
    }
    out.max_orthogonality_error = *std::max_element(orth.begin(), orth.end());
    out.max_norm_error = *std::max_element(nerr.begin(), nerr.end());
    return out;
}

// ---------------------------------------------------------------------------

double EulerState::J2() const {
    const double sb = std::sin(beta);
    return p_beta * p_beta + p_alpha * p_alpha / (sb * sb);
}

EulerState euler_angle_oracle_step(const EulerState& s, const SimulationConfig& cfg, double xi1, double xi2) {
    if (s.beta < oracle_pole_margin || s.beta > constants::pi - oracle_pole_margin)
        throw NumericalError("euler oracle: beta within 0.1 rad of a pole");
    const double I = cfg.inertia;
    const double dt = cfg.dt;
    const double sb = std::sin(s.beta);
    const double cb = std::cos(s.beta);
    const double g = cfg.friction_rate();
    const double amp = std::sqrt(2.0 * cfg.D * dt);
    EulerState out;
    out.alpha = s.alpha + s.p_alpha / (I * sb * sb) * dt;
    out.beta = s.beta + s.p_beta / I * dt;
    out.p_alpha = s.p_alpha - g * s.p_alpha * dt + sb * amp * xi1;
    out.p_beta = s.p_beta + (s.p_alpha * s.p_alpha * cb / (I * sb * sb * sb) - g * s.p_beta) * dt + amp * xi2;
    if (out.beta < oracle_pole_margin || out.beta > constants::pi - oracle_pole_margin)
        throw NumericalError("euler oracle: beta within 0.1 rad of a pole");
    return out;
}

OracleSeries evolve_oracle_ensemble(const SimulationConfig& cfg, const EulerState& initial, double t_final,
                                    int records) {
    require(cfg.inertia > 0.0, "inertia_kg_m2", "must be positive");
    require(cfg.dt > 0.0, "dt_s", "must be positive");
    require(cfg.n_traj >= 1, "n_traj", "must be at least 1");
    require(records >= 1, "records", "must be at least 1");
    const long long n_steps = std::llround(t_final / cfg.dt);
    const auto at = record_steps(n_steps, records);

    const std::size_t blocks = std::min(reduction_blocks, cfg.n_traj);
    std::vector<std::vector<Moments>> per_block(blocks, std::vector<Moments>(records));
    std::vector<std::size_t> rejected(blocks, 0);
    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t lo = cfg.n_traj * b / blocks;
        const std::size_t hi = cfg.n_traj * (b + 1) / blocks;
        std::vector<double> j2(records);
        for (std::size_t traj = lo; traj < hi; ++traj) {
            CounterRng rng(cfg.seed, traj);
            std::normal_distribution<double> normal;
            EulerState s = initial;
            long long k = 0;
            bool ok = true;
            try {
                for (int r = 0; r < records; ++r) {
                    for (; k < at[r]; ++k) {
                        const double x1 = normal(rng);
                        const double x2 = normal(rng);
                        s = euler_angle_oracle_step(s, cfg, x1, x2);
                    }
                    j2[r] = s.J2();
                }
            } catch (const NumericalError&) {
                ok = false;
            }
            if (!ok) {
                ++rejected[b];
                continue;
            }
            for (int r = 0; r < records; ++r) {
                per_block[b][r].j2.add(j2[r]);
                per_block[b][r].j4.add(j2[r] * j2[r]);
                ++per_block[b][r].count;
            }
        }
    });

    OracleSeries out;
    for (std::size_t b = 0; b < blocks; ++b) out.rejected += rejected[b];
    for (int r = 0; r < records; ++r) {
        Moments total;
        for (std::size_t b = 0; b < blocks; ++b) total.merge(per_block[b][r]);
        out.times.push_back(static_cast<double>(at[r]) * cfg.dt);
        if (total.count == 0) throw NumericalError("euler oracle: every trajectory was rejected");
        out.mean_J2.push_back(mean_of(total.j2, total.count));
        out.sem_J2.push_back(sem_of(total.j2, total.j4, total.count));
    }
    return out;
}

double fit_slope(const std::vector<double>& t, const std::vector<double>& y) {
    require(t.size() == y.size() && t.size() >= 2, "series", "needs at least two matching points");
    const double n = static_cast<double>(t.size());
    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
    }
    const double mt = st / n, my = sy / n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        num += (t[i] - mt) * (y[i] - my);
        den += (t[i] - mt) * (t[i] - mt);
    }
    require(den > 0.0, "series", "times must not all coincide");
    return num / den;
}

double ks_statistic_exponential(std::vector<double> sample, double mean) {
    require(!sample.empty(), "sample", "must not be empty");
    require(mean > 0.0, "mean", "must be positive");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double cdf = -std::expm1(-sample[i] / mean);
        d = std::max({d, std::abs(cdf - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - cdf)});
    }
    return d;
}

}  // namespace anisodec
