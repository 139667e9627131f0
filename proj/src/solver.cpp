#include "nlgs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <atomic>
#include <random>
#include <thread>

#include "nlgs/convolution.hpp"

namespace nlgs {

void SolverConfig::validate() const {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw SolverConfigError("mu must be positive");
    if (!(tau > 0.0) || !(tau_max >= tau)) throw SolverConfigError("need 0 < tau <= tau_max");
    if (!(tol_grad > 0.0) || !(tol_energy > 0.0)) throw SolverConfigError("tolerances must be positive");
    if (max_iters < 1 || n_starts < 1 || stall_window < 1) throw SolverConfigError("iteration counts must be positive");
    if (truncation && !(*truncation > 0.0)) throw SolverConfigError("truncation must be positive");
    (void)grid();
}

std::string to_string(SolverStatus s) {
    switch (s) {
        case SolverStatus::Converged: return "converged";
        case SolverStatus::NotConverged: return "not-converged";
        case SolverStatus::InfimumNotAttained: return "infimum-not-attained";
    }
    return "?";
}

void parallel_for(int count, const std::function<void(int)>& f) {
    const unsigned hw = std::thread::hardware_concurrency();
    if (count <= 1 || hw <= 1) {
        for (int i = 0; i < count; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(count);
    const int workers = std::min<int>(count, static_cast<int>(hw));
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

namespace {

using cd = std::complex<double>;

bool potential_present(const std::optional<PotentialSpec>& v) { return v && !v->is_trivial(); }

void normalize_to(Field& u, double mu) {
    const double m = mass(u);
    if (!(m > 0.0)) throw SolverConfigError("initial field has zero mass");
    const double s = std::sqrt(mu / m);
    for (double& x : u.values()) x = std::fabs(x) * s;
}

Point3 guess_center(const std::optional<PotentialSpec>& v) {
    if (potential_present(v) && !v->terms.empty()) return v->terms.front().center;
    return {0.0, 0.0, 0.0};
}

Field gaussian(const Grid3& g, double width, Point3 c) {
    return Field::from_function(g, [&](double x, double y, double z) {
        const double dx = x - c[0], dy = y - c[1], dz = z - c[2];
        return std::exp(-(dx * dx + dy * dy + dz * dz) / (2.0 * width * width));
    });
}

std::vector<double> squared_distance_from(const Grid3& g, std::size_t peak) {
    const int n = g.n();
    const double h = g.spacing(), L = g.box_length();
    const int pi = static_cast<int>(peak % n), pj = static_cast<int>((peak / n) % n),
              pk = static_cast<int>(peak / (static_cast<std::size_t>(n) * n));
    auto image = [&](int a, int b) {
        double d = (a - b) * h;
        if (d > 0.5 * L) d -= L;
        if (d < -0.5 * L) d += L;
        return d * d;
    };
    std::vector<double> d2(g.size());
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) d2[g.index(i, j, k)] = image(i, pi) + image(j, pj) + image(k, pk);
    return d2;
}

// One normalized gradient flow run on a fixed grid.
class Flow {
public:
    Flow(const KernelParams& p, const Field* v, const SolverConfig& cfg, const Grid3& g)
        : p_(p), v_(v), cfg_(cfg), g_(g), fft_(Fft3::local(g.n())), conv_(PaddedConvolver::local(g.n())) {
        multiplier_ = kernel_padded_multiplier(g, p, cfg.truncation ? *cfg.truncation : default_truncation(g));
        const int n = g.n();
        k2_.resize(g.spectrum_size());
        for (int kz = 0; kz < n; ++kz)
            for (int ky = 0; ky < n; ++ky)
                for (int kx = 0; kx <= n / 2; ++kx) {
                    const double a = g.wavenumber(kx), b = g.wavenumber(ky), c = g.wavenumber(kz);
                    k2_[static_cast<std::size_t>(kx) + (n / 2 + 1) * (static_cast<std::size_t>(ky) + static_cast<std::size_t>(n) * kz)] =
                        a * a + b * b + c * c;
                }
        weight_.resize(g.spectrum_size());
        for (std::size_t i = 0; i < weight_.size(); ++i) {
            const int kx = static_cast<int>(i % (n / 2 + 1));
            weight_[i] = (kx == 0 || kx == n / 2) ? 1.0 : 2.0;
        }
    }

    struct State {
        std::vector<double> u;
        std::vector<cd> u_hat;
        std::vector<cd> n_hat;
        double kinetic2 = 0.0;  // A
        double pot2 = 0.0;      // V(u)
        double nonlocal4 = 0.0; // K(u)
        double energy = 0.0;
        double lambda = 0.0;
        double residual = 0.0;
        double scale = 0.0;
    };

    // u must be nonnegative with mass mu.
    void evaluate(State& s) {
        const std::size_t N = g_.size();
        const double h3 = g_.cell_volume();
        const double inv_n = 1.0 / static_cast<double>(N);
        std::copy(s.u.begin(), s.u.end(), fft_.real());
        fft_.forward();
        s.u_hat.assign(fft_.spectrum(), fft_.spectrum() + g_.spectrum_size());
        double a = 0.0;
        for (std::size_t i = 0; i < s.u_hat.size(); ++i) a += weight_[i] * k2_[i] * std::norm(s.u_hat[i]);
        s.kinetic2 = h3 * inv_n * a;

        phi_.assign(N, 0.0);
        if (multiplier_) {
            rho_.resize(N);
            for (std::size_t i = 0; i < N; ++i) rho_[i] = s.u[i] * s.u[i];
            conv_.load(rho_);
            conv_.potential(*multiplier_, phi_);
        }
        double vp = 0.0, kp = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double r = s.u[i] * s.u[i];
            if (v_) vp += (*v_)[i] * r;
            kp += phi_[i] * r;
        }
        s.pot2 = h3 * vp;
        s.nonlocal4 = h3 * kp;
        s.energy = 0.5 * s.kinetic2 + 0.5 * s.pot2 + 0.25 * s.nonlocal4;
        s.scale = std::fabs(0.5 * s.kinetic2) + std::fabs(0.5 * s.pot2) + std::fabs(0.25 * s.nonlocal4);
        s.lambda = (s.kinetic2 + s.pot2 + s.nonlocal4) / cfg_.mu;

        double* w = fft_.real();
        for (std::size_t i = 0; i < N; ++i) w[i] = ((v_ ? (*v_)[i] : 0.0) + phi_[i] - s.lambda) * s.u[i];
        fft_.forward();
        s.n_hat.assign(fft_.spectrum(), fft_.spectrum() + g_.spectrum_size());
        double r2 = 0.0;
        for (std::size_t i = 0; i < s.n_hat.size(); ++i) r2 += weight_[i] * std::norm(k2_[i] * s.u_hat[i] + s.n_hat[i]);
        s.residual = std::sqrt(h3 * inv_n * r2);
    }

    // Semi-implicit step from s into t (t.u set, not evaluated).
    void step(const State& s, double tau, State& t) {
        cd* spec = fft_.spectrum();
        for (std::size_t i = 0; i < s.u_hat.size(); ++i) spec[i] = (s.u_hat[i] - tau * s.n_hat[i]) / (1.0 + tau * k2_[i]);
        fft_.backward();
        const std::size_t N = g_.size();
        t.u.resize(N);
        const double inv_n = 1.0 / static_cast<double>(N);
        double m = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double x = std::fabs(fft_.real()[i] * inv_n);
            t.u[i] = x;
            m += x * x;
        }
        m *= g_.cell_volume();
        const double sc = std::sqrt(cfg_.mu / m);
        for (double& x : t.u) x *= sc;
    }

private:
    KernelParams p_;
    const Field* v_;
    const SolverConfig& cfg_;
    Grid3 g_;
    Fft3& fft_;
    PaddedConvolver& conv_;
    std::shared_ptr<const PaddedMultiplier> multiplier_;
    std::vector<double> k2_, weight_, phi_, rho_;
};

double second_moment(const std::vector<double>& u, const std::vector<double>& d2, double h3) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += d2[i] * u[i] * u[i];
    return h3 * s;
}

GroundStateResult run_flow(const KernelParams& p, const std::optional<PotentialSpec>& v, const Field* sampled_v,
                           const SolverConfig& cfg, const Field& start) {
    const Grid3 g = start.grid();
    Field u0 = start;
    normalize_to(u0, cfg.mu);
    const std::vector<double> d2 = squared_distance_from(g, argmax_abs(u0));
    const double h3 = g.cell_volume();

    Flow flow(p, sampled_v, cfg, g);
    Flow::State cur, trial;
    cur.u = u0.values();
    flow.evaluate(cur);
    const double e_initial = cur.energy;

    GroundStateResult res{Field(g)};
    std::vector<double> energies{cur.energy};
    res.second_moments.push_back(second_moment(cur.u, d2, h3));
    double tau = cfg.tau;
    int it = 0;
    bool converged = cur.residual <= cfg.tol_grad;
    if (cfg.record_log) res.log.push_back({0, cur.energy, cur.residual, tau, res.second_moments.back(), true});
    while (!converged && it < cfg.max_iters) {
        ++it;
        flow.step(cur, tau, trial);
        flow.evaluate(trial);
        const double slack = 1e-13 * std::max(cur.scale, trial.scale);
        const bool accept = std::isfinite(trial.energy) && trial.energy <= cur.energy + slack;
        if (accept) {
            std::swap(cur, trial);
            tau = std::min(tau * 1.1, cfg.tau_max);
            res.second_moments.push_back(second_moment(cur.u, d2, h3));
        } else {
            tau *= 0.5;
        }
        energies.push_back(cur.energy);
        if (cfg.record_log) res.log.push_back({it, cur.energy, cur.residual, tau, res.second_moments.back(), accept});
        if (cur.residual <= cfg.tol_grad) {
            converged = true;
            break;
        }
        // spread over the window, not the endpoint difference: accepted steps may
        // rise within the slack, so two endpoints can coincide mid-descent
        const std::size_t w = static_cast<std::size_t>(cfg.stall_window);
        if (energies.size() > w) {
            const auto [lo, hi] = std::minmax_element(energies.end() - static_cast<std::ptrdiff_t>(w) - 1, energies.end());
            if (*hi - *lo <= cfg.tol_energy) break;
        }
        if (tau < 1e-14) break;
    }

    res.u = Field(g, cur.u);
    res.iters = it;
    res.residual = cur.residual;
    res.converged = converged;

    const auto& m = res.second_moments;
    bool spreading = m.size() > 1 && m.back() > m.front();
    for (std::size_t i = 1; spreading && i < m.size(); ++i)
        if (m[i] < m[i - 1] * (1.0 - 1e-12)) spreading = false;
    const bool vanishing = !potential_present(v) && cur.energy >= 0.0 && cur.energy < 0.01 * e_initial && spreading;
    if (vanishing) {
        res.status = SolverStatus::InfimumNotAttained;
        res.converged = false;
    } else {
        res.status = converged ? SolverStatus::Converged : SolverStatus::NotConverged;
        if (!potential_present(v)) res.u = recenter_at_peak(res.u);
    }
    res.breakdown = energy_sampled(res.u, p, sampled_v, cfg.truncation);
    res.omega = (2.0 * res.breakdown.kinetic + 2.0 * res.breakdown.potential + 4.0 * res.breakdown.nonlocal) / mass(res.u);
    return res;
}

}  // namespace

Field random_band_limited_field(const Grid3& g, std::uint64_t seed, int band, double envelope_width, Point3 c) {
    if (band < 1) throw SolverConfigError("band must be positive");
    if (!(envelope_width > 0.0)) throw SolverConfigError("envelope width must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Spectrum s{g, std::vector<cd>(g.spectrum_size(), cd(0.0, 0.0))};
    const int n = g.n();
    for (int kz = 0; kz < n; ++kz)
        for (int ky = 0; ky < n; ++ky)
            for (int kx = 0; kx <= n / 2; ++kx) {
                if (std::abs(g.frequency_index(kx)) > band || std::abs(g.frequency_index(ky)) > band ||
                    std::abs(g.frequency_index(kz)) > band)
                    continue;
                const double re = normal(rng), im = normal(rng);
                s.coeffs[s.index(kx, ky, kz)] = cd(re, kx == 0 ? 0.0 : im);
            }
    Field f = inverse_transform(s);
    const Field env = gaussian(g, envelope_width, c);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::fabs(f[i]) * env[i];
    return f;
}

std::vector<std::pair<std::string, Field>> initial_guesses(const SolverConfig& cfg, const std::optional<PotentialSpec>& v) {
    cfg.validate();
    const Grid3 g = cfg.grid();
    const Point3 c = guess_center(v);
    std::vector<std::pair<std::string, Field>> out;
    for (int i = 0; i < cfg.n_starts; ++i) {
        if (i == 0) {
            out.emplace_back("gaussian-L/8", gaussian(g, g.box_length() / 8.0, c));
        } else if (i == 1) {
            out.emplace_back("gaussian-L/16", gaussian(g, g.box_length() / 16.0, c));
        } else {
            const std::uint64_t s = cfg.seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(i);
            out.emplace_back("random-" + std::to_string(i - 1), random_band_limited_field(g, s, 4, g.box_length() / 6.0, c));
        }
        normalize_to(out.back().second, cfg.mu);
    }
    return out;
}

GroundStateResult minimize_from(const KernelParams& p, const std::optional<PotentialSpec>& v, const SolverConfig& cfg,
                                const Field& start, const std::string& label) {
    cfg.validate();
    const Grid3 g = cfg.grid();
    if (!(start.grid() == g)) throw SolverConfigError("start field is on a different grid");
    std::optional<Field> sv;
    if (potential_present(v)) sv = sample_potential(*v, g);
    GroundStateResult r = run_flow(p, v, sv ? &*sv : nullptr, cfg, start);
    r.start_index = 0;
    r.starts.push_back({label, r.breakdown.total, r.omega, r.residual, r.iters, r.converged, r.status});
    return r;
}

GroundStateResult minimize(const KernelParams& p, const std::optional<PotentialSpec>& v, const SolverConfig& cfg) {
    cfg.validate();
    const Grid3 g = cfg.grid();
    std::optional<Field> sv;
    if (potential_present(v)) sv = sample_potential(*v, g);
    const auto guesses = initial_guesses(cfg, v);
    std::vector<std::optional<GroundStateResult>> runs(guesses.size());
    parallel_for(static_cast<int>(guesses.size()), [&](int i) {
        SolverConfig c = cfg;
        runs[i] = run_flow(p, v, sv ? &*sv : nullptr, c, guesses[i].second);
    });
    int best = -1;
    for (int pass = 0; pass < 2 && best < 0; ++pass)
        for (int i = 0; i < static_cast<int>(runs.size()); ++i) {
            if (pass == 0 && !runs[i]->converged) continue;
            if (best < 0 || runs[i]->breakdown.total < runs[best]->breakdown.total) best = i;
        }
    GroundStateResult out = std::move(*runs[best]);
    out.start_index = best;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const GroundStateResult& r = (static_cast<int>(i) == best) ? out : *runs[i];
        out.starts.push_back({guesses[i].first, r.breakdown.total, r.omega, r.residual, r.iters, r.converged, r.status});
    }
    return out;
}

double residual(const Field& u, const KernelParams& p, const std::optional<PotentialSpec>& v, double omega,
                std::optional<double> truncation) {
    std::optional<Field> sv;
    if (potential_present(v)) sv = sample_potential(*v, u.grid());
    Field r = energy_gradient(u, p, sv ? &*sv : nullptr, truncation);
    for (std::size_t i = 0; i < u.size(); ++i) r[i] -= omega * u[i];
    return std::sqrt(mass(r));
}

std::vector<CurvePoint> energy_curve(const KernelParams& p, const std::optional<PotentialSpec>& v,
                                     const std::vector<double>& mu_list, const SolverConfig& cfg) {
    if (mu_list.empty()) throw SolverConfigError("empty mass list");
    for (std::size_t i = 0; i < mu_list.size(); ++i) {
        if (!(mu_list[i] > 0.0)) throw SolverConfigError("masses must be positive");
        if (i > 0 && !(mu_list[i] > mu_list[i - 1])) throw SolverConfigError("mass list must be strictly ascending");
    }
    std::vector<CurvePoint> out;
    for (std::size_t i = 0; i < mu_list.size(); ++i) {
        SolverConfig c = cfg;
        c.mu = mu_list[i];
        GroundStateResult r = i == 0 ? minimize(p, v, c)
                                     : minimize_from(p, v, c, std::sqrt(mu_list[i] / mu_list[i - 1]) * out.back().result.u);
        // braced initializers are evaluated left to right, so the move comes last
        out.push_back(CurvePoint{c.mu, r.breakdown.total, r.omega, r.converged, std::move(r)});
    }
    return out;
}

}  // namespace nlgs
