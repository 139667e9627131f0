#include "nlgs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "nlgs/functionals.hpp"
#include "nlgs/io.hpp"

namespace nlgs {

std::string to_string(AsymptoticTarget t) {
    switch (t) {
        case AsymptoticTarget::ZeroZero: return "0,0";
        case AsymptoticTarget::InfInf: return "inf,inf";
        case AsymptoticTarget::ZeroInf: return "0,inf";
    }
    return "?";
}

AsymptoticTarget parse_asymptotic_target(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (ch != ' ' && ch != '(' && ch != ')') t += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (t == "0,0") return AsymptoticTarget::ZeroZero;
    if (t == "inf,inf") return AsymptoticTarget::InfInf;
    if (t == "0,inf") return AsymptoticTarget::ZeroInf;
    throw DomainError("unknown asymptotic target '" + text + "' (expected 0,0 | inf,inf | 0,inf)");
}

KernelParams limit_kernel(AsymptoticTarget t) {
    const auto zero = ScreeningMass::finite(0.0), inf = ScreeningMass::infinite();
    switch (t) {
        case AsymptoticTarget::ZeroZero: return {zero, zero};
        case AsymptoticTarget::InfInf: return {inf, inf};
        case AsymptoticTarget::ZeroInf: return {zero, inf};
    }
    throw DomainError("bad target");
}

std::vector<KernelParams> default_sequence(AsymptoticTarget t, int steps) {
    if (steps < 1) throw DomainError("need at least one step");
    std::vector<KernelParams> out;
    for (int n = 0; n < steps; ++n) {
        const double up = std::ldexp(1.0, n), down = std::ldexp(1.0, -n);
        switch (t) {
            case AsymptoticTarget::ZeroZero: out.push_back(KernelParams::make(down, down)); break;
            case AsymptoticTarget::InfInf: out.push_back(KernelParams::make(up, up)); break;
            case AsymptoticTarget::ZeroInf: out.push_back(KernelParams::make(down, up)); break;
        }
    }
    return out;
}

double h1_distance(const Field& u, const Field& v) {
    const Field d = u - v;
    return std::sqrt(dirichlet_energy(d) + mass(d));
}

bool AsymptoticRun::distances_monotone() const {
    for (std::size_t i = 2; i < steps.size(); ++i)
        if (!(steps[i].h1_distance < steps[i - 1].h1_distance)) return false;
    return true;
}

AsymptoticRun run_asymptotic(AsymptoticTarget target, const std::optional<PotentialSpec>& v, double mu,
                             const std::vector<KernelParams>& sequence, const SolverConfig& cfg) {
    if (sequence.empty()) throw DomainError("empty kernel sequence");
    SolverConfig c = cfg;
    c.mu = mu;
    c.validate();
    const KernelParams lim = limit_kernel(target);
    const bool with_v = v && !v->is_trivial();

    AsymptoticRun run{target, mu, {}, GroundStateResult{Field(c.grid())}, std::nullopt};
    if (with_v) {
        DeficiencyReport d = check_deficiency(*v, lim, mu, c);
        if (!d.deficient)
            throw HypothesisViolation("potential is not energy-deficient for kernel " + lim.to_string() + " (e_v " +
                                      format_double(d.e_v) + ", e_0 " + format_double(d.e_0) +
                                      (d.inconclusive ? ", inconclusive" : "") + ")");
        run.limit_result = std::move(*d.with_potential);
        d.with_potential.reset();
        d.without_potential.reset();
        run.deficiency = std::move(d);
    } else {
        run.limit_result = minimize(lim, std::nullopt, c);
    }
    const Field limit_u = with_v ? run.limit_result.u : recenter_at_peak(run.limit_result.u);
    const double e_lim = run.limit_result.breakdown.total;

    run.steps.resize(sequence.size());
    parallel_for(static_cast<int>(sequence.size()), [&](int i) {
        const KernelParams& p = sequence[i];
        GroundStateResult r = minimize_from(p, v, c, limit_u, "limit");
        const Field u = with_v ? r.u : recenter_at_peak(r.u);
        AsymptoticStep& s = run.steps[i];
        s.params = p;
        s.energy = r.breakdown.total;
        s.omega = r.omega;
        s.h1_distance = h1_distance(u, limit_u);
        s.energy_gap = std::fabs(s.energy - e_lim);
        if (target == AsymptoticTarget::ZeroZero) s.gap_bound = (4.0 * p.b.value() + p.a.value()) * mu * mu / 12.0;
        s.converged = r.converged;
        s.status = r.status;
        s.iters = r.iters;
        s.residual = r.residual;
    });
    return run;
}

AsymptoticRun run_asymptotic(AsymptoticTarget target, const std::optional<PotentialSpec>& v, double mu, int steps,
                             const SolverConfig& cfg) {
    return run_asymptotic(target, v, mu, default_sequence(target, steps), cfg);
}

std::string asymptotic_csv(const AsymptoticRun& run) {
    std::ostringstream os;
    os << "step,a,b,energy,omega,h1_distance,energy_gap,gap_bound,converged,iters,residual\n";
    for (std::size_t i = 0; i < run.steps.size(); ++i) {
        const AsymptoticStep& s = run.steps[i];
        os << i << ',' << s.params.a.to_string() << ',' << s.params.b.to_string() << ',' << format_double(s.energy) << ','
           << format_double(s.omega) << ',' << format_double(s.h1_distance) << ',' << format_double(s.energy_gap) << ','
           << (s.gap_bound ? format_double(*s.gap_bound) : "") << ',' << (s.converged ? 1 : 0) << ',' << s.iters << ','
           << format_double(s.residual) << '\n';
    }
    return os.str();
}

namespace {

struct ShapePoint {
    double mu, kinetic2, energy;
};

// Smallest C1 + C2 >= 0 with t_i <= C1 mu_i + C2 y_i for all points. The
// optimum of this two-variable program sits on an axis or on the intersection
// of two active constraints, so enumerate those candidates.
bool fit_shape(const std::vector<ShapePoint>& pts, double& c1, double& c2) {
    std::vector<double> t, x, y;
    for (const auto& p : pts) {
        t.push_back(0.25 * p.kinetic2 - p.energy);
        x.push_back(p.mu);
        y.push_back(std::sqrt(p.kinetic2) * std::pow(p.mu, 1.5));
    }
    auto feasible = [&](double a, double b) {
        if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b)) return false;
        for (std::size_t i = 0; i < t.size(); ++i)
            if (t[i] > (a * x[i] + b * y[i]) * (1.0 + 1e-12)) return false;
        return true;
    };
    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](double a, double b) {
        if (feasible(a, b) && a + b < best) {
            best = a + b;
            c1 = a;
            c2 = b;
        }
    };
    double a_only = 0.0, b_only = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        a_only = std::max(a_only, t[i] / x[i]);
        b_only = std::max(b_only, t[i] / y[i]);
    }
    consider(a_only, 0.0);
    consider(0.0, b_only);
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j) {
            const double det = x[i] * y[j] - x[j] * y[i];
            if (std::fabs(det) < 1e-300) continue;
            consider((t[i] * y[j] - t[j] * y[i]) / det, (x[i] * t[j] - x[j] * t[i]) / det);
        }
    return std::isfinite(best);
}

}  // namespace

bool InequalityReport::passed() const {
    return l4_violations == 0 && difference_violations == 0 && monotone_violations == 0 && shape_fitted;
}

InequalityReport inequality_suite(int sample_count, std::uint64_t seed, const std::vector<double>& cs, std::optional<Grid3> grid) {
    if (sample_count < 1) throw DomainError("sample_count must be at least 1");
    for (double c : cs)
        if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("screening masses must be positive and finite");
    const Grid3 g = grid ? *grid : Grid3(32, 20.0);
    const double L = g.box_length();

    struct Draw {
        std::uint64_t field_seed;
        int band;
        double width, mass;
        Point3 center;
    };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Draw> draws;
    for (int i = 0; i < sample_count; ++i) {
        Draw d;
        d.field_seed = rng();
        d.band = 2 + static_cast<int>(rng() % 5);
        d.width = L * (1.0 / 12.0 + unit(rng) * (1.0 / 5.0 - 1.0 / 12.0));
        d.mass = 0.5 + 1.5 * unit(rng);
        for (double& x : d.center) x = (unit(rng) - 0.5) * L / 5.0;
        draws.push_back(d);
    }

    std::vector<double> sorted = cs;
    std::sort(sorted.begin(), sorted.end());
    const KernelParams choquard{ScreeningMass::infinite(), ScreeningMass::infinite()};
    const PotentialSpec coulomb = coulomb_potential(-1.0);
    const Field sv = sample_potential(coulomb, g);

    std::vector<std::vector<InequalityRecord>> per(sample_count);
    std::vector<ShapePoint> shape(sample_count);
    std::vector<int> mono(sample_count, 0);
    parallel_for(sample_count, [&](int i) {
        const Draw& d = draws[i];
        Field u = random_band_limited_field(g, d.field_seed, d.band, d.width, d.center);
        u = std::sqrt(d.mass / mass(u)) * u;
        const double m = mass(u);
        const double l4 = std::pow(lp_norm(u, 4.0), 4.0);
        const double d0 = d_c(u, ScreeningMass::finite(0.0));
        double prev = d0;
        for (double c : sorted) {
            const double dc = d_c(u, ScreeningMass::finite(c));
            per[i].push_back({i, c, m, d0, dc, 4.0 * std::numbers::pi / (c * c) * l4, c * m * m});
            if (dc > prev * (1.0 + 1e-12) || dc < 0.0) ++mono[i];
            prev = dc;
        }
        const EnergyBreakdown e = energy_sampled(u, choquard, &sv);
        shape[i] = {m, 2.0 * e.kinetic, e.total};
    });

    InequalityReport rep;
    rep.samples = sample_count;
    rep.seed = seed;
    rep.cs = sorted;
    for (int i = 0; i < sample_count; ++i) {
        rep.monotone_violations += mono[i];
        for (const auto& r : per[i]) {
            rep.records.push_back(r);
            const double q4 = r.dc / r.l4_bound, q5 = (r.d0 - r.dc) / r.difference_bound;
            rep.l4_max_ratio = std::max(rep.l4_max_ratio, q4);
            rep.difference_max_ratio = std::max(rep.difference_max_ratio, q5);
            if (r.dc > r.l4_bound) ++rep.l4_violations;
            if (r.d0 - r.dc > r.difference_bound) ++rep.difference_violations;
        }
    }
    rep.shape_fitted = fit_shape(shape, rep.shape_c1, rep.shape_c2);
    return rep;
}

std::string inequality_csv(const InequalityReport& rep) {
    std::ostringstream os;
    os << "sample,c,mass,d0,dc,l4_bound,difference_bound\n";
    for (const auto& r : rep.records)
        os << r.sample << ',' << format_double(r.c) << ',' << format_double(r.mass) << ',' << format_double(r.d0) << ','
           << format_double(r.dc) << ',' << format_double(r.l4_bound) << ',' << format_double(r.difference_bound) << '\n';
    return os.str();
}

std::vector<AtlasRow> atlas_sweep(const std::vector<ScreeningMass>& a_grid, const std::vector<ScreeningMass>& b_grid) {
    std::vector<KernelParams> cells;
    for (const auto& a : a_grid)
        for (const auto& b : b_grid) cells.push_back({a, b});
    std::vector<std::optional<AtlasRow>> rows(cells.size());
    parallel_for(static_cast<int>(cells.size()), [&](int i) {
        const KernelParams& p = cells[i];
        AtlasRow row{p, classify_kernel(p), std::nullopt};
        if (!p.a.is_infinite() && !p.b.is_infinite()) {
            if (p.a.is_zero() && p.b.is_zero())
                row.geometry = KernelGeometryReport{{}, {}, 0.0, 0.0, std::nullopt};
            else
                row.geometry = analyze_geometry(p);
        }
        rows[i] = std::move(row);
    });
    std::vector<AtlasRow> out;
    for (auto& r : rows) out.push_back(std::move(*r));
    return out;
}

std::string atlas_csv(const std::vector<AtlasRow>& rows) {
    std::ostringstream os;
    os << "a,b,regime,sign,monotonicity,gradient_energy_finite,value_at_zero,slope_at_zero,critical_points,sign_change_radius\n";
    for (const auto& r : rows) {
        os << r.params.a.to_string() << ',' << r.params.b.to_string() << ",\"" << to_string(r.cls.regime) << "\","
           << to_string(r.cls.sign) << ',' << to_string(r.cls.monotonicity) << ',' << (r.cls.gradient_energy_finite ? 1 : 0)
           << ',';
        if (r.geometry) {
            os << format_double(r.geometry->value_at_zero) << ',' << format_double(r.geometry->slope_at_zero) << ',';
            for (std::size_t i = 0; i < r.geometry->critical_points.size(); ++i)
                os << (i ? ";" : "") << format_double(r.geometry->critical_points[i]);
            os << ',';
            if (r.geometry->sign_change_radius) os << format_double(*r.geometry->sign_change_radius);
        } else {
            os << ",,,";
        }
        os << '\n';
    }
    return os.str();
}

bool CurveChecks::passed() const {
    return ratio_decreasing && std::all_of(subadditivity.begin(), subadditivity.end(), [](const auto& c) { return c.holds; });
}

CurveChecks check_energy_curve(const std::vector<CurvePoint>& curve, double min_drop) {
    CurveChecks out;
    if (curve.empty()) return out;
    out.smallest_drop = std::numeric_limits<double>::infinity();
    std::vector<double> lm, f;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        out.all_converged = out.all_converged && curve[i].converged;
        lm.push_back(std::log(curve[i].mu));
        f.push_back(curve[i].energy / curve[i].mu);
        if (i > 0) {
            const double drop = f[i - 1] - f[i];
            out.smallest_drop = std::min(out.smallest_drop, drop);
            if (!(drop > min_drop)) out.ratio_decreasing = false;
        }
    }
    auto energy_at = [&](double m, bool& interp) -> std::optional<double> {
        for (const auto& c : curve)
            if (std::fabs(c.mu - m) <= 1e-12 * m) return c.energy;
        const double x = std::log(m);
        if (x < lm.front() || x > lm.back()) return std::nullopt;
        interp = true;
        std::size_t j = 1;
        while (lm[j] < x) ++j;
        const double t = (x - lm[j - 1]) / (lm[j] - lm[j - 1]);
        return m * ((1.0 - t) * f[j - 1] + t * f[j]);
    };
    for (const auto& c : curve)
        for (double frac : {1.0 / 3.0, 0.5}) {
            SubadditivityCheck s;
            s.mu = c.mu;
            s.rho = frac * c.mu;
            s.e_mu = c.energy;
            auto e1 = energy_at(s.rho, s.interpolated);
            auto e2 = energy_at(c.mu - s.rho, s.interpolated);
            if (!e1 || !e2) continue;
            s.e_rho = *e1;
            s.e_rest = *e2;
            s.holds = s.e_mu < s.e_rho + s.e_rest;
            out.subadditivity.push_back(s);
        }
    return out;
}

std::vector<RescalingCheck> rescaling_checks(const Field& u, const std::vector<double>& thetas,
                                             const std::vector<KernelParams>& kernels) {
    std::vector<RescalingCheck> out;
    const double m0 = mass(u), a0 = dirichlet_energy(u);
    for (double theta : thetas) {
        const Field ut = rescale(u, theta);
        RescalingCheck rc;
        rc.theta = theta;
        rc.mass_rel = std::fabs(mass(ut) / m0 - 1.0);
        rc.kinetic_rel = std::fabs(dirichlet_energy(ut) / (std::pow(theta, 4) * a0) - 1.0);
        const double s = 1.0 / (theta * theta);
        for (const auto& p : kernels) {
            const KernelParams q{p.a.scaled(1.0 / s), p.b.scaled(1.0 / s)};
            const double lhs = k_ab(ut, p), rhs = theta * theta * k_ab(u, q);
            rc.kernel_rel.emplace_back(p, std::fabs(lhs / rhs - 1.0));
        }
        out.push_back(std::move(rc));
    }
    return out;
}

}  // namespace nlgs
