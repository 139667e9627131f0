#include "nlgs/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlgs/convolution.hpp"

namespace nlgs {

namespace {

double truncation_or_default(const Grid3& g, std::optional<double> t) {
    const double r = t ? *t : default_truncation(g);
    if (!(r > 0.0)) throw DomainError("truncation radius must be positive");
    return r;
}

void require_mass(const Field& u) {
    if (!(mass(u) > 0.0)) throw DomainError("field has zero mass");
}

std::vector<double> squared(const Field& u) {
    std::vector<double> rho(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) rho[i] = u[i] * u[i];
    return rho;
}

// Periodic band-limited interpolation kernel for an even number of samples
// (Nyquist term taken as a cosine).
double periodic_sinc(double y, int n, double box) {
    const double s = std::sin(std::numbers::pi * y / box);
    if (std::fabs(s) < 1e-15) return 1.0;
    return std::sin(std::numbers::pi * n * y / box) / (n * std::tan(std::numbers::pi * y / box));
}

}  // namespace

bool is_resolved(const Field& u) { return top_octave_fraction(u) <= kResolutionThreshold; }

NonlocalParts nonlocal_parts(const Field& u, const KernelParams& p, std::optional<double> truncation) {
    require_mass(u);
    const Grid3& g = u.grid();
    const double t = truncation_or_default(g, truncation);
    NonlocalParts out;
    PaddedConvolver& conv = PaddedConvolver::local(g.n());
    conv.load(squared(u));
    const double h3 = g.cell_volume();
    auto m0 = yukawa_padded_multiplier(g, ScreeningMass::finite(0.0), t);
    out.d0 = conv.self_energy(*m0, h3);
    auto block = [&](const ScreeningMass& c) {
        if (c.is_infinite()) return 0.0;
        if (c.is_zero()) return out.d0;
        return conv.self_energy(*yukawa_padded_multiplier(g, c, t), h3);
    };
    out.db = block(p.b);
    out.da = p.a == p.b ? out.db : block(p.a);
    out.k = (p.a.is_zero() && p.b.is_zero()) ? 0.0 : ((4.0 * out.db - out.da) - 3.0 * out.d0) / 3.0;
    return out;
}

double d_c(const Field& u, const ScreeningMass& c, std::optional<double> truncation) {
    require_mass(u);
    if (c.is_infinite()) return 0.0;
    const Grid3& g = u.grid();
    PaddedConvolver& conv = PaddedConvolver::local(g.n());
    conv.load(squared(u));
    return conv.self_energy(*yukawa_padded_multiplier(g, c, truncation_or_default(g, truncation)), g.cell_volume());
}

double k_ab(const Field& u, const KernelParams& p, std::optional<double> truncation) {
    require_mass(u);
    const Grid3& g = u.grid();
    auto m = kernel_padded_multiplier(g, p, truncation_or_default(g, truncation));
    if (!m) return 0.0;
    PaddedConvolver& conv = PaddedConvolver::local(g.n());
    conv.load(squared(u));
    return conv.self_energy(*m, g.cell_volume());
}

Field nonlocal_potential(const Field& u, const KernelParams& p, std::optional<double> truncation) {
    const Grid3& g = u.grid();
    Field out(g);
    auto m = kernel_padded_multiplier(g, p, truncation_or_default(g, truncation));
    if (!m) return out;
    PaddedConvolver& conv = PaddedConvolver::local(g.n());
    conv.load(squared(u));
    conv.potential(*m, out.values());
    return out;
}

EnergyBreakdown energy_sampled(const Field& u, const KernelParams& p, const Field* sampled_v, std::optional<double> truncation) {
    require_mass(u);
    EnergyBreakdown e;
    e.kinetic = 0.5 * dirichlet_energy(u);
    e.potential = sampled_v ? 0.5 * potential_energy(u, *sampled_v) : 0.0;
    const NonlocalParts parts = nonlocal_parts(u, p, truncation);
    e.d0 = parts.d0;
    e.da = parts.da;
    e.db = parts.db;
    e.nonlocal = 0.25 * parts.k;
    e.total = e.kinetic + e.potential + e.nonlocal;
    e.resolved = is_resolved(u);
    return e;
}

EnergyBreakdown energy(const Field& u, const KernelParams& p, const std::optional<PotentialSpec>& v, std::optional<double> truncation) {
    if (!v || v->is_trivial()) return energy_sampled(u, p, nullptr, truncation);
    const Field sv = sample_potential(*v, u.grid());
    return energy_sampled(u, p, &sv, truncation);
}

Field rescale(const Field& u, double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("rescale factor must be positive");
    if (theta == 1.0) return u;
    const Grid3& g = u.grid();
    const int n = g.n();
    const double L = g.box_length();
    const double t2 = theta * theta;
    std::vector<double> T(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const double xs = t2 * g.coordinate(i);
        // u vanishes outside the box; no periodic images
        if (xs < -0.5 * L || xs >= 0.5 * L) continue;
        for (int j = 0; j < n; ++j) T[static_cast<std::size_t>(i) * n + j] = periodic_sinc(xs - g.coordinate(j), n, L);
    }

    const std::size_t nn = n;
    std::vector<double> a(u.values()), b(u.size());
    // axis 0 (x, stride 1)
    for (std::size_t row = 0; row < nn * nn; ++row) {
        const double* src = a.data() + row * nn;
        double* dst = b.data() + row * nn;
        for (std::size_t i = 0; i < nn; ++i) {
            const double* ti = T.data() + i * nn;
            double s = 0.0;
            for (std::size_t j = 0; j < nn; ++j) s += ti[j] * src[j];
            dst[i] = s;
        }
    }
    // axis 1 (y, stride n)
    for (std::size_t k = 0; k < nn; ++k)
        for (std::size_t i = 0; i < nn; ++i) {
            const double* ti = T.data() + i * nn;
            double* dst = a.data() + nn * (i + nn * k);
            std::fill(dst, dst + nn, 0.0);
            for (std::size_t j = 0; j < nn; ++j) {
                const double t = ti[j];
                const double* src = b.data() + nn * (j + nn * k);
                for (std::size_t x = 0; x < nn; ++x) dst[x] += t * src[x];
            }
        }
    // axis 2 (z, stride n^2)
    const double scale = theta * theta * theta;
    const std::size_t plane = nn * nn;
    Field out(g);
    for (std::size_t i = 0; i < nn; ++i) {
        const double* ti = T.data() + i * nn;
        double* dst = out.values().data() + plane * i;
        for (std::size_t j = 0; j < nn; ++j) {
            const double t = scale * ti[j];
            const double* src = a.data() + plane * j;
            for (std::size_t xy = 0; xy < plane; ++xy) dst[xy] += t * src[xy];
        }
    }
    const double m0 = mass(u), m1 = mass(out);
    if (m0 > 0.0 && std::fabs(m1 - m0) > 1e-10 * m0)
        throw RescaleError("rescaled field leaks mass (relative change " + std::to_string(std::fabs(m1 - m0) / m0) + ")");
    return out;
}

double nehari_omega(const Field& u, const KernelParams& p, const std::optional<PotentialSpec>& v, std::optional<double> truncation) {
    const EnergyBreakdown e = energy(u, p, v, truncation);
    return (2.0 * e.kinetic + 2.0 * e.potential + 4.0 * e.nonlocal) / mass(u);
}

Field energy_gradient(const Field& u, const KernelParams& p, const Field* sampled_v, std::optional<double> truncation) {
    Spectrum s = transform(u);
    apply_k2(s);
    Field g = inverse_transform(s);
    const Field phi = nonlocal_potential(u, p, truncation);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double v = sampled_v ? (*sampled_v)[i] : 0.0;
        g[i] += (v + phi[i]) * u[i];
    }
    return g;
}

}  // namespace nlgs
