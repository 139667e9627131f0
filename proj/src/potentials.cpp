#include "nlgs/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlgs/io.hpp"

namespace nlgs {

void PotentialSpec::validate() const {
    for (const auto& t : terms) {
        if (!(t.alpha > 0.0 && t.alpha < 2.0))
            throw InvalidPotential("power-term exponent must lie in (0, 2), got " + format_double(t.alpha));
        if (!std::isfinite(t.q)) throw InvalidPotential("power-term strength must be finite");
        for (double c : t.center)
            if (!std::isfinite(c)) throw InvalidPotential("power-term center must be finite");
    }
    if (bounded) {
        if (!std::isfinite(bounded->amplitude)) throw InvalidPotential("bounded amplitude must be finite");
        if (!(bounded->width > 0.0) || !std::isfinite(bounded->width)) throw InvalidPotential("bounded width must be positive");
        for (double c : bounded->center)
            if (!std::isfinite(c)) throw InvalidPotential("bounded center must be finite");
    }
}

bool PotentialSpec::is_trivial() const {
    const bool no_terms = std::all_of(terms.begin(), terms.end(), [](const PowerTerm& t) { return t.q == 0.0; });
    return no_terms && (!bounded || bounded->amplitude == 0.0);
}

bool PotentialSpec::is_nonpositive() const {
    const bool terms_ok = std::all_of(terms.begin(), terms.end(), [](const PowerTerm& t) { return t.q <= 0.0; });
    return terms_ok && (!bounded || bounded->amplitude <= 0.0);
}

double PotentialSpec::bounded_sup_norm() const { return bounded ? std::fabs(bounded->amplitude) : 0.0; }

PotentialSpec PotentialSpec::bounded_only() const {
    PotentialSpec out;
    out.bounded = bounded;
    return out;
}

PotentialSpec PotentialSpec::singular_only() const {
    PotentialSpec out;
    out.terms = terms;
    return out;
}

std::string PotentialSpec::describe() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms) {
        if (!first) os << " + ";
        first = false;
        os << format_double(t.q) << "/|x-(" << format_double(t.center[0]) << ',' << format_double(t.center[1]) << ','
           << format_double(t.center[2]) << ")|^" << format_double(t.alpha);
    }
    if (bounded) {
        if (!first) os << " + ";
        first = false;
        os << "bump(" << format_double(bounded->amplitude) << ", width " << format_double(bounded->width) << ')';
    }
    if (first) os << "0";
    return os.str();
}

PotentialSpec coulomb_potential(double q, Point3 center) {
    PotentialSpec s;
    s.terms.push_back({q, 1.0, center});
    return s;
}

Field sample_potential(const PotentialSpec& spec, const Grid3& g) {
    spec.validate();
    const double half = 0.5 * g.box_length();
    for (const auto& t : spec.terms)
        for (double c : t.center)
            if (!(c >= -half && c < half)) throw InvalidPotential("power-term center lies outside the box");
    const double cap = 0.5 * g.spacing();
    Field v(g);
    const int n = g.n();
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double x = g.coordinate(i), y = g.coordinate(j), z = g.coordinate(k);
                double s = 0.0;
                for (const auto& t : spec.terms) {
                    const double dx = x - t.center[0], dy = y - t.center[1], dz = z - t.center[2];
                    const double r = std::max(std::sqrt(dx * dx + dy * dy + dz * dz), cap);
                    s += t.alpha == 1.0 ? t.q / r : t.q / std::pow(r, t.alpha);
                }
                if (spec.bounded) {
                    const auto& b = *spec.bounded;
                    const double dx = x - b.center[0], dy = y - b.center[1], dz = z - b.center[2];
                    s += b.amplitude * std::exp(-(dx * dx + dy * dy + dz * dz) / (2.0 * b.width * b.width));
                }
                v[g.index(i, j, k)] = s;
            }
    return v;
}

double potential_energy(const Field& u, const Field& sampled_v) {
    if (!(u.grid() == sampled_v.grid())) throw GridError("potential sampled on a different grid");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += sampled_v[i] * u[i] * u[i];
    return u.grid().cell_volume() * s;
}

double potential_energy(const Field& u, const PotentialSpec& spec) {
    if (spec.is_trivial()) return 0.0;
    return potential_energy(u, sample_potential(spec, u.grid()));
}

bool vanishes_at_infinity(const PotentialSpec& spec) {
    spec.validate();
    return true;
}

double l32_norm(const Field& v) { return lp_norm(v, 1.5); }

double perturbation_bound(const Field& u, const Field& v2, double v3_sup, double mu) {
    const double l6 = lp_norm(u, 6.0);
    return 0.5 * l6 * l6 * l32_norm(v2) + 0.5 * v3_sup * mu;
}

}  // namespace nlgs
