#include "nlgs/deficiency.hpp"

#include <utility>

namespace nlgs {

namespace {

// Best of minimize_from over shared starts; converged runs preferred.
GroundStateResult best_of(const KernelParams& p, const std::optional<PotentialSpec>& v, const SolverConfig& cfg,
                          const std::vector<std::pair<std::string, Field>>& starts) {
    std::vector<std::optional<GroundStateResult>> runs(starts.size());
    parallel_for(static_cast<int>(starts.size()),
                 [&](int i) { runs[i] = minimize_from(p, v, cfg, starts[i].second, starts[i].first); });
    int best = -1;
    for (int pass = 0; pass < 2 && best < 0; ++pass)
        for (int i = 0; i < static_cast<int>(runs.size()); ++i) {
            if (pass == 0 && !runs[i]->converged) continue;
            if (best < 0 || runs[i]->breakdown.total < runs[best]->breakdown.total) best = i;
        }
    GroundStateResult out = std::move(*runs[best]);
    out.start_index = best;
    out.starts.clear();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const GroundStateResult& r = static_cast<int>(i) == best ? out : *runs[i];
        out.starts.push_back({starts[i].first, r.breakdown.total, r.omega, r.residual, r.iters, r.converged, r.status});
    }
    return out;
}

}  // namespace

DeficiencyReport check_deficiency(const PotentialSpec& spec, const KernelParams& p, double mu, const SolverConfig& cfg) {
    if (!(mu > 0.0)) throw SolverConfigError("mu must be positive");
    spec.validate();
    SolverConfig c = cfg;
    c.mu = mu;
    c.validate();
    DeficiencyReport rep;
    rep.margin = 10.0 * c.tol_grad;

    const auto starts = initial_guesses(c, spec);
    rep.with_potential = best_of(p, spec, c, starts);
    rep.e_v = rep.with_potential->breakdown.total;
    bool ok = rep.with_potential->converged;

    if (spec.is_trivial()) {
        rep.without_potential = rep.with_potential;
        rep.e_0 = rep.e_v;
    } else if (p.b.is_zero()) {
        // the autonomous infimum is 0 and not attained for b = 0
        rep.e_0 = 0.0;
        rep.e0_analytic = true;
    } else {
        rep.without_potential = best_of(p, std::nullopt, c, starts);
        rep.e_0 = rep.without_potential->breakdown.total;
        ok = ok && rep.without_potential->converged;
    }
    rep.inconclusive = !ok;
    rep.deficient = ok && rep.e_v < rep.e_0 - rep.margin;
    return rep;
}

}  // namespace nlgs
