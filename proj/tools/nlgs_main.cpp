#include <iostream>

#include <CLI11.hpp>

#include "nlgs/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Ground states of the mass-constrained nonlocal Schrodinger problem"};
    app.require_subcommand(1);

    nlgs::ConfigOverrides flags;
    std::string config_path;
    std::string a, b, out;
    double alpha = 0, beta = 0, mu = 0, box = 0;
    int grid_n = 0;
    std::uint64_t seed = 0;
    std::vector<double> mu_list;

    struct Sub {
        CLI::App* app;
        nlgs::Subcommand kind;
    };
    std::vector<Sub> subs;
    for (auto [name, kind, help] : {std::tuple{"solve", nlgs::Subcommand::Solve, "minimize the energy at one mass"},
                                    std::tuple{"sweep", nlgs::Subcommand::Sweep, "warm-started energy curve over masses"},
                                    std::tuple{"atlas", nlgs::Subcommand::Atlas, "kernel classification table"},
                                    std::tuple{"verify", nlgs::Subcommand::Verify, "inequalities, atlas and rescaling checks"}}) {
        CLI::App* s = app.add_subcommand(name, help);
        s->add_option("--config", config_path, "config file");
        auto* oa = s->add_option("--a", a, "screening mass a (number or inf)");
        auto* ob = s->add_option("--b", b, "screening mass b (number or inf)");
        auto* oal = s->add_option("--alpha", alpha, "coupling alpha");
        auto* obe = s->add_option("--beta", beta, "coupling beta");
        oa->excludes(oal)->excludes(obe);
        ob->excludes(oal)->excludes(obe);
        s->add_option("--mu", mu, "target mass");
        s->add_option("--grid-n", grid_n, "grid points per axis");
        s->add_option("--box", box, "box length");
        s->add_option("--seed", seed, "random seed");
        s->add_option("--out", out, "output directory");
        if (kind == nlgs::Subcommand::Sweep) s->add_option("--mu-list", mu_list, "ascending masses")->delimiter(',');
        subs.push_back({s, kind});
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (const auto& s : subs) {
        if (!s.app->parsed()) continue;
        auto given = [&](const char* opt) { return s.app->count(opt) > 0; };
        if (given("--a")) flags.a = a;
        if (given("--b")) flags.b = b;
        if (given("--alpha")) flags.alpha = alpha;
        if (given("--beta")) flags.beta = beta;
        if (given("--mu")) flags.mu = mu;
        if (given("--grid-n")) flags.grid_n = grid_n;
        if (given("--box")) flags.box = box;
        if (given("--seed")) flags.seed = seed;
        if (given("--out")) flags.out = out;
        if (s.kind == nlgs::Subcommand::Sweep && given("--mu-list")) flags.mu_list = mu_list;
        try {
            const auto cfg = nlgs::parse_config(given("--config") ? std::optional<std::string>(config_path) : std::nullopt,
                                                s.kind, flags);
            return nlgs::run(cfg, std::cout);
        } catch (const nlgs::ConfigError& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return 2;
        }
    }
    return 2;
}
