#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "nlgs/grid.hpp"
#include "nlgs/kernel.hpp"

namespace nlgs {

/// Fourier multiplier of a radial kernel on the doubled grid (2n per axis).
/// Values depend on folded frequency indices only, stored as (n+1)^3.
struct PaddedMultiplier {
    int n = 0;
    std::vector<double> folded;

    double at(int fx, int fy, int fz) const {
        const std::size_t m = static_cast<std::size_t>(n) + 1;
        return folded[static_cast<std::size_t>(fx) + m * (static_cast<std::size_t>(fy) + m * fz)];
    }
};

/// Box diagonal, the default truncation radius.
double default_truncation(const Grid3& g);

/// Multiplier for e^{-c r}/r truncated at `truncation`; nullptr for c = inf.
std::shared_ptr<const PaddedMultiplier> yukawa_padded_multiplier(const Grid3& g, const ScreeningMass& c, double truncation);

/// (4 M_b - M_a - 3 M_0) / 3; nullptr for a = b = 0.
std::shared_ptr<const PaddedMultiplier> kernel_padded_multiplier(const Grid3& g, const KernelParams& p, double truncation);

/// Zero-padded convolution on the doubled grid using pruned transforms.
/// Not shareable across threads; use PaddedConvolver::local.
class PaddedConvolver {
public:
    explicit PaddedConvolver(int n);
    ~PaddedConvolver();
    PaddedConvolver(const PaddedConvolver&) = delete;
    PaddedConvolver& operator=(const PaddedConvolver&) = delete;

    static PaddedConvolver& local(int n);

    /// Loads a density on the n^3 grid and transforms it.
    void load(const std::vector<double>& density);
    /// h^3 sum rho (g * rho) for the loaded density.
    double self_energy(const PaddedMultiplier& m, double cell_volume) const;
    /// (g * rho) sampled on the original n^3 grid.
    void potential(const PaddedMultiplier& m, std::vector<double>& out);

private:
    int n_;
    int m_;
    double* rows_;
    std::complex<double>* spec_;
    std::complex<double>* work_;
    void* plans_[6];
};

}  // namespace nlgs
