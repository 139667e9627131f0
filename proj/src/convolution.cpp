#include "nlgs/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <list>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include <fftw3.h>

#include "fftw_lock.hpp"

namespace nlgs {

namespace {

// Even-symmetric 3-D cosine transform (REDFT00 per axis), in place on an m^3 cube.
void redft00_cube(std::vector<double>& data, int m) {
    double* buf;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        buf = fftw_alloc_real(static_cast<std::size_t>(m) * m * m);
        plan = fftw_plan_r2r_3d(m, m, m, buf, buf, FFTW_REDFT00, FFTW_REDFT00, FFTW_REDFT00, FFTW_ESTIMATE);
    }
    std::copy(data.begin(), data.end(), buf);
    fftw_execute(plan);
    std::copy(buf, buf + data.size(), data.begin());
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
    fftw_free(buf);
}

std::shared_ptr<PaddedMultiplier> build_block(const Grid3& g, const ScreeningMass& c, double truncation) {
    const int n = g.n();
    const double h = g.spacing();
    const double L = g.box_length();
    // Periodize the truncated kernel with a period long enough that no image
    // reaches a displacement inside [-L, L]^3, then band-limit it to the grid.
    const int half = static_cast<int>(std::ceil((L + truncation) / (2.0 * h)));
    const int np = 2 * half;
    const int q = half + 1;
    const double period = np * h;
    const double dk = 2.0 * std::numbers::pi / period;

    std::vector<double> by_shell(3 * static_cast<std::size_t>(half) * half + 1, std::numeric_limits<double>::quiet_NaN());
    std::vector<double> cube(static_cast<std::size_t>(q) * q * q);
    for (int z = 0; z < q; ++z)
        for (int y = 0; y < q; ++y)
            for (int x = 0; x < q; ++x) {
                const std::size_t s = static_cast<std::size_t>(x) * x + static_cast<std::size_t>(y) * y + static_cast<std::size_t>(z) * z;
                double& v = by_shell[s];
                if (std::isnan(v)) v = yukawa_block_multiplier(c, dk * std::sqrt(static_cast<double>(s)), truncation);
                cube[static_cast<std::size_t>(x) + q * (static_cast<std::size_t>(y) + static_cast<std::size_t>(q) * z)] = v;
            }
    redft00_cube(cube, q);

    const int r = n + 1;
    const double inv_vol = 1.0 / (period * period * period);
    std::vector<double> kernel(static_cast<std::size_t>(r) * r * r);
    for (int z = 0; z < r; ++z)
        for (int y = 0; y < r; ++y)
            for (int x = 0; x < r; ++x)
                kernel[static_cast<std::size_t>(x) + r * (static_cast<std::size_t>(y) + static_cast<std::size_t>(r) * z)] =
                    inv_vol * cube[static_cast<std::size_t>(x) + q * (static_cast<std::size_t>(y) + static_cast<std::size_t>(q) * z)];
    redft00_cube(kernel, r);

    auto out = std::make_shared<PaddedMultiplier>();
    out->n = n;
    out->folded = std::move(kernel);
    const double h3 = h * h * h;
    for (double& v : out->folded) v *= h3;
    return out;
}

using BlockKey = std::tuple<int, double, double, bool, double>;
using PairKey = std::tuple<int, double, double, bool, double, bool, double>;

template <class Key>
class LruCache {
public:
    explicit LruCache(std::size_t cap) : cap_(cap) {}

    template <class Make>
    std::shared_ptr<const PaddedMultiplier> get(const Key& key, Make make) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = index_.find(key);
        if (it != index_.end()) {
            order_.splice(order_.begin(), order_, it->second);
            return it->second->second;
        }
        std::shared_ptr<const PaddedMultiplier> value = make();
        order_.emplace_front(key, value);
        index_[key] = order_.begin();
        if (order_.size() > cap_) {
            index_.erase(order_.back().first);
            order_.pop_back();
        }
        return value;
    }

private:
    std::size_t cap_;
    std::mutex mutex_;
    std::list<std::pair<Key, std::shared_ptr<const PaddedMultiplier>>> order_;
    std::map<Key, typename decltype(order_)::iterator> index_;
};

BlockKey block_key(const Grid3& g, const ScreeningMass& c, double t) {
    return {g.n(), g.box_length(), t, c.is_infinite(), c.is_infinite() ? 0.0 : c.value()};
}

}  // namespace

double default_truncation(const Grid3& g) { return std::sqrt(3.0) * g.box_length(); }

std::shared_ptr<const PaddedMultiplier> yukawa_padded_multiplier(const Grid3& g, const ScreeningMass& c, double truncation) {
    if (!(truncation > 0.0)) throw DomainError("truncation radius must be positive");
    if (c.is_infinite()) return nullptr;
    static LruCache<BlockKey> cache(24);
    return cache.get(block_key(g, c, truncation), [&] { return build_block(g, c, truncation); });
}

std::shared_ptr<const PaddedMultiplier> kernel_padded_multiplier(const Grid3& g, const KernelParams& p, double truncation) {
    if (p.a.is_zero() && p.b.is_zero()) return nullptr;
    static LruCache<PairKey> cache(16);
    const BlockKey ka = block_key(g, p.a, truncation), kb = block_key(g, p.b, truncation);
    const PairKey key{g.n(), g.box_length(), truncation, std::get<3>(ka), std::get<4>(ka), std::get<3>(kb), std::get<4>(kb)};
    return cache.get(key, [&] {
        auto mb = yukawa_padded_multiplier(g, p.b, truncation);
        auto ma = yukawa_padded_multiplier(g, p.a, truncation);
        auto m0 = yukawa_padded_multiplier(g, ScreeningMass::finite(0.0), truncation);
        auto out = std::make_shared<PaddedMultiplier>();
        out->n = g.n();
        out->folded.resize(m0->folded.size());
        for (std::size_t i = 0; i < out->folded.size(); ++i) {
            const double vb = mb ? mb->folded[i] : 0.0;
            const double va = ma ? ma->folded[i] : 0.0;
            out->folded[i] = ((4.0 * vb - va) - 3.0 * m0->folded[i]) / 3.0;
        }
        return std::shared_ptr<const PaddedMultiplier>(out);
    });
}

// Layout: rows_ holds the n*n x-rows (y,z < n) of length m = 2n; spectra are
// m (z) x m (y) x (n+1) (x), x fastest.
PaddedConvolver::PaddedConvolver(int n) : n_(n), m_(2 * n) {
    const std::size_t m = m_, nn = n_, nc = nn + 1;
    const std::size_t spec_size = m * m * nc;
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    rows_ = fftw_alloc_real(nn * nn * m);
    spec_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(spec_size));
    work_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(spec_size));
    auto* cs = reinterpret_cast<fftw_complex*>(spec_);
    auto* cw = reinterpret_cast<fftw_complex*>(work_);
    const auto M = static_cast<std::ptrdiff_t>(m), N = static_cast<std::ptrdiff_t>(nn), NC = static_cast<std::ptrdiff_t>(nc);

    fftw_iodim64 xdim_r2c{M, 1, 1};
    fftw_iodim64 xrows[2] = {{N, M, NC}, {N, M * N, M * NC}};
    plans_[0] = fftw_plan_guru64_dft_r2c(1, &xdim_r2c, 2, xrows, rows_, cs, FFTW_ESTIMATE);

    fftw_iodim64 ydim{M, NC, NC};
    fftw_iodim64 yrows[2] = {{NC, 1, 1}, {N, M * NC, M * NC}};
    plans_[1] = fftw_plan_guru64_dft(1, &ydim, 2, yrows, cs, cs, FFTW_FORWARD, FFTW_ESTIMATE);

    fftw_iodim64 zdim{M, M * NC, M * NC};
    fftw_iodim64 zrows{M * NC, 1, 1};
    plans_[2] = fftw_plan_guru64_dft(1, &zdim, 1, &zrows, cs, cs, FFTW_FORWARD, FFTW_ESTIMATE);

    plans_[3] = fftw_plan_guru64_dft(1, &zdim, 1, &zrows, cw, cw, FFTW_BACKWARD, FFTW_ESTIMATE);
    plans_[4] = fftw_plan_guru64_dft(1, &ydim, 2, yrows, cw, cw, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_iodim64 xrows_c2r[2] = {{N, NC, M}, {N, M * NC, M * N}};
    plans_[5] = fftw_plan_guru64_dft_c2r(1, &xdim_r2c, 2, xrows_c2r, cw, rows_, FFTW_ESTIMATE);
    for (void* p : plans_)
        if (!p) throw std::runtime_error("FFTW failed to build a padded convolution plan");
}

PaddedConvolver::~PaddedConvolver() {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    for (void* p : plans_) fftw_destroy_plan(static_cast<fftw_plan>(p));
    fftw_free(rows_);
    fftw_free(spec_);
    fftw_free(work_);
}

PaddedConvolver& PaddedConvolver::local(int n) {
    thread_local std::map<int, std::unique_ptr<PaddedConvolver>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<PaddedConvolver>(n);
    return *slot;
}

void PaddedConvolver::load(const std::vector<double>& density) {
    const std::size_t n = n_, m = m_;
    if (density.size() != n * n * n) throw GridError("density size does not match convolver");
    for (std::size_t row = 0; row < n * n; ++row) {
        double* dst = rows_ + row * m;
        std::memcpy(dst, density.data() + row * n, n * sizeof(double));
        std::memset(dst + n, 0, n * sizeof(double));
    }
    std::memset(static_cast<void*>(spec_), 0, m * m * (n + 1) * sizeof(std::complex<double>));
    fftw_execute(static_cast<fftw_plan>(plans_[0]));
    fftw_execute(static_cast<fftw_plan>(plans_[1]));
    fftw_execute(static_cast<fftw_plan>(plans_[2]));
}

namespace {
inline int fold(int k, int m) { return k <= m / 2 ? k : m - k; }
}  // namespace

double PaddedConvolver::self_energy(const PaddedMultiplier& mult, double cell_volume) const {
    const int m = m_, nc = n_ + 1;
    double total = 0.0;
    for (int kz = 0; kz < m; ++kz) {
        const int fz = fold(kz, m);
        for (int ky = 0; ky < m; ++ky) {
            const int fy = fold(ky, m);
            const std::complex<double>* row = spec_ + static_cast<std::size_t>(nc) * (ky + static_cast<std::size_t>(m) * kz);
            double rs = 0.0;
            for (int kx = 0; kx < nc; ++kx) {
                const double w = (kx == 0 || kx == n_) ? 1.0 : 2.0;
                rs += w * mult.at(kx, fy, fz) * std::norm(row[kx]);
            }
            total += rs;
        }
    }
    const double md = static_cast<double>(m);
    return cell_volume * total / (md * md * md);
}

void PaddedConvolver::potential(const PaddedMultiplier& mult, std::vector<double>& out) {
    const int m = m_, nc = n_ + 1;
    for (int kz = 0; kz < m; ++kz) {
        const int fz = fold(kz, m);
        for (int ky = 0; ky < m; ++ky) {
            const int fy = fold(ky, m);
            const std::size_t off = static_cast<std::size_t>(nc) * (ky + static_cast<std::size_t>(m) * kz);
            for (int kx = 0; kx < nc; ++kx) work_[off + kx] = spec_[off + kx] * mult.at(kx, fy, fz);
        }
    }
    fftw_execute(static_cast<fftw_plan>(plans_[3]));
    fftw_execute(static_cast<fftw_plan>(plans_[4]));
    fftw_execute(static_cast<fftw_plan>(plans_[5]));
    const std::size_t n = n_;
    out.resize(n * n * n);
    const double md = static_cast<double>(m);
    const double scale = 1.0 / (md * md * md);
    for (std::size_t row = 0; row < n * n; ++row) {
        const double* src = rows_ + row * static_cast<std::size_t>(m);
        for (std::size_t i = 0; i < n; ++i) out[row * n + i] = scale * src[i];
    }
}

}  // namespace nlgs
