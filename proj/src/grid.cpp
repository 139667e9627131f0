#include "nlgs/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

#include <fftw3.h>

#include "fftw_lock.hpp"
#include "nlgs/io.hpp"

namespace nlgs {

namespace detail {
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

Grid3::Grid3(int n, double box_length) : n_(n), box_length_(box_length) {
    if (n < 8 || n % 2 != 0) throw GridError("grid needs an even n >= 8, got " + std::to_string(n));
    if (!(box_length > 0.0) || !std::isfinite(box_length)) throw GridError("box length must be positive and finite");
}

double Grid3::wavenumber(int m) const { return 2.0 * std::numbers::pi * frequency_index(m) / box_length_; }

Field::Field(const Grid3& g, std::vector<double> values) : grid_(g), values_(std::move(values)) {
    if (values_.size() != g.size()) throw GridError("field size does not match grid");
}

Field Field::from_function(const Grid3& g, const std::function<double(double, double, double)>& f) {
    Field out(g);
    const int n = g.n();
    for (int k = 0; k < n; ++k) {
        const double z = g.coordinate(k);
        for (int j = 0; j < n; ++j) {
            const double y = g.coordinate(j);
            for (int i = 0; i < n; ++i) out[g.index(i, j, k)] = f(g.coordinate(i), y, z);
        }
    }
    return out;
}

bool Field::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Fft3::Fft3(int n) : n_(n) {
    const std::size_t nr = static_cast<std::size_t>(n) * n * n;
    const std::size_t nc = static_cast<std::size_t>(n) * n * (n / 2 + 1);
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    real_ = fftw_alloc_real(nr);
    spec_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(nc));
    auto* cs = reinterpret_cast<fftw_complex*>(spec_);
    plan_fwd_ = fftw_plan_dft_r2c_3d(n, n, n, real_, cs, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_c2r_3d(n, n, n, cs, real_, FFTW_ESTIMATE);
}

Fft3::~Fft3() {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    fftw_free(real_);
    fftw_free(spec_);
}

void Fft3::forward() { fftw_execute(static_cast<fftw_plan>(plan_fwd_)); }
void Fft3::backward() { fftw_execute(static_cast<fftw_plan>(plan_bwd_)); }

Fft3& Fft3::local(int n) {
    thread_local std::map<int, std::unique_ptr<Fft3>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Fft3>(n);
    return *slot;
}

Spectrum transform(const Field& f) {
    const Grid3& g = f.grid();
    Fft3& w = Fft3::local(g.n());
    std::copy(f.values().begin(), f.values().end(), w.real());
    w.forward();
    Spectrum s{g, std::vector<std::complex<double>>(w.spectrum(), w.spectrum() + g.spectrum_size())};
    return s;
}

Field inverse_transform(const Spectrum& s) {
    const Grid3& g = s.grid;
    Fft3& w = Fft3::local(g.n());
    std::copy(s.coeffs.begin(), s.coeffs.end(), w.spectrum());
    w.backward();
    Field out(g);
    const double scale = 1.0 / static_cast<double>(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = w.real()[i] * scale;
    return out;
}

double mass(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s += v * v;
    return f.grid().cell_volume() * s;
}

double inner(const Field& f, const Field& g) {
    if (!(f.grid() == g.grid())) throw GridError("inner product of fields on different grids");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
    return f.grid().cell_volume() * s;
}

double lp_norm(const Field& f, double p) {
    if (!(p >= 1.0)) throw GridError("lp_norm needs p >= 1");
    double s = 0.0;
    if (p == 2.0) {
        for (double v : f.values()) s += v * v;
    } else if (p == 4.0) {
        for (double v : f.values()) s += (v * v) * (v * v);
    } else if (p == 6.0) {
        for (double v : f.values()) s += (v * v) * (v * v) * (v * v);
    } else {
        for (double v : f.values()) s += std::pow(std::fabs(v), p);
    }
    return std::pow(f.grid().cell_volume() * s, 1.0 / p);
}

double max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::fabs(v));
    return m;
}

namespace {

// sum over the half spectrum of w(kx) * weight(k) * |c|^2, x-halved layout
template <class W>
double half_spectrum_sum(const Grid3& g, const std::complex<double>* c, W weight) {
    const int n = g.n();
    const int nh = n / 2 + 1;
    double total = 0.0;
    for (int kz = 0; kz < n; ++kz) {
        for (int ky = 0; ky < n; ++ky) {
            const std::complex<double>* row = c + static_cast<std::size_t>(nh) * (ky + static_cast<std::size_t>(n) * kz);
            for (int kx = 0; kx < nh; ++kx) {
                const double mult = (kx == 0 || kx == n / 2) ? 1.0 : 2.0;
                total += mult * weight(kx, ky, kz) * std::norm(row[kx]);
            }
        }
    }
    return total;
}

}  // namespace

double dirichlet_energy(const Field& f) {
    const Grid3& g = f.grid();
    Fft3& w = Fft3::local(g.n());
    std::copy(f.values().begin(), f.values().end(), w.real());
    w.forward();
    std::vector<double> k2(g.n());
    for (int m = 0; m < g.n(); ++m) k2[m] = g.wavenumber(m) * g.wavenumber(m);
    const double s = half_spectrum_sum(g, w.spectrum(), [&](int kx, int ky, int kz) { return k2[kx] + k2[ky] + k2[kz]; });
    return g.cell_volume() / static_cast<double>(g.size()) * s;
}

void apply_k2(Spectrum& s) {
    const Grid3& g = s.grid;
    const int n = g.n();
    const int nh = n / 2 + 1;
    std::vector<double> k2(n);
    for (int m = 0; m < n; ++m) k2[m] = g.wavenumber(m) * g.wavenumber(m);
    for (int kz = 0; kz < n; ++kz)
        for (int ky = 0; ky < n; ++ky)
            for (int kx = 0; kx < nh; ++kx) s.coeffs[s.index(kx, ky, kz)] *= k2[kx] + k2[ky] + k2[kz];
}

double top_octave_fraction(const Field& f) {
    const Grid3& g = f.grid();
    Fft3& w = Fft3::local(g.n());
    std::copy(f.values().begin(), f.values().end(), w.real());
    w.forward();
    const int q = g.n() / 4;
    auto high = [&](int kx, int ky, int kz) {
        const int m = std::max({std::abs(g.frequency_index(kx)), std::abs(g.frequency_index(ky)), std::abs(g.frequency_index(kz))});
        return m > q ? 1.0 : 0.0;
    };
    const double total = half_spectrum_sum(g, w.spectrum(), [](int, int, int) { return 1.0; });
    if (total == 0.0) return 0.0;
    return half_spectrum_sum(g, w.spectrum(), high) / total;
}

Field shift_field(const Field& f, int dx, int dy, int dz) {
    const Grid3& g = f.grid();
    const int n = g.n();
    auto wrap = [n](int v) { return ((v % n) + n) % n; };
    Field out(g);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) out[g.index(wrap(i + dx), wrap(j + dy), wrap(k + dz))] = f[g.index(i, j, k)];
    return out;
}

std::size_t argmax_abs(const Field& f) {
    std::size_t best = 0;
    double m = -1.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double v = std::fabs(f[i]);
        if (v > m) {
            m = v;
            best = i;
        }
    }
    return best;
}

Field recenter_at_peak(const Field& f) {
    const int n = f.grid().n();
    const std::size_t p = argmax_abs(f);
    const int i = static_cast<int>(p % n), j = static_cast<int>((p / n) % n), k = static_cast<int>(p / (static_cast<std::size_t>(n) * n));
    return shift_field(f, n / 2 - i, n / 2 - j, n / 2 - k);
}

Field operator+(const Field& x, const Field& y) {
    if (!(x.grid() == y.grid())) throw GridError("field sum on different grids");
    Field out(x.grid());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
    return out;
}

Field operator-(const Field& x, const Field& y) {
    if (!(x.grid() == y.grid())) throw GridError("field difference on different grids");
    Field out(x.grid());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
    return out;
}

Field operator*(double s, const Field& x) {
    Field out(x.grid());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = s * x[i];
    return out;
}

namespace {

template <class T>
void put_le(std::string& buf, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    buf.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(const unsigned char* p) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T v;
    std::memcpy(&v, bytes, sizeof(T));
    return v;
}

std::string encode_field(const Field& f) {
    std::string buf;
    buf.reserve(32 + 8 * f.size());
    buf.append("NLGS", 4);
    put_le<std::uint32_t>(buf, 1u);
    put_le<std::uint64_t>(buf, static_cast<std::uint64_t>(f.grid().n()));
    put_le<double>(buf, f.grid().box_length());
    put_le<std::uint64_t>(buf, 0u);
    for (double v : f.values()) put_le<double>(buf, v);
    return buf;
}

}  // namespace

void write_field(std::ostream& os, const Field& f) {
    const std::string buf = encode_field(f);
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!os) throw FieldIoError("field write failed");
}

Field read_field(std::istream& is) {
    unsigned char header[32];
    if (!is.read(reinterpret_cast<char*>(header), 32)) throw FieldIoError("truncated field header");
    if (std::memcmp(header, "NLGS", 4) != 0) throw FieldIoError("bad field magic");
    const auto version = get_le<std::uint32_t>(header + 4);
    if (version != 1) throw FieldIoError("unsupported field version " + std::to_string(version));
    const auto n = get_le<std::uint64_t>(header + 8);
    const auto L = get_le<double>(header + 16);
    if (n > 4096) throw FieldIoError("implausible grid size in header");
    Grid3 g(static_cast<int>(n), L);
    std::vector<unsigned char> raw(8 * g.size());
    if (!is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) throw FieldIoError("truncated field data");
    Field f(g);
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = get_le<double>(raw.data() + 8 * i);
    return f;
}

void write_field_file(const std::string& path, const Field& f) { atomic_write(path, encode_field(f)); }

Field read_field_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FieldIoError("cannot open " + path);
    return read_field(is);
}

void write_radial_profile_csv(std::ostream& os, const Field& f) {
    const Grid3& g = f.grid();
    const int n = g.n();
    const double h = g.spacing();
    const int bins = static_cast<int>(std::ceil(std::sqrt(3.0) * n / 2.0)) + 1;
    std::vector<double> rsum(bins, 0.0), vsum(bins, 0.0);
    std::vector<long> count(bins, 0);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double x = g.coordinate(i), y = g.coordinate(j), z = g.coordinate(k);
                const double r = std::sqrt(x * x + y * y + z * z);
                const int b = std::min(bins - 1, static_cast<int>(r / h + 0.5));
                rsum[b] += r;
                vsum[b] += std::fabs(f[g.index(i, j, k)]);
                ++count[b];
            }
    os << "r,value,count\n";
    for (int b = 0; b < bins; ++b) {
        if (count[b] == 0) continue;
        os << format_double(rsum[b] / count[b]) << ',' << format_double(vsum[b] / count[b]) << ',' << count[b] << '\n';
    }
}

}  // namespace nlgs
