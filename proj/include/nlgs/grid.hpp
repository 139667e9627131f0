#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlgs {

class GridError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Periodic cube [-L/2, L/2)^3 with n points per axis, origin at index n/2.
class Grid3 {
public:
    Grid3(int n, double box_length);

    int n() const { return n_; }
    double box_length() const { return box_length_; }
    double spacing() const { return box_length_ / n_; }
    double cell_volume() const {
        double h = spacing();
        return h * h * h;
    }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }
    /// Number of complex coefficients of the half spectrum.
    std::size_t spectrum_size() const { return static_cast<std::size_t>(n_) * n_ * (n_ / 2 + 1); }

    double coordinate(int i) const { return -0.5 * box_length_ + i * spacing(); }
    /// Signed frequency index for position m in an FFT axis of length n.
    int frequency_index(int m) const { return m <= n_ / 2 ? m : m - n_; }
    /// Angular wavenumber 2 pi m / L for FFT position m. The Nyquist entry is +pi/h.
    double wavenumber(int m) const;

    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(n_) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(n_) * k);
    }

    friend bool operator==(const Grid3& x, const Grid3& y) { return x.n_ == y.n_ && x.box_length_ == y.box_length_; }

private:
    int n_;
    double box_length_;
};

/// Real samples on a Grid3, x fastest.
class Field {
public:
    explicit Field(const Grid3& g) : grid_(g), values_(g.size(), 0.0) {}
    Field(const Grid3& g, std::vector<double> values);

    static Field from_function(const Grid3& g, const std::function<double(double, double, double)>& f);

    const Grid3& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    bool all_finite() const;

private:
    Grid3 grid_;
    std::vector<double> values_;
};

/// Half spectrum of a real field, unnormalized forward DFT, x halved.
struct Spectrum {
    Grid3 grid;
    std::vector<std::complex<double>> coeffs;

    std::size_t index(int kx, int ky, int kz) const {
        const std::size_t nh = grid.n() / 2 + 1;
        return static_cast<std::size_t>(kx) + nh * (static_cast<std::size_t>(ky) + static_cast<std::size_t>(grid.n()) * kz);
    }
};

Spectrum transform(const Field& f);
Field inverse_transform(const Spectrum& s);

/// Per-thread FFTW workspace for one grid size.
class Fft3 {
public:
    explicit Fft3(int n);
    ~Fft3();
    Fft3(const Fft3&) = delete;
    Fft3& operator=(const Fft3&) = delete;

    int n() const { return n_; }
    double* real() { return real_; }
    std::complex<double>* spectrum() { return spec_; }
    void forward();  // real -> spectrum
    void backward(); // spectrum -> real, unnormalized

    /// Shared per-thread instance for size n.
    static Fft3& local(int n);

private:
    int n_;
    double* real_;
    std::complex<double>* spec_;
    void* plan_fwd_;
    void* plan_bwd_;
};

double mass(const Field& f);
double inner(const Field& f, const Field& g);
double lp_norm(const Field& f, double p);
double max_abs(const Field& f);

/// Spectral approximation of the integral of |grad f|^2.
double dirichlet_energy(const Field& f);

/// Multiplies the spectrum by |k|^2 in place.
void apply_k2(Spectrum& s);

/// Fraction of spectral power carried by modes with some |k_i| above half the Nyquist index.
double top_octave_fraction(const Field& f);

/// Circular shift by integer offsets per axis.
Field shift_field(const Field& f, int dx, int dy, int dz);
/// Circular shift moving the largest |value| to the grid origin index n/2.
Field recenter_at_peak(const Field& f);
std::size_t argmax_abs(const Field& f);

Field operator+(const Field& x, const Field& y);
Field operator-(const Field& x, const Field& y);
Field operator*(double s, const Field& x);

class FieldIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// 32-byte header: "NLGS", u32 version, u64 n, f64 L, 8 zero bytes; then n^3 little-endian doubles.
void write_field(std::ostream& os, const Field& f);
Field read_field(std::istream& is);
void write_field_file(const std::string& path, const Field& f);
Field read_field_file(const std::string& path);

/// Shell-averaged |f| about the grid origin: CSV "r,value,count", shells of width h.
void write_radial_profile_csv(std::ostream& os, const Field& f);

}  // namespace nlgs
