#pragma once

// Periodic 2-D spectral machinery on the [0, 2pi)^2 torus: transforms,
// Fourier-multiplier application, the constitutive velocity law
// u = perp-grad Lambda^-1 m(Lambda) theta, and the pointwise dissipation
// functionals D(x) and D_h(x) built from the regularized kernel.
//
// Conventions:
//   - fields are n x n, row-major, v[ix*n + iy] at (x1, x2) = (ix, iy)*dx
//   - spectral coefficients are those of the trigonometric interpolant,
//     theta(x) = sum_k c(k) exp(i k.x), i.e. DFT / n^2
//   - wavenumbers per dimension run over {-n/2+1, ..., n/2}
//   - perp-grad is (-d2, d1); the zero mode carries no velocity

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "sqglab/symbols.hpp"

namespace sqg {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

class Grid {
public:
    explicit Grid(int n);  // power of two >= 32
    int n() const { return n_; }
    double dx() const { return kTwoPi / n_; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }
    // signed frequency of storage index: 0..n/2, then -n/2+1..-1
    int freq(int idx) const { return idx <= n_ / 2 ? idx : idx - n_; }
    // minimum-image displacement of a cell offset, in physical units
    double min_image(int didx) const {
        const int d = didx <= n_ / 2 ? didx : didx - n_;
        return d * dx();
    }
    bool operator==(const Grid&) const = default;

private:
    int n_;
};

struct RealField {
    Grid grid;
    std::vector<double> v;

    explicit RealField(Grid g) : grid(g), v(g.size(), 0.0) {}
    double& at(int ix, int iy) { return v[static_cast<std::size_t>(ix) * grid.n() + iy]; }
    double at(int ix, int iy) const { return v[static_cast<std::size_t>(ix) * grid.n() + iy]; }
};

struct SpectralField {
    Grid grid;
    std::vector<std::complex<double>> c;

    explicit SpectralField(Grid g) : grid(g), c(g.size(), {0.0, 0.0}) {}
    std::complex<double>& at(int i, int j) {
        return c[static_cast<std::size_t>(i) * grid.n() + j];
    }
    std::complex<double> at(int i, int j) const {
        return c[static_cast<std::size_t>(i) * grid.n() + j];
    }
};

struct VectorField {
    RealField x1, x2;
    explicit VectorField(Grid g) : x1(g), x2(g) {}
};

SpectralField forward(const RealField& f);
RealField inverse(const SpectralField& f);

// Coefficient-wise product with symbol(|k|). The k = 0 value is supplied
// explicitly since radial symbols are often singular or undefined there.
// Throws std::domain_error if the symbol is non-finite at a grid wavenumber.
SpectralField apply_multiplier(const SpectralField& f,
                               const std::function<double(double)>& symbol,
                               double zero_mode_value);

// u-hat(k) = i k-perp |k|^-1 m(|k|) theta-hat(k), zero mode and Nyquist ring
// zeroed; the result is divergence-free to spectral precision.
VectorField compute_velocity(const SpectralField& theta, const VelocityMultiplier& m);

// Spectral gradient (i k1, i k2); Nyquist modes of the differentiated
// direction are zeroed.
VectorField gradient(const SpectralField& theta);

// 2/3-rule dealiasing: zeroes coefficients with max(|k1|, |k2|) > n/3.
SpectralField dealias(const SpectralField& f);

// Periodic shift by whole cells: out(x) = f(x + (cx, cy)*dx).
RealField shift_field(const RealField& f, int cx, int cy);

// Pointwise dissipation functional of a (vector) field g:
//   D(x) = sum_{y != x} |g(x) - g(y)|^2 k_delta(|x-y|) / |x-y|^2 dx^2
// with minimum-image periodic distance and k_delta(r) = k(max(r, delta)).
// Evaluated through three spectral convolutions; negatives from roundoff are
// clamped to zero. Requires delta >= dx/2.
RealField pointwise_dissipation_D(const VectorField& grad_theta, const RadialKernel& k,
                                  double delta);

// Same functional applied to the finite difference theta(x+h) - theta(x).
// h must be grid-aligned (integer cells per component).
RealField pointwise_dissipation_Dh(const RealField& theta, double hx, double hy,
                                   const RadialKernel& k, double delta);

// Discrete Fourier symbol of the regularized kernel:
//   P_num(k) = dx^2 sum_z W(z) (1 - cos k.z),  W(z) = k_delta(|z|)/|z|^2,
// laid out like SpectralField coefficients. Satisfies the exact identity
//   sum_x D(x) dx^2 = 2 (2pi)^2 sum_k P_num(k) |g-hat(k)|^2.
std::vector<double> discrete_dissipation_symbol(const Grid& grid, const RadialKernel& k,
                                                double delta);

}  // namespace sqg
