#include "sqglab/spectral_core.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>

namespace sqg {

namespace {

// One cached in-place c2c plan pair per grid size. FFTW_ESTIMATE keeps plan
// selection deterministic across runs, which the output contracts rely on.
struct PlanSet {
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::size_t count = 0;

    explicit PlanSet(int n) {
        count = static_cast<std::size_t>(n) * n;
        buf = fftw_alloc_complex(count);
        if (!buf) throw std::bad_alloc();
        fwd = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~PlanSet() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }
    PlanSet(const PlanSet&) = delete;
    PlanSet& operator=(const PlanSet&) = delete;
};

PlanSet& plans_for(int n) {
    static std::map<int, std::unique_ptr<PlanSet>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<PlanSet>(n)).first;
    return *it->second;
}

// Unnormalized in-place transform of a complex array.
void fft2(std::vector<std::complex<double>>& data, int n, bool forward_dir) {
    PlanSet& p = plans_for(n);
    for (std::size_t i = 0; i < p.count; ++i) {
        p.buf[i][0] = data[i].real();
        p.buf[i][1] = data[i].imag();
    }
    fftw_execute(forward_dir ? p.fwd : p.bwd);
    for (std::size_t i = 0; i < p.count; ++i) data[i] = {p.buf[i][0], p.buf[i][1]};
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Regularized kernel weights W(z) = k(max(|z|, delta)) / |z|^2 on minimum
// image displacements, W(0) = 0.
RealField kernel_weights(const Grid& grid, const RadialKernel& kern, double delta) {
    if (!(delta >= grid.dx() / 2.0))
        throw std::invalid_argument("dissipation kernel: delta must be >= dx/2");
    const int n = grid.n();
    RealField w(grid);
    for (int i = 0; i < n; ++i) {
        const double zx = grid.min_image(i);
        for (int j = 0; j < n; ++j) {
            if (i == 0 && j == 0) continue;
            const double zy = grid.min_image(j);
            const double dist = std::hypot(zx, zy);
            w.at(i, j) = kern(std::max(dist, delta)) / (dist * dist);
        }
    }
    return w;
}

// D(x) for a multi-component field g via the expansion
//   D = sum_c [ g_c^2 S + (W * g_c^2) - 2 g_c (W * g_c) ] dx^2-weighted.
RealField nonlocal_square_difference(std::span<const RealField> comps,
                                     const RadialKernel& kern, double delta) {
    const Grid grid = comps.front().grid;
    for (const auto& c : comps)
        if (!(c.grid == grid)) throw std::invalid_argument("dissipation: mixed grids");

    const int n = grid.n();
    const std::size_t sz = grid.size();
    const double cell = grid.dx() * grid.dx();

    const RealField w = kernel_weights(grid, kern, delta);
    std::vector<std::complex<double>> w_hat(sz);
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < sz; ++i) {
        w_hat[i] = w.v[i];
        weight_sum += w.v[i];
    }
    fft2(w_hat, n, true);
    const double total_weight = weight_sum * cell;  // S = dx^2 sum W

    const auto convolve = [&](const std::vector<double>& f) {
        std::vector<std::complex<double>> tmp(sz);
        for (std::size_t i = 0; i < sz; ++i) tmp[i] = f[i];
        fft2(tmp, n, true);
        for (std::size_t i = 0; i < sz; ++i) tmp[i] *= w_hat[i];
        fft2(tmp, n, false);
        std::vector<double> out(sz);
        const double scale = cell / static_cast<double>(sz);
        for (std::size_t i = 0; i < sz; ++i) out[i] = tmp[i].real() * scale;
        return out;
    };

    RealField d(grid);
    std::vector<double> sq(sz);
    for (const auto& g : comps) {
        for (std::size_t i = 0; i < sz; ++i) sq[i] = g.v[i] * g.v[i];
        const std::vector<double> conv_sq = convolve(sq);
        const std::vector<double> conv_g = convolve(g.v);
        for (std::size_t i = 0; i < sz; ++i)
            d.v[i] += sq[i] * total_weight + conv_sq[i] - 2.0 * g.v[i] * conv_g[i];
    }
    for (std::size_t i = 0; i < sz; ++i)
        if (d.v[i] < 0.0) d.v[i] = 0.0;
    return d;
}

}  // namespace

Grid::Grid(int n) : n_(n) {
    if (n < 32 || !is_power_of_two(n))
        throw std::invalid_argument("Grid: n must be a power of two >= 32");
}

SpectralField forward(const RealField& f) {
    SpectralField out(f.grid);
    const std::size_t sz = f.grid.size();
    for (std::size_t i = 0; i < sz; ++i) out.c[i] = f.v[i];
    fft2(out.c, f.grid.n(), true);
    const double scale = 1.0 / static_cast<double>(sz);
    for (auto& c : out.c) c *= scale;
    return out;
}

RealField inverse(const SpectralField& f) {
    std::vector<std::complex<double>> tmp = f.c;
    fft2(tmp, f.grid.n(), false);
    RealField out(f.grid);
    for (std::size_t i = 0; i < tmp.size(); ++i) out.v[i] = tmp[i].real();
    return out;
}

SpectralField apply_multiplier(const SpectralField& f,
                               const std::function<double(double)>& symbol,
                               double zero_mode_value) {
    const int n = f.grid.n();
    SpectralField out(f.grid);
    for (int i = 0; i < n; ++i) {
        const double k1 = f.grid.freq(i);
        for (int j = 0; j < n; ++j) {
            const double k2 = f.grid.freq(j);
            const double kk = std::hypot(k1, k2);
            const double s = kk == 0.0 ? zero_mode_value : symbol(kk);
            if (!std::isfinite(s))
                throw std::domain_error("apply_multiplier: non-finite symbol at |k| = " +
                                        std::to_string(kk));
            out.at(i, j) = f.at(i, j) * s;
        }
    }
    return out;
}

VectorField compute_velocity(const SpectralField& theta, const VelocityMultiplier& m) {
    const int n = theta.grid.n();
    SpectralField u1(theta.grid), u2(theta.grid);
    for (int i = 0; i < n; ++i) {
        const int k1 = theta.grid.freq(i);
        for (int j = 0; j < n; ++j) {
            const int k2 = theta.grid.freq(j);
            if ((k1 == 0 && k2 == 0) || k1 == n / 2 || k2 == n / 2) continue;
            const double kk = std::sqrt(static_cast<double>(k1) * k1 +
                                        static_cast<double>(k2) * k2);
            const std::complex<double> q =
                std::complex<double>(0.0, 1.0) * (m(kk) / kk) * theta.at(i, j);
            u1.at(i, j) = -static_cast<double>(k2) * q;
            u2.at(i, j) = static_cast<double>(k1) * q;
        }
    }
    VectorField u(theta.grid);
    u.x1 = inverse(u1);
    u.x2 = inverse(u2);
    return u;
}

VectorField gradient(const SpectralField& theta) {
    const int n = theta.grid.n();
    SpectralField g1(theta.grid), g2(theta.grid);
    for (int i = 0; i < n; ++i) {
        const int k1 = theta.grid.freq(i);
        for (int j = 0; j < n; ++j) {
            const int k2 = theta.grid.freq(j);
            const std::complex<double> c = theta.at(i, j);
            if (k1 != n / 2) g1.at(i, j) = std::complex<double>(0.0, k1) * c;
            if (k2 != n / 2) g2.at(i, j) = std::complex<double>(0.0, k2) * c;
        }
    }
    VectorField g(theta.grid);
    g.x1 = inverse(g1);
    g.x2 = inverse(g2);
    return g;
}

SpectralField dealias(const SpectralField& f) {
    const int n = f.grid.n();
    const double cutoff = n / 3.0;
    SpectralField out = f;
    for (int i = 0; i < n; ++i) {
        const int k1 = std::abs(f.grid.freq(i));
        for (int j = 0; j < n; ++j) {
            const int k2 = std::abs(f.grid.freq(j));
            if (std::max(k1, k2) > cutoff) out.at(i, j) = 0.0;
        }
    }
    return out;
}

RealField shift_field(const RealField& f, int cx, int cy) {
    const int n = f.grid.n();
    const auto wrap = [n](int a) {
        int r = a % n;
        return r < 0 ? r + n : r;
    };
    RealField out(f.grid);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.at(i, j) = f.at(wrap(i + cx), wrap(j + cy));
    return out;
}

RealField pointwise_dissipation_D(const VectorField& grad_theta, const RadialKernel& k,
                                  double delta) {
    const RealField comps[2] = {grad_theta.x1, grad_theta.x2};
    return nonlocal_square_difference(comps, k, delta);
}

RealField pointwise_dissipation_Dh(const RealField& theta, double hx, double hy,
                                   const RadialKernel& k, double delta) {
    const double dx = theta.grid.dx();
    const double cx_real = hx / dx;
    const double cy_real = hy / dx;
    const long cx = std::lround(cx_real);
    const long cy = std::lround(cy_real);
    const double tol = 1e-9;
    if (std::abs(cx_real - cx) > tol || std::abs(cy_real - cy) > tol)
        throw std::domain_error("pointwise_dissipation_Dh: shift must be grid-aligned");

    RealField diff = shift_field(theta, static_cast<int>(cx), static_cast<int>(cy));
    for (std::size_t i = 0; i < diff.v.size(); ++i) diff.v[i] -= theta.v[i];
    const RealField comps[1] = {std::move(diff)};
    return nonlocal_square_difference(comps, k, delta);
}

std::vector<double> discrete_dissipation_symbol(const Grid& grid, const RadialKernel& k,
                                                double delta) {
    const RealField w = kernel_weights(grid, k, delta);
    std::vector<std::complex<double>> w_hat(grid.size());
    for (std::size_t i = 0; i < w.v.size(); ++i) w_hat[i] = w.v[i];
    fft2(w_hat, grid.n(), true);
    const double cell = grid.dx() * grid.dx();
    const double zero = w_hat[0].real();
    std::vector<double> p(grid.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = cell * (zero - w_hat[i].real());
        if (p[i] < 0.0) p[i] = 0.0;  // roundoff guard; exact value is >= 0
    }
    return p;
}

}  // namespace sqg
