#include "nonloc/nonlocal_ops.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "nonloc/fft.hpp"
#include "nonloc/specfun.hpp"

namespace nonloc {

namespace {

/** Per-entry multiplicity of the half-complex spectrum under Hermitian
 * symmetry (2 for interior last-axis indices, else 1). */
std::vector<double> hermitian_weights(const GridSpec& g) {
    const int n = g.n;
    const int last = n / 2 + 1;
    std::size_t rows = spectral_size(g) / last;
    std::vector<double> w(spectral_size(g));
    for (std::size_t r = 0; r < rows; ++r)
        for (int j = 0; j < last; ++j)
            w[r * last + j] = (j == 0 || j == n / 2) ? 1.0 : 2.0;
    return w;
}

/** Riesz kernel samples on the doubled grid with near-origin cell averages:
 * 16^N midpoint subgrid for the origin cell, 4^N for cells whose center lies
 * within 2 dx of the origin. */
std::vector<double> build_kernel(const GridSpec& g, double alpha) {
    const int N = g.N, n = g.n, m = 2 * g.n;
    const double dx = g.dx();
    const double C = riesz_constant(N, alpha);
    const double expo = -(N - alpha) / 2.0;  // applied to |x|^2
    GridSpec pg{N, m, 2 * g.L};
    std::vector<double> K(pg.size());
    std::vector<int> idx(N, 0);
    for (std::size_t lin = 0; lin < K.size(); ++lin) {
        double r2 = 0;
        long o2 = 0;
        for (int d = 0; d < N; ++d) {
            long o = idx[d] > n ? idx[d] - m : idx[d];
            o2 += o * o;
            r2 += (o * dx) * (o * dx);
        }
        if (o2 > 4) {
            K[lin] = C * std::pow(r2, expo);
        } else {
            const int sub = (o2 == 0) ? 16 : 4;
            double acc = 0;
            std::vector<int> sidx(N, 0);
            long total = 1;
            for (int d = 0; d < N; ++d) total *= sub;
            for (long t = 0; t < total; ++t) {
                double q2 = 0;
                for (int d = 0; d < N; ++d) {
                    long o = idx[d] > n ? idx[d] - m : idx[d];
                    double frac = (sidx[d] + 0.5) / sub - 0.5;
                    double x = (o + frac) * dx;
                    q2 += x * x;
                }
                acc += C * std::pow(q2, expo);
                for (int d = N - 1; d >= 0; --d) {
                    if (++sidx[d] < sub) break;
                    sidx[d] = 0;
                }
            }
            K[lin] = acc / total;
        }
        for (int d = N - 1; d >= 0; --d) {
            if (++idx[d] < m) break;
            idx[d] = 0;
        }
    }
    return K;
}

std::mutex g_cache_mutex;
std::map<std::tuple<int, int, double, double>, std::shared_ptr<const RieszKernelCache>>
    g_kernel_cache;

}  // namespace

RieszKernelCache::RieszKernelCache(const GridSpec& g, double alpha)
    : padded_{g.N, 2 * g.n, 2 * g.L}, alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < g.N))
        throw operator_error("riesz kernel: alpha must lie in (0,N)");
    std::vector<double> K = build_kernel(g, alpha);
    fft_forward(padded_, K, spectrum_);
    const double w = std::pow(g.dx(), g.N);
    for (auto& z : spectrum_) z *= w;
}

void RieszKernelCache::corrupt() {
    for (std::size_t i = 1; i < spectrum_.size(); i += 7) spectrum_[i] *= 1.5;
}

std::shared_ptr<const RieszKernelCache> riesz_kernel(const GridSpec& g, double alpha) {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto key = std::make_tuple(g.N, g.n, g.L, alpha);
    auto it = g_kernel_cache.find(key);
    if (it != g_kernel_cache.end()) return it->second;
    auto cache = std::make_shared<const RieszKernelCache>(g, alpha);
    g_kernel_cache.emplace(key, cache);
    return cache;
}

Field frac_laplacian(const Field& u, double s) {
    if (!(s > 0.0 && s <= 1.0))
        throw operator_error("frac_laplacian: s must lie in (0,1]");
    std::vector<std::complex<double>> uh;
    fft_forward(u.grid, u.v, uh);
    std::vector<double> k2 = spectral_k2(u.grid);
    for (std::size_t i = 0; i < uh.size(); ++i)
        uh[i] *= (k2[i] == 0.0) ? 0.0 : std::pow(k2[i], s);
    Field out(u.grid);
    fft_inverse(u.grid, uh, out.v);
    return out;
}

SeminormPair seminorm_gagliardo(const Field& u, double s) {
    std::vector<std::complex<double>> uh;
    fft_forward(u.grid, u.v, uh);
    std::vector<double> k2 = spectral_k2(u.grid);
    std::vector<double> w = hermitian_weights(u.grid);
    const double cell = std::pow(u.grid.dx(), u.grid.N) / static_cast<double>(u.size());
    double T = 0;
    for (std::size_t i = 0; i < uh.size(); ++i) {
        if (k2[i] == 0.0) continue;
        T += w[i] * std::pow(k2[i], s) * std::norm(uh[i]);
    }
    T *= cell;
    return {T, 2.0 / frac_lap_constant(u.grid.N, s) * T};
}

namespace {

/** Hurwitz zeta(sv, a) by Euler-Maclaurin, sv > 1, a in (0,1]. */
double hurwitz_zeta(double sv, double a) {
    const int M = 24;
    double sum = 0;
    for (int k = 0; k < M; ++k) sum += std::pow(k + a, -sv);
    double x = M + a;
    sum += std::pow(x, 1.0 - sv) / (sv - 1.0);
    sum += 0.5 * std::pow(x, -sv);
    sum += sv / 12.0 * std::pow(x, -sv - 1.0);
    sum -= sv * (sv + 1.0) * (sv + 2.0) / 720.0 * std::pow(x, -sv - 3.0);
    return sum;
}

double seminorm_direct_1d(const Field& u, double s) {
    const int n = u.grid.n;
    const double dx = u.grid.dx(), L = u.grid.L;
    std::vector<double> E(n, 0.0);  // displacement energies int |u(x)-u(x-j dx)|^2 dx
    for (int j = 1; j < n; ++j) {
        double acc = 0;
        for (int i = 0; i < n; ++i) {
            double d = u[i] - u[(i - j + n) % n];
            acc += d * d;
        }
        E[j] = acc * dx;
    }
    double S = 0;
    const double kpre = std::pow(L, -1.0 - 2.0 * s);
    for (int j = 1; j < n; ++j) {
        double a = static_cast<double>(j) / n;
        S += E[j] * kpre * (hurwitz_zeta(1.0 + 2.0 * s, a) + hurwitz_zeta(1.0 + 2.0 * s, 1.0 - a));
    }
    S *= dx;
    // singular-endpoint correction: E(t) = c2 t^2 + c4 t^4 + c6 t^6 fitted at
    // the first three displacements
    double h2 = dx * dx;
    double a11 = h2, a12 = h2 * h2, a13 = h2 * h2 * h2;
    double a21 = 4 * h2, a22 = 16 * h2 * h2, a23 = 64 * h2 * h2 * h2;
    double a31 = 9 * h2, a32 = 81 * h2 * h2, a33 = 729 * h2 * h2 * h2;
    double det = a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
                 a13 * (a21 * a32 - a22 * a31);
    double c2 = 0, c4 = 0, c6 = 0;
    if (det != 0.0) {
        double b1 = E[1], b2 = E[2], b3 = E[3];
        c2 = (b1 * (a22 * a33 - a23 * a32) - a12 * (b2 * a33 - a23 * b3) +
              a13 * (b2 * a32 - a22 * b3)) / det;
        c4 = (a11 * (b2 * a33 - a23 * b3) - b1 * (a21 * a33 - a23 * a31) +
              a13 * (a21 * b3 - b2 * a31)) / det;
        c6 = (a11 * (a22 * b3 - b2 * a32) - a12 * (a21 * b3 - b2 * a31) +
              b1 * (a21 * a32 - a22 * a31)) / det;
    }
    double z1 = std::riemann_zeta(2.0 * s - 1.0);
    double z3 = std::riemann_zeta(2.0 * s - 3.0);
    double z5 = std::riemann_zeta(2.0 * s - 5.0);
    S -= 2.0 * (z1 * c2 * std::pow(dx, 2.0 - 2.0 * s) +
                z3 * c4 * std::pow(dx, 4.0 - 2.0 * s) +
                z5 * c6 * std::pow(dx, 6.0 - 2.0 * s));
    return S;
}

}  // namespace

double seminorm_direct(const Field& u, double s) {
    const GridSpec& g = u.grid;
    if (g.size() > (1u << 14))
        throw operator_error("seminorm_direct: grid too large for the oracle");
    if (g.N == 1) return seminorm_direct_1d(u, s);
    const int n = g.n, N = g.N;
    const double dx = g.dx();
    const double expo = -(N + 2.0 * s) / 2.0;
    double total = 0;
    std::vector<int> off(N, 0);
    std::vector<int> idx(N, 0);
    const std::size_t sz = u.size();
    for (std::size_t olin = 1; olin < sz; ++olin) {
        for (int d = N - 1; d >= 0; --d) {
            if (++off[d] < n) break;
            off[d] = 0;
        }
        double d2 = 0;
        for (int d = 0; d < N; ++d) {
            int mi = std::min(off[d], n - off[d]);
            d2 += (mi * dx) * (mi * dx);
        }
        double w = std::pow(d2, expo);
        // displacement energy over the periodic grid
        std::fill(idx.begin(), idx.end(), 0);
        double acc = 0;
        for (std::size_t lin = 0; lin < sz; ++lin) {
            std::size_t src = 0;
            for (int d = 0; d < N; ++d) {
                int j = idx[d] - off[d];
                if (j < 0) j += n;
                src = src * n + j;
            }
            double diff = u[lin] - u[src];
            acc += diff * diff;
            for (int d = N - 1; d >= 0; --d) {
                if (++idx[d] < n) break;
                idx[d] = 0;
            }
        }
        total += acc * w;
    }
    return total * std::pow(dx, 2.0 * N);
}

Field riesz_convolve(const Field& g, const RieszKernelCache& cache) {
    const GridSpec& gr = g.grid;
    const GridSpec& pg = cache.padded_grid();
    const int n = gr.n, N = gr.N;
    Field padded(pg);
    std::vector<int> idx(N, 0);
    for (std::size_t lin = 0; lin < g.size(); ++lin) {
        std::size_t plin = 0;
        for (int d = 0; d < N; ++d) plin = plin * pg.n + idx[d];
        padded[plin] = g[lin];
        for (int d = N - 1; d >= 0; --d) {
            if (++idx[d] < n) break;
            idx[d] = 0;
        }
    }
    std::vector<std::complex<double>> gh;
    fft_forward(pg, padded.v, gh);
    const auto& kh = cache.spectrum();
    for (std::size_t i = 0; i < gh.size(); ++i) gh[i] *= kh[i];
    std::vector<double> conv;
    fft_inverse(pg, gh, conv);
    Field out(gr);
    std::fill(idx.begin(), idx.end(), 0);
    for (std::size_t lin = 0; lin < out.size(); ++lin) {
        std::size_t plin = 0;
        for (int d = 0; d < N; ++d) plin = plin * pg.n + idx[d];
        out[lin] = conv[plin];
        for (int d = N - 1; d >= 0; --d) {
            if (++idx[d] < n) break;
            idx[d] = 0;
        }
    }
    return out;
}

Field riesz_convolve(const Field& g, double alpha) {
    return riesz_convolve(g, *riesz_kernel(g.grid, alpha));
}

Field riesz_direct(const Field& g, double alpha) {
    const GridSpec& gr = g.grid;
    if (gr.size() > (1u << 12))
        throw operator_error("riesz_direct: grid too large for the oracle");
    const int n = gr.n, N = gr.N, m = 2 * n;
    std::vector<double> K = build_kernel(gr, alpha);
    const double w = std::pow(gr.dx(), N);
    Field out(gr);
    std::vector<int> xi(N, 0), yi(N, 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double acc = 0;
        std::fill(yi.begin(), yi.end(), 0);
        for (std::size_t j = 0; j < g.size(); ++j) {
            std::size_t klin = 0;
            for (int d = 0; d < N; ++d) {
                int o = xi[d] - yi[d];  // in (-n, n)
                if (o < 0) o += m;
                klin = klin * m + o;
            }
            acc += K[klin] * g[j];
            for (int d = N - 1; d >= 0; --d) {
                if (++yi[d] < n) break;
                yi[d] = 0;
            }
        }
        out[i] = acc * w;
        for (int d = N - 1; d >= 0; --d) {
            if (++xi[d] < n) break;
            xi[d] = 0;
        }
    }
    return out;
}

Field bessel_solve(const Field& g, double s, double lam) {
    if (!(lam > 0.0)) throw operator_error("bessel_solve: lambda must be positive");
    std::vector<std::complex<double>> gh;
    fft_forward(g.grid, g.v, gh);
    std::vector<double> k2 = spectral_k2(g.grid);
    for (std::size_t i = 0; i < gh.size(); ++i)
        gh[i] /= lam + (k2[i] == 0.0 ? 0.0 : std::pow(k2[i], s));
    Field out(g.grid);
    fft_inverse(g.grid, gh, out.v);
    return out;
}

Field polarize(const Field& u, const HalfSpace& H) {
    const GridSpec& g = u.grid;
    if (H.axis < 0 || H.axis >= g.N || (H.sign != 1 && H.sign != -1))
        throw operator_error("polarize: normal must be a signed coordinate axis");
    const int n = g.n, N = g.N;
    Field out(g);
    std::vector<int> idx(N, 0);
    for (std::size_t lin = 0; lin < u.size(); ++lin) {
        int c = idx[H.axis] - n / 2;
        int mirror = (n - idx[H.axis]) % n;
        std::size_t mlin = 0;
        for (int d = 0; d < N; ++d) mlin = mlin * n + (d == H.axis ? mirror : idx[d]);
        bool in_H = H.sign * c >= 0;
        out[lin] = in_H ? std::max(u[lin], u[mlin]) : std::min(u[lin], u[mlin]);
        for (int d = N - 1; d >= 0; --d) {
            if (++idx[d] < n) break;
            idx[d] = 0;
        }
    }
    return out;
}

double integrate(const Field& u) {
    double acc = 0;
    for (double x : u.v) acc += x;
    return acc * std::pow(u.grid.dx(), u.grid.N);
}

double inner(const Field& a, const Field& b) {
    double acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc * std::pow(a.grid.dx(), a.grid.N);
}

}  // namespace nonloc
