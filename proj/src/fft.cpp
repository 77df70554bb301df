#include "nonloc/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

namespace nonloc {

std::size_t spectral_size(const GridSpec& g) {
    std::size_t t = static_cast<std::size_t>(g.n) / 2 + 1;
    for (int d = 0; d < g.N - 1; ++d) t *= static_cast<std::size_t>(g.n);
    return t;
}

namespace {

struct PlanEntry {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    std::size_t rsize = 0, csize = 0;
};

std::mutex g_mutex;
std::map<std::pair<int, int>, PlanEntry> g_plans;  // (N, n) -> entry

PlanEntry& plans_for(const GridSpec& g) {
    auto key = std::make_pair(g.N, g.n);
    auto it = g_plans.find(key);
    if (it != g_plans.end()) return it->second;
    PlanEntry e;
    e.rsize = g.size();
    e.csize = spectral_size(g);
    e.real = fftw_alloc_real(e.rsize);
    e.cplx = fftw_alloc_complex(e.csize);
    std::vector<int> dims(g.N, g.n);
    e.fwd = fftw_plan_dft_r2c(g.N, dims.data(), e.real, e.cplx, FFTW_ESTIMATE);
    e.bwd = fftw_plan_dft_c2r(g.N, dims.data(), e.cplx, e.real, FFTW_ESTIMATE);
    return g_plans.emplace(key, e).first->second;
}

}  // namespace

void fft_forward(const GridSpec& g, const std::vector<double>& in,
                 std::vector<std::complex<double>>& out) {
    std::lock_guard<std::mutex> lock(g_mutex);
    PlanEntry& e = plans_for(g);
    std::memcpy(e.real, in.data(), e.rsize * sizeof(double));
    fftw_execute(e.fwd);
    out.resize(e.csize);
    std::memcpy(out.data(), e.cplx, e.csize * sizeof(fftw_complex));
}

void fft_inverse(const GridSpec& g, const std::vector<std::complex<double>>& in,
                 std::vector<double>& out) {
    std::lock_guard<std::mutex> lock(g_mutex);
    PlanEntry& e = plans_for(g);
    std::memcpy(e.cplx, in.data(), e.csize * sizeof(fftw_complex));
    fftw_execute(e.bwd);
    out.resize(e.rsize);
    double norm = 1.0 / static_cast<double>(e.rsize);
    for (std::size_t i = 0; i < e.rsize; ++i) out[i] = e.real[i] * norm;
}

std::vector<double> spectral_k2(const GridSpec& g) {
    const int n = g.n, N = g.N;
    const double dk = 2.0 * M_PI / g.L;
    std::vector<double> freq2(n);
    for (int i = 0; i < n; ++i) {
        int k = (i <= n / 2) ? i : i - n;
        freq2[i] = (dk * k) * (dk * k);
    }
    std::vector<double> out(spectral_size(g));
    std::vector<int> idx(N, 0);
    const int last = n / 2 + 1;
    std::size_t lin = 0;
    while (true) {
        double base = 0;
        for (int d = 0; d < N - 1; ++d) base += freq2[idx[d]];
        for (int j = 0; j < last; ++j) out[lin++] = base + (dk * j) * (dk * j);
        int d = N - 2;
        for (; d >= 0; --d) {
            if (++idx[d] < n) break;
            idx[d] = 0;
        }
        if (d < 0) break;
    }
    return out;
}

}  // namespace nonloc
