#ifndef NONLOC_NONLOCAL_OPS_HPP
#define NONLOC_NONLOCAL_OPS_HPP

#include <complex>
#include <memory>

#include "nonloc/core.hpp"

namespace nonloc {

struct operator_error : std::runtime_error {
    explicit operator_error(const std::string& msg) : std::runtime_error(msg) {}
};

/** Axis-aligned half-space through the origin: {x : sign * x_axis >= 0}. */
struct HalfSpace {
    int axis = 0;
    int sign = +1;
};

/** Free-space Riesz kernel sampled on the doubled grid, with near-origin
 * cell-average corrections, stored as its half-complex spectrum. Immutable
 * after construction. */
class RieszKernelCache {
  public:
    RieszKernelCache(const GridSpec& g, double alpha);
    const GridSpec& padded_grid() const { return padded_; }
    const std::vector<std::complex<double>>& spectrum() const { return spectrum_; }
    double alpha() const { return alpha_; }
    /** Test hook: perturb one spectral entry (used to exercise the
     * verification failure path). */
    void corrupt();

  private:
    GridSpec padded_;
    double alpha_;
    std::vector<std::complex<double>> spectrum_;
};

/** Shared per-grid cache so sweeps do not rebuild kernels. */
std::shared_ptr<const RieszKernelCache> riesz_kernel(const GridSpec& g, double alpha);

/** Spectral (-Delta)^s via the |xi|^{2s} multiplier; zero mode annihilated. */
Field frac_laplacian(const Field& u, double s);

/** Kinetic term T = ||(-Delta)^{s/2} u||_2^2 and the Gagliardo seminorm
 * [u]^2 = (2 / C_{N,s}) T. */
struct SeminormPair {
    double T;
    double gagliardo;
};
SeminormPair seminorm_gagliardo(const Field& u, double s);

/** Direct double-sum Gagliardo oracle (no C_{N,s} factor), O(n^{2N}).
 * In 1D the displacement kernel is periodized (Hurwitz zeta) and the
 * singular-endpoint quadrature correction is applied; for N >= 2 the plain
 * minimal-image sum is used. */
double seminorm_direct(const Field& u, double s);

/** Free-space convolution I_alpha * g on the doubled grid. */
Field riesz_convolve(const Field& g, double alpha);
Field riesz_convolve(const Field& g, const RieszKernelCache& cache);

/** Direct quadrature oracle with the same origin-correction rule. */
Field riesz_direct(const Field& g, double alpha);

/** Unique periodic solution of ((-Delta)^s + lam) u = g. */
Field bessel_solve(const Field& g, double s, double lam);

/** Two-point polarization across an axis half-space. */
Field polarize(const Field& u, const HalfSpace& H);

/** Riemann-sum integral of a field: sum * dx^N. */
double integrate(const Field& u);
double inner(const Field& a, const Field& b);

}  // namespace nonloc

#endif
