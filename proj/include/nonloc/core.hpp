#ifndef NONLOC_CORE_HPP
#define NONLOC_CORE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nonloc {

struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/** Uniform periodic tensor grid on [-L/2, L/2)^N with n points per axis. */
struct GridSpec {
    int N = 3;       // dimension
    int n = 64;      // points per axis, power of two, >= 16
    double L = 40.0; // box side

    double dx() const { return L / n; }
    std::size_t size() const {
        std::size_t t = 1;
        for (int d = 0; d < N; ++d) t *= static_cast<std::size_t>(n);
        return t;
    }
    bool operator==(const GridSpec& o) const {
        return N == o.N && n == o.n && L == o.L;
    }
};

/** Real scalar field sampled on a GridSpec, row-major (last axis fastest).
 * Grid coordinate along each axis: x_i = -L/2 + i*dx. */
struct Field {
    GridSpec grid;
    std::vector<double> v;

    Field() = default;
    explicit Field(const GridSpec& g) : grid(g), v(g.size(), 0.0) {}
    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }
    std::size_t size() const { return v.size(); }
};

enum class NonlinKind { power, combined, saturable, sqrt_type, log_power };

/** Catalog nonlinearity: evaluators for f(t) and its primitive F (F(0)=0). */
struct Nonlinearity {
    NonlinKind kind = NonlinKind::power;
    double r = 2.0;   // main exponent
    double q = 2.0;   // secondary exponent (combined)
    int sign = +1;    // sign of the secondary power term (combined)

    double f(double t) const;
    double F(double t) const;
    /** Growth exponent at infinity, used for the L2-subcritical check. */
    double growth() const;
    std::string describe() const;
};

Nonlinearity parse_nonlinearity(const std::string& text);

struct SolverOptions {
    int max_iters = 5000;
    double grad_tol = 1e-8;
    double poho_tol = 1e-6;
    double step = 0.5;
    double petviashvili_gamma_tol = 1e-10;
    std::uint64_t seed = 0;
    // init: gaussian(width) | hbeta(beta) | file:path
    std::string init = "gaussian(4)";
};

enum class Mode { choquard, local };

struct ProblemSpec {
    int N = 3;
    double s = 0.5;
    double alpha = 2.0;      // ignored in local mode
    Mode mode = Mode::choquard;
    double mu = 1.0;         // fixed frequency; <=0 means "free"
    double mass_target = 0;  // 0 means "none"
    Nonlinearity nonlinearity;
    GridSpec grid;
    SolverOptions solver;

    bool mu_free() const { return mu <= 0.0; }
};

/** Shell-averaged radial reduction of a Field. */
struct Profile {
    std::vector<double> radii;
    std::vector<double> values;
};

/** Parse an INI-style config ([problem]/[grid]/[solver], key=value).
 * Unknown keys, malformed values and out-of-range parameters raise
 * config_error naming the offending key. */
ProblemSpec load_config(const std::string& path);
ProblemSpec parse_config_text(const std::string& text);

/** (f(t), F(t)) for a catalog entry. */
std::pair<double, double> nonlinearity_eval(const Nonlinearity& nl, double t);

/** Replace each sample by the average over its exact lattice shell
 * (equal squared integer radius), so radial fields are exact fixed points. */
Field symmetrize_radial(const Field& u);

/** Shell-averaged radial profile, bins of width dx centered at (k+1/2)dx,
 * radii up to L/2; empty shells are skipped. */
Profile radial_profile(const Field& u);

/** Binary field dump (grid header + raw doubles), used by init=file. */
void save_field(const Field& u, const std::string& path);
Field load_field(const std::string& path);

/** Row-major linear index -> per-axis indices and back. */
inline std::size_t grid_index(const GridSpec& g, const std::vector<int>& idx) {
    std::size_t lin = 0;
    for (int d = 0; d < g.N; ++d) lin = lin * g.n + idx[d];
    return lin;
}

}  // namespace nonloc

#endif
