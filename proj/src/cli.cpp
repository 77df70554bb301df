#include "nonloc/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nonloc/analysis.hpp"
#include "nonloc/specfun.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace nonloc {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string iso_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/** Collects artifacts and always writes manifest.json, even on failure. */
struct Manifest {
    fs::path out_dir;
    std::string subcommand, spec_hash, started;
    std::vector<std::string> artifacts;
    json extra = json::object();

    void add(const fs::path& p) { artifacts.push_back(p.filename().string()); }
    void write(int exit_code) const {
        json j;
        j["subcommand"] = subcommand;
        j["spec_hash"] = spec_hash;
        j["started"] = started;
        j["finished"] = iso_now();
        j["artifacts"] = artifacts;
        j["version"] = kVersion;
        j["exit_code"] = exit_code;
        for (auto& [k, v] : extra.items()) j[k] = v;
        std::ofstream(out_dir / "manifest.json") << j.dump(2) << "\n";
    }
};

json breakdown_json(const EnergyBreakdown& eb) {
    return {{"T", eb.T},  {"M", eb.M},   {"D", eb.D},
            {"Gloc", eb.Gloc}, {"L", eb.L},   {"P", eb.P},
            {"mu", eb.mu}, {"P_scale", eb.P_scale}};
}

json report_json(const SolveReport& rep) {
    // wallclock deliberately omitted so identical runs give identical bytes
    json j;
    j["mu"] = rep.mu;
    j["mass"] = rep.mass;
    j["iterations"] = rep.iterations;
    j["converged"] = rep.converged;
    j["residual"] = rep.residual_history.empty() ? 0.0 : rep.residual_history.back();
    j["residual_history"] = rep.residual_history;
    j["breakdown"] = breakdown_json(rep.breakdown);
    j["pohozaev_relative"] = pohozaev_relative(rep.breakdown);
    j["problem"] = {{"N", rep.problem.N},
                    {"s", rep.problem.s},
                    {"alpha", rep.problem.alpha},
                    {"mode", rep.problem.mode == Mode::choquard ? "choquard" : "local"},
                    {"nonlinearity", rep.problem.nonlinearity.describe()},
                    {"n", rep.problem.grid.n},
                    {"L", rep.problem.grid.L}};
    if (rep.decay_filled) {
        j["decay"] = {{"exponent", rep.decay_exponent}, {"constant", rep.decay_constant}};
    }
    return j;
}

void write_profile_csv(const Field& u, const fs::path& path) {
    Profile p = radial_profile(u);
    std::ofstream out(path);
    out << "r,u\n";
    out.precision(17);
    for (std::size_t i = 0; i < p.radii.size(); ++i)
        out << p.radii[i] << "," << p.values[i] << "\n";
}

/** Circular shift putting the argmax at the box center (for off-center
 * semiclassical states before the radial reduction). */
Field recenter(const Field& u) {
    const GridSpec& g = u.grid;
    std::size_t best = 0;
    for (std::size_t i = 1; i < u.size(); ++i)
        if (u[i] > u[best]) best = i;
    std::vector<int> shift(g.N);
    std::size_t rem = best;
    for (int d = g.N - 1; d >= 0; --d) {
        shift[d] = g.n / 2 - static_cast<int>(rem % g.n);
        rem /= g.n;
    }
    Field out(g);
    std::vector<int> idx(g.N, 0);
    for (std::size_t lin = 0; lin < u.size(); ++lin) {
        std::size_t dst = 0;
        for (int d = 0; d < g.N; ++d)
            dst = dst * g.n + ((idx[d] + shift[d]) % g.n + g.n) % g.n;
        out[dst] = u[lin];
        for (int d = g.N - 1; d >= 0; --d) {
            if (++idx[d] < g.n) break;
            idx[d] = 0;
        }
    }
    return out;
}

struct CommonArgs {
    std::string config;
    std::string out = "out";
    long seed = -1;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config, "problem config file")->required();
    cmd->add_option("--out", a.out, "output directory");
    cmd->add_option("--seed", a.seed, "RNG seed override");
    cmd->add_option("--threads", a.threads, "thread budget");
}

ProblemSpec load_spec(const CommonArgs& a) {
    ProblemSpec sp = load_config(a.config);
    if (a.seed >= 0) sp.solver.seed = static_cast<std::uint64_t>(a.seed);
    return sp;
}

int cmd_constants(const CommonArgs& a, Manifest& man) {
    ProblemSpec sp = load_spec(a);
    json j;
    j["N"] = sp.N;
    j["s"] = sp.s;
    j["C_Ns"] = sp.s < 1.0 ? frac_lap_constant(sp.N, sp.s) : 0.0;
    if (sp.mode == Mode::choquard) {
        j["alpha"] = sp.alpha;
        j["C_Nalpha"] = riesz_constant(sp.N, sp.alpha);
        ExponentTable ex = critical_exponents(sp.N, sp.s, sp.alpha);
        j["exponents"] = {{"lower", ex.lower},
                          {"l2crit", ex.l2crit},
                          {"upper", ex.upper},
                          {"sobolev", ex.sobolev},
                          {"sublinear_threshold", ex.sublinear_threshold}};
    }
    std::ofstream(man.out_dir / "constants.json") << j.dump(2) << "\n";
    man.add("constants.json");
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_verify(const CommonArgs& a, Manifest& man) {
    ProblemSpec sp = load_spec(a);
    const bool corrupt = std::getenv("NONLOC_TEST_CORRUPT_KERNEL") != nullptr;
    json checks = json::array();
    bool all_ok = true;
    auto record = [&](const std::string& name, bool ok, double err) {
        checks.push_back({{"name", name}, {"pass", ok}, {"error", err}});
        if (!ok) {
            all_ok = false;
            std::cerr << "verification failed: " << name << " (error " << err << ")\n";
        }
    };

    // 1. closed-form fractional Laplacian identity on h_{N-2s}
    {
        GridSpec g{sp.N, std::min(sp.grid.n, sp.N == 3 ? 32 : 64), sp.grid.L};
        double beta = sp.N - 2 * sp.s;
        Field h(g);
        std::vector<int> idx(g.N, 0);
        for (std::size_t lin = 0; lin < h.size(); ++lin) {
            double r2 = 0;
            for (int d = 0; d < g.N; ++d) {
                double c = (idx[d] - g.n / 2) * g.dx();
                r2 += c * c;
            }
            h[lin] = std::pow(1.0 + r2, -beta / 2.0);
            for (int d = g.N - 1; d >= 0; --d) {
                if (++idx[d] < g.n) break;
                idx[d] = 0;
            }
        }
        Field lap = frac_laplacian(h, sp.s);
        DecayLaw law = hbeta_asymptotic(beta, sp.N, sp.s);
        double peak = std::abs(law.constant), maxerr = 0;
        std::fill(idx.begin(), idx.end(), 0);
        for (std::size_t lin = 0; lin < h.size(); ++lin) {
            double r2 = 0;
            bool inside = true;
            for (int d = 0; d < g.N; ++d) {
                double c = (idx[d] - g.n / 2) * g.dx();
                r2 += c * c;
                inside = inside && std::abs(c) < g.L / 4;
            }
            if (inside) {
                double exact = law.constant * std::pow(1.0 + r2, -(sp.N + 2 * sp.s) / 2.0);
                maxerr = std::max(maxerr, std::abs(lap[lin] - exact) / peak);
            }
            for (int d = g.N - 1; d >= 0; --d) {
                if (++idx[d] < g.n) break;
                idx[d] = 0;
            }
        }
        record("frac_laplacian_identity", maxerr < 2e-2, maxerr);
    }

    // 2. FFT Riesz convolution vs direct quadrature (corruptible path)
    if (sp.mode == Mode::choquard) {
        GridSpec g{sp.N, sp.N == 3 ? 16 : 32, sp.grid.L};
        Field f(g);
        std::vector<int> idx(g.N, 0);
        for (std::size_t lin = 0; lin < f.size(); ++lin) {
            double r2 = 0;
            for (int d = 0; d < g.N; ++d) {
                double c = (idx[d] - g.n / 2) * g.dx();
                r2 += c * c;
            }
            f[lin] = std::exp(-r2 / 16.0);
            for (int d = g.N - 1; d >= 0; --d) {
                if (++idx[d] < g.n) break;
                idx[d] = 0;
            }
        }
        RieszKernelCache cache(g, sp.alpha);
        if (corrupt) cache.corrupt();
        Field a1 = riesz_convolve(f, cache);
        Field a2 = riesz_direct(f, sp.alpha);
        double num = 0, den = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            num += (a1[i] - a2[i]) * (a1[i] - a2[i]);
            den += a2[i] * a2[i];
        }
        double err = std::sqrt(num / den);
        record("riesz_convolution", err < 1e-10, err);

        // 3. positivity of the Riesz quadratic form on a sign-changing field
        Field sgn = f;
        for (std::size_t i = 0; i < sgn.size(); ++i)
            if (i % 3 == 0) sgn[i] = -sgn[i];
        double q = inner(riesz_convolve(sgn, cache), sgn);
        record("riesz_positivity", q > 0, q);
    }

    // 4. Gagliardo seminorm FFT vs direct double sum (1D)
    {
        GridSpec g{1, 32, 10.0};
        Field f(g);
        for (int i = 0; i < g.n; ++i) {
            double x = 2.0 * M_PI * i / g.n;
            f[i] = std::sin(x) + 0.5 * std::cos(3 * x) + 0.25 * std::sin(5 * x);
        }
        double a1 = seminorm_gagliardo(f, sp.s).gagliardo;
        double a2 = seminorm_direct(f, sp.s);
        double err = std::abs(a1 - a2) / a2;
        record("gagliardo_seminorm", err < 1e-2, err);
    }

    // 5. Bessel solve inverts ((-D)^s + lam)
    {
        GridSpec g{sp.N, 16, sp.grid.L};
        Field f(g);
        for (std::size_t i = 0; i < f.size(); ++i)
            f[i] = std::cos(2.0 * M_PI * static_cast<double>(i % g.n) / g.n);
        Field u = bessel_solve(f, sp.s, 1.0);
        Field back = frac_laplacian(u, sp.s);
        double num = 0, den = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            double e = back[i] + u[i] - f[i];
            num += e * e;
            den += f[i] * f[i];
        }
        double err = std::sqrt(num / den);
        record("bessel_inverse", err < 1e-10, err);
    }

    std::ofstream(man.out_dir / "verify.json") << checks.dump(2) << "\n";
    man.add("verify.json");
    return all_ok ? 0 : 4;
}

int emit_solve_outputs(const SolveReport& rep, Manifest& man) {
    std::ofstream(man.out_dir / "report.json") << report_json(rep).dump(2) << "\n";
    man.add("report.json");
    write_profile_csv(rep.field, man.out_dir / "profile.csv");
    man.add("profile.csv");
    save_field(rep.field, (man.out_dir / "field.bin").string());
    man.add("field.bin");
    return rep.converged ? 0 : 3;
}

int cmd_solve(const CommonArgs& a, const std::string& method, Manifest& man) {
    ProblemSpec sp = load_spec(a);
    if (sp.mu_free()) throw config_error("solve: mu must be fixed (use solve-normalized)");
    SolveReport rep;
    bool homog = sp.mode == Mode::choquard && sp.nonlinearity.kind == NonlinKind::power;
    if (method == "petviashvili" || (method == "auto" && homog))
        rep = petviashvili_solve(sp);
    else
        rep = fiber_descent_solve(sp);
    return emit_solve_outputs(rep, man);
}

int cmd_solve_normalized(const CommonArgs& a, double mass_flag, Manifest& man) {
    ProblemSpec sp = load_spec(a);
    double m = mass_flag > 0 ? mass_flag : sp.mass_target;
    if (!(m > 0)) throw config_error("solve-normalized: no mass target given");
    sp.mu = -1.0;
    SolveReport rep = normalized_flow_solve(sp, m);
    return emit_solve_outputs(rep, man);
}

int cmd_semiclassical(const CommonArgs& a, const std::string& eps_range, double well,
                      Manifest& man) {
    ProblemSpec sp = load_spec(a);
    std::vector<double> ladder = parse_range(eps_range, true);
    std::sort(ladder.rbegin(), ladder.rend());
    auto V = [well](const std::vector<double>& x) {
        double r2 = 0;
        for (std::size_t d = 0; d < x.size(); ++d) {
            double c = x[d] - (d == 0 ? well : 0.0);
            r2 += c * c;
        }
        return 1.0 + r2 / (1.0 + r2);
    };
    std::ofstream csv(man.out_dir / "semiclassical.csv");
    csv << "eps,argmax_dist,tail_exponent\n";
    csv.precision(17);
    bool all_ok = true;
    SolveReport last;
    for (double eps : ladder) {
        SolveReport rep = semiclassical_solve(sp, V, eps);
        all_ok = all_ok && rep.converged;
        std::vector<double> loc = argmax_location(rep.field);
        double d2 = 0;
        for (int d = 0; d < sp.N; ++d) {
            double c = loc[d] - (d == 0 ? well / eps : 0.0);
            d2 += c * c;
        }
        double slope = 0;
        try {
            Profile p = radial_profile(recenter(rep.field));
            double half = sp.grid.L / 2;
            DecayFit fit = decay_fit(p, 0.15 * half, 0.50 * half);
            slope = fit.exponent;
            rep.decay_exponent = fit.exponent;
            rep.decay_constant = fit.constant;
            rep.decay_filled = true;
        } catch (const analysis_error&) {
        }
        csv << eps << "," << std::sqrt(d2) << "," << slope << "\n";
        last = std::move(rep);
    }
    man.add("semiclassical.csv");
    std::ofstream(man.out_dir / "report.json") << report_json(last).dump(2) << "\n";
    man.add("report.json");
    write_profile_csv(recenter(last.field), man.out_dir / "profile.csv");
    man.add("profile.csv");
    return all_ok ? 0 : 3;
}

int cmd_decay(const CommonArgs& a, double rlo, double rhi, Manifest& man) {
    ProblemSpec sp = load_spec(a);
    if (sp.mu_free()) throw config_error("decay: mu must be fixed");
    SolveReport rep;
    if (sp.mode == Mode::choquard && sp.nonlinearity.kind == NonlinKind::power)
        rep = petviashvili_solve(sp);
    else
        rep = fiber_descent_solve(sp);
    double half = sp.grid.L / 2;
    if (rlo <= 0) rlo = 0.15 * half;
    if (rhi <= 0) rhi = 0.40 * half;
    Profile p = radial_profile(rep.field);
    DecayFit fit = decay_fit(p, rlo, rhi);
    rep.decay_exponent = fit.exponent;
    rep.decay_constant = fit.constant;
    rep.decay_filled = true;

    json j;
    j["fit"] = {{"exponent", fit.exponent}, {"constant", fit.constant},
                {"stderr", fit.stderr_},    {"r_lo", fit.r_lo},
                {"r_hi", fit.r_hi},         {"shells", fit.shells}};
    if (sp.mode == Mode::choquard) {
        double r = sp.nonlinearity.r;
        j["expected_exponent"] = expected_decay(sp.N, sp.s, sp.alpha, r);
        ExponentTable ex = critical_exponents(sp.N, sp.s, sp.alpha);
        if (r >= ex.lower && r < ex.sublinear_threshold)
            j["sharp_constant"] = sharp_constant(rep, r);
    } else {
        j["expected_exponent"] = sp.N + 2 * sp.s;
    }
    std::ofstream(man.out_dir / "decay.json") << j.dump(2) << "\n";
    man.add("decay.json");
    return emit_solve_outputs(rep, man);
}

int cmd_annuli(const CommonArgs& a, const std::string& r_range, const std::string& h_range,
               bool use_thickness, long samples, Manifest& man) {
    ProblemSpec sp = load_spec(a);
    if (sp.mode != Mode::choquard) throw config_error("annuli: choquard config required");
    std::vector<double> Rs = parse_range(r_range, true);
    std::uint64_t seed = sp.solver.seed;

    std::ofstream csv(man.out_dir / "annuli.csv");
    csv << "R,h,estimate,stderr\n";
    csv.precision(17);
    std::vector<double> hs, vals;
    json summary;
    if (use_thickness) {
        for (double R : Rs) {
            double h = annuli_thickness(R, sp.N, sp.alpha);
            auto [est, se] = annuli_interaction(R, h, sp.N, sp.alpha, samples, seed);
            csv << R << "," << h << "," << est << "," << se << "\n";
            vals.push_back(est);
        }
        double lo = *std::min_element(vals.begin(), vals.end());
        double hi = *std::max_element(vals.begin(), vals.end());
        summary["band"] = {lo, hi};
        summary["band_ratio"] = hi / lo;
    } else {
        if (h_range.empty()) throw config_error("annuli: need --h or --use-thickness");
        std::vector<double> ladder = parse_range(h_range, true);
        for (double R : Rs)
            for (double h : ladder) {
                auto [est, se] = annuli_interaction(R, h, sp.N, sp.alpha, samples, seed);
                csv << R << "," << h << "," << est << "," << se << "\n";
                if (Rs.size() == 1) {
                    hs.push_back(h);
                    vals.push_back(est);
                }
            }
        if (hs.size() >= 4) {
            auto [expn, se] = scaling_fit(hs, vals);
            summary["fitted_exponent"] = expn;
            summary["fit_stderr"] = se;
            if (sp.alpha > 1)
                summary["expected_exponent"] = 2.0;
            else if (sp.alpha < 1)
                summary["expected_exponent"] = 1.0 + sp.alpha;
            else
                summary["expected_exponent"] = "2 with log correction";
        }
    }
    man.add("annuli.csv");
    std::ofstream(man.out_dir / "annuli_summary.json") << summary.dump(2) << "\n";
    man.add("annuli_summary.json");
    return 0;
}

int cmd_duality(const CommonArgs& a, const std::string& mu_range, const std::string& m_range,
                Manifest& man) {
    ProblemSpec sp = load_spec(a);
    std::vector<double> mus = parse_range(mu_range, true);
    std::vector<double> ms = parse_range(m_range, false);
    DualityReport rep = duality_scan(sp, mus, ms);

    std::ofstream csv(man.out_dir / "duality.csv");
    csv << "kind,x,value\n";
    csv.precision(17);
    for (std::size_t i = 0; i < mus.size(); ++i)
        csv << "p," << mus[i] << "," << rep.p_curve[i] << "\n";
    for (std::size_t j = 0; j < ms.size(); ++j) {
        csv << "kappa," << ms[j] << "," << rep.kappa_curve[j] << "\n";
        csv << "mu_of_m," << ms[j] << "," << rep.mu_of_m[j] << "\n";
        csv << "residual," << ms[j] << "," << rep.duality_residuals[j] << "\n";
    }
    man.add("duality.csv");

    bool monotone = true, all_ok = true;
    for (std::size_t i = 0; i + 1 < rep.p_curve.size(); ++i)
        monotone = monotone && rep.p_curve[i] < rep.p_curve[i + 1];
    double worst = 0;
    for (double r : rep.duality_residuals)
        if (std::isfinite(r)) worst = std::max(worst, r);
    for (bool ok : rep.p_ok) all_ok = all_ok && ok;
    for (bool ok : rep.kappa_ok) all_ok = all_ok && ok;
    json summary = {{"m0_estimate", rep.m0_estimate},
                    {"p_monotone", monotone},
                    {"worst_residual", worst},
                    {"all_solves_converged", all_ok}};
    std::ofstream(man.out_dir / "duality_summary.json") << summary.dump(2) << "\n";
    man.add("duality_summary.json");
    return all_ok ? 0 : 3;
}

}  // namespace

std::vector<double> parse_range(const std::string& text, bool log_spaced) {
    auto c1 = text.find(':');
    if (c1 == std::string::npos) {
        try {
            return {std::stod(text)};
        } catch (const std::exception&) {
            throw config_error("range: malformed value '" + text + "'");
        }
    }
    auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw config_error("range: expected lo:hi:count, got '" + text + "'");
    double lo, hi;
    long count;
    try {
        lo = std::stod(text.substr(0, c1));
        hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        count = std::stol(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw config_error("range: malformed value '" + text + "'");
    }
    if (count < 1) throw config_error("range: count must be >= 1");
    if (log_spaced && !(lo > 0 && hi > 0))
        throw config_error("range: log-spaced endpoints must be positive");
    std::vector<double> out;
    if (count == 1) return {lo};
    for (long i = 0; i < count; ++i) {
        double t = static_cast<double>(i) / (count - 1);
        out.push_back(log_spaced ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo));
    }
    return out;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"nonloc: spectral laboratory for fractional Choquard ground states"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");  // keep -h free for the annuli flag

    CommonArgs args;
    std::string method = "auto", eps_range = "0.5:0.125:3";
    std::string mu_range = "0.5:2:6", m_range = "1:20:6", r_range = "1", h_range;
    double mass_flag = 0, well = 0, rlo = 0, rhi = 0;
    bool use_thickness = false;
    long samples = 1000000;

    auto* c_const = app.add_subcommand("constants", "emit the constant/exponent table");
    add_common(c_const, args);
    auto* c_verify = app.add_subcommand("verify-operators", "operator self-checks");
    add_common(c_verify, args);
    auto* c_solve = app.add_subcommand("solve", "fixed-frequency ground state");
    add_common(c_solve, args);
    c_solve->add_option("--solver", method, "auto|petviashvili|fiber");
    auto* c_norm = app.add_subcommand("solve-normalized", "prescribed-mass ground state");
    add_common(c_norm, args);
    c_norm->add_option("--mass", mass_flag, "mass target override");
    auto* c_semi = app.add_subcommand("semiclassical", "concentration ladder");
    add_common(c_semi, args);
    c_semi->add_option("--eps", eps_range, "epsilon ladder lo:hi:count (log)");
    c_semi->add_option("--well", well, "well-center offset along the first axis");
    auto* c_decay = app.add_subcommand("decay", "solve + tail-law fit");
    add_common(c_decay, args);
    c_decay->add_option("--rlo", rlo, "fit window lower radius");
    c_decay->add_option("--rhi", rhi, "fit window upper radius");
    auto* c_ann = app.add_subcommand("annuli", "Monte Carlo annuli interactions");
    add_common(c_ann, args);
    c_ann->add_option("--R", r_range, "annulus radii lo:hi:count (log)");
    c_ann->add_option("--h", h_range, "thickness ladder lo:hi:count (log)");
    c_ann->add_flag("--use-thickness", use_thickness, "h = h_R thickness law");
    c_ann->add_option("--samples", samples, "Monte Carlo pairs per point");
    auto* c_dual = app.add_subcommand("duality", "kappa(m) vs p(mu) scan");
    add_common(c_dual, args);
    c_dual->add_option("--mu", mu_range, "frequency grid lo:hi:count (log)");
    c_dual->add_option("--m", m_range, "mass grid lo:hi:count (linear)");
    for (CLI::App* sc : app.get_subcommands({}))
        sc->set_help_flag("--help", "print help");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ExtrasError& e) {
        std::cerr << app.help() << "\n";
        return 64;
    } catch (const CLI::RequiredError& e) {
        if (app.get_subcommands().empty()) {
            std::cerr << app.help() << "\n";
            return 64;
        }
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    if (args.threads > 0)
        setenv("NONLOC_THREADS", std::to_string(args.threads).c_str(), 1);

    Manifest man;
    man.out_dir = args.out;
    man.started = iso_now();
    CLI::App* sub = app.get_subcommands().front();
    man.subcommand = sub->get_name();
    int code = 0;
    try {
        fs::create_directories(man.out_dir);
        man.spec_hash = fnv1a_hex(slurp(args.config));
        if (sub == c_const) code = cmd_constants(args, man);
        else if (sub == c_verify) code = cmd_verify(args, man);
        else if (sub == c_solve) code = cmd_solve(args, method, man);
        else if (sub == c_norm) code = cmd_solve_normalized(args, mass_flag, man);
        else if (sub == c_semi) code = cmd_semiclassical(args, eps_range, well, man);
        else if (sub == c_decay) code = cmd_decay(args, rlo, rhi, man);
        else if (sub == c_ann) code = cmd_annuli(args, r_range, h_range, use_thickness, samples, man);
        else if (sub == c_dual) code = cmd_duality(args, mu_range, m_range, man);
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = 2;
    } catch (const analysis_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = 2;
    } catch (const specfun_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = 2;
    } catch (const solver_error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        code = 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = 2;
    }
    man.write(code);
    return code;
}

}  // namespace nonloc
