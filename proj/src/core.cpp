#include "nonloc/core.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace nonloc {

double Nonlinearity::f(double t) const {
    double a = std::abs(t);
    switch (kind) {
        case NonlinKind::power:
            return a == 0.0 ? 0.0 : std::pow(a, r - 2.0) * t;
        case NonlinKind::combined: {
            double main = a == 0.0 ? 0.0 : std::pow(a, r - 2.0) * t;
            double sec = a == 0.0 ? 0.0 : std::pow(a, q - 2.0) * t;
            return main + sign * sec;
        }
        case NonlinKind::saturable:
            return t * t * t / (1.0 + t * t);
        case NonlinKind::sqrt_type:
            return (1.0 - 1.0 / std::sqrt(1.0 + t * t)) * t;
        case NonlinKind::log_power:
            return a == 0.0 ? 0.0 : std::pow(a, r - 2.0) * t * std::log(t * t);
    }
    return 0.0;
}

double Nonlinearity::F(double t) const {
    double a = std::abs(t);
    switch (kind) {
        case NonlinKind::power:
            return std::pow(a, r) / r;
        case NonlinKind::combined:
            return std::pow(a, r) / r + sign * std::pow(a, q) / q;
        case NonlinKind::saturable:
            return 0.5 * (t * t - std::log(1.0 + t * t));
        case NonlinKind::sqrt_type:
            return 0.5 * t * t - std::sqrt(1.0 + t * t) + 1.0;
        case NonlinKind::log_power:
            return a == 0.0 ? 0.0
                            : std::pow(a, r) * (std::log(t * t) - 2.0 / r) / r;
    }
    return 0.0;
}

double Nonlinearity::growth() const {
    switch (kind) {
        case NonlinKind::power: return r;
        case NonlinKind::combined: return std::max(r, q);
        case NonlinKind::saturable: return 2.0;   // f ~ t at infinity
        case NonlinKind::sqrt_type: return 2.0;
        case NonlinKind::log_power: return r;     // up to the log factor
    }
    return 2.0;
}

std::string Nonlinearity::describe() const {
    std::ostringstream os;
    switch (kind) {
        case NonlinKind::power: os << "power(" << r << ")"; break;
        case NonlinKind::combined:
            os << "combined(" << r << "," << q << "," << (sign > 0 ? "+" : "-") << ")";
            break;
        case NonlinKind::saturable: os << "saturable"; break;
        case NonlinKind::sqrt_type: os << "sqrt_type"; break;
        case NonlinKind::log_power: os << "log_power(" << r << ")"; break;
    }
    return os.str();
}

std::pair<double, double> nonlinearity_eval(const Nonlinearity& nl, double t) {
    return {nl.f(t), nl.F(t)};
}

Nonlinearity parse_nonlinearity(const std::string& text) {
    Nonlinearity nl;
    auto args_of = [&](const std::string& name) {
        std::string inner = text.substr(name.size());
        if (inner.size() < 2 || inner.front() != '(' || inner.back() != ')')
            throw config_error("nonlinearity: malformed arguments in '" + text + "'");
        return inner.substr(1, inner.size() - 2);
    };
    if (text.rfind("power", 0) == 0 && text != "power") {
        nl.kind = NonlinKind::power;
        nl.r = std::stod(args_of("power"));
    } else if (text.rfind("combined", 0) == 0) {
        nl.kind = NonlinKind::combined;
        std::string a = args_of("combined");
        std::istringstream is(a);
        std::string tok;
        std::vector<std::string> parts;
        while (std::getline(is, tok, ',')) parts.push_back(tok);
        if (parts.size() != 3)
            throw config_error("nonlinearity: combined needs (r,q,sign)");
        nl.r = std::stod(parts[0]);
        nl.q = std::stod(parts[1]);
        nl.sign = (parts[2] == "-" ? -1 : +1);
    } else if (text == "saturable") {
        nl.kind = NonlinKind::saturable;
    } else if (text == "sqrt_type") {
        nl.kind = NonlinKind::sqrt_type;
    } else if (text.rfind("log_power", 0) == 0) {
        nl.kind = NonlinKind::log_power;
        nl.r = std::stod(args_of("log_power"));
    } else {
        throw config_error("nonlinearity: unknown kind '" + text + "'");
    }
    if (nl.r <= 1.0) throw config_error("nonlinearity: exponent r must be > 1");
    return nl;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_num(const std::string& key, const std::string& val) {
    try {
        std::size_t pos = 0;
        double x = std::stod(val, &pos);
        if (pos != val.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw config_error("config: key '" + key + "' has non-numeric value '" + val + "'");
    }
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

ProblemSpec parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;  // "section.key" -> value
    std::istringstream is(text);
    std::string line, section;
    while (std::getline(is, line)) {
        std::size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw config_error("config: malformed section line '" + line + "'");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw config_error("config: expected key=value, got '" + line + "'");
        kv[section + "." + trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    ProblemSpec sp;
    bool have_alpha = false;
    for (const auto& [k, val] : kv) {
        if (k == "problem.N") sp.N = static_cast<int>(parse_num(k, val));
        else if (k == "problem.s") sp.s = parse_num(k, val);
        else if (k == "problem.alpha") { have_alpha = (val != "none"); if (have_alpha) sp.alpha = parse_num(k, val); }
        else if (k == "problem.mode") {
            if (val == "choquard") sp.mode = Mode::choquard;
            else if (val == "local") sp.mode = Mode::local;
            else throw config_error("config: key 'mode' must be choquard|local");
        }
        else if (k == "problem.mu") sp.mu = (val == "free") ? -1.0 : parse_num(k, val);
        else if (k == "problem.mass_target") sp.mass_target = (val == "none") ? 0.0 : parse_num(k, val);
        else if (k == "problem.nonlinearity") sp.nonlinearity = parse_nonlinearity(val);
        else if (k == "grid.n") sp.grid.n = static_cast<int>(parse_num(k, val));
        else if (k == "grid.L") sp.grid.L = parse_num(k, val);
        else if (k == "solver.max_iters") sp.solver.max_iters = static_cast<int>(parse_num(k, val));
        else if (k == "solver.grad_tol") sp.solver.grad_tol = parse_num(k, val);
        else if (k == "solver.poho_tol") sp.solver.poho_tol = parse_num(k, val);
        else if (k == "solver.step") sp.solver.step = parse_num(k, val);
        else if (k == "solver.petviashvili_gamma_tol") sp.solver.petviashvili_gamma_tol = parse_num(k, val);
        else if (k == "solver.seed") sp.solver.seed = static_cast<std::uint64_t>(parse_num(k, val));
        else if (k == "solver.init") sp.solver.init = val;
        else throw config_error("config: unknown key '" + k + "'");
    }

    sp.grid.N = sp.N;
    if (sp.N < 1 || sp.N > 3) throw config_error("config: key 'N' must be 1, 2 or 3");
    if (!(sp.s > 0.0 && sp.s <= 1.0)) throw config_error("config: key 's' must lie in (0,1]");
    if (sp.mode == Mode::choquard) {
        if (!have_alpha && !(sp.alpha > 0.0 && sp.alpha < sp.N))
            throw config_error("config: key 'alpha' required in choquard mode");
        if (!(sp.alpha > 0.0 && sp.alpha < sp.N))
            throw config_error("config: key 'alpha' must lie in (0,N)");
    }
    if (!power_of_two(sp.grid.n) || sp.grid.n < 16)
        throw config_error("config: key 'n' must be a power of two >= 16");
    if (!(sp.grid.L > 0)) throw config_error("config: key 'L' must be positive");
    if (sp.solver.max_iters < 1) throw config_error("config: key 'max_iters' must be >= 1");
    if (sp.solver.grad_tol <= 0 || sp.solver.poho_tol <= 0)
        throw config_error("config: key 'grad_tol'/'poho_tol' must be positive");
    if (!sp.mu_free() && sp.mass_target > 0)
        throw config_error("config: key 'mu' and 'mass_target' are mutually exclusive");
    return sp;
}

ProblemSpec load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

Field symmetrize_radial(const Field& u) {
    const GridSpec& g = u.grid;
    const int n = g.n, N = g.N;
    // shell key: squared integer radius of the centered index offset
    std::unordered_map<long, std::pair<double, long>> shells;
    shells.reserve(u.size() / 4 + 1);
    std::vector<int> idx(N, 0);
    std::vector<long> keys(u.size());
    for (std::size_t lin = 0; lin < u.size(); ++lin) {
        long r2 = 0;
        for (int d = 0; d < N; ++d) {
            long c = idx[d] - n / 2;
            r2 += c * c;
        }
        keys[lin] = r2;
        auto& acc = shells[r2];
        acc.first += u[lin];
        acc.second += 1;
        for (int d = N - 1; d >= 0; --d) {
            if (++idx[d] < n) break;
            idx[d] = 0;
        }
    }
    Field out(g);
    for (std::size_t lin = 0; lin < u.size(); ++lin) {
        auto& acc = shells[keys[lin]];
        out[lin] = acc.first / acc.second;
    }
    return out;
}

void save_field(const Field& u, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("save_field: cannot open '" + path + "'");
    out.write(reinterpret_cast<const char*>(&u.grid.N), sizeof(int));
    out.write(reinterpret_cast<const char*>(&u.grid.n), sizeof(int));
    out.write(reinterpret_cast<const char*>(&u.grid.L), sizeof(double));
    out.write(reinterpret_cast<const char*>(u.v.data()),
              static_cast<std::streamsize>(u.v.size() * sizeof(double)));
}

Field load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("load_field: cannot open '" + path + "'");
    GridSpec g;
    in.read(reinterpret_cast<char*>(&g.N), sizeof(int));
    in.read(reinterpret_cast<char*>(&g.n), sizeof(int));
    in.read(reinterpret_cast<char*>(&g.L), sizeof(double));
    Field u(g);
    in.read(reinterpret_cast<char*>(u.v.data()),
            static_cast<std::streamsize>(u.v.size() * sizeof(double)));
    if (!in) throw config_error("load_field: truncated file '" + path + "'");
    return u;
}

Profile radial_profile(const Field& u) {
    const GridSpec& g = u.grid;
    if (g.n < 16) throw config_error("radial_profile: degenerate grid (n<16)");
    const int n = g.n, N = g.N;
    const double dx = g.dx();
    const int nbins = n / 2;  // radii up to L/2
    std::vector<double> sum(nbins, 0.0);
    std::vector<long> cnt(nbins, 0);
    std::vector<int> idx(N, 0);
    for (std::size_t lin = 0; lin < u.size(); ++lin) {
        double r2 = 0;
        for (int d = 0; d < N; ++d) {
            double c = (idx[d] - n / 2) * dx;
            r2 += c * c;
        }
        int b = static_cast<int>(std::sqrt(r2) / dx);
        if (b < nbins) {
            sum[b] += u[lin];
            cnt[b] += 1;
        }
        for (int d = N - 1; d >= 0; --d) {
            if (++idx[d] < n) break;
            idx[d] = 0;
        }
    }
    Profile p;
    for (int b = 0; b < nbins; ++b) {
        if (cnt[b] == 0) continue;
        p.radii.push_back((b + 0.5) * dx);
        p.values.push_back(sum[b] / cnt[b]);
    }
    return p;
}

}  // namespace nonloc
