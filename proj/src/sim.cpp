#include "spintower/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

namespace spintower {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9e", v);
    return buf;
}

std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

SpinField make_grid(const InitSpec& spec) {
    spec.params.validate();
    if (spec.nx < 8 || spec.ny < 8) throw SimError("grid sizes must be at least 8");
    SpinField f;
    f.nx = spec.nx;
    f.ny = spec.ny;
    f.hx = kTwoPi / spec.nx;
    f.hy = kTwoPi / spec.ny;
    f.params = spec.params;
    f.data.assign(static_cast<size_t>(3 * spec.nx * spec.ny), 0.0);
    return f;
}

// scheme right-hand side: Ginv (S x (S_xx + S_yy)), 5-point Laplacian
std::vector<std::array<double, 3>> scheme_rhs(const SpinField& f) {
    std::vector<std::array<double, 3>> r(static_cast<size_t>(f.nx * f.ny));
    const double ax = 1.0 / (f.hx * f.hx), ay = 1.0 / (f.hy * f.hy);
    const double g2 = f.params.gamma2;
    for (int i = 0; i < f.nx; ++i) {
        for (int j = 0; j < f.ny; ++j) {
            std::array<double, 3> s, lap;
            for (int c = 0; c < 3; ++c) {
                s[c] = f.at(i, j, c);
                lap[c] = ax * (f.at(i + 1, j, c) - 2 * s[c] + f.at(i - 1, j, c)) +
                         ay * (f.at(i, j + 1, c) - 2 * s[c] + f.at(i, j - 1, c));
            }
            std::array<double, 3> v = cross(s, lap);
            v[2] *= g2;  // Ginv = diag(1, 1, gamma2) since gamma2^2 = 1
            r[static_cast<size_t>(i * f.ny + j)] = v;
        }
    }
    return r;
}

}  // namespace

double dispersion_omega(const InitSpec& spec) {
    return -(static_cast<double>(spec.k1) * spec.k1 + static_cast<double>(spec.k2) * spec.k2) *
           std::cos(spec.u0);
}

SpinField plane_wave_exact(const InitSpec& spec, double time) {
    if (spec.params.gamma2 != 1)
        throw SimError("the plane-wave solution is derived for the compact case");
    SpinField f = make_grid(spec);
    const double su = std::sin(spec.u0), cu = std::cos(spec.u0);
    const double omega = dispersion_omega(spec);
    for (int i = 0; i < f.nx; ++i)
        for (int j = 0; j < f.ny; ++j) {
            double phi = spec.k1 * (i * f.hx) + spec.k2 * (j * f.hy) + omega * time;
            f.at(i, j, 0) = su * std::cos(phi);
            f.at(i, j, 1) = su * std::sin(phi);
            f.at(i, j, 2) = cu;
        }
    return f;
}

std::vector<std::array<double, 3>> plane_wave_time_derivative(const InitSpec& spec, double time) {
    SpinField f = make_grid(spec);
    const double su = std::sin(spec.u0);
    const double omega = dispersion_omega(spec);
    std::vector<std::array<double, 3>> r(static_cast<size_t>(f.nx * f.ny));
    for (int i = 0; i < f.nx; ++i)
        for (int j = 0; j < f.ny; ++j) {
            double phi = spec.k1 * (i * f.hx) + spec.k2 * (j * f.hy) + omega * time;
            r[static_cast<size_t>(i * f.ny + j)] = {-omega * su * std::sin(phi),
                                                    omega * su * std::cos(phi), 0.0};
        }
    return r;
}

SpinField init_field(const InitSpec& spec) {
    if (spec.kind == "plane_wave") {
        SpinField f = plane_wave_exact(spec, 0.0);
        project(f);
        return f;
    }
    SpinField f = make_grid(spec);
    if (spec.kind == "constant") {
        for (int i = 0; i < f.nx; ++i)
            for (int j = 0; j < f.ny; ++j)
                for (int c = 0; c < 3; ++c) f.at(i, j, c) = spec.value[c];
    } else if (spec.kind == "random_smooth") {
        std::mt19937_64 rng(spec.seed);
        std::uniform_real_distribution<double> amp(-0.3, 0.3), phase(0.0, kTwoPi);
        // a handful of low Fourier modes per horizontal component
        struct Mode {
            int k1, k2;
            double a, p;
        };
        std::vector<Mode> modes[2];
        for (int c = 0; c < 2; ++c)
            for (int k1 = -2; k1 <= 2; ++k1)
                for (int k2 = -2; k2 <= 2; ++k2) {
                    if (k1 == 0 && k2 == 0) continue;
                    modes[c].push_back({k1, k2, amp(rng) / 4.0, phase(rng)});
                }
        for (int i = 0; i < f.nx; ++i)
            for (int j = 0; j < f.ny; ++j) {
                double s[2] = {0, 0};
                for (int c = 0; c < 2; ++c)
                    for (const Mode& m : modes[c])
                        s[c] += m.a * std::cos(m.k1 * (i * f.hx) + m.k2 * (j * f.hy) + m.p);
                f.at(i, j, 0) = s[0];
                f.at(i, j, 1) = s[1];
                f.at(i, j, 2) = spec.params.gamma2 == 1
                                    ? 1.0
                                    : std::sqrt(1.0 + s[0] * s[0] + s[1] * s[1]);
            }
    } else {
        throw SimError("unknown initialization kind: " + spec.kind);
    }
    project(f);
    return f;
}

void project(SpinField& f) {
    for (int i = 0; i < f.nx; ++i)
        for (int j = 0; j < f.ny; ++j) {
            double s1 = f.at(i, j, 0), s2 = f.at(i, j, 1), s3 = f.at(i, j, 2);
            double q;
            if (f.params.gamma2 == 1) {
                q = s1 * s1 + s2 * s2 + s3 * s3;
            } else {
                q = s3 * s3 - s1 * s1 - s2 * s2;
                if (q <= 0.0 || s3 <= 0.0)
                    throw SimError("node (" + std::to_string(i) + "," + std::to_string(j) +
                                   ") is off the upper hyperboloid sheet");
            }
            if (q <= 0.0) throw SimError("cannot project a zero vector");
            double inv = 1.0 / std::sqrt(q);
            f.at(i, j, 0) = s1 * inv;
            f.at(i, j, 1) = s2 * inv;
            f.at(i, j, 2) = s3 * inv;
        }
}

double constraint_violation(const SpinField& f) {
    const double g2 = f.params.gamma2;
    double worst = 0.0;
    for (int i = 0; i < f.nx; ++i)
        for (int j = 0; j < f.ny; ++j) {
            double s1 = f.at(i, j, 0), s2 = f.at(i, j, 1), s3 = f.at(i, j, 2);
            worst = std::max(worst, std::abs(s1 * s1 + s2 * s2 + g2 * s3 * s3 - g2));
        }
    return worst;
}

SpinField step(const SpinField& f, double dt) {
    const double h = std::min(f.hx, f.hy);
    if (std::abs(dt) > h * h / 4.0)
        throw SimError("dt " + fmt(dt) + " exceeds the stability bound " + fmt(h * h / 4.0));
    auto advance = [&](const SpinField& base, const std::vector<std::array<double, 3>>& k,
                       double w) {
        SpinField g = base;
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j)
                for (int c = 0; c < 3; ++c)
                    g.at(i, j, c) = f.at(i, j, c) + w * k[static_cast<size_t>(i * g.ny + j)][c];
        return g;
    };
    auto k1 = scheme_rhs(f);
    auto k2 = scheme_rhs(advance(f, k1, dt / 2));
    auto k3 = scheme_rhs(advance(f, k2, dt / 2));
    auto k4 = scheme_rhs(advance(f, k3, dt));
    SpinField out = f;
    for (int i = 0; i < out.nx; ++i)
        for (int j = 0; j < out.ny; ++j) {
            size_t n = static_cast<size_t>(i * out.ny + j);
            for (int c = 0; c < 3; ++c) {
                double v = f.at(i, j, c) +
                           dt / 6.0 * (k1[n][c] + 2 * k2[n][c] + 2 * k3[n][c] + k4[n][c]);
                if (!std::isfinite(v))
                    throw SimError("non-finite value at node (" + std::to_string(i) + "," +
                                   std::to_string(j) + ")");
                out.at(i, j, c) = v;
            }
        }
    project(out);
    return out;
}

SpinField integrate(SpinField f, double dt, int nsteps) {
    for (int k = 0; k < nsteps; ++k) {
        try {
            f = step(f, dt);
        } catch (const SimError& e) {
            throw SimError("step " + std::to_string(k) + ": " + e.what());
        }
    }
    return f;
}

double linf_diff(const SpinField& a, const SpinField& b) {
    if (a.nx != b.nx || a.ny != b.ny) throw SimError("grid mismatch");
    double worst = 0.0;
    for (size_t k = 0; k < a.data.size(); ++k)
        worst = std::max(worst, std::abs(a.data[k] - b.data[k]));
    return worst;
}

MonitorSet builtin_monitors(const ModelParams& p) {
    p.validate();
    auto& st = symtab();
    MonitorSet m;
    ScalarExpr constr;
    for (int k = 1; k <= 3; ++k) constr.add_term(Monomial({st.S(k), st.S(k)}), p.coupling(k));
    constr.add_term(Monomial{}, -ExactScalar(static_cast<long>(p.gamma2)));
    m.emplace_back("constraint", constr);
    for (int i = 1; i <= 3; ++i) {
        ScalarExpr r = sym_expr(st.St(i)).scaled(p.coupling(i));
        for (int j = 1; j <= 3; ++j)
            for (int k = 1; k <= 3; ++k) {
                int e = eps3(i, j, k);
                if (e == 0) continue;
                ExactScalar c(static_cast<long>(-e));
                r.add_term(Monomial({st.S(j), st.Sxx(k)}), c);
                r.add_term(Monomial({st.S(j), st.Syy(k)}), c);
            }
        m.emplace_back("pde_residual_" + std::to_string(i), r);
    }
    return m;
}

namespace {

struct CompiledTerm {
    double coeff;
    std::vector<int> slots;  // indices into the per-node jet-value vector
};
struct CompiledMonitor {
    std::string name;
    std::vector<CompiledTerm> terms;
};

// jet slots: which symbols a monitor set touches
struct JetPlan {
    std::vector<int> syms;             // slot -> symbol id
    std::map<int, int> slot_of;        // symbol id -> slot
    bool needs_time = false;           // St, Sxt or Syt present
};

bool supported_symbol(int id) {
    switch (symtab().info(id).kind) {
        case SymKind::S:
        case SymKind::Sx:
        case SymKind::Sy:
        case SymKind::St:
        case SymKind::Sxx:
        case SymKind::Syy:
        case SymKind::Sxy:
        case SymKind::Sxt:
        case SymKind::Syt:
            return true;
        default:
            return false;
    }
}

}  // namespace

ResidualReport measure_residuals(const SpinField& f, const MonitorSet& monitors,
                                 const std::vector<std::array<double, 3>>* st_grid) {
    JetPlan plan;
    std::vector<CompiledMonitor> compiled;
    for (const auto& [name, expr] : monitors) {
        CompiledMonitor cm;
        cm.name = name;
        for (const auto& [m, c] : expr.terms()) {
            auto [re, im] = c.eval(1.0, 0.0);
            if (std::abs(im) > 1e-15)
                throw SimError("monitor " + name + " has a non-real coefficient: " + c.str());
            CompiledTerm term;
            term.coeff = re;
            for (int s : m.syms) {
                if (!supported_symbol(s))
                    throw SimError("monitor " + name + " references symbol " + symtab().name(s) +
                                   ", which has no grid value (second-order jets only)");
                auto it = plan.slot_of.find(s);
                if (it == plan.slot_of.end()) {
                    it = plan.slot_of.emplace(s, static_cast<int>(plan.syms.size())).first;
                    plan.syms.push_back(s);
                    auto k = symtab().info(s).kind;
                    if (k == SymKind::St || k == SymKind::Sxt || k == SymKind::Syt)
                        plan.needs_time = true;
                }
                term.slots.push_back(it->second);
            }
            cm.terms.push_back(std::move(term));
        }
        compiled.push_back(std::move(cm));
    }

    std::vector<std::array<double, 3>> st_local;
    const std::vector<std::array<double, 3>>* st = st_grid;
    if (!st && plan.needs_time) {
        st_local = scheme_rhs(f);
        st = &st_local;
    }
    auto st_at = [&](int i, int j, int c) {
        return (*st)[static_cast<size_t>(SpinField::wrap(i, f.nx) * f.ny +
                                         SpinField::wrap(j, f.ny))][static_cast<size_t>(c)];
    };

    const double i2hx = 1.0 / (2 * f.hx), i2hy = 1.0 / (2 * f.hy);
    const double ihx2 = 1.0 / (f.hx * f.hx), ihy2 = 1.0 / (f.hy * f.hy);
    auto jet_value = [&](int sym, int i, int j) -> double {
        const SymbolInfo& si = symtab().info(sym);
        const int c = si.index - 1;  // components are 1-based in the symbol table
        switch (si.kind) {
            case SymKind::S: return f.at(i, j, c);
            case SymKind::Sx: return (f.at(i + 1, j, c) - f.at(i - 1, j, c)) * i2hx;
            case SymKind::Sy: return (f.at(i, j + 1, c) - f.at(i, j - 1, c)) * i2hy;
            case SymKind::Sxx:
                return (f.at(i + 1, j, c) - 2 * f.at(i, j, c) + f.at(i - 1, j, c)) * ihx2;
            case SymKind::Syy:
                return (f.at(i, j + 1, c) - 2 * f.at(i, j, c) + f.at(i, j - 1, c)) * ihy2;
            case SymKind::Sxy:
                return (f.at(i + 1, j + 1, c) + f.at(i - 1, j - 1, c) - f.at(i + 1, j - 1, c) -
                        f.at(i - 1, j + 1, c)) *
                       (i2hx * i2hy);
            case SymKind::St: return st_at(i, j, c);
            case SymKind::Sxt: return (st_at(i + 1, j, c) - st_at(i - 1, j, c)) * i2hx;
            case SymKind::Syt: return (st_at(i, j + 1, c) - st_at(i, j - 1, c)) * i2hy;
            default: throw SimError("unsupported jet symbol");
        }
    };

    ResidualReport rep;
    rep.nx = f.nx;
    rep.ny = f.ny;
    rep.hx = f.hx;
    rep.hy = f.hy;
    std::vector<MonitorStat> stats(compiled.size());
    std::vector<double> slots(plan.syms.size());
    // fixed row-major reduction order keeps the report deterministic
    for (int i = 0; i < f.nx; ++i)
        for (int j = 0; j < f.ny; ++j) {
            for (size_t k = 0; k < plan.syms.size(); ++k) slots[k] = jet_value(plan.syms[k], i, j);
            for (size_t mi = 0; mi < compiled.size(); ++mi) {
                const CompiledMonitor& cm = compiled[mi];
                // path 1: terms in canonical order, factors left to right
                double direct = 0.0;
                for (const CompiledTerm& t : cm.terms) {
                    double prod = t.coeff;
                    for (int s : t.slots) prod *= slots[static_cast<size_t>(s)];
                    direct += prod;
                }
                // path 2: reversed term order, factors folded from the right
                double folded = 0.0;
                for (auto it = cm.terms.rbegin(); it != cm.terms.rend(); ++it) {
                    double prod = 1.0;
                    for (auto s = it->slots.rbegin(); s != it->slots.rend(); ++s)
                        prod *= slots[static_cast<size_t>(*s)];
                    folded += it->coeff * prod;
                }
                double scale = std::max({1.0, std::abs(direct), std::abs(folded)});
                if (std::abs(direct - folded) > 1e-12 * scale)
                    throw SimError("evaluator paths disagree for monitor " + cm.name);
                stats[mi].max = std::max(stats[mi].max, std::abs(direct));
                stats[mi].mean += std::abs(direct);
            }
        }
    const double nodes = static_cast<double>(f.nx) * f.ny;
    for (size_t mi = 0; mi < compiled.size(); ++mi) {
        stats[mi].mean /= nodes;
        rep.stats[compiled[mi].name] = stats[mi];
    }
    return rep;
}

std::string ResidualReport::str() const {
    std::ostringstream os;
    os << "grid " << nx << "x" << ny << " hx=" << fmt(hx) << " hy=" << fmt(hy) << "\n";
    for (const auto& [name, s] : stats)
        os << name << ": max=" << fmt(s.max) << " mean=" << fmt(s.mean) << "\n";
    return os.str();
}

ConvergenceResult convergence_study(const InitSpec& spec, const std::vector<int>& grids,
                                    double t_final, double dt_safety) {
    if (grids.size() < 3) throw SimError("a convergence study needs at least three grids");
    for (size_t k = 1; k < grids.size(); ++k)
        if (grids[k] != 2 * grids[k - 1]) throw SimError("grids must refine by a factor of 2");
    if (dt_safety <= 0 || dt_safety > 1) throw SimError("dt_safety must lie in (0,1]");

    ConvergenceResult res;
    const bool plane = spec.kind == "plane_wave";
    for (int n : grids) {
        InitSpec s = spec;
        s.nx = s.ny = n;
        SpinField f0 = init_field(s);
        ConvergenceRow row;
        row.n = n;
        row.h = f0.hx;

        // spatial residual of the evolution law at t = 0 (exact time
        // derivative where one is known)
        MonitorSet mons = builtin_monitors(s.params);
        std::vector<std::array<double, 3>> st;
        const std::vector<std::array<double, 3>>* stp = nullptr;
        if (plane) {
            st = plane_wave_time_derivative(s, 0.0);
            stp = &st;
        }
        ResidualReport rr = measure_residuals(f0, mons, stp);
        double pde = 0.0;
        for (int c = 1; c <= 3; ++c)
            pde = std::max(pde, rr.stats.at("pde_residual_" + std::to_string(c)).max);
        row.errors["pde_residual"] = pde;

        const double bound = f0.hx * f0.hx / 4.0;
        int nsteps = std::max(1, static_cast<int>(std::ceil(t_final / (dt_safety * bound))));
        double dt = t_final / nsteps;
        SpinField ft = integrate(f0, dt, nsteps);
        row.errors["constraint"] = constraint_violation(ft);
        if (plane) {
            row.errors["solution_error"] = linf_diff(ft, plane_wave_exact(s, t_final));
        } else if (spec.kind == "constant") {
            row.errors["solution_error"] = linf_diff(ft, f0);
        }
        res.rows.push_back(std::move(row));
    }

    for (const auto& [name, e0] : res.rows.front().errors) {
        (void)e0;
        ConvergenceEstimate est;
        std::vector<double> lh, le;
        double emax = 0.0;
        for (const auto& row : res.rows) {
            double e = row.errors.at(name);
            emax = std::max(emax, e);
            lh.push_back(std::log(row.h));
            le.push_back(std::log(std::max(e, 1e-300)));
        }
        for (size_t k = 1; k < res.rows.size(); ++k)
            if (res.rows[k].errors.at(name) > res.rows[k - 1].errors.at(name))
                est.monotone = false;
        if (emax <= 1e-11) {
            est.at_floor = true;
        } else {
            double mh = 0, me = 0;
            for (size_t k = 0; k < lh.size(); ++k) mh += lh[k], me += le[k];
            mh /= static_cast<double>(lh.size());
            me /= static_cast<double>(lh.size());
            double num = 0, den = 0;
            for (size_t k = 0; k < lh.size(); ++k) {
                num += (lh[k] - mh) * (le[k] - me);
                den += (lh[k] - mh) * (lh[k] - mh);
            }
            est.slope = num / den;
        }
        res.estimates[name] = est;
    }
    return res;
}

std::string ConvergenceResult::str() const {
    std::ostringstream os;
    for (const auto& row : rows) {
        os << "n=" << row.n << " h=" << fmt(row.h);
        for (const auto& [name, e] : row.errors) os << " " << name << "=" << fmt(e);
        os << "\n";
    }
    for (const auto& [name, est] : estimates) {
        os << name << ": ";
        if (est.at_floor) os << "slope=floor";
        else os << "slope=" << fmt(est.slope);
        if (!est.monotone) os << " (non-monotone)";
        os << "\n";
    }
    return os.str();
}

std::string to_csv(const SpinField& f) {
    std::ostringstream os;
    os << "i,j,S1,S2,S3\n";
    char buf[128];
    for (int i = 0; i < f.nx; ++i)
        for (int j = 0; j < f.ny; ++j) {
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", i, j, f.at(i, j, 0),
                          f.at(i, j, 1), f.at(i, j, 2));
            os << buf;
        }
    return os.str();
}

}  // namespace spintower
