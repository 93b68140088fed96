#pragma once
// Finite-difference integrator for the planar spin evolution on the sphere
// (gamma2 = +1) and the upper hyperboloid sheet (gamma2 = -1), plus numeric
// monitors that evaluate jet-symbol expressions on grid data.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "spintower/fieldexpr.hpp"
#include "spintower/params.hpp"

namespace spintower {

struct SimError : std::runtime_error {
    explicit SimError(const std::string& w) : std::runtime_error(w) {}
};

// Periodic grid over [0,2pi) x [0,2pi), three doubles per node, row-major in
// (i, j) with i the x index.
struct SpinField {
    int nx = 0, ny = 0;
    double hx = 0, hy = 0;
    ModelParams params;
    std::vector<double> data;  // 3 * nx * ny

    double& at(int i, int j, int c) {
        return data[static_cast<size_t>((wrap(i, nx) * ny + wrap(j, ny)) * 3 + c)];
    }
    double at(int i, int j, int c) const {
        return data[static_cast<size_t>((wrap(i, nx) * ny + wrap(j, ny)) * 3 + c)];
    }
    static int wrap(int k, int n) {
        k %= n;
        return k < 0 ? k + n : k;
    }
};

struct InitSpec {
    std::string kind = "constant";  // constant | plane_wave | random_smooth
    ModelParams params;
    int nx = 32, ny = 32;
    std::array<double, 3> value{0.0, 0.0, 1.0};  // constant initial vector
    double u0 = 0.8;                             // plane-wave polar angle
    int k1 = 1, k2 = 2;                          // integer wavenumbers
    unsigned long long seed = 1;                 // random_smooth
};

SpinField init_field(const InitSpec& spec);

// Dispersion of the compact plane wave S = (sin u cos phi, sin u sin phi,
// cos u), phi = k1 x + k2 y + omega t: substituting into the evolution law
// gives omega = -(k1^2 + k2^2) cos u.
double dispersion_omega(const InitSpec& spec);
SpinField plane_wave_exact(const InitSpec& spec, double time);
// exact d/dt of the plane wave at every node
std::vector<std::array<double, 3>> plane_wave_time_derivative(const InitSpec& spec, double time);

// Pointwise renormalization onto the constraint manifold; throws SimError off
// the upper sheet in the noncompact case.
void project(SpinField& f);
double constraint_violation(const SpinField& f);  // grid max of |(GS).S - gamma2|

// One RK4 step of S_t = Ginv (S x (S_xx + S_yy)) with the 5-point Laplacian,
// followed by projection. |dt| must satisfy the explicit bound h^2/4.
SpinField step(const SpinField& f, double dt);
SpinField integrate(SpinField f, double dt, int nsteps);

double linf_diff(const SpinField& a, const SpinField& b);

using MonitorSet = std::vector<std::pair<std::string, ScalarExpr>>;

// (GS).S - gamma2 and the three components of the evolution residual
// G_i St_i - (S x (S_xx + S_yy))_i.
MonitorSet builtin_monitors(const ModelParams& p);

struct MonitorStat {
    double max = 0;
    double mean = 0;
};

struct ResidualReport {
    int nx = 0, ny = 0;
    double hx = 0, hy = 0;
    std::map<std::string, MonitorStat> stats;
    std::string str() const;
};

// Evaluates each monitor at every node with centered-difference jets. First
// time derivatives come from `st` when given, otherwise from the scheme's
// right-hand side; S_xt, S_yt are centered differences of that grid. Every
// node is evaluated along two independent summation paths which must agree to
// 1e-12 relative.
ResidualReport measure_residuals(const SpinField& f, const MonitorSet& monitors,
                                 const std::vector<std::array<double, 3>>* st = nullptr);

struct ConvergenceRow {
    int n = 0;
    double h = 0;
    std::map<std::string, double> errors;
};
struct ConvergenceEstimate {
    double slope = 0;
    bool at_floor = false;  // errors at rounding level; slope not meaningful
    bool monotone = true;
};
struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    std::map<std::string, ConvergenceEstimate> estimates;
    std::string str() const;
};

// Integrates `spec` to t_final on each grid and reports per-monitor
// least-squares slopes of log(error) against log(h).
ConvergenceResult convergence_study(const InitSpec& spec, const std::vector<int>& grids,
                                    double t_final = 0.1, double dt_safety = 0.9);

// CSV snapshot: header `i,j,S1,S2,S3`, row-major, LF endings.
std::string to_csv(const SpinField& f);

}  // namespace spintower
