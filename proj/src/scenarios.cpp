#include "hsk/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "hsk/es_toolkit.hpp"
#include "hsk/set_valued.hpp"
#include "hsk/supervisors.hpp"

namespace hsk {
namespace {

using Params = std::map<std::string, double>;

Params resolve(const ScenarioInfo& info, const Params& overrides) {
    Params out;
    for (const auto& [key, param] : info.params) out[key] = param.value;
    for (const auto& [key, value] : overrides) {
        auto it = out.find(key);
        if (it == out.end())
            throw InvalidOverride("scenario '" + info.name + "' has no parameter '" + key + "'");
        if (!std::isfinite(value))
            throw InvalidOverride("non-finite override for parameter '" + key + "'");
        it->second = value;
    }
    return out;
}

ScenarioParam lit(double v, std::string note = "") {
    return {v, "literature", std::move(note)};
}
ScenarioParam chosen(double v, std::string note = "") {
    return {v, "chosen", std::move(note)};
}
ScenarioParam structural(double v, std::string note = "") {
    return {v, "structural", std::move(note)};
}

double sgn0(double z) { return z > 0.0 ? 1.0 : (z < 0.0 ? -1.0 : 0.0); }

// Rotation generator applied to one oscillator pair: d(a,b)/dt = w*(b, -a).
void rotate_pair(double a, double b, double w, double& da, double& db) {
    da = w * b;
    db = -w * a;
}

// Renormalizes the listed oscillator pairs back to the unit circle.
std::function<void(std::span<double>)> pair_stabilizer(std::vector<int> offsets) {
    return [offsets](std::span<double> x) {
        for (int o : offsets) {
            const double a = x[static_cast<std::size_t>(o)];
            const double b = x[static_cast<std::size_t>(o) + 1];
            const double r2 = a * a + b * b;
            if (r2 > 0.0 && std::abs(r2 - 1.0) > 1e-9) {
                const double inv = 1.0 / std::sqrt(r2);
                x[static_cast<std::size_t>(o)] = a * inv;
                x[static_cast<std::size_t>(o) + 1] = b * inv;
            }
        }
    };
}

MapFn copy_state(int dim) {
    return [dim](std::span<const double> x, std::span<double> out) {
        std::copy(x.begin(), x.begin() + dim, out.begin());
    };
}

BuiltScenario finish(const ScenarioInfo& info, Params p, HybridSystem sys, Vec x0,
                     SolverConfig cfg, std::vector<std::string> names) {
    BuiltScenario built;
    built.system = std::move(sys);
    built.x0 = std::move(x0);
    built.config = cfg;
    built.state_names = std::move(names);
    built.params = std::move(p);
    built.info = info;
    return built;
}

// ---------------------------------------------------------------------------
// periodic_reset: a timer x1 resetting at T while x2 decays and halves.

BuiltScenario build_periodic_reset(const ScenarioInfo& info, const Params& ov) {
    Params p = resolve(info, ov);
    const double T = p.at("T"), g = p.at("gamma");
    HybridSystem sys;
    sys.dim = 2;
    sys.flow_set = [T](std::span<const double> x) { return std::min(x[0], T - x[0]); };
    sys.flow_map = [g](std::span<const double> x, std::span<double> out) {
        out[0] = 1.0;
        out[1] = -g * x[1];
    };
    sys.jump_set = [T](std::span<const double> x) { return -std::abs(x[0] - T); };
    sys.jump_map = [](std::span<const double> x, std::span<double> out) {
        out[0] = 0.0;
        out[1] = x[1] / 2.0;
    };
    SolverConfig cfg;
    cfg.h = 0.01;
    cfg.t_max = 30.0;
    cfg.j_max = 50;
    Vec x0 = {p.at("x1_0"), p.at("x2_0")};
    return finish(info, std::move(p), std::move(sys), std::move(x0), cfg, {"x1", "x2"});
}

// ---------------------------------------------------------------------------
// bouncing_seeker / bouncing_average: a ball under an oscillating (resp.
// averaged) downward force, bouncing with restitution lambda.

HybridSystem bouncing_system(double gbar, double lambda, double omega, bool averaged) {
    HybridSystem sys;
    sys.dim = averaged ? 2 : 3;
    sys.flow_set = [](std::span<const double> x) { return x[0]; };
    if (averaged) {
        sys.flow_map = [gbar](std::span<const double> x, std::span<double> out) {
            out[0] = x[1];
            out[1] = -gbar;
        };
    } else {
        sys.flow_map = [gbar, omega](std::span<const double> x, std::span<double> out) {
            const double s = std::sin(x[2]);
            out[0] = x[1];
            out[1] = -2.0 * gbar * s * s;
            out[2] = omega;
        };
    }
    sys.jump_set = [](std::span<const double> x) { return std::min(-x[0], -x[1]); };
    const int dim = sys.dim;
    sys.jump_map = [lambda, dim](std::span<const double> x, std::span<double> out) {
        out[0] = x[0];
        out[1] = -lambda * x[1];
        if (dim == 3) out[2] = x[2];
    };
    return sys;
}

BuiltScenario build_bouncing_seeker(const ScenarioInfo& info, const Params& ov) {
    Params p = resolve(info, ov);
    const double omega = p.at("omega");
    HybridSystem sys = bouncing_system(p.at("gamma_bar"), p.at("lambda"), omega, false);
    SolverConfig cfg;
    cfg.h = std::min(0.005, 0.3 / omega);
    cfg.t_max = 10.0;
    cfg.j_max = 100;
    Vec x0 = {p.at("x1_0"), p.at("x2_0"), 0.0};
    return finish(info, std::move(p), std::move(sys), std::move(x0), cfg,
                  {"x1", "x2", "tau"});
}

BuiltScenario build_bouncing_seeker_reference(const ScenarioInfo& info, const Params& ov) {
    Params p = resolve(info, ov);
    // Averaged dynamics, padded with the same tau coordinate so arcs share a
    // state dimension with the oscillating system.
    const double gbar = p.at("gamma_bar"), lambda = p.at("lambda"), omega = p.at("omega");
    HybridSystem sys;
    sys.dim = 3;
    sys.flow_set = [](std::span<const double> x) { return x[0]; };
    sys.flow_map = [gbar, omega](std::span<const double> x, std::span<double> out) {
        out[0] = x[1];
        out[1] = -gbar;
        out[2] = omega;
    };
    sys.jump_set = [](std::span<const double> x) { return std::min(-x[0], -x[1]); };
    sys.jump_map = [lambda](std::span<const double> x, std::span<double> out) {
        out[0] = x[0];
        out[1] = -lambda * x[1];
        out[2] = x[2];
    };
    SolverConfig cfg;
    cfg.h = 0.002;
    cfg.t_max = 10.0;
    cfg.j_max = 100;
    Vec x0 = {p.at("x1_0"), p.at("x2_0"), 0.0};
    return finish(info, std::move(p), std::move(sys), std::move(x0), cfg,
                  {"x1", "x2", "tau"});
}

BuiltScenario build_bouncing_average(const ScenarioInfo& info, const Params& ov) {
    Params p = resolve(info, ov);
    HybridSystem sys = bouncing_system(p.at("gamma_bar"), p.at("lambda"), 0.0, true);
    SolverConfig cfg;
    cfg.h = 0.002;
    cfg.t_max = 10.0;
    cfg.j_max = 100;
    Vec x0 = {p.at("x1_0"), p.at("x2_0")};
    return finish(info, std::move(p), std::move(sys), std::move(x0), cfg, {"x1", "x2"});
}

// ---------------------------------------------------------------------------
// source_surveillance: a point-mass vehicle under the oscillator feedback
// law, with the probed potential switching between two bowls whenever a
// slow set-valued timer accumulates enough budget.

BuiltScenario build_source_surveillance(const ScenarioInfo& info, const Params& ov) {
    Params p = resolve(info, ov);
    const double eta_d = p.at("eta_d"), N0 = p.at("N0"), omega = p.at("omega");
    const double eps_a = p.at("eps_a");
    const double c0x = p.at("c0x"), c0y = p.at("c0y"), c1x = p.at("c1x"), c1y = p.at("c1y");
    // State: (p1, p2, mu1, mu2, tau1, q).
    HybridSystem sys;
    sys.dim = 6;
    sys.flow_set = [N0](std::span<const double> x) { return std::min(x[4], N0 - x[4]); };
    sys.flow_map = [=](std::span<const double> x, std::span<double> out) {
        const double cx = x[5] < 0.5 ? c0x : c1x;
        const double cy = x[5] < 0.5 ? c0y : c1y;
        const double dx = x[0] - cx, dy = x[1] - cy;
        const double J = -0.5 * (dx * dx + dy * dy);
        out[0] = eps_a * omega * x[3] + (2.0 / eps_a) * J * x[2];
        out[1] = -eps_a * omega * x[2] + (2.0 / eps_a) * J * x[3];
        rotate_pair(x[2], x[3], omega, out[2], out[3]);
        out[4] = eta_d;
        out[5] = 0.0;
    };
    sys.jump_set = [N0](std::span<const double> x) { return std::min(x[4] - 1.0, N0 - x[4]); };
    sys.jump_map = [](std::span<const double> x, std::span<double> out) {
        out[0] = x[0];
        out[1] = x[1];
        out[2] = x[2];
        out[3] = x[3];
        out[4] = x[4] - 1.0;
        out[5] = 1.0 - x[5];
    };
    sys.stabilize = pair_stabilizer({2});
    SolverConfig cfg;
    cfg.h = std::min(1e-3, 0.3 / omega);
    cfg.t_max = 250.0;
    cfg.j_max = 10;
    cfg.record_stride = 10;
    return finish(info, std::move(p), std::move(sys), {3.0, 3.0, 1.0, 0.0, 0.0, 0.0}, cfg,
                  {"p1", "p2", "mu1", "mu2", "tau1", "q"});
}

// ---------------------------------------------------------------------------
// rps_nash: three-strategy population game played through best-response
// dynamics on the simplex, with per-player payoff filters.

BuiltScenario build_rps_nash(const ScenarioInfo& info, const Params& ov) {
    Params p = resolve(info, ov);
    const double eps_a = p.at("eps_a"), k = p.at("k"), rate = p.at("kf_over_ef");
    const double eps_omega = p.at("eps_omega");
    const double w1 = p.at("kappa1") / eps_omega, w2 = p.at("kappa2") / eps_omega,
                 w3 = p.at("kappa3") / eps_omega;
    const ConvexSetDescription simplex = ConvexSetDescription::simplex(3);
    // State: u_hat(0..2), xi(3..5), mu(6..11).
    HybridSystem sys;
    sys.dim = 12;
    sys.flow_set = [simplex](std::span<const double> x) {
        return simplex.margin(x.first(3)) + 1e-6;
    };
    sys.flow_map = [=](std::span<const double> x, std::span<double> out) {
        const double u1 = x[0] + eps_a * x[6];
        const double u2 = x[1] + eps_a * x[8];
        const double u3 = x[2] + eps_a * x[10];
        // Skew payoff field: each strategy gains against the one it beats and
        // loses to the next, so the mixed point (1/3,1/3,1/3) is the unique
        // Nash equilibrium of the population game.
        const double y[3] = {u1 * (u3 - u2), u2 * (u1 - u3), u3 * (u2 - u1)};
        for (int i = 0; i < 3; ++i) {
            const double mu_i = x[static_cast<std::size_t>(6 + 2 * i)];
            out[static_cast<std::size_t>(3 + i)] =
                -rate * (x[static_cast<std::size_t>(3 + i)] - (2.0 / eps_a) * y[i] * mu_i);
        }
        const Vec br = best_response({x[3], x[4], x[5]});
        for (int i = 0; i < 3; ++i)
            out[static_cast<std::size_t>(i)] = k * (br[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)]);
        rotate_pair(x[6], x[7], w1, out[6], out[7]);
        rotate_pair(x[8], x[9], w2, out[8], out[9]);
        rotate_pair(x[10], x[11], w3, out[10], out[11]);
    };
    sys.jump_set = [](std::span<const double>) { return -1.0; };
    sys.jump_map = copy_state(12);
    sys.stabilize = pair_stabilizer({6, 8, 10});
    SolverConfig cfg;
    cfg.h = std::min(2e-4, 0.3 * eps_omega / p.at("kappa3"));
    cfg.t_max = 400.0;
    cfg.j_max = 4;
    cfg.record_stride = 50;
    Vec x0 = {0.5, 0.3, 0.2, 0, 0, 0, 1, 0, 1, 0, 1, 0};
    return finish(info, std::move(p), std::move(sys), std::move(x0), cfg,
                  {"u_hat1", "u_hat2", "u_hat3", "xi1", "xi2", "xi3", "mu1", "mu2", "mu3",
                   "mu4", "mu5", "mu6"});
}

// ---------------------------------------------------------------------------
// projected_tracking: gradient seeking projected onto the tangent cone of a
// rotated box while the target drifts slowly around a circle.

BuiltScenario build_projected_tracking(const ScenarioInfo& info, const Params& ov) {
    Params p = resolve(info, ov);
    const double eps_a = p.at("eps_a"), k_f = p.at("k_f"), k = p.at("k");
    const double drift = p.at("drift"), bb = p.at("box_b");
    const double eps_omega = p.at("eps_omega");
    const double w1 = p.at("kappa1") / eps_omega, w2 = p.at("kappa2") / eps_omega;
    const ConvexSetDescription box =
        ConvexSetDescription::halfspaces({1, 1, -1, -1, 1, -1, -1, 1}, {bb, bb, bb, bb}, 2);
    // State: u_hat(0,1), xi(2,3), mu(4..7), q_d(8,9).
    HybridSystem sys;
    sys.dim = 10;
    sys.flow_set = [box](std::span<const double> x) { return box.margin(x.first(2)) + 1e-6; };
    sys.flow_map = [=](std::span<const double> x, std::span<double> out) {
        const double u1 = x[0] + eps_a * x[4];
        const double u2 = x[1] + eps_a * x[6];
        const double d1 = u1 - x[8], d2 = u2 - x[9];
        const double y = d1 * d1 + d2 * d2;
        out[2] = -k_f * (x[2] - (2.0 / eps_a) * y * x[4]);
        out[3] = -k_f * (x[3] - (2.0 / eps_a) * y * x[6]);
        const Vec v = {-x[2], -x[3]};
        // Integrator stage points may sit just outside the box; pull them back
        // onto it before asking for the tangent cone.
        Vec pos = {x[0], x[1]};
        const double l1 = std::fabs(pos[0]) + std::fabs(pos[1]);
        if (l1 > bb) {
            pos[0] *= bb / l1;
            pos[1] *= bb / l1;
        }
        // Active-set width must exceed the distance covered in one integrator
        // step or the state can slide past a corner before the neighboring
        // face engages.
        const Vec proj = box.tangent_project(pos, v, 1e-3);
        // Small restoring term cancels the outward creep the tangent
        // projection cannot remove at the boundary's corners.
        out[0] = k * proj[0] + 100.0 * (pos[0] - x[0]);
        out[1] = k * proj[1] + 100.0 * (pos[1] - x[1]);
        rotate_pair(x[4], x[5], w1, out[4], out[5]);
        rotate_pair(x[6], x[7], w2, out[6], out[7]);
        out[8] = drift * x[9];
        out[9] = -drift * x[8];
    };
    sys.jump_set = [](std::span<const double>) { return -1.0; };
    sys.jump_map = copy_state(10);
    sys.stabilize = pair_stabilizer({4, 6});
    SolverConfig cfg;
    cfg.h = 2e-3;
    cfg.t_max = 60.0;
    cfg.j_max = 4;
    Vec x0 = {0, 0, 0, 0, 1, 0, 1, 0, 2, 0};
    return finish(info, std::move(p), std::move(sys), std::move(x0), cfg,
                  {"u_hat1", "u_hat2", "xi1", "xi2", "mu1", "mu2", "mu3", "mu4", "qd1", "qd2"});
}

// ---------------------------------------------------------------------------
// unknown_constraints: sliding-rule seeking against an unmeasured linear
// constraint a'u <= b, with separate filters estimating the cost and
// constraint gradients.

BuiltScenario build_unknown_constraints(const ScenarioInfo& info, const Params& ov) {
    Params p = resolve(info, ov);
    const double a1 = p.at("a1"), a2 = p.at("a2"), b = p.at("b");
    const double eps_a = p.at("eps_a"), k = p.at("k");
    const double rate = p.at("k_f") / p.at("eps_f");
    const double ux = p.at("ux"), uy = p.at("uy");
    const double eps_omega = p.at("eps_omega");
    const double w1 = p.at("kappa1") / eps_omega, w2 = p.at("kappa2") / eps_omega;
    // State: u_hat(0,1), xi_J(2,3), xi_c(4,5), mu(6..9).
    HybridSystem sys;
    sys.dim = 10;
    sys.flow_set = [](std::span<const double>) { return 1.0; };
    sys.flow_map = [=](std::span<const double> x, std::span<double> out) {
        const double u1 = x[0] + eps_a * x[6];
        const double u2 = x[1] + eps_a * x[8];
        const double du1 = u1 - ux, du2 = u2 - uy;
        const double yJ = du1 * du1 + du2 * du2;
        const double yc = a1 * u1 + a2 * u2 - b;
        out[2] = -rate * (x[2] - (2.0 / eps_a) * yJ * x[6]);
        out[3] = -rate * (x[3] - (2.0 / eps_a) * yJ * x[8]);
        out[4] = -rate * (x[4] - (2.0 / eps_a) * yc * x[6]);
        out[5] = -rate * (x[5] - (2.0 / eps_a) * yc * x[8]);
        const double c_val = a1 * x[0] + a2 * x[1] - b;
        const Vec step = sliding_rule(c_val, {x[2], x[3]}, {x[4], x[5]}, k);
        out[0] = step[0];
        out[1] = step[1];
        rotate_pair(x[6], x[7], w1, out[6], out[7]);
        rotate_pair(x[8], x[9], w2, out[8], out[9]);
    };
    sys.jump_set = [](std::span<const double>) { return -1.0; };
    sys.jump_map = copy_state(10);
    sys.stabilize = pair_stabilizer({6, 8});
    SolverConfig cfg;
    cfg.h = 1e-3;
    cfg.t_max = 80.0;
    cfg.j_max = 4;
    Vec x0 = {3, 3, 0, 0, 0, 0, 1, 0, 1, 0};
    return finish(info, std::move(p), std::move(sys), std::move(x0), cfg,
                  {"u_hat1", "u_hat2", "xiJ1", "xiJ2", "xic1", "xic2", "mu1", "mu2", "mu3",
                   "mu4"});
}

// ---------------------------------------------------------------------------
// distributed_sign: five agents with separable quadratic costs coupled only
// through sign-consensus terms over a communication graph that cycles every
// switch_period seconds.

BuiltScenario build_distributed_sign(const ScenarioInfo& info, const Params& ov) {
    Params p = resolve(info, ov);
    const double eps_a = p.at("eps_a"), k = p.at("k"), gamma = p.at("gamma");
    const double alpha = p.at("alpha"), period = p.at("switch_period");
    const double rate = p.at("k_f") / p.at("eps_l");
    const double scale = p.at("omega_scale");
    const double kappa[5] = {5.0 / 6.0, 3.0 / 8.0, 2.0 / 3.0, 4.0 / 5.0, 7.0 / 10.0};
    static const double bt[5][5] = {{1, 2, 3, 4, 5},
                                    {5, 4, 3, 2, 1},
                                    {2, 3, 4, 5, 1},
                                    {3, 4, 5, 1, 2},
                                    {4, 5, 1, 2, 3}};
    // Graph 0: ring by +-1; graph 1: ring by +-2; graph 2: star at agent 0.
    static const std::vector<std::vector<int>> graphs[3] = {
        {{1, 4}, {0, 2}, {1, 3}, {2, 4}, {0, 3}},
        {{2, 3}, {3, 4}, {0, 4}, {0, 1}, {1, 2}},
        {{1, 2, 3, 4}, {0}, {0}, {0}, {0}},
    };
    // State: u_hat(0..24, 5 per agent), xi(25..49), mu(50..59), tau(60), g(61).
    HybridSystem sys;
    sys.dim = 62;
    sys.flow_set = [period](std::span<const double> x) { return period - x[60]; };
    sys.flow_map = [=](std::span<const double> x, std::span<double> out) {
        double dith[5];
        for (int c = 0; c < 5; ++c) dith[c] = x[static_cast<std::size_t>(50 + 2 * c)];
        const int g = static_cast<int>(x[61] + 0.5);
        for (int i = 0; i < 5; ++i) {
            double y = 0.0;
            for (int c = 0; c < 5; ++c) {
                const double u = x[static_cast<std::size_t>(5 * i + c)] + eps_a * dith[c];
                y += 0.5 * u * u - 100.0 * bt[i][c] * u;
            }
            for (int c = 0; c < 5; ++c) {
                const std::size_t xi = static_cast<std::size_t>(25 + 5 * i + c);
                out[xi] = -rate * (x[xi] - (2.0 / eps_a) * y * dith[c]);
                double cons = 0.0;
                for (int j : graphs[g][static_cast<std::size_t>(i)])
                    cons += sgn0(x[static_cast<std::size_t>(5 * j + c)] -
                                 x[static_cast<std::size_t>(5 * i + c)]);
                out[static_cast<std::size_t>(5 * i + c)] = alpha * cons - k * gamma * x[xi];
            }
        }
        for (int c = 0; c < 5; ++c)
            rotate_pair(x[static_cast<std::size_t>(50 + 2 * c)],
                        x[static_cast<std::size_t>(51 + 2 * c)], scale * kappa[c],
                        out[static_cast<std::size_t>(50 + 2 * c)],
                        out[static_cast<std::size_t>(51 + 2 * c)]);
        out[60] = 1.0;
        out[61] = 0.0;
    };
    sys.jump_set = [period](std::span<const double> x) { return x[60] - period; };
    sys.jump_map = [](std::span<const double> x, std::span<double> out) {
        std::copy(x.begin(), x.end(), out.begin());
        out[60] = 0.0;
        out[61] = std::fmod(x[61] + 1.0, 3.0);
    };
    sys.stabilize = pair_stabilizer({50, 52, 54, 56, 58});
    SolverConfig cfg;
    cfg.h = 5e-4;
    cfg.t_max = 5.0;
    cfg.j_max = 80;
    cfg.record_stride = 4;
    Vec x0(62, 0.0);
    for (int i = 0; i < 5; ++i)
        for (int c = 0; c < 5; ++c) x0[static_cast<std::size_t>(5 * i + c)] = 3.0 * i;
    for (int c = 0; c < 5; ++c) x0[static_cast<std::size_t>(50 + 2 * c)] = 1.0;
    std::vector<std::string> names;
    for (int i = 1; i <= 5; ++i)
        for (int c = 1; c <= 5; ++c)
            names.push_back("u" + std::to_string(i) + "_" + std::to_string(c));
    for (int i = 1; i <= 5; ++i)
        for (int c = 1; c <= 5; ++c)
            names.push_back("xi" + std::to_string(i) + "_" + std::to_string(c));
    for (int c = 1; c <= 10; ++c) names.push_back("mu" + std::to_string(c));
    names.push_back("tau_g");
    names.push_back("g");
    return finish(info, std::move(p), std::move(sys), std::move(x0), cfg, std::move(names));
}

// ---------------------------------------------------------------------------
// attack_gradient: gradient seeking whose measurement sign is flipped while
// an attack mode is active; an activation-time monitor budgets how long the
// attack can stay on.

BuiltScenario build_attack_gradient(const ScenarioInfo& info, const Params& ov) {
    Params p = resolve(info, ov);
    const double q11 = p.at("q11"), q12 = p.at("q12"), q22 = p.at("q22");
    const double b1 = p.at("b1"), b2 = p.at("b2");
    const double eps_a = p.at("eps_a");
    const double rate = p.at("k_f") / p.at("eps_f");
    const double eps_omega = p.at("eps_omega");
    const double w1 = p.at("kappa1") / eps_omega, w2 = p.at("kappa2") / eps_omega;
    const double T0 = p.at("T0"), tau_r = p.at("tau_r");
    ActivationParams ap;
    ap.T0 = T0;
    ap.eta2 = p.at("eta2");
    ap.unstable_modes = {1};
    const ActivationMonitor monitor = activation_monitor(ap, Selector::max_rate());
    // State: u_hat(0,1), xi(2,3), mu(4..7), q(8), tau2(9).
    HybridSystem sys;
    sys.dim = 10;
    sys.flow_set = [monitor](std::span<const double> x) { return monitor.flow_margin(x[9]); };
    sys.flow_map = [=](std::span<const double> x, std::span<double> out) {
        const double u1 = x[0] + eps_a * x[4];
        const double u2 = x[1] + eps_a * x[6];
        const bool attack = x[8] > 0.5;
        double y = 0.01 * (q11 * u1 * u1 + 2.0 * q12 * u1 * u2 + q22 * u2 * u2) + b1 * u1 +
                   b2 * u2;
        if (attack) y = -y;
        out[2] = -rate * (x[2] - (2.0 / eps_a) * y * x[4]);
        out[3] = -rate * (x[3] - (2.0 / eps_a) * y * x[6]);
        out[0] = -x[2];
        out[1] = -x[3];
        rotate_pair(x[4], x[5], w1, out[4], out[5]);
        rotate_pair(x[6], x[7], w2, out[6], out[7]);
        out[8] = 0.0;
        out[9] = monitor.rate(x[9], attack);
    };
    sys.jump_set = [tau_r](std::span<const double> x) {
        return x[8] > 0.5 ? -x[9] : x[9] - tau_r;
    };
    sys.jump_map = [](std::span<const double> x, std::span<double> out) {
        std::copy(x.begin(), x.end(), out.begin());
        out[8] = 1.0 - x[8];
    };
    sys.stabilize = pair_stabilizer({4, 6});
    SolverConfig cfg;
    cfg.h = 3e-4;
    cfg.t_max = 800.0;
    cfg.j_max = 2000;
    cfg.record_stride = 20;
    Vec x0 = {1, 1, 0, 0, 1, 0, 1, 0, 1, T0};
    return finish(info, std::move(p), std::move(sys), std::move(x0), cfg,
                  {"u_hat1", "u_hat2", "xi1", "xi2", "mu1", "mu2", "mu3", "mu4", "q", "tau2"});
}

// ---------------------------------------------------------------------------
// obstacle_avoid: two-mode seeking around a diamond obstacle neighborhood,
// switching potentials through the hysteresis partition of the plane.

BuiltScenario build_obstacle_avoid(const ScenarioInfo& info, const Params& ov) {
    Params p = resolve(info, ov);
    const double eps_a = p.at("eps_a"), omega = p.at("omega"), k = p.at("k");
    const double rate = p.at("k_f") / p.at("eps_f");
    const double cJ = p.at("cJ"), y_clamp = p.at("y_clamp");
    const Vec u_star = {p.at("ux"), p.at("uy")};
    const auto J = [cJ, u_star](std::span<const double> q) {
        const double d1 = q[0] - u_star[0], d2 = q[1] - u_star[1];
        return -cJ * (d1 * d1 + d2 * d2);
    };
    const ObstaclePartition part = obstacle_partition(
        {p.at("p0x"), p.at("p0y")}, p.at("rho"), p.at("chi"), p.at("lam"), J, u_star);
    // State: u_hat(0,1), xi(2,3), mu(4,5), q(6).
    HybridSystem sys;
    sys.dim = 7;
    sys.flow_set = [part](std::span<const double> x) {
        return part.flow_margin(x[6] > 1.5 ? 2 : 1, x.first(2));
    };
    sys.flow_map = [=](std::span<const double> x, std::span<double> out) {
        const int q = x[6] > 1.5 ? 2 : 1;
        const double u[2] = {x[0] + eps_a * x[4], x[1] + eps_a * x[5]};
        const double y = std::min(part.J_hat(q, u), y_clamp);
        out[2] = -rate * (x[2] - (2.0 / eps_a) * y * x[4]);
        out[3] = -rate * (x[3] - (2.0 / eps_a) * y * x[5]);
        out[0] = -k * x[2];
        out[1] = -k * x[3];
        rotate_pair(x[4], x[5], omega, out[4], out[5]);
        out[6] = 0.0;
    };
    sys.jump_set = [part](std::span<const double> x) {
        return part.jump_margin(x[6] > 1.5 ? 2 : 1, x.first(2));
    };
    sys.jump_map = [](std::span<const double> x, std::span<double> out) {
        std::copy(x.begin(), x.end(), out.begin());
        out[6] = 3.0 - x[6];
    };
    sys.stabilize = pair_stabilizer({4});
    SolverConfig cfg;
    cfg.h = 5e-4;
    cfg.t_max = 60.0;
    cfg.j_max = 20;
    cfg.record_stride = 4;
    Vec x0 = {0, -3, 0, 0, 1, 0, 2};
    return finish(info, std::move(p), std::move(sys), std::move(x0), cfg,
                  {"u_hat1", "u_hat2", "xi1", "xi2", "mu1", "mu2", "q"});
}

// ---------------------------------------------------------------------------
// momentum_reset: heavy-ball seeking with a growing damping timer that is
// periodically reset, discharging the momentum state.

BuiltScenario build_momentum_reset(const ScenarioInfo& info, const Params& ov) {
    Params p = resolve(info, ov);
    const double rho = p.at("rho"), alpha = p.at("alpha");
    const double T0 = p.at("T0"), T = p.at("T");
    const double c1 = 2.0 + rho, c2 = 4.0 * p.at("k2");
    const double cq = p.at("cq"), u_star = p.at("u_star");
    const double eps_a = p.at("eps_a");
    const double rate = p.at("k_f") / p.at("eps_f");
    const double w = p.at("kappa") / p.at("eps_omega");
    // State: s1(0), s2(1), tau(2), xi(3), mu(4,5).
    HybridSystem sys;
    sys.dim = 6;
    sys.flow_set = [T0, T](std::span<const double> x) {
        return std::min(x[2] - T0, T - x[2]);
    };
    sys.flow_map = [=](std::span<const double> x, std::span<double> out) {
        const double u = x[0] + eps_a * x[4];
        const double y = cq * (u - u_star) * (u - u_star);
        out[3] = -rate * (x[3] - (2.0 / eps_a) * y * x[4]);
        out[0] = x[1];
        out[1] = -(c1 / x[2]) * x[1] - c2 * x[3];
        out[2] = rho;
        rotate_pair(x[4], x[5], w, out[4], out[5]);
    };
    sys.jump_set = [T](std::span<const double> x) { return x[2] - T; };
    sys.jump_map = [alpha, T0](std::span<const double> x, std::span<double> out) {
        std::copy(x.begin(), x.end(), out.begin());
        out[1] = (1.0 - alpha) * x[1];
        out[2] = T0;
    };
    sys.stabilize = pair_stabilizer({4});
    SolverConfig cfg;
    cfg.h = 1e-3;
    cfg.t_max = 50.0;
    cfg.j_max = 20;
    Vec x0 = {p.at("u0"), 0, T0, 0, 1, 0};
    return finish(info, std::move(p), std::move(sys), std::move(x0), cfg,
                  {"s1", "s2", "tau", "xi", "mu1", "mu2"});
}

// ---------------------------------------------------------------------------
// newton_gradient_switch: hysteresis switching between a Newton-like
// estimator (accurate near the optimum, unstable far away) and plain
// gradient seeking.

BuiltScenario build_newton_gradient_switch(const ScenarioInfo& info, const Params& ov) {
    Params p = resolve(info, ov);
    const double p11 = p.at("p11"), p22 = p.at("p22");
    const double eps_a = p.at("eps_a"), eps_f = p.at("eps_f");
    const double rate1 = p.at("k_f") / eps_f, rate2 = p.at("k_h") / eps_f;
    const double k_g = p.at("k_g"), k_n = p.at("k_n");
    const bool newton_only = p.at("newton_only") > 0.5;
    const double eps_omega = p.at("eps_omega");
    DitherParams dither;
    dither.n = 2;
    dither.eps_a = eps_a;
    dither.eps_omega = eps_omega;
    dither.kappa = {p.at("kappa1"), p.at("kappa2")};
    const double w1 = dither.omega(0), w2 = dither.omega(1);
    const auto J = [p11, p22](std::span<const double> u) {
        return 0.5 * (p11 * u[0] * u[0] + p22 * u[1] * u[1]);
    };
    const HysteresisSets hys = hysteresis_sets(J, 0.0, p.at("c0"), p.at("c10"));
    // State: u_hat(0,1), xi1(2,3), xi2(4,5), z(6), mu(7..10).
    HybridSystem sys;
    sys.dim = 11;
    if (newton_only) {
        sys.flow_set = [](std::span<const double>) { return 1.0; };
        sys.jump_set = [](std::span<const double>) { return -1.0; };
    } else {
        sys.flow_set = [hys](std::span<const double> x) {
            return hys.flow_margin(x[6] > 0.5 ? 1 : 0, x.first(2));
        };
        sys.jump_set = [hys](std::span<const double> x) {
            return hys.jump_margin(x[6] > 0.5 ? 1 : 0, x.first(2));
        };
    }
    sys.flow_map = [=](std::span<const double> x, std::span<double> out) {
        const double u[2] = {x[0] + eps_a * x[7], x[1] + eps_a * x[9]};
        const double y = J(u);
        out[2] = -rate1 * (x[2] - (2.0 / eps_a) * y * x[7]);
        out[3] = -rate1 * (x[3] - (2.0 / eps_a) * y * x[9]);
        const bool newton_mode = newton_only || x[6] < 0.5;
        if (newton_mode) {
            // The curvature estimator only runs in the mode that uses it.
            const Mat N = newton_matrix(x.subspan(7, 4), dither);
            const double n1 = N.at(0, 0) * x[4] + N.at(0, 1) * x[5];
            const double n2 = N.at(1, 0) * x[4] + N.at(1, 1) * x[5];
            out[4] = -rate2 * (y * n1 - (2.0 / eps_a) * y * x[7]);
            out[5] = -rate2 * (y * n2 - (2.0 / eps_a) * y * x[9]);
            out[0] = -k_n * x[4];
            out[1] = -k_n * x[5];
        } else {
            out[4] = 0.0;
            out[5] = 0.0;
            out[0] = -k_g * x[2];
            out[1] = -k_g * x[3];
        }
        out[6] = 0.0;
        rotate_pair(x[7], x[8], w1, out[7], out[8]);
        rotate_pair(x[9], x[10], w2, out[9], out[10]);
    };
    sys.jump_map = [](std::span<const double> x, std::span<double> out) {
        std::copy(x.begin(), x.end(), out.begin());
        out[6] = 1.0 - x[6];
    };
    sys.stabilize = pair_stabilizer({7, 9});
    SolverConfig cfg;
    cfg.h = std::min(1e-4, 0.3 * eps_omega / dither.kappa.back());
    cfg.t_max = 40.0;
    cfg.j_max = 20;
    cfg.record_stride = 10;
    Vec x0 = {p.at("u0x"), p.at("u0y"), 0, 0, 0, 0, 0, 1, 0, 1, 0};
    return finish(info, std::move(p), std::move(sys), std::move(x0), cfg,
                  {"u_hat1", "u_hat2", "xi1_1", "xi1_2", "xi2_1", "xi2_2", "z", "mu1", "mu2",
                   "mu3", "mu4"});
}

// ---------------------------------------------------------------------------
// coulomb_plant_loop / switched_plant_loop: seeking through a dynamic plant
// assembled with the toolkit; the controller runs at gain k against the
// plant's own timescale.

BuiltScenario build_coulomb_plant_loop(const ScenarioInfo& info, const Params& ov) {
    Params p = resolve(info, ov);
    const double B = p.at("B"), K = p.at("K"), M = p.at("M");
    const double theta_ref = p.at("theta_ref"), g_u = p.at("g_u");
    DecisionFragment decision;
    decision.dim = 1;
    decision.n_inputs = 1;
    decision.flow = [g_u](std::span<const double>, std::span<const double> est,
                          std::span<double> out) { out[0] = -g_u * est[0]; };
    PlantFragment plant;
    plant.dim = 2;
    plant.lambda_theta = p.at("lambda_theta");
    plant.flow = [B, K, M](std::span<const double> th, std::span<const double> u,
                           std::span<double> out) {
        const double e = th[1] - u[0];
        out[0] = e;
        out[1] = -(B / M) * sgn0(e) - (K / M) * th[0];
    };
    plant.output = [theta_ref](std::span<const double> th, std::span<const double>) {
        const double d = th[1] - theta_ref;
        return d * d;
    };
    DitherParams dither;
    dither.n = 1;
    dither.eps_a = p.at("eps_a");
    dither.eps_omega = p.at("eps_omega");
    dither.kappa = {p.at("kappa")};
    FilterParams filter;
    filter.k_f = p.at("k_f");
    filter.eps_f = p.at("eps_f");
    filter.lambda_xi = p.at("lambda_xi");
    LoopConfig loop;
    loop.k = p.at("k");
    AssembledLoop built = assemble_loop(decision, plant, dither, filter, loop);
    SolverConfig cfg;
    cfg.h = 2e-3;
    cfg.t_max = 600.0;
    cfg.j_max = 4;
    cfg.record_stride = 10;
    Vec x0 = {p.at("u0"), 0, 1, 0, 0, 0};
    return finish(info, std::move(p), std::move(built.system), std::move(x0), cfg,
                  {"u_hat", "xi", "mu1", "mu2", "theta1", "theta2"});
}

BuiltScenario build_switched_plant_loop(const ScenarioInfo& info, const Params& ov) {
    Params p = resolve(info, ov);
    const double alpha = p.at("alpha"), theta_ref = p.at("theta_ref"), g_u = p.at("g_u");
    DecisionFragment decision;
    decision.dim = 1;
    decision.n_inputs = 1;
    decision.flow = [g_u](std::span<const double>, std::span<const double> est,
                          std::span<double> out) { out[0] = -g_u * est[0]; };
    PlantFragment plant;
    plant.dim = 2;
    plant.lambda_theta = p.at("lambda_theta");
    plant.flow = [alpha](std::span<const double> th, std::span<const double> u,
                         std::span<double> out) {
        // Mode matrices A_q = [[-1, 3/2-5q/4], [-9/4+5q/4, -1]], B_q = (1, 9/4-5q/4).
        const double f1[2] = {-th[0] + 0.25 * th[1] + u[0], -th[0] - th[1] + u[0]};
        const double f2[2] = {-th[0] - th[1] + u[0], 0.25 * th[0] - th[1] - 0.25 * u[0]};
        out[0] = alpha * f1[0] + (1.0 - alpha) * f2[0];
        out[1] = alpha * f1[1] + (1.0 - alpha) * f2[1];
    };
    plant.output = [theta_ref](std::span<const double> th, std::span<const double>) {
        const double d = th[0] - theta_ref;
        return d * d;
    };
    DitherParams dither;
    dither.n = 1;
    dither.eps_a = p.at("eps_a");
    dither.eps_omega = p.at("eps_omega");
    dither.kappa = {p.at("kappa")};
    FilterParams filter;
    filter.k_f = p.at("k_f");
    filter.eps_f = p.at("eps_f");
    filter.lambda_xi = p.at("lambda_xi");
    LoopConfig loop;
    loop.k = p.at("k");
    AssembledLoop built = assemble_loop(decision, plant, dither, filter, loop);
    SolverConfig cfg;
    cfg.h = 2e-3;
    cfg.t_max = 400.0;
    cfg.j_max = 4;
    cfg.record_stride = 10;
    Vec x0 = {p.at("u0"), 0, 1, 0, 0, 0};
    return finish(info, std::move(p), std::move(built.system), std::move(x0), cfg,
                  {"u_hat", "xi", "mu1", "mu2", "theta1", "theta2"});
}

// ---------------------------------------------------------------------------
// nash_intermittent: two players seeking a Nash point through stable linear
// plants while a cyclic schedule intermittently freezes each player's
// update.

BuiltScenario build_nash_intermittent(const ScenarioInfo& info, const Params& ov) {
    Params p = resolve(info, ov);
    const double eps_a = p.at("eps_a"), k = p.at("k");
    const double rate = p.at("k_f") / p.at("eps_f");
    const double eps_omega = p.at("eps_omega");
    const double w1 = p.at("kappa1") / eps_omega, w2 = p.at("kappa2") / eps_omega;
    const double dur_on = p.at("dur_on"), dur_off = p.at("dur_off");
    // Schedule m in {0..5}: even m -> both players active (the all-on logic
    // mode); m=1 freezes player 1, m=3 freezes player 2, m=5 freezes both.
    const auto active = [](int m, int player) {
        if (m % 2 == 0) return true;
        if (m == 5) return false;
        return m == 1 ? player == 2 : player == 1;
    };
    const auto duration = [dur_on, dur_off](int m) { return m % 2 == 0 ? dur_on : dur_off; };
    // State: u_hat(0,1), xi(2,3), mu(4..7), theta1(8,9), theta2(10,11),
    // m(12), tau(13).
    HybridSystem sys;
    sys.dim = 14;
    sys.flow_set = [duration](std::span<const double> x) {
        return duration(static_cast<int>(x[12] + 0.5)) - x[13];
    };
    sys.flow_map = [=](std::span<const double> x, std::span<double> out) {
        const double u1 = x[0] + eps_a * x[4];
        const double u2 = x[1] + eps_a * x[6];
        // Stable plant mode from the switched-plant family (q = 1).
        out[8] = -x[8] + 0.25 * x[9] + u1;
        out[9] = -x[8] - x[9] + u1;
        out[10] = -x[10] + 0.25 * x[11] + u2;
        out[11] = -x[10] - x[11] + u2;
        const double ta = x[8], tb = x[10];
        const double y1 = -ta * ta + ta * tb + ta;
        const double y2 = -tb * tb + ta * tb + tb;
        out[2] = -rate * (x[2] - (2.0 / eps_a) * y1 * x[4]);
        out[3] = -rate * (x[3] - (2.0 / eps_a) * y2 * x[6]);
        const int m = static_cast<int>(x[12] + 0.5);
        out[0] = active(m, 1) ? k * x[2] : 0.0;
        out[1] = active(m, 2) ? k * x[3] : 0.0;
        rotate_pair(x[4], x[5], w1, out[4], out[5]);
        rotate_pair(x[6], x[7], w2, out[6], out[7]);
        out[12] = 0.0;
        out[13] = 1.0;
    };
    sys.jump_set = [duration](std::span<const double> x) {
        return x[13] - duration(static_cast<int>(x[12] + 0.5));
    };
    sys.jump_map = [](std::span<const double> x, std::span<double> out) {
        std::copy(x.begin(), x.end(), out.begin());
        out[12] = std::fmod(x[12] + 1.0, 6.0);
        out[13] = 0.0;
    };
    sys.stabilize = pair_stabilizer({4, 6});
    SolverConfig cfg;
    cfg.h = 0.02;
    cfg.t_max = 1500.0;
    cfg.j_max = 600;
    cfg.record_stride = 5;
    Vec x0 = {0.5, 0.5, 0, 0, 1, 0, 1, 0, 0.5, 0, 0.5, 0, 0, 0};
    return finish(info, std::move(p), std::move(sys), std::move(x0), cfg,
                  {"u_hat1", "u_hat2", "xi1", "xi2", "mu1", "mu2", "mu3", "mu4", "theta1_1",
                   "theta1_2", "theta2_1", "theta2_2", "m", "tau_m"});
}

// ---------------------------------------------------------------------------
// growing_timer_es: timer-driven dither with growing phase, compared against
// the plain gradient flow of the same cost.

BuiltScenario build_growing_timer_es(const ScenarioInfo& info, const Params& ov) {
    Params p = resolve(info, ov);
    DecisionFragment decision;
    decision.dim = 1;
    decision.n_inputs = 1;
    decision.flow = [](std::span<const double>, std::span<const double> est,
                       std::span<double> out) { out[0] = -est[0]; };
    const auto J = [](std::span<const double> u) { return u[0] * u[0]; };
    DitherParams dither;
    dither.n = 1;
    dither.eps_a = p.at("eps_a");
    dither.eps_omega = p.at("eps_omega");
    dither.kappa = {p.at("kappa")};
    FilterParams filter;  // unused by the growing-timer style
    LoopConfig loop;
    loop.k = p.at("k");
    loop.style = FilterStyle::GrowingTimer;
    AssembledLoop built = assemble_loop(decision, J, dither, filter, loop);
    SolverConfig cfg;
    cfg.h = std::min(1e-3, 0.05 * dither.eps_omega / dither.kappa[0]);
    cfg.t_max = 3.0;
    cfg.j_max = 4;
    Vec x0 = {p.at("u0"), 0.0};
    return finish(info, std::move(p), std::move(built.system), std::move(x0), cfg,
                  {"u_hat", "tau"});
}

BuiltScenario build_growing_timer_reference(const ScenarioInfo& info, const Params& ov) {
    Params p = resolve(info, ov);
    // Plain gradient flow of J(u) = u^2, padded with an inert second
    // coordinate so arcs share a dimension with the seeking loop.
    HybridSystem sys;
    sys.dim = 2;
    sys.flow_set = [](std::span<const double>) { return 1.0; };
    sys.flow_map = [](std::span<const double> x, std::span<double> out) {
        out[0] = -2.0 * x[0];
        out[1] = 0.0;
    };
    sys.jump_set = [](std::span<const double>) { return -1.0; };
    sys.jump_map = copy_state(2);
    SolverConfig cfg;
    cfg.h = 1e-3;
    cfg.t_max = 3.0;
    cfg.j_max = 4;
    Vec x0 = {p.at("u0"), 0.0};
    return finish(info, std::move(p), std::move(sys), std::move(x0), cfg, {"u_hat", "tau"});
}

// ---------------------------------------------------------------------------
// Registry.

struct Entry {
    ScenarioInfo info;
    std::function<BuiltScenario(const ScenarioInfo&, const Params&)> build;
    std::function<BuiltScenario(const ScenarioInfo&, const Params&)> reference;
    std::vector<int> mask;
};

std::vector<Entry> make_registry() {
    std::vector<Entry> reg;

    {
        ScenarioInfo info;
        info.name = "periodic_reset";
        info.anchor = "timer with periodic resets";
        info.description = "Sawtooth timer x1 on [0,T]; x2 decays along flows and halves at "
                           "each reset.";
        info.params = {{"T", lit(10.0)},
                       {"gamma", lit(0.1)},
                       {"x1_0", chosen(0.0)},
                       {"x2_0", chosen(10.0)}};
        reg.push_back({info, build_periodic_reset, nullptr, {}});
    }
    {
        ScenarioInfo info;
        info.name = "bouncing_seeker";
        info.anchor = "bouncing ball under oscillating forcing";
        info.description = "Ball with restitution lambda driven by -2*gamma_bar*sin(tau)^2, "
                           "tau' = omega; averages to constant gravity.";
        info.params = {{"gamma_bar", lit(10.0)},
                       {"omega", lit(100.0)},
                       {"lambda", chosen(0.8, "restitution unspecified in the source")},
                       {"x1_0", chosen(10.0)},
                       {"x2_0", chosen(0.0)}};
        info.has_reference = true;
        reg.push_back({info, build_bouncing_seeker, build_bouncing_seeker_reference, {0, 1}});
    }
    {
        ScenarioInfo info;
        info.name = "bouncing_average";
        info.anchor = "averaged bouncing ball";
        info.description = "Ball under constant gravity gamma_bar with restitution lambda; "
                           "impact times form a geometric sequence.";
        info.params = {{"gamma_bar", lit(10.0)},
                       {"lambda", chosen(0.8)},
                       {"x1_0", chosen(10.0)},
                       {"x2_0", chosen(0.0)}};
        reg.push_back({info, build_bouncing_average, nullptr, {}});
    }
    {
        ScenarioInfo info;
        info.name = "source_surveillance";
        info.anchor = "vehicle surveillance between switching sources";
        info.description = "Point-mass vehicle under the oscillator seeking law; a slow "
                           "set-valued timer switches the probed potential between two "
                           "bowls.";
        info.params = {{"eta_d", lit(0.01)},   {"N0", lit(1.0)},
                       {"omega", lit(1000.0)}, {"eps_a", chosen(0.2)},
                       {"c0x", chosen(2.0)},   {"c0y", chosen(0.0)},
                       {"c1x", chosen(-2.0)},  {"c1y", chosen(0.0)}};
        reg.push_back({info, build_source_surveillance, nullptr, {}});
    }
    {
        ScenarioInfo info;
        info.name = "rps_nash";
        info.anchor = "rock-paper-scissors Nash seeking";
        info.description = "Best-response dynamics on the simplex with per-player payoff "
                           "filters; converges near the mixed equilibrium (1/3,1/3,1/3).";
        info.params = {{"eps_a", lit(0.01)},
                       {"k", lit(0.005)},
                       {"kf_over_ef", lit(10.0)},
                       {"kappa1", lit(1.85)},
                       {"kappa2", lit(2.0)},
                       {"kappa3", lit(2.53)},
                       {"eps_omega", chosen(2e-3, "desk-scale frequency; source uses 1e-5")}};
        reg.push_back({info, build_rps_nash, nullptr, {}});
    }
    {
        ScenarioInfo info;
        info.name = "projected_tracking";
        info.anchor = "projected seeking on a rotated box";
        info.description = "Gradient seeking projected on the tangent cone of a 45-degree "
                           "rotated box while the target drifts on a circle of radius 2.";
        info.params = {{"eps_a", lit(0.01)}, {"kappa1", lit(1.0)},
                       {"kappa2", lit(1.5)}, {"eps_omega", structural(0.01)},
                       {"k_f", lit(1.0)},    {"k", lit(0.2)},
                       {"drift", lit(0.001)}, {"box_b", chosen(1.0)}};
        reg.push_back({info, build_projected_tracking, nullptr, {}});
    }
    {
        ScenarioInfo info;
        info.name = "unknown_constraints";
        info.anchor = "sliding rule against an unmeasured constraint";
        info.description = "Seeking with a switching rule across a'u = b: descend the cost "
                           "inside, descend the constraint outside, blend on the surface.";
        info.params = {{"a1", lit(-1.0)},    {"a2", lit(-2.0)},
                       {"b", lit(2.0)},      {"eps_a", lit(0.01)},
                       {"kappa1", lit(1.0)}, {"kappa2", lit(2.5)},
                       {"eps_omega", structural(0.01)}, {"k_f", lit(1.0)},
                       {"eps_f", chosen(0.1)}, {"k", lit(0.1)},
                       {"ux", chosen(-2.0, "unconstrained minimizer")},
                       {"uy", chosen(-2.0)}};
        reg.push_back({info, build_unknown_constraints, nullptr, {}});
    }
    {
        ScenarioInfo info;
        info.name = "distributed_sign";
        info.anchor = "sign-consensus seeking over switching graphs";
        info.description = "Five agents with separable quadratic costs coupled through "
                           "Krasovskii sign consensus; the graph cycles every 0.1 s.";
        info.params = {{"eps_a", lit(0.8)},  {"k", lit(0.05)},
                       {"k_f", lit(0.1)},    {"eps_l", lit(0.1)},
                       {"omega_scale", lit(500.0)}, {"alpha", lit(15.0)},
                       {"gamma", lit(0.1)},  {"switch_period", lit(0.1)}};
        reg.push_back({info, build_distributed_sign, nullptr, {}});
    }
    {
        ScenarioInfo info;
        info.name = "attack_gradient";
        info.anchor = "seeking under intermittent measurement attacks";
        info.description = "Quadratic seeking whose measurement sign flips while an attack "
                           "mode is on; an activation monitor limits attack time to rate "
                           "eta2.";
        info.params = {{"q11", lit(1.0)},   {"q12", lit(0.5)},  {"q22", lit(1.5)},
                       {"b1", lit(0.1)},    {"b2", lit(0.1)},   {"eps_a", lit(0.1)},
                       {"eps_f", lit(1.0)}, {"k_f", structural(1.0)},
                       {"kappa1", lit(8.1)}, {"kappa2", lit(4.2)},
                       {"eps_omega", structural(0.01)},
                       {"eta2", lit(0.05, "sweepable attack-rate budget")},
                       {"T0", chosen(50.0)}, {"tau_r", chosen(0.5)}};
        reg.push_back({info, build_attack_gradient, nullptr, {}});
    }
    {
        ScenarioInfo info;
        info.name = "obstacle_avoid";
        info.anchor = "two-mode seeking around a planar obstacle";
        info.description = "Hysteresis switching between half-plane potentials with "
                           "reciprocal barriers around an inflated diamond obstacle.";
        info.params = {{"p0x", chosen(0.0)}, {"p0y", chosen(0.0)},
                       {"rho", chosen(0.5)}, {"chi", chosen(2.0)},
                       {"lam", chosen(0.5)}, {"ux", chosen(4.0)},
                       {"uy", chosen(2.0)},  {"cJ", chosen(2.0)},
                       {"eps_a", chosen(0.01)}, {"omega", chosen(500.0)},
                       {"k", chosen(0.1)},   {"k_f", chosen(1.0)},
                       {"eps_f", chosen(0.1)}, {"y_clamp", structural(1e4)}};
        reg.push_back({info, build_obstacle_avoid, nullptr, {}});
    }
    {
        ScenarioInfo info;
        info.name = "momentum_reset";
        info.anchor = "seeking with momentum and timer resets";
        info.description = "Heavy-ball seeking with damping 1/tau; when the growing timer "
                           "hits T it resets to T0 and discharges the momentum state.";
        info.params = {{"rho", lit(0.5)},
                       {"alpha", chosen(1.0, "reset the momentum state at jumps")},
                       {"T0", chosen(1.0)},  {"T", chosen(5.0)},
                       {"k2", chosen(1.0)},  {"cq", chosen(0.05)},
                       {"u_star", chosen(3.0)}, {"u0", chosen(0.0)},
                       {"eps_a", chosen(0.05)}, {"kappa", structural(1.0)},
                       {"eps_omega", chosen(0.01)}, {"k_f", chosen(1.0)},
                       {"eps_f", chosen(0.05)}};
        reg.push_back({info, build_momentum_reset, nullptr, {}});
    }
    {
        ScenarioInfo info;
        info.name = "newton_gradient_switch";
        info.anchor = "hysteresis switching between Newton and gradient seeking";
        info.description = "Newton-like estimator used near the optimum, gradient seeking "
                           "far away, switched through a hysteresis band (c10, c0).";
        info.params = {{"p11", chosen(2.0)}, {"p22", chosen(4.0)},
                       {"c0", chosen(2.0)},  {"c10", chosen(0.5)},
                       {"eps_a", chosen(0.1)}, {"kappa1", chosen(1.0)},
                       {"kappa2", chosen(1.4)}, {"eps_omega", chosen(1e-3)},
                       {"k_f", chosen(1.0)}, {"eps_f", chosen(0.1)},
                       {"k_h", chosen(0.1)}, {"k_g", chosen(0.2)},
                       {"k_n", chosen(0.5)}, {"u0x", chosen(3.0)},
                       {"u0y", chosen(3.0)},
                       {"newton_only", structural(0.0, "disable switching for comparison")}};
        reg.push_back({info, build_newton_gradient_switch, nullptr, {}});
    }
    {
        ScenarioInfo info;
        info.name = "coulomb_plant_loop";
        info.anchor = "seeking through a Coulomb-friction oscillator";
        info.description = "Dynamic plant theta1' = theta2 - u, theta2' = -sgn(theta2-u) - "
                           "theta1; the output depends on theta2 only and the loop seeks "
                           "u* = theta_ref.";
        info.params = {{"B", chosen(1.0)}, {"K", chosen(1.0)}, {"M", chosen(1.0)},
                       {"theta_ref", chosen(0.5)}, {"k", chosen(0.05)},
                       {"eps_a", chosen(0.1)}, {"kappa", structural(1.0)},
                       {"eps_omega", chosen(1.0)}, {"k_f", chosen(1.0)},
                       {"eps_f", chosen(2.0)}, {"g_u", chosen(0.1)},
                       {"lambda_xi", structural(1e3)}, {"lambda_theta", structural(1e3)},
                       {"u0", chosen(2.0)}};
        reg.push_back({info, build_coulomb_plant_loop, nullptr, {}});
    }
    {
        ScenarioInfo info;
        info.name = "switched_plant_loop";
        info.anchor = "seeking through a fast-switching plant";
        info.description = "Plant modeled as a convex combination of two linear modes; any "
                           "combination settles at theta = (u, 0), so the loop seeks "
                           "u* = theta_ref.";
        info.params = {{"alpha", chosen(0.5, "mode mixing weight")},
                       {"theta_ref", chosen(1.0)}, {"k", chosen(0.05)},
                       {"eps_a", chosen(0.1)}, {"kappa", structural(1.0)},
                       {"eps_omega", chosen(1.0)}, {"k_f", chosen(1.0)},
                       {"eps_f", chosen(2.0)}, {"g_u", chosen(0.1)},
                       {"lambda_xi", structural(1e3)}, {"lambda_theta", structural(1e3)},
                       {"u0", chosen(2.0)}};
        reg.push_back({info, build_switched_plant_loop, nullptr, {}});
    }
    {
        ScenarioInfo info;
        info.name = "nash_intermittent";
        info.anchor = "two-player Nash seeking with intermittent activity";
        info.description = "Quadratic game with interior Nash point (1,1) played through "
                           "stable linear plants; a cyclic schedule freezes players "
                           "intermittently (all-on mode is logic mode 1).";
        info.params = {{"k", chosen(0.005)}, {"eps_a", chosen(0.1)},
                       {"kappa1", chosen(2.0)}, {"kappa2", chosen(3.0)},
                       {"eps_omega", chosen(10.0)}, {"k_f", chosen(1.0)},
                       {"eps_f", chosen(20.0)}, {"dur_on", chosen(5.0)},
                       {"dur_off", chosen(1.0)}};
        reg.push_back({info, build_nash_intermittent, nullptr, {}});
    }
    {
        ScenarioInfo info;
        info.name = "growing_timer_es";
        info.anchor = "timer-driven dither with growing phase";
        info.description = "Scalar seeking with u = u_hat + (eps_a^2/2) * timer dither; "
                           "compared against the plain gradient flow of J(u) = u^2.";
        info.params = {{"eps_a", chosen(0.1)},
                       {"kappa", structural(1.0)},
                       {"eps_omega", chosen(0.01, "sweepable frequency scale")},
                       {"k", structural(1.0)},
                       {"u0", chosen(2.0)}};
        info.has_reference = true;
        reg.push_back({info, build_growing_timer_es, build_growing_timer_reference, {0}});
    }
    return reg;
}

const std::vector<Entry>& registry() {
    static const std::vector<Entry> reg = make_registry();
    return reg;
}

const Entry& find_entry(const std::string& name) {
    for (const Entry& e : registry())
        if (e.info.name == name) return e;
    throw UnknownScenario("unknown scenario '" + name + "'");
}

}  // namespace

std::vector<ScenarioInfo> list_scenarios() {
    std::vector<ScenarioInfo> out;
    for (const Entry& e : registry()) out.push_back(e.info);
    return out;
}

BuiltScenario build_scenario(const std::string& name,
                             const std::map<std::string, double>& overrides) {
    const Entry& e = find_entry(name);
    return e.build(e.info, overrides);
}

BuiltScenario build_reference(const std::string& name,
                              const std::map<std::string, double>& overrides) {
    const Entry& e = find_entry(name);
    if (!e.reference)
        throw NoCounterpart("scenario '" + name + "' has no reference counterpart");
    return e.reference(e.info, overrides);
}

HybridArc reference_arc(const std::string& name,
                        const std::map<std::string, double>& overrides) {
    BuiltScenario ref = build_reference(name, overrides);
    return simulate(ref.system, ref.x0, ref.config).arc;
}

std::vector<int> reference_mask(const std::string& name) {
    const Entry& e = find_entry(name);
    if (!e.reference)
        throw NoCounterpart("scenario '" + name + "' has no reference counterpart");
    return e.mask;
}

}  // namespace hsk
