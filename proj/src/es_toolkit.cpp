#include "hsk/es_toolkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

namespace hsk {

void DitherParams::validate() const {
  if (n < 1) throw std::invalid_argument("DitherParams: n must be >= 1");
  if (!(eps_a > 0.0)) throw std::invalid_argument("DitherParams: eps_a must be positive");
  if (!(eps_omega > 0.0)) throw std::invalid_argument("DitherParams: eps_omega must be positive");
  if (kappa.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("DitherParams: need n kappa values");
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    if (!(kappa[i] > 0.0)) throw std::invalid_argument("DitherParams: kappa must be positive");
    for (std::size_t k = i + 1; k < kappa.size(); ++k) {
      if (kappa[i] == kappa[k]) throw std::invalid_argument("DitherParams: kappa values must be distinct");
    }
  }
}

double DitherParams::max_omega() const {
  double m = 0.0;
  for (int i = 0; i < n; ++i) m = std::max(m, omega(i));
  return m;
}

void FilterParams::validate() const {
  if (!(k_f > 0.0) || !(eps_f > 0.0) || !(lambda_xi > 0.0)) {
    throw std::invalid_argument("FilterParams: k_f, eps_f, lambda_xi must be positive");
  }
}

Mat phi_matrix(const DitherParams& dither) {
  dither.validate();
  const int m = 2 * dither.n;
  Mat out{m, m, Vec(static_cast<std::size_t>(m * m), 0.0)};
  for (int i = 0; i < dither.n; ++i) {
    const double w = dither.omega(i);
    out.at(2 * i, 2 * i + 1) = w;
    out.at(2 * i + 1, 2 * i) = -w;
  }
  return out;
}

Mat extraction_matrix(int n) {
  if (n < 1) throw std::invalid_argument("extraction_matrix: n must be >= 1");
  Mat out{n, 2 * n, Vec(static_cast<std::size_t>(2 * n * n), 0.0)};
  for (int i = 0; i < n; ++i) out.at(i, 2 * i) = 1.0;
  return out;
}

Vec oscillator_flow(std::span<const double> mu, const DitherParams& dither) {
  if (mu.size() != static_cast<std::size_t>(2 * dither.n)) {
    throw std::invalid_argument("oscillator_flow: mu must have size 2n");
  }
  Vec out(mu.size());
  for (int i = 0; i < dither.n; ++i) {
    const double w = dither.omega(i);
    out[static_cast<std::size_t>(2 * i)] = w * mu[static_cast<std::size_t>(2 * i + 1)];
    out[static_cast<std::size_t>(2 * i + 1)] = -w * mu[static_cast<std::size_t>(2 * i)];
  }
  return out;
}

Vec filter_flow(std::span<const double> xi, double y,
                std::span<const double> mu, const FilterParams& filter,
                const DitherParams& dither) {
  if (xi.size() != static_cast<std::size_t>(dither.n) ||
      mu.size() != static_cast<std::size_t>(2 * dither.n)) {
    throw std::invalid_argument("filter_flow: dimension mismatch");
  }
  Vec out(xi.size());
  const double rate = filter.k_f / filter.eps_f;
  const double scale = 2.0 / dither.eps_a;
  for (int i = 0; i < dither.n; ++i) {
    out[static_cast<std::size_t>(i)] =
        -rate * (xi[static_cast<std::size_t>(i)] - scale * y * mu[static_cast<std::size_t>(2 * i)]);
  }
  return out;
}

Vec control_input(std::span<const double> u_hat, std::span<const double> mu,
                  const DitherParams& dither) {
  if (u_hat.size() != static_cast<std::size_t>(dither.n) ||
      mu.size() != static_cast<std::size_t>(2 * dither.n)) {
    throw std::invalid_argument("control_input: dimension mismatch");
  }
  Vec out(u_hat.begin(), u_hat.end());
  for (int i = 0; i < dither.n; ++i) {
    out[static_cast<std::size_t>(i)] += dither.eps_a * mu[static_cast<std::size_t>(2 * i)];
  }
  return out;
}

Mat newton_matrix(std::span<const double> mu, const DitherParams& dither) {
  if (dither.n != 2) throw std::invalid_argument("newton_matrix: supported for n = 2 only");
  if (mu.size() != 4) throw std::invalid_argument("newton_matrix: mu must have size 4");
  const double ea2 = dither.eps_a * dither.eps_a;
  const double m1 = mu[0], m3 = mu[2];
  Mat out{2, 2, Vec(4)};
  out.at(0, 0) = 16.0 / ea2 * (m1 * m1 - 0.5);
  out.at(1, 1) = 16.0 / ea2 * (m3 * m3 - 0.5);
  out.at(0, 1) = out.at(1, 0) = 4.0 / ea2 * m1 * m3;
  return out;
}

Vec growing_timer_dither(double tau, const DitherParams& dither) {
  Vec out(static_cast<std::size_t>(dither.n));
  const double scale = 2.0 / dither.eps_a;
  for (int i = 0; i < dither.n; ++i) {
    out[static_cast<std::size_t>(i)] =
        scale * std::sin(2.0 * std::numbers::pi * dither.kappa[static_cast<std::size_t>(i)] * tau);
  }
  return out;
}

namespace {

struct Scratch {
  Vec u, est;
};

AssembledLoop assemble_impl(
    const DecisionFragment& decision,
    const std::function<double(std::span<const double>)>* static_cost,
    const PlantFragment* plant, const DitherParams& dither,
    const FilterParams& filter, const LoopConfig& loop) {
  dither.validate();
  filter.validate();
  if (decision.dim < 1 || decision.n_inputs < 1 || decision.n_inputs > decision.dim) {
    throw std::invalid_argument("assemble_loop: bad decision dimensions");
  }
  if (decision.n_inputs != dither.n) {
    throw std::invalid_argument("assemble_loop: dither dimension must match decision inputs");
  }
  if (!decision.flow) throw std::invalid_argument("assemble_loop: decision flow required");
  if (decision.jump_set && !decision.jump) {
    throw std::invalid_argument("assemble_loop: jump map required with a jump set");
  }
  if (plant != nullptr && (!plant->flow || !plant->output || plant->dim < 1)) {
    throw std::invalid_argument("assemble_loop: incomplete plant fragment");
  }

  const int n = dither.n;
  const bool timer_style = loop.style == FilterStyle::GrowingTimer;
  LoopLayout L;
  L.xuz_offset = 0;
  L.xuz_dim = decision.dim;
  int off = decision.dim;
  if (timer_style) {
    L.tau_offset = off++;
  } else {
    L.xi_offset = off;
    L.xi_dim = n;
    off += n;
    L.mu_offset = off;
    L.mu_dim = 2 * n;
    off += 2 * n;
  }
  if (plant != nullptr) {
    L.theta_offset = off;
    L.theta_dim = plant->dim;
    off += plant->dim;
  }
  L.dim = off;

  const double k = loop.k;
  const double eps_a = dither.eps_a;
  const double filt_rate =
      loop.style == FilterStyle::Hybrid ? filter.k_f : filter.k_f / filter.eps_f;
  const double lambda_xi = filter.lambda_xi;
  const double lambda_theta = plant != nullptr ? plant->lambda_theta : 0.0;
  const bool has_plant = plant != nullptr;
  const double sphere_tol = 1e-6;

  auto scratch = std::make_shared<Scratch>();
  scratch->u.resize(static_cast<std::size_t>(n));
  scratch->est.resize(static_cast<std::size_t>(n));

  HybridSystem sys;
  sys.dim = L.dim;

  Vec omegas(static_cast<std::size_t>(n));
  Vec kappas = dither.kappa;
  for (int i = 0; i < n; ++i) omegas[static_cast<std::size_t>(i)] = dither.omega(i);
  const double inv_eps_omega = 1.0 / dither.eps_omega;

  const auto gamma = loop.gamma;
  std::function<double(std::span<const double>)> J;
  if (static_cost != nullptr) J = *static_cost;

  sys.flow_map = [=, dflow = decision.flow,
                  pflow = plant != nullptr ? plant->flow : nullptr,
                  pout = plant != nullptr ? plant->output : nullptr](
                     std::span<const double> x, std::span<double> out) {
    Vec& u = scratch->u;
    Vec& est = scratch->est;
    const auto xuz = x.subspan(0, static_cast<std::size_t>(L.xuz_dim));
    if (timer_style) {
      const double tau = x[static_cast<std::size_t>(L.tau_offset)];
      for (int i = 0; i < n; ++i) {
        est[static_cast<std::size_t>(i)] =
            2.0 / eps_a *
            std::sin(2.0 * std::numbers::pi * kappas[static_cast<std::size_t>(i)] * tau);
      }
      for (int i = 0; i < n; ++i) {
        u[static_cast<std::size_t>(i)] =
            x[static_cast<std::size_t>(i)] + 0.5 * eps_a * eps_a * est[static_cast<std::size_t>(i)];
      }
      const double y = pout ? pout(x.subspan(static_cast<std::size_t>(L.theta_offset),
                                             static_cast<std::size_t>(L.theta_dim)), u)
                            : J(u);
      for (double& e : est) e *= y;
      dflow(xuz, est, out.subspan(0, static_cast<std::size_t>(L.xuz_dim)));
      for (int i = 0; i < L.xuz_dim; ++i) out[static_cast<std::size_t>(i)] *= k;
      out[static_cast<std::size_t>(L.tau_offset)] = k * inv_eps_omega;
    } else {
      const auto xi = x.subspan(static_cast<std::size_t>(L.xi_offset), static_cast<std::size_t>(n));
      const auto mu = x.subspan(static_cast<std::size_t>(L.mu_offset), static_cast<std::size_t>(2 * n));
      for (int i = 0; i < n; ++i) {
        u[static_cast<std::size_t>(i)] =
            x[static_cast<std::size_t>(i)] + eps_a * mu[static_cast<std::size_t>(2 * i)];
      }
      const double y = pout ? pout(x.subspan(static_cast<std::size_t>(L.theta_offset),
                                             static_cast<std::size_t>(L.theta_dim)), u)
                            : J(u);
      dflow(xuz, xi, out.subspan(0, static_cast<std::size_t>(L.xuz_dim)));
      for (int i = 0; i < L.xuz_dim; ++i) out[static_cast<std::size_t>(i)] *= k;
      const double g = gamma ? gamma(xuz) : 1.0;
      const double drive = 2.0 / eps_a * g * y;
      for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(L.xi_offset + i)] =
            -k * filt_rate * (xi[static_cast<std::size_t>(i)] - drive * mu[static_cast<std::size_t>(2 * i)]);
      }
      for (int i = 0; i < n; ++i) {
        const double w = omegas[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(L.mu_offset + 2 * i)] = k * w * mu[static_cast<std::size_t>(2 * i + 1)];
        out[static_cast<std::size_t>(L.mu_offset + 2 * i + 1)] = -k * w * mu[static_cast<std::size_t>(2 * i)];
      }
    }
    if (pflow) {
      pflow(x.subspan(static_cast<std::size_t>(L.theta_offset), static_cast<std::size_t>(L.theta_dim)),
            u, out.subspan(static_cast<std::size_t>(L.theta_offset), static_cast<std::size_t>(L.theta_dim)));
    }
  };

  sys.flow_set = [=, dset = decision.flow_set](std::span<const double> x) {
    double m = std::numeric_limits<double>::infinity();
    if (dset) m = dset(x.subspan(0, static_cast<std::size_t>(L.xuz_dim)));
    if (!timer_style) {
      double xi2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const double v = x[static_cast<std::size_t>(L.xi_offset + i)];
        xi2 += v * v;
      }
      m = std::min(m, lambda_xi - std::sqrt(xi2));
      double drift = 0.0;
      for (int i = 0; i < n; ++i) {
        const double a = x[static_cast<std::size_t>(L.mu_offset + 2 * i)];
        const double b = x[static_cast<std::size_t>(L.mu_offset + 2 * i + 1)];
        drift = std::max(drift, std::fabs(a * a + b * b - 1.0));
      }
      m = std::min(m, sphere_tol - drift);
    }
    if (has_plant) {
      double th2 = 0.0;
      for (int i = 0; i < L.theta_dim; ++i) {
        const double v = x[static_cast<std::size_t>(L.theta_offset + i)];
        th2 += v * v;
      }
      m = std::min(m, lambda_theta - std::sqrt(th2));
    }
    return m;
  };

  if (decision.jump_set) {
    sys.jump_set = [=, dset = decision.jump_set](std::span<const double> x) {
      return dset(x.subspan(0, static_cast<std::size_t>(L.xuz_dim)));
    };
    sys.jump_map = [=, djump = decision.jump](std::span<const double> x, std::span<double> out) {
      std::copy(x.begin(), x.end(), out.begin());
      djump(x.subspan(0, static_cast<std::size_t>(L.xuz_dim)),
            out.subspan(0, static_cast<std::size_t>(L.xuz_dim)));
    };
  } else {
    sys.jump_set = [](std::span<const double>) { return -1.0; };
    sys.jump_map = [](std::span<const double> x, std::span<double> out) {
      std::copy(x.begin(), x.end(), out.begin());
    };
  }

  if (!timer_style) {
    sys.stabilize = [=](std::span<double> x) {
      for (int i = 0; i < n; ++i) {
        double& a = x[static_cast<std::size_t>(L.mu_offset + 2 * i)];
        double& b = x[static_cast<std::size_t>(L.mu_offset + 2 * i + 1)];
        const double r2 = a * a + b * b;
        if (std::fabs(r2 - 1.0) > 1e-9 && r2 > 0.0) {
          const double inv = 1.0 / std::sqrt(r2);
          a *= inv;
          b *= inv;
        }
      }
    };
  }

  return {std::move(sys), L};
}

}  // namespace

AssembledLoop assemble_loop(const DecisionFragment& decision,
                            const std::function<double(std::span<const double>)>& J,
                            const DitherParams& dither,
                            const FilterParams& filter, const LoopConfig& loop) {
  if (!J) throw std::invalid_argument("assemble_loop: static cost required");
  return assemble_impl(decision, &J, nullptr, dither, filter, loop);
}

AssembledLoop assemble_loop(const DecisionFragment& decision,
                            const PlantFragment& plant,
                            const DitherParams& dither,
                            const FilterParams& filter, const LoopConfig& loop) {
  return assemble_impl(decision, nullptr, &plant, dither, filter, loop);
}

}  // namespace hsk
