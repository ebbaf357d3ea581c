// Extremum-seeking building blocks: dither oscillators on the unit
// sphere(s), derivative-estimation filters, Newton matrices, control laws,
// and assembly of full closed-loop hybrid systems around a static cost or a
// dynamic plant.
#pragma once

#include <functional>
#include <optional>
#include <span>

#include "hsk/core.hpp"

namespace hsk {

struct Mat {
  int rows = 0, cols = 0;
  Vec data;  // row-major
  double& at(int r, int c) { return data[static_cast<std::size_t>(r * cols + c)]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r * cols + c)]; }
};

struct DitherParams {
  int n = 1;              // number of probed inputs
  double eps_a = 0.01;    // dither amplitude
  double eps_omega = 1.0; // frequency scale; omega_i = kappa_i / eps_omega
  Vec kappa;              // n distinct positive ratios

  void validate() const;
  double omega(int i) const { return kappa[static_cast<std::size_t>(i)] / eps_omega; }
  double max_omega() const;
};

struct FilterParams {
  double k_f = 1.0;
  double eps_f = 0.1;
  double lambda_xi = 1e3;  // radius of the filter-state ball
  void validate() const;
};

enum class FilterStyle { Lowpass, Hybrid, GrowingTimer };

struct LoopConfig {
  double k = 1.0;    // loop gain; < 1 slows the controller against a plant
  double delta = 0.0;
  FilterStyle style = FilterStyle::Lowpass;
  // Optional output weight on the filter input (default 1).
  std::function<double(std::span<const double>)> gamma;
};

Mat phi_matrix(const DitherParams& dither);
Mat extraction_matrix(int n);
Vec oscillator_flow(std::span<const double> mu, const DitherParams& dither);
Vec filter_flow(std::span<const double> xi, double y,
                std::span<const double> mu, const FilterParams& filter,
                const DitherParams& dither);
Vec control_input(std::span<const double> u_hat, std::span<const double> mu,
                  const DitherParams& dither);
// Second-derivative estimation matrix; supported for n = 2 only.
Mat newton_matrix(std::span<const double> mu, const DitherParams& dither);
// Timer-driven dither vector (2/eps_a) * (sin(2 pi kappa_i tau))_i.
Vec growing_timer_dither(double tau, const DitherParams& dither);

// Decision dynamics over the state block x_{u,z} whose first n_inputs
// coordinates are the nominal input u_hat.  The flow receives the current
// derivative estimate (filter state, or the instantaneous timer-dither
// estimate for the growing-timer style).
struct DecisionFragment {
  int dim = 0;
  int n_inputs = 0;
  std::function<void(std::span<const double> xuz, std::span<const double> est,
                     std::span<double> out)> flow;
  Margin flow_set;  // optional; default: everywhere
  Margin jump_set;  // optional; default: empty (no jumps)
  MapFn jump;       // required when jump_set is set
};

// Dynamic plant theta' = P(theta, u) with measured output y = phi(theta, u).
struct PlantFragment {
  int dim = 0;
  std::function<void(std::span<const double> theta, std::span<const double> u,
                     std::span<double> out)> flow;
  std::function<double(std::span<const double> theta,
                       std::span<const double> u)> output;
  double lambda_theta = 1e3;  // radius of the plant-state ball
};

// Layout of an assembled loop's state vector.
struct LoopLayout {
  int dim = 0;
  int xuz_offset = 0, xuz_dim = 0;
  int xi_offset = -1, xi_dim = 0;
  int mu_offset = -1, mu_dim = 0;
  int tau_offset = -1;  // growing-timer style only
  int theta_offset = -1, theta_dim = 0;
};

struct AssembledLoop {
  HybridSystem system;
  LoopLayout layout;
};

// Closed loop around a static cost y = J(u).
AssembledLoop assemble_loop(const DecisionFragment& decision,
                            const std::function<double(std::span<const double>)>& J,
                            const DitherParams& dither,
                            const FilterParams& filter, const LoopConfig& loop);

// Closed loop around a dynamic plant; the controller block is multiplied by
// the loop gain k while the plant flows at its own rate.
AssembledLoop assemble_loop(const DecisionFragment& decision,
                            const PlantFragment& plant,
                            const DitherParams& dither,
                            const FilterParams& filter, const LoopConfig& loop);

}  // namespace hsk
