#include "hsk/core.hpp"

#include <algorithm>
#include <cmath>

namespace hsk {

void HybridArc::start_interval(int j, double t, std::span<const double> x) {
  Interval iv;
  iv.j = j;
  intervals_.push_back(std::move(iv));
  push_sample(t, x);
}

void HybridArc::push_sample(double t, std::span<const double> x) {
  Interval& iv = intervals_.back();
  iv.t.push_back(t);
  iv.x.insert(iv.x.end(), x.begin(), x.end());
}

HybridTimeDomain HybridArc::domain() const {
  HybridTimeDomain dom;
  dom.reserve(intervals_.size());
  for (const Interval& iv : intervals_) {
    dom.push_back({iv.t.front(), iv.t.back(), iv.j});
  }
  return dom;
}

std::size_t HybridArc::sample_count() const {
  std::size_t n = 0;
  for (const Interval& iv : intervals_) n += iv.t.size();
  return n;
}

Vec HybridArc::pre_jump_state(int k) const {
  const Interval& iv = intervals_.at(static_cast<std::size_t>(k) - 1);
  auto s = state(iv, iv.t.size() - 1);
  return Vec(s.begin(), s.end());
}

Vec HybridArc::post_jump_state(int k) const {
  const Interval& iv = intervals_.at(static_cast<std::size_t>(k));
  auto s = state(iv, 0);
  return Vec(s.begin(), s.end());
}

const HybridArc::Interval* HybridArc::find_interval(int j) const {
  for (const Interval& iv : intervals_) {
    if (iv.j == j) return &iv;
  }
  return nullptr;
}

Vec HybridArc::sample_at(double t, int j, double tol) const {
  const Interval* iv = find_interval(j);
  if (iv == nullptr) throw std::out_of_range("sample_at: no interval with jump index " + std::to_string(j));
  if (t < iv->t.front() - tol || t > iv->t.back() + tol) {
    throw std::out_of_range("sample_at: t outside interval for jump index " + std::to_string(j));
  }
  const double tc = std::clamp(t, iv->t.front(), iv->t.back());
  auto it = std::lower_bound(iv->t.begin(), iv->t.end(), tc);
  std::size_t hi = static_cast<std::size_t>(it - iv->t.begin());
  if (hi == 0) {
    auto s = state(*iv, 0);
    return Vec(s.begin(), s.end());
  }
  if (hi >= iv->t.size()) hi = iv->t.size() - 1;
  const std::size_t lo = hi - 1;
  const double t0 = iv->t[lo], t1 = iv->t[hi];
  auto a = state(*iv, lo);
  auto b = state(*iv, hi);
  Vec out(a.begin(), a.end());
  if (t1 > t0) {
    const double w = (tc - t0) / (t1 - t0);
    for (int i = 0; i < dim_; ++i) out[static_cast<std::size_t>(i)] += w * (b[static_cast<std::size_t>(i)] - a[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::HorizonTime: return "HorizonTime";
    case Termination::HorizonJumps: return "HorizonJumps";
    case Termination::FlowSetExit: return "FlowSetExit";
    case Termination::NoDynamicsFromPoint: return "NoDynamicsFromPoint";
  }
  return "Unknown";
}

}  // namespace hsk
