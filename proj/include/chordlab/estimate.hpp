#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "chordlab/rng.hpp"

namespace chordlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Monte Carlo value. tailIndex is the Hill estimate of the sample tail (inf when bounded or untracked).
struct Estimate {
  double value = 0.0;
  double stdError = 0.0;
  std::uint64_t nSamples = 0;
  double tailIndex = kInf;

  static Estimate exact(double v) { return {v, 0.0, 0, kInf}; }
  double relError() const { return value == 0.0 ? kInf : stdError / std::abs(value); }
};

/// sum_i c_i E_i + c0, errors combined as independent
inline Estimate affine(std::initializer_list<std::pair<double, Estimate>> terms, double c0 = 0.0) {
  Estimate r;
  r.value = c0;
  double var = 0.0;
  for (const auto& [c, e] : terms) {
    r.value += c * e.value;
    var += c * c * e.stdError * e.stdError;
    r.nSamples += e.nSamples;
    r.tailIndex = std::min(r.tailIndex, e.tailIndex);
  }
  r.stdError = std::sqrt(var);
  return r;
}

inline Estimate operator+(const Estimate& a, const Estimate& b) { return affine({{1.0, a}, {1.0, b}}); }
inline Estimate operator-(const Estimate& a, const Estimate& b) { return affine({{1.0, a}, {-1.0, b}}); }
inline Estimate operator*(double c, const Estimate& a) { return affine({{c, a}}); }
inline Estimate operator*(const Estimate& a, double c) { return affine({{c, a}}); }
inline Estimate operator+(const Estimate& a, double c) { return affine({{1.0, a}}, c); }

/// first-order propagation through a smooth map
inline Estimate mapEstimate(const Estimate& a, double value, double derivative) {
  Estimate r = a;
  r.value = value;
  r.stdError = std::abs(derivative) * a.stdError;
  return r;
}

inline Estimate product(const Estimate& a, const Estimate& b) {
  Estimate r = affine({{b.value, a}, {a.value, b}});
  r.value = a.value * b.value;
  return r;
}

inline Estimate quotient(const Estimate& a, const Estimate& b) {
  double q = a.value / b.value;
  Estimate r = affine({{1.0 / b.value, a}, {-q / b.value, b}});
  r.value = q;
  return r;
}

/// Streaming mean/variance with an optional top-k record of |x| for the tail diagnostic.
class Accumulator {
public:
  explicit Accumulator(std::size_t tailK = 0) : tailK_(tailK) {}

  void add(double x) {
    ++n_;
    double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
    if (tailK_ > 0) {
      double a = std::abs(x);
      if (top_.size() < tailK_ + 1) {
        top_.push(a);
      } else if (a > top_.top()) {
        top_.pop();
        top_.push(a);
      }
    }
  }

  /// Chan et al. pairwise merge
  void merge(const Accumulator& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      auto keepK = std::max(tailK_, o.tailK_);
      *this = o;
      tailK_ = keepK;
      return;
    }
    double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
    double d = o.mean_ - mean_;
    std::uint64_t n = n_ + o.n_;
    mean_ = (na * mean_ + nb * o.mean_) / static_cast<double>(n);
    m2_ += o.m2_ + d * d * na * nb / static_cast<double>(n);
    n_ = n;
    tailK_ = std::max(tailK_, o.tailK_);
    auto other = o.top_;
    while (!other.empty()) {
      double a = other.top();
      other.pop();
      if (top_.size() < tailK_ + 1) top_.push(a);
      else if (a > top_.top()) {
        top_.pop();
        top_.push(a);
      }
    }
  }

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

  /// Hill estimator over the tracked top-k; inf when the tail is bounded or untracked.
  double tailIndex() const {
    if (tailK_ == 0 || top_.size() < tailK_ + 1) return kInf;
    auto h = top_;
    std::vector<double> xs;
    while (!h.empty()) {
      xs.push_back(h.top());
      h.pop();
    }
    double floor = xs.front();
    if (!(floor > 0.0)) return kInf;
    double s = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i) s += std::log(xs[i] / floor);
    s /= static_cast<double>(tailK_);
    return s > 0.0 ? 1.0 / s : kInf;
  }

  Estimate estimate(double scale = 1.0) const {
    Estimate e;
    e.value = scale * mean_;
    e.stdError = n_ > 0 ? std::abs(scale) * std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    e.nSamples = n_;
    e.tailIndex = tailIndex();
    return e;
  }

private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  std::size_t tailK_ = 0;
  std::priority_queue<double, std::vector<double>, std::greater<double>> top_;
};

inline std::size_t defaultTailK(std::uint64_t n) {
  auto k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  return std::clamp<std::size_t>(k, 20, 1000);
}

struct Budget {
  std::uint64_t nSamples = 1000000;
  std::uint64_t masterSeed = 1;
  int nShards = 4;

  /// independent stream family for a named sub-computation
  Budget derive(std::string_view tag, std::uint64_t index = 0) const {
    Budget b = *this;
    b.masterSeed = deriveSeed(masterSeed, hashTag(tag), index);
    return b;
  }
  Budget withSamples(std::uint64_t n) const {
    Budget b = *this;
    b.nSamples = std::max<std::uint64_t>(n, 2);
    return b;
  }
  std::uint64_t shardSeed(int shard) const { return deriveSeed(masterSeed, 0x5eedULL, static_cast<std::uint64_t>(shard)); }
  std::uint64_t shardCount(int shard) const {
    auto k = static_cast<std::uint64_t>(nShards);
    return nSamples / k + (static_cast<std::uint64_t>(shard) < nSamples % k ? 1 : 0);
  }
};

inline void validateBudget(const Budget& b) {
  if (b.nSamples < 2) throw std::invalid_argument("budget needs at least 2 samples");
  if (b.nShards < 1) throw std::invalid_argument("budget needs at least 1 shard");
}

inline unsigned workerCount(int nShards) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return std::min<unsigned>(hw, static_cast<unsigned>(nShards));
}

/// Runs body(rng, count, acc) once per shard and merges in shard order.
template <class Body>
Accumulator runSharded(const Budget& budget, Body&& body, bool trackTail = false) {
  validateBudget(budget);
  std::size_t k = trackTail ? defaultTailK(budget.nSamples) : 0;
  std::vector<Accumulator> parts(static_cast<std::size_t>(budget.nShards), Accumulator(k));
  auto runShard = [&](int s) {
    Rng rng(budget.shardSeed(s));
    body(rng, budget.shardCount(s), parts[static_cast<std::size_t>(s)]);
  };
  unsigned workers = workerCount(budget.nShards);
  if (workers <= 1) {
    for (int s = 0; s < budget.nShards; ++s) runShard(s);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int s = static_cast<int>(w); s < budget.nShards; s += static_cast<int>(workers)) runShard(s);
      });
    }
    for (auto& t : pool) t.join();
  }
  Accumulator total(k);
  for (const auto& p : parts) total.merge(p);
  return total;
}

/// Convenience: mean of sample(rng) scaled by `scale`.
template <class Sample>
Estimate monteCarlo(const Budget& budget, Sample&& sample, double scale = 1.0, bool trackTail = false) {
  auto acc = runSharded(
      budget,
      [&](Rng& rng, std::uint64_t count, Accumulator& a) {
        for (std::uint64_t i = 0; i < count; ++i) a.add(sample(rng));
      },
      trackTail);
  return acc.estimate(scale);
}

}  // namespace chordlab
