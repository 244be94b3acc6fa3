#pragma once

// Rosenbluth sampling of weakly prudent walks, the exact mutual-seeing sum
// for two simple random walks, and log-log fits of the mean-square
// displacement.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prudent/rational.hpp"
#include "prudent/report.hpp"
#include "prudent/walks.hpp"

namespace prudent {

/// Philox4x32-10 counter-based generator.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  static Block bijection(Block ctr, Key key);
};

/// Stream of 32-bit draws keyed by (seed, stream id). Independent streams
/// for distinct ids, so work can be split without changing the numbers.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream);
  std::uint32_t next();
  /// Uniform integer in [0, bound), by rejection.
  std::uint32_t below(std::uint32_t bound);

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Philox4x32::Block buf_{};
  int used_ = 4;
};

struct SamplerConfig {
  int dim = 2;
  double lambda = 1.0;
  int n = 1;
  std::uint64_t samples = 1;
  std::uint64_t seed = 1;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned workers = 0;

  void validate() const;
  nlohmann::ordered_json to_json() const;
  /// FNV-1a of the canonical JSON, excluding the worker count.
  std::uint64_t hash() const;
};

struct EstimateRecord {
  double estimate = 0;
  double standard_error = 0;
  double effective_sample_size = 0;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  nlohmann::ordered_json to_json() const;
};

inline constexpr int kMinBatches = 16;

struct RosenbluthResult {
  SamplerConfig config;
  std::vector<double> k;
  int batches = 0;
  EstimateRecord c_n;
  /// Weighted E|w(n)|^2.
  EstimateRecord mean_square;
  /// Weighted E cos(k.w(n)/sqrt n).
  EstimateRecord char_ratio;
  /// Every sampled walk carried weight 0; ratio estimates are undefined.
  bool zero_weight = false;
  nlohmann::ordered_json to_json() const;
};

/// Uniform step sequences with weight (2d)^n (1 - lambda)^V(w). Samples are
/// split into kMinBatches contiguous batches (fewer only when samples < 16);
/// standard errors come from the spread of batch estimates.
RosenbluthResult rosenbluth_estimate(const SamplerConfig& cfg, std::span<const double> k = {});

/// Mean of (2d)^n phi^lambda over all (2d)^n step sequences, exactly.
Rational rosenbluth_exhaustive(int n, int dim, const Rational& lambda);

/// S(0..T): S(T) = (1/2) sum_{t <= T} t P(X(t) on the last axis, X(t) != 0).
std::vector<Rational> mutual_seeing_exact(int dim, int T);

/// Two independent simple random walks; counts pairs s, t >= 1 with
/// s + t - 1 <= T and X1(t) seeing X2(s). Mean equals S(T).
EstimateRecord mutual_seeing_mc(int dim, int T, std::uint64_t samples, std::uint64_t seed, unsigned workers = 0);

struct MomentPoint {
  int n = 0;
  double mean_square = 0;
  double standard_error = 0;  // 0 for exact inputs
};

/// Fit of log E|w(n)|^2 against log n. Weighted by the inverse variance of
/// the logs when standard errors are available; ordinary least squares
/// otherwise. PASS iff the slope lies in [band_lo, band_hi].
Report diffusive_exponent(std::span<const MomentPoint> points, double band_lo = 0.9, double band_hi = 1.1);

std::vector<MomentPoint> moments_from_table(const CoeffTable& table, std::span<const int> n_list);
std::vector<MomentPoint> moments_from_sampling(const SamplerConfig& base, std::span<const int> n_list);

}  // namespace prudent
