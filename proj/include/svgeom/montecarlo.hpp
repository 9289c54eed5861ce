#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svgeom/matchings.hpp"
#include "svgeom/weingarten.hpp"

namespace svgeom {

struct McConfig {
  std::int64_t samples = 100000;
  std::uint64_t seed = 42;
  int workers = 0;  // 0: hardware concurrency
  std::optional<std::string> output;
};

/// Evaluates fn(k) for k in [0, count) on up to `workers` threads. The
/// result vector is indexed by k, so it never depends on scheduling.
std::vector<double> parallel_samples(std::int64_t count, int workers,
                                     const std::function<double(std::int64_t)>& fn);

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values);

struct McStats {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

McStats summarize(std::span<const double> values, std::uint64_t seed);

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges
  std::vector<std::int64_t> counts;
  std::int64_t below = 0;  // samples left of the clipped range
  std::int64_t above = 0;
};

/// Uniform bins over the central `coverage` quantile span of the values.
Histogram make_histogram(std::span<const double> values, int bins = 100, double coverage = 0.999);

struct McDetResult {
  McStats stats;
  Histogram histogram;
};

/// Determinants of block Gaussian matrices with the problem's profile.
McDetResult mc_expected_det(const MatchingProblem& p, const McConfig& cfg);

/// Mean of the sum of 2i x 2i principal minors of L_F for Gaussian F.
McStats mc_minor_sum(const SpaceSpec& space, int i, const McConfig& cfg);

inline constexpr std::size_t mc_tube_max_ambient = 12;

/// Fraction of uniform points of S^N within each epsilon of the manifold,
/// times vol(S^N). One distance evaluation per sample serves every epsilon.
std::vector<McStats> mc_tube_volumes(const SpaceSpec& space, std::span<const double> eps, const McConfig& cfg);
McStats mc_tube_volume(const SpaceSpec& space, double eps, const McConfig& cfg);

struct ProfileVerdict {
  ProfileKind kind;
  double expected;
  double z_score;  // (mc mean - expected) / std_error
};

struct ProfileAdjudication {
  McStats mc;
  std::vector<ProfileVerdict> verdicts;  // def-d, weingarten, corollary
};

/// Compares the sampled mean of m_{2i}(L_F) to the corrected expected minor
/// sum under each variance profile.
ProfileAdjudication adjudicate_profiles(const SpaceSpec& space, int i, const McConfig& cfg);

}  // namespace svgeom
