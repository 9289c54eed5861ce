#include "svgeom/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "svgeom/errors.hpp"
#include "svgeom/tube.hpp"

namespace svgeom {

std::vector<double> parallel_samples(std::int64_t count, int workers,
                                     const std::function<double(std::int64_t)>& fn) {
  if (count < 1) throw DomainError("need at least one sample");
  std::vector<double> out(static_cast<std::size_t>(count));
  int w = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  w = static_cast<int>(std::min<std::int64_t>(w, count));
  if (w == 1) {
    for (std::int64_t k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = fn(k);
    return out;
  }
  constexpr std::int64_t chunk = 1024;
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    try {
      for (;;) {
        const std::int64_t begin = next.fetch_add(chunk);
        if (begin >= count || failed) return;
        const std::int64_t end = std::min(count, begin + chunk);
        for (std::int64_t k = begin; k < end; ++k) out[static_cast<std::size_t>(k)] = fn(k);
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < w; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

McStats summarize(std::span<const double> values, std::uint64_t seed) {
  const auto n = static_cast<double>(values.size());
  McStats s;
  s.samples = static_cast<std::int64_t>(values.size());
  s.seed = seed;
  s.mean = pairwise_sum(values) / n;
  std::vector<double> dev(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) dev[k] = (values[k] - s.mean) * (values[k] - s.mean);
  const double var = values.size() > 1 ? pairwise_sum(dev) / (n - 1.0) : 0.0;
  s.std_error = std::sqrt(var / n);
  return s;
}

Histogram make_histogram(std::span<const double> values, int bins, double coverage) {
  if (bins < 1) throw DomainError("need at least one bin");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double tail = 0.5 * (1.0 - coverage);
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  double left = quantile(tail);
  double right = quantile(1.0 - tail);
  if (!(right > left)) {
    left -= 0.5;
    right += 0.5;
  }
  Histogram h;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  const double width = (right - left) / bins;
  for (int b = 0; b <= bins; ++b) h.edges.push_back(left + b * width);
  h.edges.back() = right;
  for (double x : values) {
    if (x < left) {
      ++h.below;
    } else if (x > right) {
      ++h.above;
    } else {
      auto b = static_cast<int>((x - left) / width);
      ++h.counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))];
    }
  }
  return h;
}

McDetResult mc_expected_det(const MatchingProblem& p, const McConfig& cfg) {
  const int m = p.total();
  if (m == 0) {
    const std::vector<double> ones(static_cast<std::size_t>(std::max<std::int64_t>(cfg.samples, 1)), 1.0);
    return {summarize(ones, cfg.seed), make_histogram(ones)};
  }
  const auto values = parallel_samples(cfg.samples, cfg.workers, [&](std::int64_t k) {
    StreamRng rng(cfg.seed, static_cast<std::uint64_t>(k));
    const Eigen::MatrixXd a = sample_block_matrix(p.group_sizes, p.profile, rng);
    return m <= 4 ? principal_minor_sum(a, m) : a.partialPivLu().determinant();
  });
  return {summarize(values, cfg.seed), make_histogram(values)};
}

McStats mc_minor_sum(const SpaceSpec& space, int i, const McConfig& cfg) {
  if (i < 0 || 2 * i > space.dim()) throw DomainError("need 0 <= 2i <= n");
  const NormalSplit split = normal_split_E(space);
  const auto values = parallel_samples(cfg.samples, cfg.workers, [&](std::int64_t k) {
    if (i == 0) return 1.0;
    const WeingartenMatrix l = sample_gaussian_weingarten(split, cfg.seed, static_cast<std::uint64_t>(k));
    return principal_minor_sum(l.entries(), 2 * i);
  });
  return summarize(values, cfg.seed);
}

std::vector<McStats> mc_tube_volumes(const SpaceSpec& space, std::span<const double> eps, const McConfig& cfg) {
  if (space.ambient_dim() > mc_tube_max_ambient) {
    throw ResourceError("mc-tube rejection sampling needs ambient dimension <= 12; use a smaller space");
  }
  for (double e : eps)
    if (!(e > 0.0)) throw DomainError("epsilon must be positive");
  const double sphere = sphere_volume(static_cast<int>(space.sphere_dim()));
  const double min_eps = eps.empty() ? 0.0 : *std::min_element(eps.begin(), eps.end());
  RankOneOptions opt;
  // A rank-one point closer than every threshold settles all indicators.
  opt.stop_above = std::cos(std::min(min_eps, 1.5707963267948966));
  const auto distances = parallel_samples(cfg.samples, cfg.workers, [&](std::int64_t k) {
    StreamRng rng(cfg.seed, static_cast<std::uint64_t>(k));
    const Eigen::VectorXd g = gaussian_vector(rng, static_cast<Eigen::Index>(space.ambient_dim()));
    Tensor f(space, std::vector<double>(g.data(), g.data() + g.size()));
    f *= 1.0 / f.norm();
    RankOneOptions local = opt;
    local.seed = splitmix64(cfg.seed ^ static_cast<std::uint64_t>(k));
    return rank_one_distance(f, local).distance;
  });
  std::vector<McStats> out;
  for (double e : eps) {
    std::vector<double> hits(distances.size());
    for (std::size_t k = 0; k < distances.size(); ++k) hits[k] = distances[k] < e ? 1.0 : 0.0;
    McStats s = summarize(hits, cfg.seed);
    const double frac = s.mean;
    s.mean = frac * sphere;
    s.std_error = std::sqrt(frac * (1.0 - frac) / static_cast<double>(s.samples)) * sphere;
    out.push_back(s);
  }
  return out;
}

McStats mc_tube_volume(const SpaceSpec& space, double eps, const McConfig& cfg) {
  return mc_tube_volumes(space, std::span<const double>(&eps, 1), cfg).front();
}

ProfileAdjudication adjudicate_profiles(const SpaceSpec& space, int i, const McConfig& cfg) {
  ProfileAdjudication out{mc_minor_sum(space, i, cfg), {}};
  for (auto kind : {ProfileKind::def_d, ProfileKind::weingarten, ProfileKind::corollary}) {
    const double expected = expected_minor_sum(space, i, VarianceProfile::of_kind(kind, space.degrees()));
    const double se = out.mc.std_error;
    const double z = se > 0.0 ? (out.mc.mean - expected) / se : (out.mc.mean == expected ? 0.0 : INFINITY);
    out.verdicts.push_back({kind, expected, z});
  }
  return out;
}

}  // namespace svgeom
