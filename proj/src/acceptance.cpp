#include "svgeom/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "svgeom/geodesics.hpp"
#include "svgeom/manifold.hpp"
#include "svgeom/matchings.hpp"
#include "svgeom/montecarlo.hpp"
#include "svgeom/quadrature.hpp"
#include "svgeom/random.hpp"
#include "svgeom/serialization.hpp"
#include "svgeom/tube.hpp"
#include "svgeom/weingarten.hpp"

namespace svgeom::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

Outcome reach_table() {
  bool ok = true;
  double worst = 0.0;
  double slowest = 0.0;
  auto check = [&](SpaceSpec s, double expected, Regime regime) {
    const auto t0 = Clock::now();
    const ReachReport r = reach(s);
    slowest = std::max(slowest, std::chrono::duration<double>(Clock::now() - t0).count());
    const double err = std::abs(r.reach - expected);
    worst = std::max(worst, err);
    ok = ok && err <= 1e-12 && r.regime == regime;
  };
  const double quarter = std::numbers::pi / 4.0;
  for (int d : {2, 3, 4, 5}) {
    check(SpaceSpec({1}, {d}), quarter, Regime::bottleneck_limited);
    check(SpaceSpec({2, 1}, {d - 1, 1}), quarter, Regime::bottleneck_limited);
  }
  for (int d : {6, 8, 12}) {
    const double expected = std::sqrt(d / (2.0 * (d - 1)));
    check(SpaceSpec({1}, {d}), expected, Regime::curvature_limited);
    check(SpaceSpec({1, 2, 1}, {d - 3, 2, 1}), expected, Regime::curvature_limited);
  }
  ok = ok && std::abs(reach(SpaceSpec({1}, {6})).reach - 0.7745966692414834) <= 1e-12;
  ok = ok && slowest < 1e-3;
  return {ok, "max error " + fmt(worst) + ", slowest call " + fmt(slowest) + " s"};
}

Outcome extremal_curvature_check() {
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    StreamRng rng(2024, static_cast<std::uint64_t>(k));
    const int r = 1 + static_cast<int>(rng() % 4);
    std::vector<int> degrees;
    for (int i = 0; i < r; ++i) degrees.push_back(1 + static_cast<int>(rng() % 6));
    if (r == 1 && degrees[0] == 1) degrees[0] = 2;
    const ExtremalCurvature ex = extremal_curvature(SpaceSpec(std::vector<int>(r, 1), degrees));
    int d = 0;
    int dmin = degrees[0];
    for (int x : degrees) {
      d += x;
      dmin = std::min(dmin, x);
    }
    const double max_expected = std::sqrt(2.0 * (d - 1) / d);
    const double min_expected = std::sqrt(2.0 * (dmin - 1) / dmin);
    worst = std::max({worst, std::abs(ex.numeric_max - max_expected), std::abs(ex.numeric_min - min_expected),
                      std::abs(ex.max - max_expected), std::abs(ex.min - min_expected)});
  }
  return {worst <= 1e-9, "max deviation " + fmt(worst)};
}

Tensor random_normal_direction(const NormalSplit& split, std::uint64_t seed) {
  Tensor f = gaussian_tensor(split.space(), seed);
  f[0] = 0.0;
  for (std::size_t pos : split.tangent_positions()) f[pos] = 0.0;
  return f.normalized();
}

Outcome weingarten_oracle() {
  const std::vector<SpaceSpec> specs{SpaceSpec({1}, {2}), SpaceSpec({2}, {3}), SpaceSpec({1, 1}, {1, 1}),
                                     SpaceSpec({2, 1}, {2, 3})};
  double worst = 0.0;
  int trials = 0;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    const NormalSplit split = normal_split_E(specs[s]);
    for (int k = 0; k < 50; ++k) {
      const std::uint64_t seed = 1000 * s + static_cast<std::uint64_t>(k);
      const Tensor f = random_normal_direction(split, seed);
      StreamRng rng(seed, 99);
      const Eigen::VectorXd v = random_unit_vector(rng, specs[s].dim());
      const WeingartenMatrix l = assemble_weingarten(f, split);
      const double quad = v.dot(l.entries() * v);
      worst = std::max(worst, std::abs(quad - finite_difference_sff(split, v, f, 1e-4)));
      ++trials;
    }
  }
  return {worst <= 1e-5 && trials == 200, std::to_string(trials) + " trials, max deviation " + fmt(worst)};
}

Outcome matching_determinant() {
  const Rational d = D_exact(make_matching_problem({2, 2, 1, 1}, {1, 1, 1, 1}));
  bool ok = d == -10;
  int checked = 0;
  int mismatches = 0;
  for (int r = 1; r <= 4; ++r) {
    std::vector<int> degrees;
    for (int k = 0; k < r; ++k) degrees.push_back(k + 1);
    std::vector<int> sizes(r, 0);
    // Every size tuple with total at most 8.
    while (true) {
      for (auto kind : {ProfileKind::def_d, ProfileKind::weingarten, ProfileKind::corollary}) {
        const MatchingProblem p = make_matching_problem(sizes, degrees, kind);
        if (D_exact(p) != expected_det_isserlis_exact(p)) ++mismatches;
        ++checked;
      }
      int pos = 0;
      while (pos < r) {
        ++sizes[pos];
        int total = 0;
        for (int x : sizes) total += x;
        if (total <= 8) break;
        sizes[pos] = 0;
        ++pos;
      }
      if (pos == r) break;
    }
  }
  ok = ok && mismatches == 0;
  return {ok, "D(2,2,1,1) = " + d.str() + ", " + std::to_string(checked) + " exact comparisons, " +
                  std::to_string(mismatches) + " mismatches"};
}

std::filesystem::path artifact_path(const Options& o, const std::string& name) {
  if (o.artifact_dir.empty()) return name;
  std::error_code ec;
  std::filesystem::create_directories(o.artifact_dir, ec);
  return std::filesystem::path(o.artifact_dir) / name;
}

Outcome figure_reproduction(const Options& o) {
  McConfig cfg;
  cfg.samples = 100000;
  cfg.seed = 42;
  cfg.workers = o.workers;
  const McDetResult res = mc_expected_det(make_matching_problem({2, 2, 1, 1}, {1, 1, 1, 1}), cfg);
  const auto path = artifact_path(o, "mc_det_histogram.csv");
  std::ofstream out(path);
  out << histogram_csv(res.histogram);
  const bool written = static_cast<bool>(out);
  const double z = (res.stats.mean + 10.0) / res.stats.std_error;
  return {std::abs(z) <= 3.0 && written && res.histogram.counts.size() == 100,
          "mean " + fmt(res.stats.mean) + " +- " + fmt(res.stats.std_error) + " (z = " + fmt(z) + "), histogram " +
              path.string()};
}

Outcome tube_adjudication(const Options& o) {
  const SpaceSpec v12({1}, {2});
  McConfig cfg;
  cfg.samples = 1000000;
  cfg.seed = 42;
  cfg.workers = o.workers;
  const double eps[] = {0.1, 0.3};
  const auto mc = mc_tube_volumes(v12, eps, cfg);
  bool ok = true;
  std::string detail;
  TubeOptions literal;
  literal.exponent = ExponentConvention::paper;
  for (std::size_t k = 0; k < 2; ++k) {
    const double corrected = tube_volume(v12, eps[k]).volume;
    const double paper = tube_volume(v12, eps[k], literal).volume;
    const double closed = 4.0 * std::sqrt(2.0) * std::numbers::pi * std::sin(eps[k]);
    const double z_c = (mc[k].mean - corrected) / mc[k].std_error;
    const double z_p = (mc[k].mean - paper) / mc[k].std_error;
    ok = ok && std::abs(z_c) <= 3.0 && std::abs(z_p) > 10.0 && std::abs(corrected - closed) <= 1e-10;
    detail += "eps " + fmt(eps[k]) + ": mc " + fmt(mc[k].mean) + " +- " + fmt(mc[k].std_error) + ", z corrected " +
              fmt(z_c) + ", z literal " + fmt(z_p) + "; ";
  }
  return {ok, detail};
}

Outcome minor_adjudication(const Options& o) {
  const SpaceSpec seg({2, 2}, {1, 1});
  McConfig cfg;
  cfg.samples = 100000;
  cfg.seed = 42;
  cfg.workers = o.workers;
  const McStats mc = mc_minor_sum(seg, 1, cfg);
  const auto profile = VarianceProfile::of_kind(ProfileKind::weingarten, seg.degrees());
  const double corrected = expected_minor_sum(seg, 1, profile, MinorMode::corrected);
  const double paper = expected_minor_sum(seg, 1, profile, MinorMode::paper);
  const double z_c = (mc.mean - corrected) / mc.std_error;
  const double z_p = (mc.mean - paper) / mc.std_error;
  const bool ok = corrected == -4.0 && paper == -1.0 && std::abs(z_c) <= 3.0 && std::abs(z_p) > 10.0;
  return {ok, "mc " + fmt(mc.mean) + " +- " + fmt(mc.std_error) + ", z corrected " + fmt(z_c) + ", z literal " +
                  fmt(z_p)};
}

SpaceSpec random_space(StreamRng& rng, int max_factors, int max_n, int max_d) {
  const int r = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_factors));
  std::vector<int> dims;
  std::vector<int> degrees;
  for (int i = 0; i < r; ++i) {
    dims.push_back(1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_n)));
    degrees.push_back(1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_d)));
  }
  return SpaceSpec(dims, degrees);
}

Outcome geometry_invariants() {
  int trials = 0;
  int passed = 0;
  double worst_inv = 0.0;
  double worst_kernel = 0.0;
  double worst_gram = 0.0;
  for (int k = 0; k < 250; ++k) {
    StreamRng rng(8001, static_cast<std::uint64_t>(k));
    const SpaceSpec s = random_space(rng, 3, 3, 3);
    const Tensor f = gaussian_tensor(s, 2 * static_cast<std::uint64_t>(k));
    const Tensor g = gaussian_tensor(s, 2 * static_cast<std::uint64_t>(k) + 1);
    std::vector<Eigen::MatrixXd> qs;
    for (int i = 0; i < s.factors(); ++i) qs.push_back(random_orthogonal(rng, s.n(i) + 1));
    const double before = bw_inner(f, g);
    const double after = bw_inner(apply_orthogonal(f, qs), apply_orthogonal(g, qs));
    const double rel = std::abs(before - after) / (f.norm() * g.norm());
    worst_inv = std::max(worst_inv, rel);
    ++trials;
    if (rel <= 1e-10) ++passed;
  }
  for (int k = 0; k < 250; ++k) {
    StreamRng rng(8002, static_cast<std::uint64_t>(k));
    const int n = 1 + static_cast<int>(rng() % 4);
    const int d = 1 + static_cast<int>(rng() % 5);
    const SpaceSpec s({n}, {d});
    const Tensor f = gaussian_tensor(s, static_cast<std::uint64_t>(k)).normalized();
    const LinearForm l = random_unit_vector(rng, n + 1);
    const double err = std::abs(bw_inner(f, veronese_embed(l, d)) - evaluate(f, l));
    worst_kernel = std::max(worst_kernel, err);
    ++trials;
    if (err <= 1e-12) ++passed;
  }
  for (int k = 0; k < 250; ++k) {
    StreamRng rng(8003, static_cast<std::uint64_t>(k));
    const SpaceSpec s = random_space(rng, 3, 3, 3);
    const SegrePoint p = random_segre_point(s, static_cast<std::uint64_t>(k));
    const Tensor x = embed(p);
    const std::vector<Tensor> frame = tangent_frame(p);
    double err = std::abs(x.norm() - 1.0);
    for (std::size_t a = 0; a < frame.size(); ++a) {
      err = std::max(err, std::abs(bw_inner(frame[a], x)));
      for (std::size_t b = 0; b < frame.size(); ++b) {
        err = std::max(err, std::abs(bw_inner(frame[a], frame[b]) - (a == b ? 1.0 : 0.0)));
      }
    }
    worst_gram = std::max(worst_gram, err);
    ++trials;
    if (err <= 1e-10) ++passed;
  }
  int bottleneck_trials = 0;
  double worst_bottleneck = 0.0;
  for (int k = 0; k < 25; ++k) {
    StreamRng rng(8004, static_cast<std::uint64_t>(k));
    SpaceSpec s = random_space(rng, 3, 3, 3);
    if (s.total_degree() < 2) s = SpaceSpec({s.n(0)}, {2});
    const BottleneckCheck b = rho2_and_bottleneck_check(s, 10, static_cast<std::uint64_t>(k));
    trials += b.trials;
    passed += b.passed;
    bottleneck_trials += b.trials;
    worst_bottleneck = std::max(worst_bottleneck, b.max_violation);
  }
  return {trials == 1000 && passed == trials,
          std::to_string(passed) + "/" + std::to_string(trials) + " pass; invariance " + fmt(worst_inv) +
              ", kernel " + fmt(worst_kernel) + ", gram " + fmt(worst_gram) + ", bottleneck " +
              fmt(worst_bottleneck)};
}

Outcome volume_cross_check() {
  // p(theta) = (cos theta x_0 + sin theta x_1)^2; p and -p trace two curves.
  auto point = [](double theta) {
    LinearForm l(2);
    l << std::cos(theta), std::sin(theta);
    return veronese_embed(l, 2);
  };
  const double h = 1e-5;
  auto speed = [&](double theta) { return ((point(theta + h) - point(theta - h)) * (0.5 / h)).norm(); };
  const double length = 2.0 * adaptive_simpson(speed, 0.0, std::numbers::pi, 1e-10).value;
  const double formula = volume_X(SpaceSpec({1}, {2}));
  const double expected = 2.0 * std::sqrt(2.0) * std::numbers::pi;
  const double err = std::max(std::abs(length - formula), std::abs(formula - expected));
  return {err <= 1e-6, "arc length " + fmt(length) + ", volume_X " + fmt(formula)};
}

struct Entry {
  const char* name;
  double limit;
};

constexpr Entry entries[] = {
    {"reach table", 1.0},
    {"extremal curvature", 1.0},
    {"weingarten oracle", 10.0},
    {"matching determinant", 30.0},
    {"determinant histogram", 20.0},
    {"tube adjudication", 120.0},
    {"minor multiplicity adjudication", 60.0},
    {"geometry invariants", 30.0},
    {"volume cross-check", 1.0},
};

}  // namespace

int criterion_count() { return static_cast<int>(std::size(entries)); }

Result run_criterion(int id, const Options& options) {
  if (id < 1 || id > criterion_count()) throw std::out_of_range("no such acceptance criterion");
  const Entry& e = entries[id - 1];
  const auto t0 = Clock::now();
  Outcome out;
  try {
    switch (id) {
      case 1: out = reach_table(); break;
      case 2: out = extremal_curvature_check(); break;
      case 3: out = weingarten_oracle(); break;
      case 4: out = matching_determinant(); break;
      case 5: out = figure_reproduction(options); break;
      case 6: out = tube_adjudication(options); break;
      case 7: out = minor_adjudication(options); break;
      case 8: out = geometry_invariants(); break;
      default: out = volume_cross_check(); break;
    }
  } catch (const std::exception& ex) {
    out = {false, std::string("exception: ") + ex.what()};
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool in_time = seconds < e.limit;
  if (!in_time) out.detail += "; over the time limit";
  return {id, e.name, out.passed && in_time, seconds, e.limit, out.detail};
}

std::string format_line(const Result& r) {
  std::ostringstream os;
  os.precision(3);
  os << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << " (" << std::fixed << r.seconds
     << " s, limit " << r.time_limit << " s): " << r.detail;
  return os.str();
}

std::vector<Result> run_all(std::ostream& log, const Options& options) {
  std::vector<Result> results;
  for (int id = 1; id <= criterion_count(); ++id) {
    results.push_back(run_criterion(id, options));
    log << format_line(results.back()) << std::endl;
  }
  return results;
}

}  // namespace svgeom::acceptance
