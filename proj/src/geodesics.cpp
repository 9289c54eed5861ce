#include "svgeom/geodesics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include "svgeom/errors.hpp"
#include "svgeom/random.hpp"

namespace svgeom {

GeodesicSpec make_geodesic(SpaceSpec space, std::vector<double> speeds,
                           std::vector<double> accelerations,
                           std::vector<Eigen::VectorXd> directions) {
  const auto r = static_cast<std::size_t>(space.factors());
  if (speeds.size() != r) throw DomainError("need one speed per factor");
  double sum = 0.0;
  for (double t : speeds) sum += t * t;
  if (std::abs(sum - 1.0) > 1e-12) throw DomainError("speeds must satisfy sum(theta^2) = 1");
  if (accelerations.empty()) accelerations.assign(r, 0.0);
  if (accelerations.size() != r) throw DomainError("need one acceleration per factor");
  if (directions.empty()) {
    for (std::size_t i = 0; i < r; ++i) directions.push_back(Eigen::VectorXd::Unit(space.n(static_cast<int>(i)), 0));
  }
  if (directions.size() != r) throw DomainError("need one direction per factor");
  for (std::size_t i = 0; i < r; ++i) {
    if (directions[i].size() != space.n(static_cast<int>(i))) throw DomainError("direction has the wrong length");
    if (std::abs(directions[i].norm() - 1.0) > 1e-12) throw DomainError("directions must be unit vectors");
  }
  return GeodesicSpec{std::move(space), std::move(speeds), std::move(accelerations), std::move(directions)};
}

Tensor geodesic_eval(const GeodesicSpec& g, double t) {
  const SpaceSpec& s = g.space;
  std::vector<std::vector<double>> factors;
  for (int i = 0; i < s.factors(); ++i) {
    const double a = g.speeds[i] * t + 0.5 * g.accelerations[i] * t * t;
    const double w = a / std::sqrt(static_cast<double>(s.d(i)));
    LinearForm l(s.n(i) + 1);
    l(0) = std::cos(w);
    l.tail(s.n(i)) = std::sin(w) * g.directions[i];
    std::vector<double> c(s.factor_dim(i));
    veronese_coeffs(s.table(i), l, c);
    factors.push_back(std::move(c));
  }
  return tensor_product(s, factors);
}

Tensor geodesic_velocity_numeric(const GeodesicSpec& g, double h) {
  Tensor v = geodesic_eval(g, h) - geodesic_eval(g, -h);
  v *= 1.0 / (2.0 * h);
  return v;
}

Tensor geodesic_acceleration_numeric(const GeodesicSpec& g, double h) {
  Tensor a = geodesic_eval(g, h) + geodesic_eval(g, -h);
  a -= geodesic_eval(g, 0.0) * 2.0;
  a *= 1.0 / (h * h);
  return a;
}

double normal_curvature_numeric(const GeodesicSpec& g, const NormalSplit& split, double h) {
  Tensor a = geodesic_acceleration_numeric(g, h);
  a[0] = 0.0;
  for (std::size_t pos : split.tangent_positions()) a[pos] = 0.0;
  return a.norm();
}

double tangential_acceleration_numeric(const GeodesicSpec& g, const NormalSplit& split, double h) {
  const Tensor a = geodesic_acceleration_numeric(g, h);
  double s = 0.0;
  for (std::size_t pos : split.tangent_positions()) s += a[pos] * a[pos];
  return std::sqrt(s);
}

double curvature_closed_form(std::span<const double> theta, std::span<const int> degrees) {
  if (theta.size() != degrees.size()) throw DomainError("theta and degrees differ in length");
  double norm2 = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double t2 = theta[i] * theta[i];
    norm2 += t2;
    sum += t2 - t2 * t2 / degrees[i];
  }
  if (std::abs(norm2 - 1.0) > 1e-10) throw DomainError("theta must satisfy sum(theta^2) = 1");
  return std::sqrt(std::max(0.0, 2.0 * sum));
}

namespace {

// 2 sum_i theta_i^2 ((d_i - 1) + s_i) / d_i with s_i = 1 - theta_i^2 taken
// from the other coordinates, so values near a vertex keep full precision.
double curvature_squared(const Eigen::VectorXd& theta, std::span<const int> degrees) {
  const double total = theta.squaredNorm();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double t2 = theta(i) * theta(i);
    double rest = 0.0;
    for (Eigen::Index j = 0; j < theta.size(); ++j)
      if (j != i) rest += theta(j) * theta(j);
    const double d = degrees[static_cast<std::size_t>(i)];
    sum += t2 * ((d - 1.0) + rest / total) / d;
  }
  return 2.0 * sum / total;
}

Eigen::VectorXd curvature_squared_gradient(const Eigen::VectorXd& theta, std::span<const int> degrees) {
  Eigen::VectorXd g(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double t = theta(i);
    g(i) = 4.0 * t - 8.0 * t * t * t / degrees[static_cast<std::size_t>(i)];
  }
  return g;
}

}  // namespace

CurvatureOptimum optimize_curvature(std::span<const int> degrees, bool maximize, int starts,
                                    std::uint64_t seed) {
  const auto r = static_cast<Eigen::Index>(degrees.size());
  if (r == 0) throw DomainError("need at least one degree");
  const double sense = maximize ? 1.0 : -1.0;
  CurvatureOptimum best{maximize ? -1.0 : 1e300, {}};
  for (int start = 0; start < starts; ++start) {
    StreamRng rng(seed, static_cast<std::uint64_t>(start));
    Eigen::VectorXd theta = random_unit_vector(rng, r);
    double value = sense * curvature_squared(theta, degrees);
    double step = 0.1;
    for (int it = 0; it < 100000; ++it) {
      Eigen::VectorXd grad = sense * curvature_squared_gradient(theta, degrees);
      grad -= grad.dot(theta) * theta;  // Riemannian gradient on the sphere
      if (grad.norm() < 1e-300) break;
      // Backtracking on the projected step.
      Eigen::VectorXd cand;
      double cand_value = 0.0;
      bool moved = false;
      double trial = std::min(step * 2.0, 0.25);
      while (trial > 1e-12) {
        cand = (theta + trial * grad).normalized();
        cand_value = sense * curvature_squared(cand, degrees);
        if (cand_value > value && cand_value - value >= 1e-4 * trial * grad.squaredNorm()) {
          moved = true;
          break;
        }
        trial *= 0.5;
      }
      if (!moved) break;
      const double delta = (cand - theta).norm();
      theta = cand;
      value = cand_value;
      step = trial;
      if (delta < 1e-15) break;
    }
    const double kappa = std::sqrt(std::max(0.0, sense * value));
    if ((maximize && kappa > best.value) || (!maximize && kappa < best.value)) {
      best.value = kappa;
      best.theta.assign(theta.data(), theta.data() + r);
      for (double& t : best.theta) t = std::abs(t);
    }
  }
  return best;
}

ExtremalCurvature extremal_curvature(const SpaceSpec& space) {
  const int d = space.total_degree();
  if (d < 2) throw DomainError("extremal curvature needs total degree d >= 2");
  const auto& degrees = space.degrees();
  const auto r = degrees.size();
  ExtremalCurvature out;
  out.max = std::sqrt(2.0 * (d - 1) / d);
  out.argmax.resize(r);
  for (std::size_t i = 0; i < r; ++i) out.argmax[i] = std::sqrt(static_cast<double>(degrees[i]) / d);
  const auto it = std::min_element(degrees.begin(), degrees.end());
  out.min_factor = static_cast<int>(it - degrees.begin());
  const int dl = *it;
  out.min = std::sqrt(2.0 * (dl - 1) / dl);
  out.argmin.assign(r, 0.0);
  out.argmin[static_cast<std::size_t>(out.min_factor)] = 1.0;
  out.numeric_max = optimize_curvature(degrees, true).value;
  out.numeric_min = optimize_curvature(degrees, false).value;
  return out;
}

double rho1(const SpaceSpec& space) {
  const int d = space.total_degree();
  if (d < 2) throw DomainError("rho1 needs total degree d >= 2");
  return std::sqrt(d / (2.0 * (d - 1)));
}

double rho2(const SpaceSpec& space) {
  if (space.total_degree() < 2) throw DomainError("rho2 needs total degree d >= 2");
  return std::numbers::pi / 4.0;
}

BottleneckCheck rho2_and_bottleneck_check(const SpaceSpec& space, int samples, std::uint64_t seed) {
  BottleneckCheck out{rho2(space), 0, 0, 0.0};
  const NormalSplit split = normal_split_E(space);
  const Tensor e = distinguished_point(space);
  const int r = space.factors();
  for (int trial = 0; trial < samples; ++trial) {
    StreamRng rng(seed, static_cast<std::uint64_t>(trial));
    // Nonempty random subset of factors whose form is orthogonal to x_0.
    std::uint64_t mask = rng() & ((std::uint64_t{1} << r) - 1);
    if (mask == 0) mask = std::uint64_t{1} << (rng() % static_cast<std::uint64_t>(r));
    // A lone linear factor orthogonal to x_0 leaves a tangent component;
    // such pairs are not bottlenecks, so pair it with a second factor.
    if ((mask & (mask - 1)) == 0) {
      const int i = std::countr_zero(mask);
      if (space.d(i) == 1) {
        const int j = (i + 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(r - 1))) % r;
        mask |= std::uint64_t{1} << j;
      }
    }
    std::vector<LinearForm> forms;
    for (int i = 0; i < r; ++i) {
      LinearForm l = gaussian_vector(rng, space.n(i) + 1);
      if (mask & (std::uint64_t{1} << i)) l(0) = 0.0;
      forms.push_back(l.normalized());
    }
    const Tensor f = embed(make_segre_point(space, std::move(forms)));
    double violation = std::abs(bw_inner(f, e));
    const Tensor diff = f - e;
    for (std::size_t pos : split.tangent_positions()) violation = std::max(violation, std::abs(diff[pos]));
    violation = std::max(violation, std::abs(angular_distance(f, e) - std::numbers::pi / 2.0));
    out.max_violation = std::max(out.max_violation, violation);
    ++out.trials;
    if (violation <= 1e-10) ++out.passed;
  }
  return out;
}

std::string_view regime_name(Regime r) {
  return r == Regime::bottleneck_limited ? "bottleneck-limited" : "curvature-limited";
}

ReachReport reach(const SpaceSpec& space) {
  ReachReport rep{rho1(space), rho2(space), 0.0, Regime::bottleneck_limited};
  if (rep.rho1 < rep.rho2) {
    rep.reach = rep.rho1;
    rep.regime = Regime::curvature_limited;
  } else {
    rep.reach = rep.rho2;
  }
  return rep;
}

}  // namespace svgeom
