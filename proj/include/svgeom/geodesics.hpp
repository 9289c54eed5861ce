#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "svgeom/manifold.hpp"

namespace svgeom {

/// Curve t -> (x)_i (cos(a_i(t)/sqrt(d_i)) x_0 + sin(a_i(t)/sqrt(d_i)) u_i.x)^{d_i}
/// through E, with a_i(t) = speeds_i t + accelerations_i t^2 / 2 and u_i a
/// unit vector in the variables x_1..x_{n_i} (default x_1).
struct GeodesicSpec {
  SpaceSpec space;
  std::vector<double> speeds;
  std::vector<double> accelerations;
  std::vector<Eigen::VectorXd> directions;
};

/// Validates sum(speeds^2) = 1 within 1e-12 and fills defaults.
GeodesicSpec make_geodesic(SpaceSpec space, std::vector<double> speeds,
                           std::vector<double> accelerations = {},
                           std::vector<Eigen::VectorXd> directions = {});

Tensor geodesic_eval(const GeodesicSpec& g, double t);

/// Central differences at t = 0.
Tensor geodesic_velocity_numeric(const GeodesicSpec& g, double h);
Tensor geodesic_acceleration_numeric(const GeodesicSpec& g, double h);

/// |P_E(gamma''(0))|: norm of the numeric acceleration with the E and T_E
/// components removed.
double normal_curvature_numeric(const GeodesicSpec& g, const NormalSplit& split, double h);

/// Norm of the T_E component of the numeric acceleration.
double tangential_acceleration_numeric(const GeodesicSpec& g, const NormalSplit& split, double h);

/// sqrt(2 sum_i (theta_i^2 - theta_i^4 / d_i)) for sum(theta^2) = 1.
double curvature_closed_form(std::span<const double> theta, std::span<const int> degrees);

struct CurvatureOptimum {
  double value;
  std::vector<double> theta;
};

/// Projected gradient ascent (maximize) or descent on the theta-sphere from
/// `starts` seeded random starting points.
CurvatureOptimum optimize_curvature(std::span<const int> degrees, bool maximize, int starts = 50,
                                    std::uint64_t seed = 42);

struct ExtremalCurvature {
  double max;
  std::vector<double> argmax;
  double min;
  std::vector<double> argmin;
  int min_factor;  // lowest index attaining min d_i
  double numeric_max;
  double numeric_min;
};

ExtremalCurvature extremal_curvature(const SpaceSpec& space);

double rho1(const SpaceSpec& space);
double rho2(const SpaceSpec& space);

struct BottleneckCheck {
  double rho2;
  int trials;
  int passed;
  double max_violation;
};

/// rho_2 together with a randomized check that rank-one tensors with some
/// l_i orthogonal to x_0 are orthogonal to E and to T_E.
BottleneckCheck rho2_and_bottleneck_check(const SpaceSpec& space, int samples, std::uint64_t seed = 42);

enum class Regime { bottleneck_limited, curvature_limited };

std::string_view regime_name(Regime r);

struct ReachReport {
  double rho1;
  double rho2;
  double reach;
  Regime regime;
};

ReachReport reach(const SpaceSpec& space);

}  // namespace svgeom
