#pragma once

#include <string_view>
#include <vector>

#include "svgeom/bw_algebra.hpp"
#include "svgeom/matchings.hpp"
#include "svgeom/weingarten.hpp"

namespace svgeom {

/// corrected: J_i integrates sin^{c-1+2i} cos^{n-2i}; paper: sin^{c+2i} cos^{n-2i}.
enum class ExponentConvention { corrected, paper };

std::string_view exponent_name(ExponentConvention c);

/// Volume of the unit k-sphere, 2 pi^{(k+1)/2} / Gamma((k+1)/2).
double sphere_volume(int k);

/// prod_i d_i^{n_i/2} vol(S^{n_i}) / 2^{r-1}.
double volume_X(const SpaceSpec& space);

enum class JMethod { closed_form, quadrature };

/// int_0^eps sin^a(phi) cos^b(phi) dphi for eps in (0, pi/2].
double sin_cos_integral(int a, int b, double eps, JMethod method = JMethod::closed_form);

double J_integral(int i, const SpaceSpec& space, double eps,
                  ExponentConvention convention = ExponentConvention::corrected,
                  JMethod method = JMethod::closed_form);

/// E |g|^{2i} for g standard Gaussian in R^c: 2^i Gamma(i + c/2) / Gamma(c/2).
double lambda_moment(int i, int c);

double a_coefficient(int i, const SpaceSpec& space, const VarianceProfile& profile,
                     MinorMode mode = MinorMode::corrected);

struct TubeOptions {
  ExponentConvention exponent = ExponentConvention::corrected;
  MinorMode minor_mode = MinorMode::corrected;
  ProfileKind profile = ProfileKind::weingarten;
};

struct TubeTerm {
  int i;
  double a;
  double J;
  double contribution;
};

struct TubeReport {
  SpaceSpec space;
  double epsilon;
  TubeOptions options;
  double volume_X;
  double normal_sphere_volume;  // vol(S^{c-1})
  double volume;
  std::vector<TubeTerm> terms;
  bool valid;  // epsilon < reach
};

TubeReport tube_volume(const SpaceSpec& space, double eps, const TubeOptions& options = {});

}  // namespace svgeom
