#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "svgeom/manifold.hpp"
#include "svgeom/random.hpp"
#include "svgeom/rational.hpp"

namespace svgeom {

/// Symmetric n x n matrix of the second fundamental form at E in direction
/// F, in the tangent basis of NormalSplit (factor blocks, x_1..x_{n_i}).
class WeingartenMatrix {
 public:
  WeingartenMatrix(SpaceSpec space, Eigen::MatrixXd entries);

  const SpaceSpec& space() const { return space_; }
  const Eigen::MatrixXd& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.rows()); }
  int block_offset(int i) const;
  Eigen::MatrixXd block(int i, int j) const;

 private:
  SpaceSpec space_;
  Eigen::MatrixXd entries_;
};

enum class ProfileKind { def_d, weingarten, corollary, custom };

std::string_view profile_name(ProfileKind kind);
std::optional<ProfileKind> parse_profile(std::string_view name);

/// Entry variances of a centered Gaussian symmetric block matrix: every
/// entry is independent up to symmetry, diagonal block k has off-diagonal
/// variance offdiag[k] and diagonal variance diag[k], off-diagonal blocks
/// have variance cross.
struct VarianceProfile {
  ProfileKind kind = ProfileKind::custom;
  std::vector<Rational> offdiag;
  std::vector<Rational> diag;
  Rational cross{1};

  std::size_t groups() const { return offdiag.size(); }

  /// def-d: d(d-1) and 2 d(d-1). weingarten: (d-1)/d and 2(d-1)/d.
  /// corollary: d(d-1)/4 and d(d-1)/2. Cross variance is 1 throughout.
  static VarianceProfile of_kind(ProfileKind kind, std::span<const int> degrees);
};

WeingartenMatrix assemble_from_coordinates(const NormalSplit& split, std::span<const double> w,
                                           std::span<const double> g);

/// Throws DomainError unless F is orthogonal to E and T_E within 1e-10.
WeingartenMatrix assemble_weingarten(const Tensor& f, const NormalSplit& split);

/// Single-factor case: the matrix (sqrt((d-1)/d) f_{(k,l)}), doubled by sqrt(2)
/// on the diagonal. Zero for d = 1.
WeingartenMatrix veronese_weingarten(const Tensor& f);

/// L(F) for F with standard Gaussian coordinates on W and G (the P part does
/// not enter). A pure function of (seed, stream).
WeingartenMatrix sample_gaussian_weingarten(const NormalSplit& split, std::uint64_t seed,
                                            std::uint64_t stream = 0);

enum class ScaleConvention { derived, corollary };

/// Symmetric block matrix with independent Gaussian entries.
Eigen::MatrixXd sample_block_matrix(std::span<const int> sizes, const VarianceProfile& profile,
                                    StreamRng& rng);

/// Direct sampler: derived scale matches sample_gaussian_weingarten in law;
/// corollary scale uses the corollary profile.
WeingartenMatrix sample_direct_weingarten(const SpaceSpec& space, ScaleConvention scale,
                                          std::uint64_t seed, std::uint64_t stream = 0);

/// Sum of all k x k principal minors; 1 for k = 0.
double principal_minor_sum(const Eigen::MatrixXd& m, int k);

/// <gamma''(0), F> along the curve through E with unit velocity v (tangent
/// coordinates), by central differences. Approximates v^T L(F) v.
double finite_difference_sff(const NormalSplit& split, const Eigen::VectorXd& v, const Tensor& f,
                             double h = 1e-4);

/// Rows of comma separated entries with 17 significant digits.
std::string matrix_csv(const Eigen::MatrixXd& m);

}  // namespace svgeom
