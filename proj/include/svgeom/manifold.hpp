#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "svgeom/bw_algebra.hpp"

namespace svgeom {

/// sign * l_1^{d_1} (x) ... (x) l_r^{d_r} with unit linear forms.
struct SegrePoint {
  SpaceSpec space;
  std::vector<LinearForm> forms;
  int sign = 1;
};

/// Validates unit norms (1e-12) and normalizes the sign so that the first
/// nonzero coordinate of l_1 is nonnegative.
SegrePoint make_segre_point(SpaceSpec space, std::vector<LinearForm> forms, int sign = 1);

SegrePoint random_segre_point(const SpaceSpec& space, std::uint64_t seed);

/// Coefficients of l^d in the orthonormal basis of H_{n,d}, computed by
/// expanding (l_0 x_0 + ... + l_n x_n)^d one linear factor at a time.
Tensor veronese_embed(const LinearForm& l, int d);

/// Same coefficients as veronese_embed via sqrt(multinomial) * l^alpha; the
/// hot path used by the optimizers.
void veronese_coeffs(const MonomialTable& table, const LinearForm& l, std::span<double> out);

/// d/ds (l + s u)^d at s = 0, in the orthonormal basis.
Tensor veronese_tangent(const LinearForm& l, const LinearForm& u, int d);

Tensor embed(const SegrePoint& p);

/// E = x_0^{d_1} (x) ... (x) x_0^{d_r}, the basis tensor at flat index 0.
Tensor distinguished_point(const SpaceSpec& space);

/// Images of orthonormal bases of each factor's tangent space under the
/// tensor-product map, in factor order (n tensors).
std::vector<Tensor> tangent_frame(const SegrePoint& p);

struct TangentLabel {
  int factor;
  int k;  // 1-based variable index
};

struct WLabel {
  int factor;
  int k;  // 1 <= k <= l <= n_i
  int l;
};

struct GLabel {
  int i;  // 0-based factors, i < j
  int j;
  int k;  // 1 <= k <= n_i
  int l;  // 1 <= l <= n_j
};

/// The splitting T_E + W + G + P of the space orthogonal to E. Every basis
/// vector of T_E, W and G is a single monomial tensor, so bases are stored
/// as flat positions. P is the complement and is kept only as a role mask.
class NormalSplit {
 public:
  enum class Role : std::uint8_t { e, tangent, w, g, p };

  const SpaceSpec& space() const { return space_; }

  std::span<const std::size_t> tangent_positions() const { return tangent_; }
  std::span<const TangentLabel> tangent_labels() const { return tangent_labels_; }
  std::span<const std::size_t> w_positions() const { return w_; }
  std::span<const WLabel> w_labels() const { return w_labels_; }
  std::span<const std::size_t> g_positions() const { return g_; }
  std::span<const GLabel> g_labels() const { return g_labels_; }

  /// First tangent coordinate belonging to factor i (factor blocks are contiguous).
  int tangent_offset(int i) const { return tangent_offsets_[i]; }

  std::size_t p_dim() const { return p_dim_; }
  Role role(std::size_t flat) const { return roles_[flat]; }

  Tensor tangent_tensor(std::size_t k) const { return Tensor::basis(space_, tangent_[k]); }
  Tensor w_tensor(std::size_t k) const { return Tensor::basis(space_, w_[k]); }
  Tensor g_tensor(std::size_t k) const { return Tensor::basis(space_, g_[k]); }

  /// True when f is orthogonal to E, T_E, W and G within tol (relative to |f|).
  bool in_p(const Tensor& f, double tol = 1e-10) const;

  /// True when f is orthogonal to E and T_E within tol.
  bool is_normal(const Tensor& f, double tol = 1e-10) const;

  friend NormalSplit normal_split_E(const SpaceSpec& space);

 private:
  explicit NormalSplit(SpaceSpec space) : space_(std::move(space)) {}

  SpaceSpec space_;
  std::vector<std::size_t> tangent_;
  std::vector<TangentLabel> tangent_labels_;
  std::vector<int> tangent_offsets_;
  std::vector<std::size_t> w_;
  std::vector<WLabel> w_labels_;
  std::vector<std::size_t> g_;
  std::vector<GLabel> g_labels_;
  std::vector<Role> roles_;
  std::size_t p_dim_ = 0;
};

NormalSplit normal_split_E(const SpaceSpec& space);

struct Components {
  double e = 0.0;
  std::vector<double> tangent;
  std::vector<double> w;  // f_{i,(k,l)}, ordered as NormalSplit::w_labels
  std::vector<double> g;  // g_{(i,j),(k,l)}, ordered as NormalSplit::g_labels
  double p_norm = 0.0;
};

Components project_components(const Tensor& f, const NormalSplit& split);

struct RankOneOptions {
  int restarts = 20;
  double tol = 1e-12;
  int max_iterations = 500;
  std::uint64_t seed = 0x5eedULL;
  /// Stop as soon as a correlation above this value is found.
  std::optional<double> stop_above;
};

struct RankOneResult {
  double distance = 0.0;
  double correlation = 0.0;
  SegrePoint point;
  bool converged = false;
  int iterations = 0;
};

/// Spherical distance from a unit tensor to the Segre-Veronese manifold,
/// maximizing |<F, l_1^{d_1} (x) ... (x) l_r^{d_r}>| by multi-start
/// alternating updates of one factor at a time.
RankOneResult rank_one_distance(const Tensor& f, const RankOneOptions& options = {});

}  // namespace svgeom
