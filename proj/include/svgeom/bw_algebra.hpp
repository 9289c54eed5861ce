#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace svgeom {

/// C(n, k) as an exact integer; throws ResourceError on overflow.
std::size_t binomial(int n, int k);

/// d! / (alpha_0! ... alpha_n!) for d = sum(alpha).
double multinomial(std::span<const int> alpha);

struct MultiIndex {
  std::vector<int> entries;

  int degree() const;
  bool operator==(const MultiIndex&) const = default;
};

/// All exponent vectors of H_{n,d} in descending lexicographic order, so
/// x_0^d has rank 0 and x_n^d has the last rank.
class MonomialTable {
 public:
  MonomialTable(int n, int d);

  int n() const { return n_; }
  int degree() const { return d_; }
  int num_vars() const { return n_ + 1; }
  std::size_t size() const { return size_; }

  std::span<const int> exponents(std::size_t rank) const {
    return {exponents_.data() + rank * static_cast<std::size_t>(n_ + 1),
            static_cast<std::size_t>(n_ + 1)};
  }
  /// sqrt of the multinomial coefficient; m_alpha = sqrt_multinomial * x^alpha.
  double sqrt_multinomial(std::size_t rank) const { return sqrt_multinomial_[rank]; }

  /// Rank of alpha; throws DomainError when alpha has the wrong length or degree.
  std::size_t rank(std::span<const int> alpha) const;

 private:
  int n_;
  int d_;
  std::size_t size_;
  std::vector<int> exponents_;
  std::vector<double> sqrt_multinomial_;
};

std::size_t basis_rank(const MultiIndex& alpha, int n, int d);
MultiIndex basis_unrank(std::size_t rank, int n, int d);

/// The tuples (n_1..n_r), (d_1..d_r) of a partially symmetric tensor space
/// H_{n_1,d_1} (x) ... (x) H_{n_r,d_r} and everything derived from them.
/// Cheap to copy; the monomial tables are shared.
class SpaceSpec {
 public:
  /// Ambient dimensions above this are refused with ResourceError.
  static constexpr std::size_t max_ambient_dim = 10'000'000;

  SpaceSpec(std::vector<int> dims, std::vector<int> degrees);

  const std::vector<int>& dims() const { return data_->dims; }
  const std::vector<int>& degrees() const { return data_->degrees; }
  int factors() const { return static_cast<int>(data_->dims.size()); }
  int n(int i) const { return data_->dims[i]; }
  int d(int i) const { return data_->degrees[i]; }

  /// n = n_1 + ... + n_r, the manifold dimension.
  int dim() const { return data_->dim; }
  /// d = d_1 + ... + d_r.
  int total_degree() const { return data_->total_degree; }
  std::size_t ambient_dim() const { return data_->ambient; }
  /// N = ambient_dim - 1, dimension of the unit sphere.
  std::size_t sphere_dim() const { return data_->ambient - 1; }
  /// c = N - n, codimension of the manifold inside the sphere.
  std::size_t codim() const { return data_->ambient - 1 - static_cast<std::size_t>(data_->dim); }

  const MonomialTable& table(int i) const { return data_->tables[i]; }
  std::size_t factor_dim(int i) const { return data_->tables[i].size(); }
  std::size_t stride(int i) const { return data_->strides[i]; }

  std::size_t flat_index(std::span<const std::size_t> ranks) const;
  void unflatten(std::size_t flat, std::span<std::size_t> ranks) const;

  bool operator==(const SpaceSpec& other) const;

 private:
  struct Data {
    std::vector<int> dims;
    std::vector<int> degrees;
    int dim = 0;
    int total_degree = 0;
    std::size_t ambient = 1;
    std::vector<MonomialTable> tables;
    std::vector<std::size_t> strides;
  };
  std::shared_ptr<const Data> data_;
};

/// Coefficients of a partially symmetric tensor in the orthonormal basis
/// m_{alpha_1} (x) ... (x) m_{alpha_r}, flattened with the first factor
/// most significant. The Euclidean dot of two coefficient vectors is the
/// Bombieri-Weyl inner product.
class Tensor {
 public:
  explicit Tensor(SpaceSpec space);
  Tensor(SpaceSpec space, std::vector<double> coeffs);

  static Tensor basis(SpaceSpec space, std::size_t flat);

  const SpaceSpec& space() const { return space_; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }
  const std::vector<double>& values() const { return coeffs_; }

  double operator[](std::size_t i) const { return coeffs_[i]; }
  double& operator[](std::size_t i) { return coeffs_[i]; }

  double norm() const;
  Tensor normalized() const;

  Tensor& operator+=(const Tensor& other);
  Tensor& operator-=(const Tensor& other);
  Tensor& operator*=(double s);

  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(Tensor a, double s) { return a *= s; }
  friend Tensor operator*(double s, Tensor a) { return a *= s; }

 private:
  SpaceSpec space_;
  std::vector<double> coeffs_;
};

/// Coefficient vector (l_0, ..., l_n) of the linear form l_0 x_0 + ... + l_n x_n.
using LinearForm = Eigen::VectorXd;

double bw_inner(const Tensor& f, const Tensor& g);

/// arccos <f, g> for unit tensors, in [0, pi].
double angular_distance(const Tensor& f, const Tensor& g);

/// f(l_0, ..., l_n) for a single-factor tensor, by monomial evaluation.
double evaluate(const Tensor& f, const LinearForm& l);

/// Matrix of f -> f o Q on H_{n,d} in the orthonormal monomial basis.
Eigen::MatrixXd induced_action(const Eigen::MatrixXd& q, int d);

/// (f_1 o Q_1) (x) ... (x) (f_r o Q_r), extended linearly to all tensors.
Tensor apply_orthogonal(const Tensor& f, std::span<const Eigen::MatrixXd> qs);

/// Multiplies the mode-th factor of f by m (a factor_dim x factor_dim matrix).
Tensor mode_product(const Tensor& f, int mode, const Eigen::MatrixXd& m);

/// Tensor with i.i.d. standard normal coefficients; a pure function of seed.
Tensor gaussian_tensor(const SpaceSpec& space, std::uint64_t seed);

/// Outer product of per-factor coefficient vectors.
Tensor tensor_product(const SpaceSpec& space, std::span<const std::vector<double>> factors);

}  // namespace svgeom
