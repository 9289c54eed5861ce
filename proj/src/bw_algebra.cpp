#include "svgeom/bw_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "svgeom/errors.hpp"
#include "svgeom/kernels.hpp"
#include "svgeom/random.hpp"

namespace svgeom {

std::size_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > std::numeric_limits<std::size_t>::max()) {
      throw ResourceError("binomial coefficient overflows 64 bits");
    }
  }
  return static_cast<std::size_t>(r);
}

double multinomial(std::span<const int> alpha) {
  // Product of binomials C(a_0 + ... + a_j, a_j).
  double value = 1.0;
  int partial = 0;
  for (int a : alpha) {
    partial += a;
    value *= static_cast<double>(binomial(partial, a));
  }
  return value;
}

int MultiIndex::degree() const { return std::accumulate(entries.begin(), entries.end(), 0); }

namespace {

void generate(int pos, int remaining, std::vector<int>& current, std::vector<int>& out) {
  const int last = static_cast<int>(current.size()) - 1;
  if (pos == last) {
    current[pos] = remaining;
    out.insert(out.end(), current.begin(), current.end());
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    current[pos] = v;
    generate(pos + 1, remaining - v, current, out);
  }
}

}  // namespace

MonomialTable::MonomialTable(int n, int d) : n_(n), d_(d) {
  if (n < 0 || d < 0) throw DomainError("monomial table needs n >= 0 and d >= 0");
  size_ = binomial(n + d, n);
  exponents_.reserve(size_ * static_cast<std::size_t>(n + 1));
  std::vector<int> current(static_cast<std::size_t>(n + 1), 0);
  generate(0, d, current, exponents_);
  sqrt_multinomial_.resize(size_);
  for (std::size_t r = 0; r < size_; ++r) sqrt_multinomial_[r] = std::sqrt(multinomial(exponents(r)));
}

std::size_t MonomialTable::rank(std::span<const int> alpha) const {
  if (alpha.size() != static_cast<std::size_t>(n_ + 1)) {
    throw DomainError("multi-index has " + std::to_string(alpha.size()) + " entries, expected " +
                      std::to_string(n_ + 1));
  }
  int total = 0;
  for (int a : alpha) {
    if (a < 0) throw DomainError("multi-index entries must be nonnegative");
    total += a;
  }
  if (total != d_) throw DomainError("multi-index degree does not match");
  // Indices with a larger entry at the first differing position come first.
  std::size_t r = 0;
  int remaining = d_;
  for (int j = 0; j < n_; ++j) {
    const int gap = remaining - alpha[j];
    if (gap >= 1) r += binomial(gap - 1 + n_ - j, n_ - j);
    remaining -= alpha[j];
  }
  return r;
}

std::size_t basis_rank(const MultiIndex& alpha, int n, int d) {
  return MonomialTable(n, d).rank(alpha.entries);
}

MultiIndex basis_unrank(std::size_t rank, int n, int d) {
  if (rank >= binomial(n + d, n)) throw DomainError("rank out of range");
  MultiIndex out{std::vector<int>(static_cast<std::size_t>(n + 1), 0)};
  int remaining = d;
  for (int j = 0; j < n; ++j) {
    // Walk values downward; each value v covers C(remaining - v + n - j - 1, n - j - 1) indices.
    for (int v = remaining; v >= 0; --v) {
      const std::size_t block = binomial(remaining - v + n - j - 1, n - j - 1);
      if (rank < block) {
        out.entries[j] = v;
        remaining -= v;
        break;
      }
      rank -= block;
    }
  }
  out.entries[n] = remaining;
  return out;
}

SpaceSpec::SpaceSpec(std::vector<int> dims, std::vector<int> degrees) {
  if (dims.empty()) throw DomainError("space needs at least one factor");
  if (dims.size() != degrees.size()) throw DomainError("dims and degrees differ in length");
  auto data = std::make_shared<Data>();
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 1) throw DomainError("all n_i must be >= 1");
    if (degrees[i] < 1) throw DomainError("all d_i must be >= 1");
  }
  data->dims = std::move(dims);
  data->degrees = std::move(degrees);
  const std::size_t r = data->dims.size();
  data->tables.reserve(r);
  for (std::size_t i = 0; i < r; ++i) {
    data->dim += data->dims[i];
    data->total_degree += data->degrees[i];
    const std::size_t fd = binomial(data->dims[i] + data->degrees[i], data->dims[i]);
    if (fd > max_ambient_dim || data->ambient > max_ambient_dim / fd) {
      throw ResourceError("ambient dimension exceeds " + std::to_string(max_ambient_dim));
    }
    data->ambient *= fd;
  }
  for (std::size_t i = 0; i < r; ++i) data->tables.emplace_back(data->dims[i], data->degrees[i]);
  data->strides.assign(r, 1);
  for (std::size_t i = r - 1; i > 0; --i) data->strides[i - 1] = data->strides[i] * data->tables[i].size();
  data_ = std::move(data);
}

std::size_t SpaceSpec::flat_index(std::span<const std::size_t> ranks) const {
  std::size_t flat = 0;
  for (int i = 0; i < factors(); ++i) flat += ranks[i] * data_->strides[i];
  return flat;
}

void SpaceSpec::unflatten(std::size_t flat, std::span<std::size_t> ranks) const {
  for (int i = 0; i < factors(); ++i) {
    ranks[i] = flat / data_->strides[i];
    flat %= data_->strides[i];
  }
}

bool SpaceSpec::operator==(const SpaceSpec& other) const {
  return data_ == other.data_ || (dims() == other.dims() && degrees() == other.degrees());
}

Tensor::Tensor(SpaceSpec space) : space_(std::move(space)), coeffs_(space_.ambient_dim(), 0.0) {}

Tensor::Tensor(SpaceSpec space, std::vector<double> coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != space_.ambient_dim()) {
    throw DomainError("coefficient count " + std::to_string(coeffs_.size()) +
                      " does not match ambient dimension " + std::to_string(space_.ambient_dim()));
  }
}

Tensor Tensor::basis(SpaceSpec space, std::size_t flat) {
  Tensor t(std::move(space));
  if (flat >= t.size()) throw DomainError("basis index out of range");
  t[flat] = 1.0;
  return t;
}

double Tensor::norm() const { return std::sqrt(kernels::squared_norm(coeffs_)); }

Tensor Tensor::normalized() const {
  const double nrm = norm();
  if (nrm == 0.0) throw DomainError("cannot normalize the zero tensor");
  Tensor out = *this;
  kernels::scale(1.0 / nrm, out.coeffs_);
  return out;
}

Tensor& Tensor::operator+=(const Tensor& other) {
  if (!(space_ == other.space_)) throw DomainError("tensor spaces differ");
  kernels::axpy(1.0, other.coeffs_, coeffs_);
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& other) {
  if (!(space_ == other.space_)) throw DomainError("tensor spaces differ");
  kernels::axpy(-1.0, other.coeffs_, coeffs_);
  return *this;
}

Tensor& Tensor::operator*=(double s) {
  kernels::scale(s, coeffs_);
  return *this;
}

double bw_inner(const Tensor& f, const Tensor& g) {
  if (!(f.space() == g.space())) throw DomainError("inner product of tensors from different spaces");
  return kernels::dot(f.coeffs(), g.coeffs());
}

double angular_distance(const Tensor& f, const Tensor& g) {
  constexpr double tol = 1e-9;
  if (std::abs(f.norm() - 1.0) > tol || std::abs(g.norm() - 1.0) > tol) {
    throw DomainError("angular distance needs unit-norm tensors");
  }
  return std::acos(std::clamp(bw_inner(f, g), -1.0, 1.0));
}

double evaluate(const Tensor& f, const LinearForm& l) {
  const SpaceSpec& s = f.space();
  if (s.factors() != 1) throw DomainError("evaluate needs a single-factor tensor");
  const MonomialTable& t = s.table(0);
  if (l.size() != t.num_vars()) throw DomainError("linear form has the wrong number of variables");
  double value = 0.0;
  for (std::size_t r = 0; r < t.size(); ++r) {
    const auto alpha = t.exponents(r);
    double mono = t.sqrt_multinomial(r);
    for (int k = 0; k < t.num_vars(); ++k) mono *= std::pow(l(k), alpha[k]);
    value += f[r] * mono;
  }
  return value;
}

namespace {

// Raw monomial coefficients (basis x^alpha) of p * l, p homogeneous of degree from.degree().
std::vector<double> multiply_linear(const MonomialTable& from, const MonomialTable& to,
                                    std::span<const double> p, const Eigen::VectorXd& l) {
  std::vector<double> out(to.size(), 0.0);
  std::vector<int> alpha(static_cast<std::size_t>(from.num_vars()));
  for (std::size_t r = 0; r < from.size(); ++r) {
    if (p[r] == 0.0) continue;
    const auto e = from.exponents(r);
    std::copy(e.begin(), e.end(), alpha.begin());
    for (int k = 0; k < from.num_vars(); ++k) {
      if (l(k) == 0.0) continue;
      ++alpha[k];
      out[to.rank(alpha)] += p[r] * l(k);
      --alpha[k];
    }
  }
  return out;
}

void check_orthogonal(const Eigen::MatrixXd& q) {
  if (q.rows() != q.cols()) throw DomainError("orthogonal matrix must be square");
  const double err = (q.transpose() * q - Eigen::MatrixXd::Identity(q.rows(), q.cols())).cwiseAbs().maxCoeff();
  if (err > 1e-10) throw DomainError("matrix is not orthogonal within 1e-10");
}

}  // namespace

Eigen::MatrixXd induced_action(const Eigen::MatrixXd& q, int d) {
  const int n = static_cast<int>(q.rows()) - 1;
  std::vector<MonomialTable> tables;
  tables.reserve(static_cast<std::size_t>(d + 1));
  for (int k = 0; k <= d; ++k) tables.emplace_back(n, k);
  const MonomialTable& top = tables.back();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(top.size()), static_cast<Eigen::Index>(top.size()));
  for (std::size_t b = 0; b < top.size(); ++b) {
    const auto beta = top.exponents(b);
    // (Qx)^beta = prod_j (row_j(Q) . x)^{beta_j}, expanded one linear factor at a time.
    std::vector<double> poly{1.0};
    int degree = 0;
    for (int j = 0; j <= n; ++j) {
      const Eigen::VectorXd row = q.row(j).transpose();
      for (int rep = 0; rep < beta[j]; ++rep) {
        poly = multiply_linear(tables[degree], tables[degree + 1], poly, row);
        ++degree;
      }
    }
    for (std::size_t a = 0; a < top.size(); ++a) {
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          top.sqrt_multinomial(b) * poly[a] / top.sqrt_multinomial(a);
    }
  }
  return m;
}

Tensor mode_product(const Tensor& f, int mode, const Eigen::MatrixXd& m) {
  const SpaceSpec& s = f.space();
  const auto dim = static_cast<Eigen::Index>(s.factor_dim(mode));
  if (m.rows() != dim || m.cols() != dim) throw DomainError("mode matrix has the wrong shape");
  const std::size_t stride = s.stride(mode);
  const std::size_t block = stride * static_cast<std::size_t>(dim);
  const std::size_t outer = s.ambient_dim() / block;
  Tensor out(s);
  Eigen::VectorXd fiber(dim);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const std::size_t base = o * block + inner;
      for (Eigen::Index a = 0; a < dim; ++a) fiber(a) = f[base + static_cast<std::size_t>(a) * stride];
      const Eigen::VectorXd image = m * fiber;
      for (Eigen::Index a = 0; a < dim; ++a) out[base + static_cast<std::size_t>(a) * stride] = image(a);
    }
  }
  return out;
}

Tensor apply_orthogonal(const Tensor& f, std::span<const Eigen::MatrixXd> qs) {
  const SpaceSpec& s = f.space();
  if (qs.size() != static_cast<std::size_t>(s.factors())) {
    throw DomainError("need one orthogonal matrix per factor");
  }
  Tensor out = f;
  for (int i = 0; i < s.factors(); ++i) {
    if (qs[i].rows() != s.n(i) + 1) throw DomainError("orthogonal matrix must have size n_i + 1");
    check_orthogonal(qs[i]);
    out = mode_product(out, i, induced_action(qs[i], s.d(i)));
  }
  return out;
}

Tensor gaussian_tensor(const SpaceSpec& space, std::uint64_t seed) {
  StreamRng rng(seed, 0);
  Tensor t(space);
  for (double& c : t.coeffs()) c = rng.normal();
  return t;
}

Tensor tensor_product(const SpaceSpec& space, std::span<const std::vector<double>> factors) {
  if (factors.size() != static_cast<std::size_t>(space.factors())) {
    throw DomainError("need one coefficient vector per factor");
  }
  for (int i = 0; i < space.factors(); ++i) {
    if (factors[i].size() != space.factor_dim(i)) throw DomainError("factor coefficient length mismatch");
  }
  // Build the product outward from the last factor.
  std::vector<double> acc = factors.back();
  for (int i = space.factors() - 2; i >= 0; --i) {
    std::vector<double> next;
    next.reserve(acc.size() * factors[i].size());
    for (double a : factors[i]) {
      for (double b : acc) next.push_back(a * b);
    }
    acc = std::move(next);
  }
  return Tensor(space, std::move(acc));
}

Eigen::MatrixXd random_orthogonal(StreamRng& rng, Eigen::Index size) {
  Eigen::MatrixXd g(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    for (Eigen::Index i = 0; i < size; ++i) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < size; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

Eigen::VectorXd random_unit_vector(StreamRng& rng, Eigen::Index size) {
  Eigen::VectorXd v = gaussian_vector(rng, size);
  double nrm = v.norm();
  while (nrm == 0.0) {
    v = gaussian_vector(rng, size);
    nrm = v.norm();
  }
  return v / nrm;
}

}  // namespace svgeom
