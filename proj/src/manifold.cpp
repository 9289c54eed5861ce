#include "svgeom/manifold.hpp"

#include <algorithm>
#include <cmath>

#include "svgeom/errors.hpp"
#include "svgeom/kernels.hpp"
#include "svgeom/random.hpp"

namespace svgeom {

namespace {

SpaceSpec single_factor(int n, int d) { return SpaceSpec({n}, {d}); }

// Raw coefficients (basis x^alpha) of p * l for p of degree from.degree().
std::vector<double> times_linear(const MonomialTable& from, const MonomialTable& to,
                                 std::span<const double> p, const LinearForm& l) {
  std::vector<double> out(to.size(), 0.0);
  std::vector<int> alpha(static_cast<std::size_t>(from.num_vars()));
  for (std::size_t r = 0; r < from.size(); ++r) {
    const auto e = from.exponents(r);
    std::copy(e.begin(), e.end(), alpha.begin());
    for (int k = 0; k < from.num_vars(); ++k) {
      ++alpha[k];
      out[to.rank(alpha)] += p[r] * l(k);
      --alpha[k];
    }
  }
  return out;
}

}  // namespace

SegrePoint make_segre_point(SpaceSpec space, std::vector<LinearForm> forms, int sign) {
  if (forms.size() != static_cast<std::size_t>(space.factors())) {
    throw DomainError("need one linear form per factor");
  }
  if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
  for (int i = 0; i < space.factors(); ++i) {
    if (forms[i].size() != space.n(i) + 1) throw DomainError("linear form has the wrong length");
    if (std::abs(forms[i].norm() - 1.0) > 1e-12) throw DomainError("linear forms must have unit norm");
  }
  LinearForm& first = forms.front();
  for (Eigen::Index k = 0; k < first.size(); ++k) {
    if (first(k) == 0.0) continue;
    if (first(k) < 0.0) {
      first = -first;
      if (space.d(0) % 2 == 1) sign = -sign;
    }
    break;
  }
  return SegrePoint{std::move(space), std::move(forms), sign};
}

SegrePoint random_segre_point(const SpaceSpec& space, std::uint64_t seed) {
  StreamRng rng(seed, 1);
  std::vector<LinearForm> forms;
  for (int i = 0; i < space.factors(); ++i) forms.push_back(random_unit_vector(rng, space.n(i) + 1));
  const int sign = (rng() & 1U) ? 1 : -1;
  return make_segre_point(space, std::move(forms), sign);
}

Tensor veronese_embed(const LinearForm& l, int d) {
  const int n = static_cast<int>(l.size()) - 1;
  if (n < 1 || d < 1) throw DomainError("veronese_embed needs n >= 1 and d >= 1");
  std::vector<double> poly{1.0};
  MonomialTable prev(n, 0);
  for (int k = 1; k <= d; ++k) {
    MonomialTable next(n, k);
    poly = times_linear(prev, next, poly, l);
    prev = std::move(next);
  }
  for (std::size_t r = 0; r < prev.size(); ++r) poly[r] /= prev.sqrt_multinomial(r);
  return Tensor(single_factor(n, d), std::move(poly));
}

void veronese_coeffs(const MonomialTable& table, const LinearForm& l, std::span<double> out) {
  const int vars = table.num_vars();
  const int d = table.degree();
  // powers[k * (d + 1) + p] = l_k^p
  double powers[16 * 33];
  std::vector<double> heap;
  double* pw = powers;
  if (vars * (d + 1) > 16 * 33) {
    heap.resize(static_cast<std::size_t>(vars * (d + 1)));
    pw = heap.data();
  }
  for (int k = 0; k < vars; ++k) {
    pw[k * (d + 1)] = 1.0;
    for (int p = 1; p <= d; ++p) pw[k * (d + 1) + p] = pw[k * (d + 1) + p - 1] * l(k);
  }
  for (std::size_t r = 0; r < table.size(); ++r) {
    const auto alpha = table.exponents(r);
    double v = table.sqrt_multinomial(r);
    for (int k = 0; k < vars; ++k) v *= pw[k * (d + 1) + alpha[k]];
    out[r] = v;
  }
}

Tensor veronese_tangent(const LinearForm& l, const LinearForm& u, int d) {
  const int n = static_cast<int>(l.size()) - 1;
  SpaceSpec s = single_factor(n, d);
  const MonomialTable& t = s.table(0);
  Tensor out(s);
  for (std::size_t r = 0; r < t.size(); ++r) {
    const auto alpha = t.exponents(r);
    double deriv = 0.0;
    for (int k = 0; k <= n; ++k) {
      if (alpha[k] == 0) continue;
      double term = alpha[k] * u(k);
      for (int j = 0; j <= n; ++j) term *= std::pow(l(j), alpha[j] - (j == k ? 1 : 0));
      deriv += term;
    }
    out[r] = t.sqrt_multinomial(r) * deriv;
  }
  return out;
}

Tensor embed(const SegrePoint& p) {
  std::vector<std::vector<double>> factors;
  factors.reserve(p.forms.size());
  for (int i = 0; i < p.space.factors(); ++i) {
    std::vector<double> c(p.space.factor_dim(i));
    veronese_coeffs(p.space.table(i), p.forms[i], c);
    factors.push_back(std::move(c));
  }
  Tensor t = tensor_product(p.space, factors);
  if (p.sign < 0) t *= -1.0;
  return t;
}

Tensor distinguished_point(const SpaceSpec& space) { return Tensor::basis(space, 0); }

std::vector<Tensor> tangent_frame(const SegrePoint& p) {
  const SpaceSpec& s = p.space;
  std::vector<std::vector<double>> base;
  for (int i = 0; i < s.factors(); ++i) {
    std::vector<double> c(s.factor_dim(i));
    veronese_coeffs(s.table(i), p.forms[i], c);
    base.push_back(std::move(c));
  }
  std::vector<Tensor> frame;
  for (int i = 0; i < s.factors(); ++i) {
    // Orthonormal basis of l_i^perp: the trailing columns of a Householder
    // completion of l_i.
    const LinearForm& l = p.forms[i];
    Eigen::HouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(l)};
    const Eigen::MatrixXd q = qr.householderQ();
    for (int k = 1; k <= s.n(i); ++k) {
      const LinearForm u = q.col(k);
      Tensor tan = veronese_tangent(l, u, s.d(i));
      tan *= 1.0 / std::sqrt(static_cast<double>(s.d(i)));
      std::vector<std::vector<double>> factors = base;
      factors[i] = tan.values();
      Tensor t = tensor_product(s, factors);
      if (p.sign < 0) t *= -1.0;
      frame.push_back(std::move(t));
    }
  }
  return frame;
}

NormalSplit normal_split_E(const SpaceSpec& space) {
  NormalSplit split(space);
  const int r = space.factors();
  split.roles_.assign(space.ambient_dim(), NormalSplit::Role::p);
  split.roles_[0] = NormalSplit::Role::e;
  std::vector<std::size_t> ranks(static_cast<std::size_t>(r), 0);

  for (int i = 0; i < r; ++i) {
    split.tangent_offsets_.push_back(static_cast<int>(split.tangent_.size()));
    const MonomialTable& t = space.table(i);
    std::vector<int> alpha(static_cast<std::size_t>(t.num_vars()), 0);
    for (int k = 1; k <= space.n(i); ++k) {
      std::fill(alpha.begin(), alpha.end(), 0);
      alpha[0] = space.d(i) - 1;
      alpha[k] = 1;
      std::fill(ranks.begin(), ranks.end(), 0);
      ranks[i] = t.rank(alpha);
      const std::size_t flat = space.flat_index(ranks);
      split.tangent_.push_back(flat);
      split.tangent_labels_.push_back({i, k});
      split.roles_[flat] = NormalSplit::Role::tangent;
    }
  }

  for (int i = 0; i < r; ++i) {
    if (space.d(i) < 2) continue;
    const MonomialTable& t = space.table(i);
    std::vector<int> alpha(static_cast<std::size_t>(t.num_vars()), 0);
    for (int k = 1; k <= space.n(i); ++k) {
      for (int l = k; l <= space.n(i); ++l) {
        std::fill(alpha.begin(), alpha.end(), 0);
        alpha[0] = space.d(i) - 2;
        alpha[k] += 1;
        alpha[l] += 1;
        std::fill(ranks.begin(), ranks.end(), 0);
        ranks[i] = t.rank(alpha);
        const std::size_t flat = space.flat_index(ranks);
        split.w_.push_back(flat);
        split.w_labels_.push_back({i, k, l});
        split.roles_[flat] = NormalSplit::Role::w;
      }
    }
  }

  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      for (int k = 1; k <= space.n(i); ++k) {
        for (int l = 1; l <= space.n(j); ++l) {
          std::fill(ranks.begin(), ranks.end(), 0);
          ranks[i] = static_cast<std::size_t>(k);  // (d_i - 1, e_k) has rank k
          ranks[j] = static_cast<std::size_t>(l);
          const std::size_t flat = space.flat_index(ranks);
          split.g_.push_back(flat);
          split.g_labels_.push_back({i, j, k, l});
          split.roles_[flat] = NormalSplit::Role::g;
        }
      }
    }
  }

  split.p_dim_ = space.ambient_dim() - 1 - split.tangent_.size() - split.w_.size() - split.g_.size();
  return split;
}

bool NormalSplit::in_p(const Tensor& f, double tol) const {
  const double scale = std::max(1.0, f.norm());
  for (std::size_t i = 0; i < roles_.size(); ++i) {
    if (roles_[i] != Role::p && std::abs(f[i]) > tol * scale) return false;
  }
  return true;
}

bool NormalSplit::is_normal(const Tensor& f, double tol) const {
  const double scale = std::max(1.0, f.norm());
  if (std::abs(f[0]) > tol * scale) return false;
  for (std::size_t pos : tangent_) {
    if (std::abs(f[pos]) > tol * scale) return false;
  }
  return true;
}

Components project_components(const Tensor& f, const NormalSplit& split) {
  if (!(f.space() == split.space())) throw DomainError("tensor and split live in different spaces");
  Components c;
  c.e = f[0];
  for (std::size_t pos : split.tangent_positions()) c.tangent.push_back(f[pos]);
  for (std::size_t pos : split.w_positions()) c.w.push_back(f[pos]);
  for (std::size_t pos : split.g_positions()) c.g.push_back(f[pos]);
  double p2 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (split.role(i) == NormalSplit::Role::p) p2 += f[i] * f[i];
  }
  c.p_norm = std::sqrt(p2);
  return c;
}

namespace {

// Alternating maximization of |<F, l_1^{d_1} (x) ... (x) l_r^{d_r}>|.
class RankOneSolver {
 public:
  explicit RankOneSolver(const Tensor& f) : f_(f), s_(f.space()) {
    const int r = s_.factors();
    coeffs_.resize(static_cast<std::size_t>(r));
    contraction_.resize(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
      coeffs_[i].resize(s_.factor_dim(i));
      contraction_[i].resize(s_.factor_dim(i));
    }
    ranks_.resize(static_cast<std::size_t>(r));
  }

  // Exact single-factor solve makes one start sufficient.
  bool exact() const { return s_.factors() == 1 && s_.d(0) <= 2; }

  struct Outcome {
    double correlation;
    std::vector<LinearForm> forms;
    bool converged;
    int iterations;
  };

  Outcome run(std::vector<LinearForm> forms, const RankOneOptions& opt) {
    forms_ = std::move(forms);
    for (int i = 0; i < s_.factors(); ++i) veronese_coeffs(s_.table(i), forms_[i], coeffs_[i]);
    double g = correlation();
    int it = 0;
    bool converged = false;
    while (it < opt.max_iterations) {
      ++it;
      double g_new = g;
      for (int i = 0; i < s_.factors(); ++i) g_new = update_factor(i, g_new);
      const double change = std::abs(std::abs(g_new) - std::abs(g));
      g = g_new;
      if (opt.stop_above && std::abs(g) > *opt.stop_above) {
        converged = true;
        break;
      }
      if (change <= opt.tol || exact()) {
        converged = true;
        break;
      }
    }
    return {g, forms_, converged, it};
  }

 private:
  void contract_all_but(int skip) {
    std::vector<double>& out = contraction_[skip];
    std::fill(out.begin(), out.end(), 0.0);
    const int r = s_.factors();
    std::fill(ranks_.begin(), ranks_.end(), 0);
    // The last factor varies fastest; when it is not the skipped one the
    // innermost loop is a dot product against its coefficients.
    const int last = r - 1;
    if (skip != last) {
      const std::size_t inner = s_.factor_dim(last);
      const std::span<const double> data = f_.coeffs();
      for (std::size_t base = 0; base < f_.size(); base += inner) {
        s_.unflatten(base, ranks_);
        double w = 1.0;
        for (int j = 0; j < last; ++j) {
          if (j != skip) w *= coeffs_[j][ranks_[j]];
        }
        if (w == 0.0) continue;
        out[ranks_[skip]] += w * kernels::dot(data.subspan(base, inner), coeffs_[last]);
      }
    } else {
      const std::size_t inner = s_.factor_dim(last);
      const std::span<const double> data = f_.coeffs();
      for (std::size_t base = 0; base < f_.size(); base += inner) {
        s_.unflatten(base, ranks_);
        double w = 1.0;
        for (int j = 0; j < last; ++j) w *= coeffs_[j][ranks_[j]];
        if (w == 0.0) continue;
        kernels::axpy(w, data.subspan(base, inner), out);
      }
    }
  }

  double correlation() {
    contract_all_but(0);
    return kernels::dot(contraction_[0], coeffs_[0]);
  }

  // Value and gradient of the polynomial with orthonormal coefficients c at l.
  double value_and_gradient(const MonomialTable& t, std::span<const double> c, const LinearForm& l,
                            Eigen::VectorXd& grad) const {
    const int vars = t.num_vars();
    grad.setZero(vars);
    double value = 0.0;
    for (std::size_t r = 0; r < t.size(); ++r) {
      if (c[r] == 0.0) continue;
      const auto alpha = t.exponents(r);
      const double coef = c[r] * t.sqrt_multinomial(r);
      double mono = coef;
      for (int k = 0; k < vars; ++k) mono *= std::pow(l(k), alpha[k]);
      value += mono;
      for (int k = 0; k < vars; ++k) {
        if (alpha[k] == 0) continue;
        double part = coef * alpha[k];
        for (int j = 0; j < vars; ++j) part *= std::pow(l(j), alpha[j] - (j == k ? 1 : 0));
        grad(k) += part;
      }
    }
    return value;
  }

  double update_factor(int i, double g) {
    contract_all_but(i);
    const std::vector<double>& c = contraction_[i];
    const MonomialTable& t = s_.table(i);
    const int d = s_.d(i);
    LinearForm& l = forms_[i];
    if (d == 1) {
      Eigen::Map<const Eigen::VectorXd> lin(c.data(), static_cast<Eigen::Index>(c.size()));
      const double nrm = lin.norm();
      if (nrm > 0.0) l = lin / nrm;
    } else if (d == 2) {
      const int vars = t.num_vars();
      Eigen::MatrixXd a(vars, vars);
      for (std::size_t r = 0; r < t.size(); ++r) {
        const auto alpha = t.exponents(r);
        int k = -1;
        int m = -1;
        for (int v = 0; v < vars; ++v) {
          for (int rep = 0; rep < alpha[v]; ++rep) (k < 0 ? k : m) = v;
        }
        if (k == m) {
          a(k, k) = c[r];
        } else {
          a(k, m) = a(m, k) = c[r] / std::sqrt(2.0);
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
      if (vars <= 3) {
        eig.computeDirect(a);
      } else {
        eig.compute(a);
      }
      const Eigen::VectorXd& ev = eig.eigenvalues();
      const Eigen::Index top = std::abs(ev(0)) > std::abs(ev(vars - 1)) ? 0 : vars - 1;
      l = eig.eigenvectors().col(top).normalized();
    } else {
      const double s = g < 0.0 ? -1.0 : 1.0;
      double fnorm = 0.0;
      for (double x : c) fnorm += x * x;
      fnorm = std::sqrt(fnorm);
      const double shift = d * (d - 1) * fnorm;
      Eigen::VectorXd grad;
      double current = s * value_and_gradient(t, c, l, grad);
      for (int inner = 0; inner < 8; ++inner) {
        Eigen::VectorXd step = s * grad;
        if (step.norm() == 0.0) break;
        LinearForm cand = step.normalized();
        Eigen::VectorXd cand_grad;
        double cand_val = s * value_and_gradient(t, c, cand, cand_grad);
        if (cand_val < current) {
          // The shifted step is monotone for any shift bounding the Hessian.
          cand = (step + shift * l).normalized();
          cand_val = s * value_and_gradient(t, c, cand, cand_grad);
        }
        if (cand_val <= current) break;
        const double moved = (cand - l).norm();
        l = cand;
        grad = cand_grad;
        current = cand_val;
        if (moved < 1e-14) break;
      }
    }
    veronese_coeffs(t, l, coeffs_[i]);
    return kernels::dot(c, coeffs_[i]);
  }

  const Tensor& f_;
  const SpaceSpec& s_;
  std::vector<LinearForm> forms_;
  std::vector<std::vector<double>> coeffs_;
  std::vector<std::vector<double>> contraction_;
  std::vector<std::size_t> ranks_;
};

std::vector<LinearForm> greedy_start(const Tensor& f) {
  const SpaceSpec& s = f.space();
  std::size_t best = 0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (std::abs(f[i]) > std::abs(f[best])) best = i;
  }
  std::vector<std::size_t> ranks(static_cast<std::size_t>(s.factors()));
  s.unflatten(best, ranks);
  std::vector<LinearForm> forms;
  for (int i = 0; i < s.factors(); ++i) {
    const auto alpha = s.table(i).exponents(ranks[i]);
    const auto top = std::max_element(alpha.begin(), alpha.end()) - alpha.begin();
    LinearForm l = LinearForm::Zero(s.n(i) + 1);
    l(top) = 1.0;
    forms.push_back(std::move(l));
  }
  return forms;
}

}  // namespace

RankOneResult rank_one_distance(const Tensor& f, const RankOneOptions& options) {
  const double nrm = f.norm();
  if (std::abs(nrm - 1.0) > 1e-9) throw DomainError("rank_one_distance needs a unit tensor");
  const SpaceSpec& s = f.space();
  if (s.factors() == 2 && s.d(0) == 1 && s.d(1) == 1) {
    // A matrix: the best rank-one approximation is the top singular pair.
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        f.coeffs().data(), s.n(0) + 1, s.n(1) + 1);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    std::vector<LinearForm> forms{svd.matrixU().col(0).normalized(), svd.matrixV().col(0).normalized()};
    RankOneResult result{0.0, 0.0, make_segre_point(s, std::move(forms)), true, 1};
    const Tensor p = embed(result.point);
    result.distance = 2.0 * std::asin(std::min(1.0, (f - p).norm() / 2.0));
    result.correlation = bw_inner(f, p);
    return result;
  }
  RankOneSolver solver(f);
  const int restarts = solver.exact() ? 1 : std::max(1, options.restarts);

  RankOneSolver::Outcome best{0.0, {}, false, 0};
  bool have = false;
  int total_iterations = 0;
  for (int start = 0; start < restarts; ++start) {
    std::vector<LinearForm> init;
    if (start == 0) {
      init = greedy_start(f);
    } else {
      StreamRng rng(options.seed, static_cast<std::uint64_t>(start));
      for (int i = 0; i < s.factors(); ++i) init.push_back(random_unit_vector(rng, s.n(i) + 1));
    }
    RankOneSolver::Outcome out = solver.run(std::move(init), options);
    total_iterations += out.iterations;
    if (!have || std::abs(out.correlation) > std::abs(best.correlation)) {
      best = std::move(out);
      have = true;
    }
    if (options.stop_above && std::abs(best.correlation) > *options.stop_above) break;
  }

  std::vector<LinearForm> forms = best.forms;
  for (auto& l : forms) l.normalize();
  const int sign = best.correlation < 0.0 ? -1 : 1;
  RankOneResult result{0.0, std::abs(best.correlation), make_segre_point(s, std::move(forms), sign),
                       best.converged, total_iterations};
  // 2 asin(|F - P| / 2) is the same angle as arccos <F, P> but stays
  // accurate when F is close to the manifold.
  const Tensor p = embed(result.point);
  const double chord = (f - p).norm();
  result.distance = 2.0 * std::asin(std::min(1.0, chord / 2.0));
  result.correlation = bw_inner(f, p);
  return result;
}

}  // namespace svgeom
