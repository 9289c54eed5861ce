#include "svgeom/weingarten.hpp"

#include <cmath>
#include <sstream>

#include "svgeom/errors.hpp"
#include "svgeom/geodesics.hpp"

namespace svgeom {

WeingartenMatrix::WeingartenMatrix(SpaceSpec space, Eigen::MatrixXd entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
  if (entries_.rows() != space_.dim() || entries_.cols() != space_.dim()) {
    throw DomainError("Weingarten matrix must be n x n");
  }
}

int WeingartenMatrix::block_offset(int i) const {
  int off = 0;
  for (int k = 0; k < i; ++k) off += space_.n(k);
  return off;
}

Eigen::MatrixXd WeingartenMatrix::block(int i, int j) const {
  return entries_.block(block_offset(i), block_offset(j), space_.n(i), space_.n(j));
}

std::string_view profile_name(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::def_d: return "def-d";
    case ProfileKind::weingarten: return "weingarten";
    case ProfileKind::corollary: return "corollary";
    case ProfileKind::custom: break;
  }
  return "custom";
}

std::optional<ProfileKind> parse_profile(std::string_view name) {
  if (name == "def-d") return ProfileKind::def_d;
  if (name == "weingarten") return ProfileKind::weingarten;
  if (name == "corollary") return ProfileKind::corollary;
  return std::nullopt;
}

VarianceProfile VarianceProfile::of_kind(ProfileKind kind, std::span<const int> degrees) {
  VarianceProfile p;
  p.kind = kind;
  for (int d : degrees) {
    if (d < 1) throw DomainError("degrees must be positive");
    Rational off;
    switch (kind) {
      case ProfileKind::def_d: off = Rational(d) * (d - 1); break;
      case ProfileKind::weingarten: off = Rational(d - 1, d); break;
      case ProfileKind::corollary: off = Rational(d) * (d - 1) / 4; break;
      case ProfileKind::custom: throw DomainError("custom profiles have no defaults");
    }
    p.offdiag.push_back(off);
    p.diag.push_back(off * 2);
  }
  return p;
}

WeingartenMatrix assemble_from_coordinates(const NormalSplit& split, std::span<const double> w,
                                           std::span<const double> g) {
  const auto wl = split.w_labels();
  const auto gl = split.g_labels();
  if (w.size() != wl.size() || g.size() != gl.size()) throw DomainError("coordinate count mismatch");
  const SpaceSpec& s = split.space();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(s.dim(), s.dim());
  for (std::size_t q = 0; q < wl.size(); ++q) {
    const auto& lab = wl[q];
    const int d = s.d(lab.factor);
    const int off = split.tangent_offset(lab.factor) - 1;
    double v = std::sqrt(static_cast<double>(d - 1) / d) * w[q];
    if (lab.k == lab.l) {
      m(off + lab.k, off + lab.k) = std::sqrt(2.0) * v;
    } else {
      m(off + lab.k, off + lab.l) = v;
      m(off + lab.l, off + lab.k) = v;
    }
  }
  for (std::size_t q = 0; q < gl.size(); ++q) {
    const auto& lab = gl[q];
    const int a = split.tangent_offset(lab.i) + lab.k - 1;
    const int b = split.tangent_offset(lab.j) + lab.l - 1;
    m(a, b) = g[q];
    m(b, a) = g[q];
  }
  return WeingartenMatrix(s, std::move(m));
}

WeingartenMatrix assemble_weingarten(const Tensor& f, const NormalSplit& split) {
  if (!(f.space() == split.space())) throw DomainError("tensor and split live in different spaces");
  if (!split.is_normal(f, 1e-10)) throw DomainError("F must be orthogonal to E and to T_E");
  std::vector<double> w;
  std::vector<double> g;
  for (std::size_t pos : split.w_positions()) w.push_back(f[pos]);
  for (std::size_t pos : split.g_positions()) g.push_back(f[pos]);
  return assemble_from_coordinates(split, w, g);
}

WeingartenMatrix veronese_weingarten(const Tensor& f) {
  if (f.space().factors() != 1) throw DomainError("veronese_weingarten takes a single-factor tensor");
  return assemble_weingarten(f, normal_split_E(f.space()));
}

WeingartenMatrix sample_gaussian_weingarten(const NormalSplit& split, std::uint64_t seed,
                                            std::uint64_t stream) {
  StreamRng rng(seed, stream);
  std::vector<double> w(split.w_positions().size());
  std::vector<double> g(split.g_positions().size());
  for (double& x : w) x = rng.normal();
  for (double& x : g) x = rng.normal();
  return assemble_from_coordinates(split, w, g);
}

Eigen::MatrixXd sample_block_matrix(std::span<const int> sizes, const VarianceProfile& profile,
                                    StreamRng& rng) {
  if (sizes.size() != profile.groups() || profile.diag.size() != profile.groups()) {
    throw DomainError("profile does not match the block structure");
  }
  std::vector<int> offsets;
  std::vector<int> group_of;
  int total = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    offsets.push_back(total);
    for (int i = 0; i < sizes[k]; ++i) group_of.push_back(static_cast<int>(k));
    total += sizes[k];
  }
  std::vector<double> sd_off, sd_diag;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    sd_off.push_back(std::sqrt(to_double(profile.offdiag[k])));
    sd_diag.push_back(std::sqrt(to_double(profile.diag[k])));
  }
  const double sd_cross = std::sqrt(to_double(profile.cross));
  Eigen::MatrixXd m(total, total);
  for (int a = 0; a < total; ++a) {
    for (int b = a; b < total; ++b) {
      double sd;
      if (a == b) {
        sd = sd_diag[group_of[a]];
      } else if (group_of[a] == group_of[b]) {
        sd = sd_off[group_of[a]];
      } else {
        sd = sd_cross;
      }
      const double x = sd * rng.normal();
      m(a, b) = x;
      m(b, a) = x;
    }
  }
  return m;
}

WeingartenMatrix sample_direct_weingarten(const SpaceSpec& space, ScaleConvention scale,
                                          std::uint64_t seed, std::uint64_t stream) {
  const auto kind = scale == ScaleConvention::derived ? ProfileKind::weingarten : ProfileKind::corollary;
  const auto profile = VarianceProfile::of_kind(kind, space.degrees());
  StreamRng rng(seed, stream);
  return WeingartenMatrix(space, sample_block_matrix(space.dims(), profile, rng));
}

namespace {

double small_det(const Eigen::MatrixXd& m) {
  switch (m.rows()) {
    case 1: return m(0, 0);
    case 2: return m.topLeftCorner<2, 2>().determinant();
    case 3: return m.topLeftCorner<3, 3>().determinant();
    case 4: return m.topLeftCorner<4, 4>().determinant();
    default: return m.partialPivLu().determinant();
  }
}

}  // namespace

double principal_minor_sum(const Eigen::MatrixXd& m, int k) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw DomainError("matrix must be square");
  if (k < 0 || k > n) throw DomainError("minor order must lie in [0, n]");
  if (k == 0) return 1.0;
  if (binomial(n, k) > 5'000'000) throw ResourceError("too many principal minors to enumerate");
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  Eigen::MatrixXd sub(k, k);
  double sum = 0.0;
  while (true) {
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) sub(a, b) = m(idx[a], idx[b]);
    sum += small_det(sub);
    int p = k - 1;
    while (p >= 0 && idx[p] == n - k + p) --p;
    if (p < 0) break;
    ++idx[p];
    for (int q = p + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
  }
  return sum;
}

double finite_difference_sff(const NormalSplit& split, const Eigen::VectorXd& v, const Tensor& f,
                             double h) {
  const SpaceSpec& s = split.space();
  if (v.size() != s.dim()) throw DomainError("tangent vector has the wrong length");
  std::vector<double> speeds;
  std::vector<Eigen::VectorXd> dirs;
  double total = 0.0;
  for (int i = 0; i < s.factors(); ++i) {
    Eigen::VectorXd vi = v.segment(split.tangent_offset(i), s.n(i));
    const double theta = vi.norm();
    total += theta * theta;
    speeds.push_back(theta);
    dirs.push_back(theta > 0.0 ? Eigen::VectorXd(vi / theta) : Eigen::VectorXd(Eigen::VectorXd::Unit(s.n(i), 0)));
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("tangent vector must be a unit vector");
  const GeodesicSpec g = make_geodesic(s, speeds, {}, dirs);
  return bw_inner(geodesic_acceleration_numeric(g, h), f);
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    for (Eigen::Index b = 0; b < m.cols(); ++b) {
      if (b) os << ',';
      os << m(a, b);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace svgeom
