#include "svgeom/matchings.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "svgeom/errors.hpp"

namespace svgeom {

int MatchingProblem::total() const { return std::accumulate(group_sizes.begin(), group_sizes.end(), 0); }

int MatchingProblem::group_of(int vertex) const {
  for (std::size_t k = 0; k < group_sizes.size(); ++k) {
    if (vertex < group_sizes[k]) return static_cast<int>(k);
    vertex -= group_sizes[k];
  }
  throw DomainError("vertex out of range");
}

namespace {

void validate(const MatchingProblem& p) {
  if (p.profile.groups() != p.group_sizes.size()) throw DomainError("profile and group sizes differ in length");
  for (int s : p.group_sizes)
    if (s < 0) throw DomainError("group sizes must be nonnegative");
}

/// Memoized sum over matchings; weight(k, j) is the edge weight between groups.
template <class Value, class Weight>
Value memo_matchings(const std::vector<int>& sizes, Weight weight) {
  std::map<std::vector<int>, Value> memo;
  std::function<Value(std::vector<int>&)> rec = [&](std::vector<int>& counts) -> Value {
    const auto first = std::find_if(counts.begin(), counts.end(), [](int c) { return c > 0; });
    if (first == counts.end()) return Value(1);
    if (auto it = memo.find(counts); it != memo.end()) return it->second;
    const auto k = static_cast<std::size_t>(first - counts.begin());
    Value total(0);
    --counts[k];
    for (std::size_t j = k; j < counts.size(); ++j) {
      if (counts[j] == 0) continue;
      const Value w = weight(k, j);
      if (w == 0) continue;
      const int ways = counts[j];
      --counts[j];
      total += Value(ways) * w * rec(counts);
      ++counts[j];
    }
    ++counts[k];
    memo.emplace(counts, total);
    return total;
  };
  std::vector<int> counts = sizes;
  return rec(counts);
}

Rational edge_weight(const VarianceProfile& prof, std::size_t k, std::size_t j) {
  return k == j ? prof.offdiag[k] : prof.cross;
}

}  // namespace

MatchingProblem make_matching_problem(std::vector<int> sizes, std::vector<int> degrees, ProfileKind kind) {
  if (sizes.size() != degrees.size()) throw DomainError("sizes and degrees differ in length");
  auto profile = VarianceProfile::of_kind(kind, degrees);
  MatchingProblem p{std::move(sizes), std::move(degrees), std::move(profile)};
  validate(p);
  return p;
}

MatchingProblem make_matching_problem(std::vector<int> sizes, VarianceProfile profile) {
  MatchingProblem p{std::move(sizes), {}, std::move(profile)};
  validate(p);
  return p;
}

Rational weighted_matching_sum(const MatchingProblem& p, int cap) {
  validate(p);
  const int m = p.total();
  if (m > cap) throw ResourceError("matching problem exceeds the vertex cap");
  if (m % 2) return Rational(0);
  return memo_matchings<Rational>(p.group_sizes,
                                  [&](std::size_t k, std::size_t j) { return edge_weight(p.profile, k, j); });
}

Rational weighted_matching_sum_naive(const MatchingProblem& p) {
  validate(p);
  const int m = p.total();
  if (m > 10) throw ResourceError("naive enumeration is limited to m <= 10");
  if (m % 2) return Rational(0);
  std::vector<int> group(m);
  for (int v = 0; v < m; ++v) group[v] = p.group_of(v);
  std::vector<bool> used(m, false);
  Rational total(0);
  std::function<void(Rational)> rec = [&](Rational w) {
    int a = 0;
    while (a < m && used[a]) ++a;
    if (a == m) {
      total += w;
      return;
    }
    used[a] = true;
    for (int b = a + 1; b < m; ++b) {
      if (used[b]) continue;
      used[b] = true;
      rec(w * edge_weight(p.profile, group[a], group[b]));
      used[b] = false;
    }
    used[a] = false;
  };
  rec(Rational(1));
  return total;
}

BigInt matching_count(const MatchingProblem& p, int cap) {
  validate(p);
  const int m = p.total();
  if (m > cap) throw ResourceError("matching problem exceeds the vertex cap");
  if (m % 2) return BigInt(0);
  return memo_matchings<BigInt>(p.group_sizes, [&](std::size_t k, std::size_t j) {
    return BigInt(edge_weight(p.profile, k, j) == 0 ? 0 : 1);
  });
}

Rational D_exact(const MatchingProblem& p, int cap) {
  const int m = p.total();
  Rational s = weighted_matching_sum(p, cap);
  return (m / 2) % 2 ? Rational(-s) : s;
}

double D(const MatchingProblem& p, int cap) { return to_double(D_exact(p, cap)); }

Rational expected_det_isserlis_exact(const MatchingProblem& p) {
  validate(p);
  const int m = p.total();
  if (m > 10) throw ResourceError("permutation brute force is limited to m <= 10");
  std::vector<int> group(m);
  for (int v = 0; v < m; ++v) group[v] = p.group_of(v);
  auto variance = [&](int a, int b) -> Rational {
    if (a == b) return p.profile.diag[group[a]];
    return group[a] == group[b] ? p.profile.offdiag[group[a]] : p.profile.cross;
  };
  std::vector<int> sigma(m);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<int> count(static_cast<std::size_t>(m) * m);
  std::vector<bool> seen(m);
  Rational total(0);
  do {
    // Multiplicity of each symmetric entry l_{ab} = l_{ba} in the product.
    std::fill(count.begin(), count.end(), 0);
    bool odd = false;
    for (int a = 0; a < m; ++a) {
      const int lo = std::min(a, sigma[a]);
      const int hi = std::max(a, sigma[a]);
      ++count[static_cast<std::size_t>(lo) * m + hi];
    }
    for (int c : count)
      if (c % 2) odd = true;
    if (odd) continue;
    // E x^c = var^{c/2} (c-1)!! for centered Gaussian x.
    Rational moment(1);
    for (int a = 0; a < m && moment != 0; ++a) {
      for (int b = a; b < m; ++b) {
        const int c = count[static_cast<std::size_t>(a) * m + b];
        if (c == 0) continue;
        const Rational var = variance(a, b);
        for (int q = 0; q < c / 2; ++q) moment *= var;
        for (int q = c - 1; q > 1; q -= 2) moment *= q;
      }
    }
    if (moment == 0) continue;
    std::fill(seen.begin(), seen.end(), false);
    int transpositions = 0;
    for (int a = 0; a < m; ++a) {
      if (seen[a]) continue;
      int len = 0;
      for (int x = a; !seen[x]; x = sigma[x]) {
        seen[x] = true;
        ++len;
      }
      transpositions += len - 1;
    }
    total += transpositions % 2 ? Rational(-moment) : moment;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return total;
}

double expected_det_isserlis(const MatchingProblem& p) { return to_double(expected_det_isserlis_exact(p)); }

std::string_view minor_mode_name(MinorMode mode) {
  return mode == MinorMode::corrected ? "corrected" : "paper";
}

Rational expected_minor_sum_exact(const SpaceSpec& space, int i, const VarianceProfile& profile,
                                  MinorMode mode) {
  const int r = space.factors();
  if (i < 0 || 2 * i > space.dim()) throw DomainError("need 0 <= 2i <= n");
  if (profile.groups() != static_cast<std::size_t>(r)) throw DomainError("profile does not match the space");
  if (i == 0) return Rational(1);
  std::vector<int> sig(r, 0);
  Rational total(0);
  std::function<void(int, int)> rec = [&](int k, int left) {
    if (k == r) {
      if (left != 0) return;
      MatchingProblem p{sig, space.degrees(), profile};
      Rational term = D_exact(p);
      if (mode == MinorMode::corrected) {
        for (int q = 0; q < r; ++q) term *= static_cast<unsigned long long>(binomial(space.n(q), sig[q]));
      }
      total += term;
      return;
    }
    for (int mk = 0; mk <= std::min(space.n(k), left); ++mk) {
      sig[k] = mk;
      rec(k + 1, left - mk);
    }
    sig[k] = 0;
  };
  rec(0, 2 * i);
  return total;
}

double expected_minor_sum(const SpaceSpec& space, int i, const VarianceProfile& profile, MinorMode mode) {
  return to_double(expected_minor_sum_exact(space, i, profile, mode));
}

}  // namespace svgeom
