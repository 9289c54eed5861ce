#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "svgeom/bw_algebra.hpp"
#include "svgeom/rational.hpp"
#include "svgeom/weingarten.hpp"

namespace svgeom {

/// Complete graph on m = sum(group_sizes) vertices split into groups; the
/// edge weight inside group k is profile.offdiag[k], across groups
/// profile.cross.
struct MatchingProblem {
  std::vector<int> group_sizes;
  std::vector<int> degrees;
  VarianceProfile profile;

  int total() const;
  int group_of(int vertex) const;
};

/// Default weights are d_k(d_k - 1) inside groups and 1 across.
MatchingProblem make_matching_problem(std::vector<int> sizes, std::vector<int> degrees,
                                      ProfileKind kind = ProfileKind::def_d);
MatchingProblem make_matching_problem(std::vector<int> sizes, VarianceProfile profile);

inline constexpr int default_matching_cap = 24;

/// Sum over perfect matchings of the product of edge weights; 0 for odd m.
/// Memoized on the per-group unmatched counts.
Rational weighted_matching_sum(const MatchingProblem& p, int cap = default_matching_cap);

/// Same sum by explicit enumeration of all (m-1)!! matchings, m <= 10.
Rational weighted_matching_sum_naive(const MatchingProblem& p);

/// Number of perfect matchings whose weight is nonzero.
BigInt matching_count(const MatchingProblem& p, int cap = default_matching_cap);

/// (-1)^{m/2} weighted_matching_sum.
Rational D_exact(const MatchingProblem& p, int cap = default_matching_cap);
double D(const MatchingProblem& p, int cap = default_matching_cap);

/// E det of the symmetric block Gaussian matrix with the profile's
/// variances, summing over all m! permutations with Gaussian moments of
/// the repeated entries. Needs m <= 10.
Rational expected_det_isserlis_exact(const MatchingProblem& p);
double expected_det_isserlis(const MatchingProblem& p);

enum class MinorMode { corrected, paper };

std::string_view minor_mode_name(MinorMode mode);

/// E of the sum of 2i x 2i principal minors of a block Gaussian matrix with
/// block sizes dims: sum over block signatures (m_k) of D(m_1..m_r), times
/// prod C(n_k, m_k) in corrected mode.
Rational expected_minor_sum_exact(const SpaceSpec& space, int i, const VarianceProfile& profile,
                                  MinorMode mode = MinorMode::corrected);
double expected_minor_sum(const SpaceSpec& space, int i, const VarianceProfile& profile,
                          MinorMode mode = MinorMode::corrected);

}  // namespace svgeom
