#include "svgeom/serialization.hpp"

#include <sstream>

#include "svgeom/errors.hpp"

namespace svgeom {

Json space_to_json(const SpaceSpec& space) {
  return Json{{"dims", space.dims()},
              {"degrees", space.degrees()},
              {"n", space.dim()},
              {"d", space.total_degree()},
              {"ambient_dim", space.ambient_dim()},
              {"codim", space.codim()}};
}

SpaceSpec space_from_json(const Json& j) {
  try {
    return SpaceSpec(j.at("dims").get<std::vector<int>>(), j.at("degrees").get<std::vector<int>>());
  } catch (const Json::exception& e) {
    throw DomainError(std::string("malformed space: ") + e.what());
  }
}

Json tensor_to_json(const Tensor& f) {
  return Json{{"dims", f.space().dims()}, {"degrees", f.space().degrees()}, {"coeffs", f.values()}};
}

Tensor tensor_from_json(const Json& j) {
  SpaceSpec space = space_from_json(j);
  std::vector<double> coeffs;
  try {
    coeffs = j.at("coeffs").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    throw DomainError(std::string("malformed tensor: ") + e.what());
  }
  if (coeffs.size() != space.ambient_dim()) throw DomainError("coefficient count does not match the space");
  return Tensor(std::move(space), std::move(coeffs));
}

Json split_to_json(const NormalSplit& split) {
  Json tangent = Json::array();
  for (std::size_t k = 0; k < split.tangent_labels().size(); ++k) {
    const auto& l = split.tangent_labels()[k];
    tangent.push_back({{"factor", l.factor}, {"k", l.k}, {"flat", split.tangent_positions()[k]}});
  }
  Json w = Json::array();
  for (std::size_t k = 0; k < split.w_labels().size(); ++k) {
    const auto& l = split.w_labels()[k];
    w.push_back({{"factor", l.factor}, {"k", l.k}, {"l", l.l}, {"flat", split.w_positions()[k]}});
  }
  Json g = Json::array();
  for (std::size_t k = 0; k < split.g_labels().size(); ++k) {
    const auto& l = split.g_labels()[k];
    g.push_back({{"i", l.i}, {"j", l.j}, {"k", l.k}, {"l", l.l}, {"flat", split.g_positions()[k]}});
  }
  return Json{{"space", space_to_json(split.space())},
              {"tangent", tangent},
              {"W", w},
              {"G", g},
              {"P_dim", split.p_dim()}};
}

Json reach_to_json(const ReachReport& r) {
  return Json{{"rho1", r.rho1}, {"rho2", r.rho2}, {"reach", r.reach}, {"regime", regime_name(r.regime)}};
}

Json tube_to_json(const TubeReport& r) {
  Json terms = Json::array();
  for (const auto& t : r.terms) {
    terms.push_back({{"i", t.i}, {"a", t.a}, {"J", t.J}, {"contribution", t.contribution}});
  }
  return Json{{"space", space_to_json(r.space)},
              {"epsilon", r.epsilon},
              {"conventions",
               {{"exponent", exponent_name(r.options.exponent)},
                {"minor_mode", minor_mode_name(r.options.minor_mode)},
                {"profile", profile_name(r.options.profile)}}},
              {"volume_X", r.volume_X},
              {"normal_sphere_volume", r.normal_sphere_volume},
              {"volume", r.volume},
              {"terms", terms},
              {"validity", r.valid}};
}

std::string tube_terms_csv(const TubeReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "i,a_i,J_i,contribution\n";
  for (const auto& t : r.terms) os << t.i << ',' << t.a << ',' << t.J << ',' << t.contribution << '\n';
  return os.str();
}

Json stats_to_json(const McStats& s) {
  return Json{{"mean", s.mean}, {"std_error", s.std_error}, {"samples", s.samples}, {"seed", s.seed}};
}

std::string histogram_csv(const Histogram& h) {
  std::ostringstream os;
  os.precision(17);
  os << "bin_left,bin_right,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) os << h.edges[b] << ',' << h.edges[b + 1] << ',' << h.counts[b] << '\n';
  return os.str();
}

Json histogram_to_json(const Histogram& h) {
  return Json{{"edges", h.edges}, {"counts", h.counts}, {"below", h.below}, {"above", h.above}};
}

Json weingarten_to_json(const WeingartenMatrix& l) {
  Json rows = Json::array();
  for (Eigen::Index a = 0; a < l.entries().rows(); ++a) {
    std::vector<double> row;
    for (Eigen::Index b = 0; b < l.entries().cols(); ++b) row.push_back(l.entries()(a, b));
    rows.push_back(row);
  }
  return Json{{"space", space_to_json(l.space())}, {"matrix", rows}};
}

}  // namespace svgeom
