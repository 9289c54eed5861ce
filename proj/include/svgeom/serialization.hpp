#pragma once

#include <string>

#include <json.hpp>

#include "svgeom/geodesics.hpp"
#include "svgeom/manifold.hpp"
#include "svgeom/montecarlo.hpp"
#include "svgeom/tube.hpp"
#include "svgeom/weingarten.hpp"

namespace svgeom {

using Json = nlohmann::json;

Json space_to_json(const SpaceSpec& space);
SpaceSpec space_from_json(const Json& j);

/// {dims, degrees, coeffs}; doubles round-trip bit-exactly.
Json tensor_to_json(const Tensor& f);
Tensor tensor_from_json(const Json& j);

Json split_to_json(const NormalSplit& split);
Json reach_to_json(const ReachReport& r);
Json tube_to_json(const TubeReport& r);
/// i,a_i,J_i,contribution rows.
std::string tube_terms_csv(const TubeReport& r);
Json stats_to_json(const McStats& s);
/// bin_left,bin_right,count rows.
std::string histogram_csv(const Histogram& h);
Json histogram_to_json(const Histogram& h);
Json weingarten_to_json(const WeingartenMatrix& l);

}  // namespace svgeom
