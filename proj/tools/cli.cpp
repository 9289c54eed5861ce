#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "svgeom/acceptance.hpp"
#include "svgeom/errors.hpp"
#include "svgeom/geodesics.hpp"
#include "svgeom/matchings.hpp"
#include "svgeom/montecarlo.hpp"
#include "svgeom/serialization.hpp"
#include "svgeom/tube.hpp"
#include "svgeom/weingarten.hpp"

namespace svgeom::cli {

namespace {

struct Settings {
  std::vector<int> dims;
  std::vector<int> degrees;
  std::optional<double> epsilon;
  std::optional<std::int64_t> samples;
  std::uint64_t seed = 42;
  int i = 1;
  int workers = 0;
  std::string exponent = "corrected";
  std::string minor_mode = "corrected";
  std::optional<std::string> profile;
  std::string scale = "derived";
  std::string sampler = "assembled";
  std::vector<double> theta;
  std::optional<std::string> tensor_path;
  std::optional<std::string> json_path;
  std::optional<std::string> csv_path;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SVGEOM_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError("SVGEOM_SEED", "must be a nonnegative integer");
    }
  }
  return 42;
}

SpaceSpec space_of(const Settings& s) {
  if (s.dims.empty()) throw CLI::RequiredError("--dims");
  if (s.degrees.empty()) throw CLI::RequiredError("--degrees");
  if (s.dims.size() != s.degrees.size()) {
    throw CLI::ValidationError("--dims/--degrees", "must have the same length");
  }
  return SpaceSpec(s.dims, s.degrees);
}

ProfileKind profile_of(const Settings& s, ProfileKind fallback) {
  return s.profile ? *parse_profile(*s.profile) : fallback;
}

ExponentConvention exponent_of(const Settings& s) {
  return s.exponent == "paper" ? ExponentConvention::paper : ExponentConvention::corrected;
}

MinorMode minor_mode_of(const Settings& s) {
  return s.minor_mode == "paper" ? MinorMode::paper : MinorMode::corrected;
}

McConfig mc_config(const Settings& s, std::int64_t default_samples) {
  McConfig cfg;
  cfg.samples = s.samples.value_or(default_samples);
  cfg.seed = s.seed;
  cfg.workers = s.workers;
  cfg.output = s.csv_path;
  return cfg;
}

double epsilon_of(const Settings& s) {
  if (!s.epsilon) throw CLI::RequiredError("--epsilon");
  return *s.epsilon;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
  if (!f) throw DomainError("cannot write " + path);
}

Json base_config(const std::string& command, const Settings& s) {
  Json c{{"subcommand", command}, {"seed", s.seed}};
  if (!s.dims.empty()) c["dims"] = s.dims;
  if (!s.degrees.empty()) c["degrees"] = s.degrees;
  return c;
}

Json cmd_reach(const Settings& s) {
  const SpaceSpec space = space_of(s);
  Json j = reach_to_json(reach(space));
  j["config"] = base_config("reach", s);
  j["config"]["space"] = space_to_json(space);
  return j;
}

Json cmd_curvature(const Settings& s) {
  const SpaceSpec space = space_of(s);
  const ExtremalCurvature ex = extremal_curvature(space);
  Json j{{"max", ex.max},         {"argmax", ex.argmax},           {"min", ex.min},
         {"argmin", ex.argmin},   {"min_factor", ex.min_factor},   {"numeric_max", ex.numeric_max},
         {"numeric_min", ex.numeric_min}};
  if (!s.theta.empty()) j["curvature"] = curvature_closed_form(s.theta, space.degrees());
  j["config"] = base_config("curvature", s);
  if (!s.theta.empty()) j["config"]["theta"] = s.theta;
  return j;
}

Json cmd_weingarten(const Settings& s) {
  const SpaceSpec space = space_of(s);
  const NormalSplit split = normal_split_E(space);
  std::optional<WeingartenMatrix> l;
  std::string source;
  if (s.tensor_path) {
    std::ifstream in(*s.tensor_path);
    if (!in) throw DomainError("cannot read " + *s.tensor_path);
    Json tj;
    try {
      in >> tj;
    } catch (const Json::exception& e) {
      throw DomainError(std::string("malformed tensor file: ") + e.what());
    }
    const Tensor f = tensor_from_json(tj);
    if (!(f.space() == space)) throw DomainError("tensor file does not match --dims/--degrees");
    l = assemble_weingarten(f, split);
    source = "tensor";
  } else if (s.sampler == "direct") {
    l = sample_direct_weingarten(space, s.scale == "corollary" ? ScaleConvention::corollary : ScaleConvention::derived,
                                 s.seed);
    source = "direct";
  } else {
    l = sample_gaussian_weingarten(split, s.seed);
    source = "assembled";
  }
  if (s.csv_path) write_file(*s.csv_path, matrix_csv(l->entries()));
  Json j = weingarten_to_json(*l);
  j["split"] = {{"tangent", split.tangent_positions().size()},
                {"W", split.w_positions().size()},
                {"G", split.g_positions().size()},
                {"P", split.p_dim()}};
  j["config"] = base_config("weingarten", s);
  j["config"]["sampler"] = source;
  if (source == "direct") j["config"]["scale_convention"] = s.scale;
  return j;
}

Json cmd_dd(const Settings& s) {
  if (s.dims.empty()) throw CLI::RequiredError("--dims");
  std::vector<int> degrees = s.degrees.empty() ? std::vector<int>(s.dims.size(), 1) : s.degrees;
  if (degrees.size() != s.dims.size()) throw CLI::ValidationError("--dims/--degrees", "must have the same length");
  const ProfileKind kind = profile_of(s, ProfileKind::def_d);
  const MatchingProblem p = make_matching_problem(s.dims, degrees, kind);
  const Rational d = D_exact(p);
  Json j{{"sizes", s.dims},
         {"degrees", degrees},
         {"profile", profile_name(kind)},
         {"D", to_double(d)},
         {"D_exact", d.str()},
         {"matching_count", matching_count(p).str()}};
  j["config"] = base_config("dd", s);
  j["config"]["profile"] = profile_name(kind);
  return j;
}

Json cmd_minors(const Settings& s, std::ostream& err) {
  const SpaceSpec space = space_of(s);
  const ProfileKind kind = profile_of(s, ProfileKind::weingarten);
  const MinorMode mode = minor_mode_of(s);
  const auto profile = VarianceProfile::of_kind(kind, space.degrees());
  const Rational e = expected_minor_sum_exact(space, s.i, profile, mode);
  Json j{{"i", s.i}, {"expected_minor_sum", to_double(e)}, {"expected_minor_sum_exact", e.str()}};
  if (s.samples) {
    const McConfig cfg = mc_config(s, 0);
    err << "minors: sampling " << cfg.samples << " Weingarten matrices, seed " << cfg.seed << '\n';
    const ProfileAdjudication a = adjudicate_profiles(space, s.i, cfg);
    Json verdicts = Json::array();
    for (const auto& v : a.verdicts) {
      verdicts.push_back({{"profile", profile_name(v.kind)}, {"expected", v.expected}, {"z_score", v.z_score}});
    }
    j["monte_carlo"] = stats_to_json(a.mc);
    j["adjudication"] = verdicts;
  }
  j["config"] = base_config("minors", s);
  j["config"]["profile"] = profile_name(kind);
  j["config"]["minor_mode"] = minor_mode_name(mode);
  return j;
}

Json cmd_tube(const Settings& s) {
  const SpaceSpec space = space_of(s);
  TubeOptions opt;
  opt.exponent = exponent_of(s);
  opt.minor_mode = minor_mode_of(s);
  opt.profile = profile_of(s, ProfileKind::weingarten);
  const TubeReport rep = tube_volume(space, epsilon_of(s), opt);
  if (s.csv_path) write_file(*s.csv_path, tube_terms_csv(rep));
  Json j = tube_to_json(rep);
  j["config"] = base_config("tube", s);
  j["config"]["conventions"] = j["conventions"];
  return j;
}

Json cmd_mc_det(const Settings& s, std::ostream& err) {
  if (s.dims.empty()) throw CLI::RequiredError("--dims");
  std::vector<int> degrees = s.degrees.empty() ? std::vector<int>(s.dims.size(), 1) : s.degrees;
  if (degrees.size() != s.dims.size()) throw CLI::ValidationError("--dims/--degrees", "must have the same length");
  const ProfileKind kind = profile_of(s, ProfileKind::def_d);
  const MatchingProblem p = make_matching_problem(s.dims, degrees, kind);
  const McConfig cfg = mc_config(s, 100000);
  err << "mc-det: " << cfg.samples << " samples, seed " << cfg.seed << '\n';
  const McDetResult res = mc_expected_det(p, cfg);
  if (s.csv_path) write_file(*s.csv_path, histogram_csv(res.histogram));
  Json j = stats_to_json(res.stats);
  j["D"] = D(p);
  j["z_score"] = res.stats.std_error > 0 ? (res.stats.mean - D(p)) / res.stats.std_error : 0.0;
  j["histogram"] = histogram_to_json(res.histogram);
  j["config"] = base_config("mc-det", s);
  j["config"]["degrees"] = degrees;
  j["config"]["profile"] = profile_name(kind);
  j["config"]["samples"] = cfg.samples;
  return j;
}

Json cmd_mc_tube(const Settings& s, std::ostream& err) {
  const SpaceSpec space = space_of(s);
  const double eps = epsilon_of(s);
  const McConfig cfg = mc_config(s, 100000);
  err << "mc-tube: " << cfg.samples << " samples, seed " << cfg.seed << '\n';
  const McStats mc = mc_tube_volume(space, eps, cfg);
  Json j = stats_to_json(mc);
  j["volume"] = mc.mean;
  Json cmp = Json::array();
  for (auto conv : {ExponentConvention::corrected, ExponentConvention::paper}) {
    TubeOptions opt;
    opt.exponent = conv;
    opt.minor_mode = minor_mode_of(s);
    opt.profile = profile_of(s, ProfileKind::weingarten);
    const double v = tube_volume(space, eps, opt).volume;
    cmp.push_back({{"exponent", exponent_name(conv)},
                   {"volume", v},
                   {"z_score", mc.std_error > 0 ? (mc.mean - v) / mc.std_error : 0.0}});
  }
  j["formula"] = cmp;
  j["config"] = base_config("mc-tube", s);
  j["config"]["epsilon"] = eps;
  j["config"]["samples"] = cfg.samples;
  return j;
}

Json cmd_selftest(const Settings& s, std::ostream& err, bool& all_passed) {
  acceptance::Options opt;
  opt.workers = s.workers;
  if (s.csv_path) opt.artifact_dir = *s.csv_path;
  const auto results = acceptance::run_all(err, opt);
  Json list = Json::array();
  all_passed = true;
  for (const auto& r : results) {
    all_passed = all_passed && r.passed;
    list.push_back({{"id", r.id},
                    {"name", r.name},
                    {"passed", r.passed},
                    {"seconds", r.seconds},
                    {"time_limit", r.time_limit},
                    {"detail", r.detail}});
  }
  return Json{{"criteria", list}, {"passed", all_passed}, {"config", base_config("selftest", s)}};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Tube and reach computations for spherical Segre-Veronese manifolds", "svgeom"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all");

  std::string seed_text;
  auto add_common = [&](CLI::App* sub, bool space) {
    if (space) {
      sub->add_option("--dims", s.dims, "Comma separated n_i (group sizes for dd and mc-det)")->delimiter(',');
      sub->add_option("--degrees", s.degrees, "Comma separated d_i")->delimiter(',');
    }
    sub->add_option("--seed", seed_text, "Random seed (default 42 or $SVGEOM_SEED)");
    sub->add_option("--json", s.json_path, "Also write the JSON document to this path");
  };
  auto add_csv = [&](CLI::App* sub, const std::string& what) {
    auto* csv = sub->add_option("--csv", s.csv_path, what);
    sub->add_option("--out", s.csv_path, "Alias of --csv")->excludes(csv);
  };
  const std::vector<std::string> profiles{"def-d", "weingarten", "corollary"};
  const std::vector<std::string> conventions{"corrected", "paper"};
  auto add_profile = [&](CLI::App* sub) {
    sub->add_option("--profile", s.profile, "Variance profile")->check(CLI::IsMember(profiles));
  };
  auto add_minor_mode = [&](CLI::App* sub) {
    sub->add_option("--minor-mode", s.minor_mode, "Principal minor multiplicities")
        ->check(CLI::IsMember(conventions));
  };
  auto add_samples = [&](CLI::App* sub) {
    sub->add_option("--samples", s.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
    sub->add_option("--workers", s.workers, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  };

  auto* reach_cmd = app.add_subcommand("reach", "Reach and its two candidate radii");
  add_common(reach_cmd, true);

  auto* curv_cmd = app.add_subcommand("curvature", "Extremal normal curvature of geodesics through E");
  add_common(curv_cmd, true);
  curv_cmd->add_option("--theta", s.theta, "Speeds theta_i for a single curvature value")->delimiter(',');

  auto* wein_cmd = app.add_subcommand("weingarten", "Weingarten matrix for a random or given normal direction");
  add_common(wein_cmd, true);
  add_csv(wein_cmd, "Write the matrix as CSV");
  wein_cmd->add_option("--scale-convention", s.scale, "Scale for the direct sampler")
      ->check(CLI::IsMember({"derived", "corollary"}));
  wein_cmd->add_option("--sampler", s.sampler, "assembled (via a Gaussian tensor) or direct")
      ->check(CLI::IsMember({"assembled", "direct"}));
  wein_cmd->add_option("--tensor", s.tensor_path, "JSON tensor {dims, degrees, coeffs} to use as F");

  auto* dd_cmd = app.add_subcommand("dd", "Signed weighted perfect-matching sum D");
  add_common(dd_cmd, true);
  add_profile(dd_cmd);

  auto* minors_cmd = app.add_subcommand("minors", "Expected sum of principal minors of L_F");
  add_common(minors_cmd, true);
  minors_cmd->add_option("--i", s.i, "Minor order is 2i")->check(CLI::NonNegativeNumber);
  add_profile(minors_cmd);
  add_minor_mode(minors_cmd);
  add_samples(minors_cmd);

  auto* tube_cmd = app.add_subcommand("tube", "Volume of the epsilon tube around the manifold");
  add_common(tube_cmd, true);
  tube_cmd->add_option("--epsilon", s.epsilon, "Tube radius");
  tube_cmd->add_option("--exponent-convention", s.exponent, "Exponent of sin in J_i")
      ->check(CLI::IsMember(conventions));
  add_minor_mode(tube_cmd);
  add_profile(tube_cmd);
  add_csv(tube_cmd, "Write the per-term table as CSV");

  auto* mcdet_cmd = app.add_subcommand("mc-det", "Monte Carlo expected determinant with histogram");
  add_common(mcdet_cmd, true);
  add_profile(mcdet_cmd);
  add_samples(mcdet_cmd);
  add_csv(mcdet_cmd, "Write the histogram as CSV");

  auto* mctube_cmd = app.add_subcommand("mc-tube", "Monte Carlo tube volume by uniform sphere sampling");
  add_common(mctube_cmd, true);
  mctube_cmd->add_option("--epsilon", s.epsilon, "Tube radius");
  add_samples(mctube_cmd);
  add_profile(mctube_cmd);
  add_minor_mode(mctube_cmd);

  auto* self_cmd = app.add_subcommand("selftest", "Run the acceptance suite");
  add_common(self_cmd, false);
  self_cmd->add_option("--workers", s.workers, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  add_csv(self_cmd, "Directory for emitted CSV files");

  try {
    app.parse(argc, argv);
    s.seed = seed_text.empty() ? default_seed() : std::stoull(seed_text);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return ok;
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return usage_error;
  } catch (const std::exception& e) {
    err << "error: invalid --seed: " << e.what() << '\n';
    return usage_error;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Json doc;
    bool selftest_ok = true;
    if (command == "reach") doc = cmd_reach(s);
    else if (command == "curvature") doc = cmd_curvature(s);
    else if (command == "weingarten") doc = cmd_weingarten(s);
    else if (command == "dd") doc = cmd_dd(s);
    else if (command == "minors") doc = cmd_minors(s, err);
    else if (command == "tube") doc = cmd_tube(s);
    else if (command == "mc-det") doc = cmd_mc_det(s, err);
    else if (command == "mc-tube") doc = cmd_mc_tube(s, err);
    else doc = cmd_selftest(s, err, selftest_ok);
    const std::string text = doc.dump(2);
    out << text << '\n';
    if (s.json_path) write_file(*s.json_path, text + "\n");
    return selftest_ok ? ok : selftest_failed;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return usage_error;
  } catch (const ResourceError& e) {
    err << "resource guard: " << e.what() << '\n';
    return resource_error;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return domain_error;
  } catch (const std::domain_error& e) {
    err << "domain error: " << e.what() << '\n';
    return domain_error;
  }
}

}  // namespace svgeom::cli
