#include "cli/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fbmbt/errors.hpp"
#include "fbmbt/fgn.hpp"
#include "fbmbt/scaling.hpp"
#include "fbmbt/serialization.hpp"
#include "fbmbt/skeleton.hpp"
#include "fbmbt/verification.hpp"

namespace fbmbt::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string output_dir;
  unsigned threads = 1;
  bool no_timing = false;
};

struct GenerateOptions {
  std::string process = "fbm";
  double hurst = 0.5;
  double spacing = 1e-3;
  std::int64_t half_extent = 1024;
  double horizon = 1.0;
  std::uint64_t seed = 1;
  std::uint64_t replica = 0;
  std::string output;
  bool csv = false;
};

struct VerifyOptions {
  std::string branch = "supercritical";
  std::optional<double> hurst;
  std::string function = "sin";
  double t = 1.0;
  std::vector<int> levels{8, 10, 12, 14};
  std::size_t replicas = 500;
  std::uint64_t seed = 1;
  int oversample = 4;
  std::string mode = "bridge";
  std::string walk_source = "exact";
  double kappa3 = kKappa3;
  double max_ratio = 0.5;
  double slope_tolerance = 0.10;
};

struct ScalingOptions {
  double hurst = 0.5;
  int power = 2;
  double t = 1.0;
  std::vector<int> levels;
  std::size_t replicas = 0;
  std::uint64_t seed = 1;
};

struct SkeletonOptions {
  int level = 8;
  double horizon = 1.0;
  std::uint64_t seed = 1;
  std::string mode = "bridge";
  std::string source = "path";
  std::string output;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class AcceptanceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

fs::path output_root(const Common& common) {
  if (!common.output_dir.empty()) return common.output_dir;
  if (const char* env = std::getenv("FBMBT_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

fs::path resolve(const Common& common, const std::string& name) {
  const fs::path p(name);
  return p.is_absolute() ? p : output_root(common) / p;
}

void write_text(const fs::path& file, const std::string& text) {
  auto out = open_output(file);
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + file.string() + "'");
}

int cmd_generate(const GenerateOptions& o, const Common& common, std::ostream& out) {
  if (o.spacing <= 0.0) throw UsageError("--spacing must be positive");
  fs::path file = resolve(common, o.output.empty() ? o.process + ".path" : o.output);
  if (o.process == "fbm") {
    const HurstParameter h(o.hurst);
    if (o.half_extent < 1) throw UsageError("--half-extent must be >= 1");
    const FbmPath path = sample_fbm_two_sided(h, o.spacing, o.half_extent, make_seed(o.seed, o.replica, StreamTag::fbm));
    {
      auto f = open_output(file);
      write_path(f, path);
    }
    if (o.csv) {
      auto f = open_output(fs::path(file).replace_extension(".csv"));
      write_path_csv(f, path);
    }
    out << "wrote fbm path: H=" << h.value() << " spacing=" << o.spacing << " half_extent=" << o.half_extent
        << " -> " << file.string() << '\n';
  } else if (o.process == "bm") {
    if (o.horizon <= 0.0) throw UsageError("--horizon must be positive");
    const BmPath path = sample_bm(o.horizon, o.spacing, make_seed(o.seed, o.replica, StreamTag::brownian));
    {
      auto f = open_output(file);
      write_path(f, path);
    }
    if (o.csv) {
      auto f = open_output(fs::path(file).replace_extension(".csv"));
      write_path_csv(f, path);
    }
    out << "wrote bm path: spacing=" << o.spacing << " horizon=" << path.horizon() << " -> " << file.string()
        << '\n';
  } else {
    throw UsageError("--process must be fbm or bm");
  }
  return kSuccess;
}

double default_hurst(Branch b) {
  switch (b) {
    case Branch::supercritical:
      return 0.35;
    case Branch::critical:
      return HurstParameter::kCritical;
    case Branch::subcritical:
      return 0.10;
  }
  return 0.5;
}

int cmd_verify(const VerifyOptions& o, const Common& common, std::ostream& out) {
  VerifyConfig c;
  c.branch = parse_branch(o.branch);
  c.hurst = o.hurst.value_or(default_hurst(c.branch));
  c.function = o.function;
  c.t = o.t;
  c.levels = o.levels;
  c.replicas = o.replicas;
  c.seed = o.seed;
  c.threads = common.threads;
  c.oversample = o.oversample;
  c.mode = parse_refinement_mode(o.mode);
  c.walk_source = parse_walk_source(o.walk_source);
  c.kappa3 = o.kappa3;
  c.max_mean_ratio = o.max_ratio;
  c.slope_tolerance = o.slope_tolerance;
  validate(c);

  const VerificationReport r = verify_branch(c);
  const std::string stem = std::string("verify-") + to_string(c.branch);
  write_text(resolve(common, stem + ".json"), to_json(r, !common.no_timing));
  {
    auto f = open_output(resolve(common, stem + ".csv"));
    write_csv(f, r);
  }

  out << "branch " << to_string(r.branch) << "  H=" << r.hurst << "  f=" << r.function << "  t=" << r.t
      << "  replicas=" << r.replicas << '\n';
  out << std::setw(6) << "level" << std::setw(14) << "mean_abs" << std::setw(14) << "p90" << std::setw(14)
      << "variance" << std::setw(14) << "ks_distance" << '\n';
  for (const auto& s : r.per_level)
    out << std::setw(6) << s.level << std::setw(14) << s.mean_abs << std::setw(14) << s.p90 << std::setw(14)
        << s.variance << std::setw(14) << s.ks_distance << '\n';
  if (c.branch == Branch::subcritical)
    out << "slope " << r.slope << " +- " << r.slope_std_error << "  target " << r.slope_target << '\n';
  for (const auto& k : r.checks)
    out << (k.passed ? "  ok   " : (k.required ? "  FAIL " : "  warn ")) << k.name << " = " << k.value
        << " (threshold " << k.threshold << ")\n";
  out << "report: " << resolve(common, stem + ".json").string() << '\n';
  if (const Check* bad = r.first_failure())
    throw AcceptanceFailure(bad->name + " = " + std::to_string(bad->value) + " (threshold " +
                            std::to_string(bad->threshold) + ")");
  return kSuccess;
}

int cmd_scaling(ScalingOptions o, const Common& common, std::ostream& out) {
  ScalingConfig c;
  c.hurst = o.hurst;
  c.power = o.power;
  c.t = o.t;
  if (o.levels.empty()) o.levels = o.power == 3 ? std::vector<int>{10, 12, 14} : std::vector<int>{10, 12, 14, 16};
  c.levels = o.levels;
  c.replicas = o.replicas != 0 ? o.replicas : (o.power == 3 ? 1000 : 50);
  c.seed = o.seed;
  c.threads = common.threads;
  (void)HurstParameter(c.hurst);
  if (c.power != 2 && c.power != 3) throw UsageError("--power must be 2 or 3");

  const ScalingReport r = run_scaling(c);
  const std::string stem = "scaling-p" + std::to_string(c.power);
  write_text(resolve(common, stem + ".json"), to_json(r, !common.no_timing));
  {
    auto f = open_output(resolve(common, stem + ".csv"));
    write_csv(f, r);
  }
  out << "scaling power " << r.power << "  H=" << r.hurst << "  t=" << r.t << "  replicas=" << r.replicas << '\n';
  out << std::setw(6) << "level" << std::setw(14) << "mean" << std::setw(14) << "variance" << std::setw(18)
      << (r.power == 2 ? "median|err|" : "ks_p_value") << '\n';
  for (const auto& s : r.per_level)
    out << std::setw(6) << s.level << std::setw(14) << s.mean << std::setw(14) << s.variance << std::setw(18)
        << (r.power == 2 ? s.median_abs_error : s.ks_p_value) << '\n';
  if (r.power == 3) out << "estimated sigma2 " << r.estimated_sigma2 << " +- " << r.sigma2_std_error << '\n';
  for (const auto& k : r.checks)
    out << (k.passed ? "  ok   " : (k.required ? "  FAIL " : "  warn ")) << k.name << " = " << k.value << '\n';
  out << "report: " << resolve(common, stem + ".json").string() << '\n';
  for (const auto& k : r.checks)
    if (k.required && !k.passed)
      throw AcceptanceFailure(k.name + " = " + std::to_string(k.value) + " (threshold " +
                              std::to_string(k.threshold) + ")");
  return kSuccess;
}

int cmd_skeleton(const SkeletonOptions& o, const Common& common, std::ostream& out) {
  if (o.level < 1 || o.level > 24) throw UsageError("--level must lie in [1, 24]");
  if (!(o.horizon > 0.0)) throw UsageError("--horizon must be positive");
  SkeletalStructure sk;
  if (o.source == "path") {
    const BmPath y = sample_bm(o.horizon, std::ldexp(1.0, -o.level - 2), make_seed(o.seed, 0, StreamTag::brownian));
    sk = build_skeleton(y, o.level, parse_refinement_mode(o.mode));
  } else if (o.source == "exact") {
    sk = sample_walk_exact(o.level, steps_for_horizon(o.level, o.horizon), make_seed(o.seed, 0, StreamTag::walk));
  } else {
    throw UsageError("--source must be path or exact");
  }
  const fs::path file = resolve(common, o.output.empty() ? "skeleton.bin" : o.output);
  {
    auto f = open_output(file);
    write_skeleton(f, sk);
  }
  out << "wrote skeleton: level=" << sk.level << " steps=" << sk.steps() << " terminal=" << sk.walk.back()
      << " -> " << file.string() << '\n';
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation and verification toolkit for fractional Brownian motion in Brownian time", "fbmbt"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read option values from a key=value file");

  Common common;
  auto add_common = [&](CLI::App* sub, bool threads) {
    sub->add_option("--output-dir", common.output_dir, "Output directory (default: $FBMBT_OUTPUT_DIR or .)");
    if (threads) {
      sub->add_option("--threads", common.threads, "Worker threads (0 = all cores)");
      sub->add_flag("--no-timing", common.no_timing, "Omit wall time from reports");
    }
  };

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Sample an fBm or Brownian path and write it to disk");
  g->add_option("--process", gen.process, "fbm or bm")->check(CLI::IsMember({"fbm", "bm"}));
  g->add_option("--hurst", gen.hurst, "Hurst parameter in (0, 1)");
  g->add_option("--spacing", gen.spacing, "Grid spacing");
  g->add_option("--half-extent", gen.half_extent, "fbm: grid points on each side of 0");
  g->add_option("--horizon", gen.horizon, "bm: time horizon");
  g->add_option("--seed", gen.seed, "Master seed");
  g->add_option("--replica", gen.replica, "Replica index");
  g->add_option("-o,--output", gen.output, "Output file");
  g->add_flag("--csv", gen.csv, "Also write time,value CSV");
  add_common(g, false);

  VerifyOptions ver;
  auto* v = app.add_subcommand("verify", "Monte Carlo verification of one branch of the change-of-variable formula");
  v->add_option("--branch", ver.branch, "supercritical, critical or subcritical");
  v->add_option("--hurst", ver.hurst, "Hurst parameter (default depends on the branch)");
  v->add_option("--f", ver.function, "Test function (sin, cos, bump, x, x2, poly:...)");
  v->add_option("--t", ver.t, "Time horizon");
  v->add_option("--levels", ver.levels, "Comma-separated levels n")->delimiter(',');
  v->add_option("--replicas", ver.replicas, "Monte Carlo replicas");
  v->add_option("--seed", ver.seed, "Master seed");
  v->add_option("--oversample", ver.oversample, "X grid points per finest-level grid step");
  v->add_option("--mode", ver.mode, "Skeleton refinement: bridge or naive");
  v->add_option("--walk-source", ver.walk_source, "subcritical: exact or path");
  v->add_option("--kappa3", ver.kappa3, "Constant of the corrective integral");
  v->add_option("--max-ratio", ver.max_ratio, "supercritical: largest allowed mean_abs(last)/mean_abs(first)");
  v->add_option("--slope-tol", ver.slope_tolerance, "subcritical: allowed |slope - target|");
  add_common(v, true);

  ScalingOptions sc;
  auto* s = app.add_subcommand("scaling", "Quadratic or cubic variation scaling of plain fBm");
  s->add_option("--hurst", sc.hurst, "Hurst parameter in (0, 1)");
  s->add_option("--power", sc.power, "2 or 3");
  s->add_option("--t", sc.t, "Time horizon");
  s->add_option("--levels", sc.levels, "Comma-separated levels n")->delimiter(',');
  s->add_option("--replicas", sc.replicas, "Monte Carlo replicas");
  s->add_option("--seed", sc.seed, "Master seed");
  add_common(s, true);

  SkeletonOptions sk;
  auto* k = app.add_subcommand("skeleton", "Build a skeletal structure and write it to disk");
  k->add_option("--level", sk.level, "Level n");
  k->add_option("--horizon", sk.horizon, "Time horizon");
  k->add_option("--seed", sk.seed, "Master seed");
  k->add_option("--mode", sk.mode, "bridge or naive");
  k->add_option("--source", sk.source, "path or exact");
  k->add_option("-o,--output", sk.output, "Output file");
  add_common(k, false);

  auto* st = app.add_subcommand("selftest", "Run the deterministic identity suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*g) return cmd_generate(gen, common, out);
    if (*v) return cmd_verify(ver, common, out);
    if (*s) return cmd_scaling(sc, common, out);
    if (*k) return cmd_skeleton(sk, common, out);
    if (*st) return selftest(out) ? kSuccess : kAcceptanceFailure;
  } catch (const AcceptanceFailure& e) {
    err << "acceptance failure: " << e.what() << '\n';
    return kAcceptanceFailure;
  } catch (const ExtentError& e) {
    err << "error: " << e.what() << " (required extent " << e.required() << ")\n";
    return kRuntimeError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace fbmbt::cli
