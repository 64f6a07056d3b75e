#include "fbmbt/serialization.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

namespace fbmbt {

using nlohmann::json;

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void write_le(std::ostream& out, std::span<const T> values) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size_bytes()));
  } else {
    for (const T& v : values) {
      char buf[sizeof(T)];
      std::memcpy(buf, &v, sizeof(T));
      std::reverse(buf, buf + sizeof(T));
      out.write(buf, sizeof(T));
    }
  }
}

template <class T>
std::vector<T> read_le(std::istream& in, std::size_t count) {
  std::vector<T> values(count);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(count * sizeof(T)));
  if (static_cast<std::size_t>(in.gcount()) != count * sizeof(T))
    throw std::runtime_error("truncated file: expected " + std::to_string(count) + " values");
  if constexpr (std::endian::native == std::endian::big) {
    for (T& v : values) {
      char buf[sizeof(T)];
      std::memcpy(buf, &v, sizeof(T));
      std::reverse(buf, buf + sizeof(T));
      std::memcpy(&v, buf, sizeof(T));
    }
  }
  return values;
}

json seed_json(const SeedRecord& s) {
  return {{"master", s.master},
          {"replica", s.replica},
          {"stream", s.stream},
          {"substream", s.substream},
          {"generator", SeedRecord::kGenerator},
          {"gaussian", SeedRecord::kGaussian}};
}

SeedRecord seed_from(const json& j) {
  SeedRecord s;
  s.master = j.at("master").get<std::uint64_t>();
  s.replica = j.at("replica").get<std::uint64_t>();
  s.stream = j.at("stream").get<std::uint32_t>();
  s.substream = j.at("substream").get<std::uint32_t>();
  return s;
}

void write_header(std::ostream& out, const json& header) { out << header.dump() << '\n'; }

json read_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("missing header line");
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed header: ") + e.what());
  }
  const int version = j.value("format_version", 0);
  if (version != kFormatVersion)
    throw std::runtime_error("unsupported format_version " + std::to_string(version));
  return j;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json checks_json(const std::vector<Check>& checks) {
  json out = json::array();
  for (const auto& c : checks)
    out.push_back({{"name", c.name},
                   {"value", number_or_null(c.value)},
                   {"threshold", number_or_null(c.threshold)},
                   {"passed", c.passed},
                   {"required", c.required}});
  return out;
}

void csv_number(std::ostream& out, double v) {
  if (std::isfinite(v))
    out << std::setprecision(17) << v;
  else
    out << "nan";
}

}  // namespace

void write_path(std::ostream& out, const FbmPath& path) {
  write_header(out, {{"kind", "fbm"},
                     {"hurst", path.hurst().value()},
                     {"spacing", path.spacing()},
                     {"half_extent", path.half_extent()},
                     {"count", path.values().size()},
                     {"seed_record", seed_json(path.seed_record())},
                     {"format_version", kFormatVersion}});
  write_le(out, path.values());
}

void write_path(std::ostream& out, const BmPath& path) {
  write_header(out, {{"kind", "bm"},
                     {"spacing", path.spacing()},
                     {"horizon", path.horizon()},
                     {"count", path.values().size()},
                     {"seed_record", seed_json(path.seed_record())},
                     {"format_version", kFormatVersion}});
  write_le(out, path.values());
}

PathHeader read_path_header(std::istream& in) {
  const json j = read_header(in);
  PathHeader h;
  try {
    h.kind = j.at("kind").get<std::string>();
    if (j.contains("hurst")) h.hurst = j["hurst"].get<double>();
    h.spacing = j.at("spacing").get<double>();
    if (j.contains("half_extent")) h.half_extent = j["half_extent"].get<std::int64_t>();
    if (j.contains("horizon")) h.horizon = j["horizon"].get<double>();
    h.count = j.at("count").get<std::size_t>();
    h.seed = seed_from(j.at("seed_record"));
    h.format_version = j.at("format_version").get<int>();
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("incomplete path header: ") + e.what());
  }
  return h;
}

FbmPath read_fbm_path(std::istream& in) {
  const PathHeader h = read_path_header(in);
  if (h.kind != "fbm" || !h.hurst || !h.half_extent) throw std::runtime_error("not an fbm path file");
  auto values = read_le<double>(in, h.count);
  return FbmPath(HurstParameter(*h.hurst), h.spacing, *h.half_extent, std::move(values), h.seed);
}

BmPath read_bm_path(std::istream& in) {
  const PathHeader h = read_path_header(in);
  if (h.kind != "bm") throw std::runtime_error("not a Brownian path file");
  return BmPath(h.spacing, read_le<double>(in, h.count), h.seed);
}

void write_path_csv(std::ostream& out, const FbmPath& path) {
  out << "time,value\n" << std::setprecision(17);
  for (std::int64_t i = -path.half_extent(); i <= path.half_extent(); ++i)
    out << path.time_of(i) << ',' << path.at(i) << '\n';
}

void write_path_csv(std::ostream& out, const BmPath& path) {
  out << "time,value\n" << std::setprecision(17);
  const auto v = path.values();
  for (std::size_t i = 0; i < v.size(); ++i) out << static_cast<double>(i) * path.spacing() << ',' << v[i] << '\n';
}

void write_skeleton(std::ostream& out, const SkeletalStructure& sk) {
  write_header(out, {{"kind", "skeleton"},
                     {"level", sk.level},
                     {"mode", to_string(sk.mode)},
                     {"source", sk.source == SkeletalStructure::Source::path ? "path" : "exact_law"},
                     {"seed_record", seed_json(sk.seed)},
                     {"count", sk.times.size()},
                     {"format_version", kFormatVersion}});
  write_le(out, std::span<const double>(sk.times));
  write_le(out, std::span<const std::int32_t>(sk.walk));
}

SkeletalStructure read_skeleton(std::istream& in) {
  const json j = read_header(in);
  if (j.value("kind", "") != "skeleton") throw std::runtime_error("not a skeleton file");
  SkeletalStructure sk;
  try {
    sk.level = j.at("level").get<int>();
    sk.mode = parse_refinement_mode(j.at("mode").get<std::string>());
    sk.source = j.at("source").get<std::string>() == "path" ? SkeletalStructure::Source::path
                                                           : SkeletalStructure::Source::exact_law;
    sk.seed = seed_from(j.at("seed_record"));
    const auto count = j.at("count").get<std::size_t>();
    sk.times = read_le<double>(in, count);
    sk.walk = read_le<std::int32_t>(in, count);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("incomplete skeleton header: ") + e.what());
  }
  return sk;
}

std::string seed_to_string(const SeedRecord& s) {
  std::ostringstream os;
  os << s.master << ':' << s.replica << ':' << s.stream << ':' << s.substream;
  return os.str();
}

std::string to_json(const VerificationReport& r, bool include_timing) {
  json levels = json::array();
  for (const auto& s : r.per_level)
    levels.push_back({{"level", s.level},
                      {"mean", number_or_null(s.mean)},
                      {"mean_abs", number_or_null(s.mean_abs)},
                      {"p90", number_or_null(s.p90)},
                      {"variance", number_or_null(s.variance)},
                      {"stderr", number_or_null(s.std_error)},
                      {"ks_distance", number_or_null(s.ks_distance)},
                      {"ks_p_value", number_or_null(s.ks_p_value)}});
  json j = {{"schema_version", VerificationReport::kSchemaVersion},
            {"kind", "verification"},
            {"branch", to_string(r.branch)},
            {"H", r.hurst},
            {"f", r.function},
            {"t", r.t},
            {"levels", r.levels},
            {"replicas", r.replicas},
            {"seed", r.seed},
            {"per_level", levels},
            {"slope", number_or_null(r.slope)},
            {"slope_stderr", number_or_null(r.slope_std_error)},
            {"slope_target", number_or_null(r.slope_target)},
            {"checks", checks_json(r.checks)},
            {"passed", r.passed()}};
  if (include_timing) j["wall_time"] = r.wall_time_seconds;
  return j.dump(2);
}

std::string to_json(const ScalingReport& r, bool include_timing) {
  json levels = json::array();
  for (const auto& s : r.per_level)
    levels.push_back({{"level", s.level},
                      {"mean", number_or_null(s.mean)},
                      {"variance", number_or_null(s.variance)},
                      {"stderr", number_or_null(s.std_error)},
                      {"median_abs_error", number_or_null(s.median_abs_error)},
                      {"ks_statistic", number_or_null(s.ks_statistic)},
                      {"ks_p_value", number_or_null(s.ks_p_value)}});
  json j = {{"schema_version", ScalingReport::kSchemaVersion},
            {"kind", "scaling"},
            {"H", r.hurst},
            {"power", r.power},
            {"t", r.t},
            {"levels", r.levels},
            {"replicas", r.replicas},
            {"seed", r.seed},
            {"per_level", levels},
            {"estimated_sigma2", r.power == 3 ? number_or_null(r.estimated_sigma2) : json(nullptr)},
            {"sigma2_stderr", r.power == 3 ? number_or_null(r.sigma2_std_error) : json(nullptr)},
            {"checks", checks_json(r.checks)},
            {"passed", r.passed()}};
  if (include_timing) j["wall_time"] = r.wall_time_seconds;
  return j.dump(2);
}

void write_csv(std::ostream& out, const VerificationReport& r) {
  out << "level,mean,mean_abs,p90,variance,stderr,ks_distance,ks_p_value\n";
  for (const auto& s : r.per_level) {
    out << s.level;
    for (double v : {s.mean, s.mean_abs, s.p90, s.variance, s.std_error, s.ks_distance, s.ks_p_value}) {
      out << ',';
      csv_number(out, v);
    }
    out << '\n';
  }
}

void write_csv(std::ostream& out, const ScalingReport& r) {
  out << "level,statistic,value\n";
  for (const auto& s : r.per_level) {
    const std::pair<const char*, double> rows[] = {{"mean", s.mean},
                                                   {"variance", s.variance},
                                                   {"stderr", s.std_error},
                                                   {"median_abs_error", s.median_abs_error},
                                                   {"ks_statistic", s.ks_statistic},
                                                   {"ks_p_value", s.ks_p_value}};
    for (const auto& [name, v] : rows) {
      out << s.level << ',' << name << ',';
      csv_number(out, v);
      out << '\n';
    }
  }
}

std::ofstream open_output(const std::filesystem::path& file) {
  std::error_code ec;
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path(), ec);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + file.string() + "' for writing");
  return out;
}

std::ifstream open_input(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + file.string() + "' for reading");
  return in;
}

}  // namespace fbmbt
