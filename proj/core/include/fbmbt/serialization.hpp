#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "fbmbt/fgn.hpp"
#include "fbmbt/scaling.hpp"
#include "fbmbt/skeleton.hpp"
#include "fbmbt/verification.hpp"

namespace fbmbt {

/// Path and skeleton files: one line of JSON header, then raw little-endian
/// arrays.
inline constexpr int kFormatVersion = 1;

struct PathHeader {
  std::string kind;  // "fbm" or "bm"
  std::optional<double> hurst;
  double spacing = 0.0;
  std::optional<std::int64_t> half_extent;  // fbm
  std::optional<double> horizon;            // bm
  std::size_t count = 0;
  SeedRecord seed;
  int format_version = kFormatVersion;
};

void write_path(std::ostream& out, const FbmPath& path);
void write_path(std::ostream& out, const BmPath& path);
/// Reads the header line only; the stream is left at the first value.
PathHeader read_path_header(std::istream& in);
FbmPath read_fbm_path(std::istream& in);
BmPath read_bm_path(std::istream& in);

/// time,value rows.
void write_path_csv(std::ostream& out, const FbmPath& path);
void write_path_csv(std::ostream& out, const BmPath& path);

void write_skeleton(std::ostream& out, const SkeletalStructure& skeleton);
SkeletalStructure read_skeleton(std::istream& in);

std::string seed_to_string(const SeedRecord& seed);

/// JSON documents with a schema_version field. With include_timing = false
/// the wall time is omitted, so equal inputs give byte-identical output.
std::string to_json(const VerificationReport& report, bool include_timing = true);
std::string to_json(const ScalingReport& report, bool include_timing = true);

/// Per-level tables.
void write_csv(std::ostream& out, const VerificationReport& report);
void write_csv(std::ostream& out, const ScalingReport& report);

/// Opens for binary writing, creating parent directories; throws
/// std::runtime_error naming the path on failure.
std::ofstream open_output(const std::filesystem::path& file);
std::ifstream open_input(const std::filesystem::path& file);

}  // namespace fbmbt
