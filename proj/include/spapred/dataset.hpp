#pragma once

#include "spapred/geometry.hpp"
#include "spapred/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace spapred {

/// What to generate. Random kinds label seeds first_seed .. first_seed +
/// count - 1; linear and ring kinds label every sweep index k in [0, T).
struct DatasetSpec {
  GeometryKind kind = GeometryKind::kRandom;
  int n_atoms = 4;
  int count = 1;
  std::uint64_t first_seed = 0;
  double d_max = 2.5;         // random kind
  SweepSchedule schedule;     // linear and ring kinds
  LabelConfig label;
  int workers = 1;
  bool keep_going = false;

  std::vector<std::uint64_t> keys() const;
  Geometry geometry_for(std::uint64_t key) const;
  /// The fields that determine record content; workers and keep_going excluded.
  nlohmann::json identity_json() const;
  nlohmann::json to_json() const;
};

struct GenerateSummary {
  std::size_t written = 0;  // labeled in this run
  std::size_t skipped = 0;  // already present from an earlier run
  std::size_t failed = 0;
  std::size_t total = 0;    // records in the finalized file
};

using ProgressCallback = std::function<void(std::size_t done, std::size_t pending)>;

/// Writes one DatasetRecord per JSONL line. Progress is tracked in
/// "<out>.manifest.json"; rerunning with the same spec resumes, skipping
/// keys already on disk. On completion the file is rewritten sorted by key.
/// Throws on the first failed instance unless spec.keep_going is set.
GenerateSummary generate_dataset(const DatasetSpec& spec, const std::filesystem::path& out,
                                 const ProgressCallback& progress = {});

std::filesystem::path manifest_path(const std::filesystem::path& out);

struct LoadOptions {
  bool keep_going = false;     // skip corrupt lines instead of throwing
  bool converged_only = false;
};

struct LoadReport {
  std::vector<DatasetRecord> records;
  std::vector<std::string> errors;  // "line N: message" for skipped lines
};

/// Reads a JSONL dataset; a corrupt line raises DataError naming its line
/// number unless keep_going is set.
LoadReport load_dataset(const std::filesystem::path& path, const LoadOptions& opts = {});

}  // namespace spapred
