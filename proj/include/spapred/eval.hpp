#pragma once

#include "spapred/geometry.hpp"
#include "spapred/matching.hpp"
#include "spapred/pipeline.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace spapred {

/// Maps a geometry and its pairing to one angle per pair.
using AnglePredictor =
    std::function<std::vector<double>(const Geometry& geom, const PairMatching& matching)>;

inline constexpr double kMilliHartree = 1000.0;
inline constexpr double kAbsErrorFloor = 1e-12;  // mEh
inline constexpr double kBelowBaselineSlack = 1e-6;  // Eh

struct EvalRow {
  std::string id;  // "<kind>-<key>"
  int n_atoms = 0;
  double baseline = 0.0;  // stored E_SPA, Eh
  double model = 0.0;     // energy at the predicted angles, Eh
  double delta_mEh = 0.0;  // (model - baseline) in mEh
  bool converged = true;
};

struct SizeAggregate {
  int n_atoms = 0;
  double me = 0.0;   // mEh
  double mse = 0.0;  // mEh^2
  double mae = 0.0;  // mEh
  std::optional<double> stddev;  // population stddev of delta, mEh; null below 2 rows
  int outliers = 0;
  int count = 0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  std::vector<SizeAggregate> aggregates;  // ascending n_atoms
  std::vector<std::string> errors;        // rows excluded, one message each
  std::vector<std::string> below_baseline;  // ids with model < baseline - 1e-6 Eh
};

/// Applies predicted angles to each record's stored Hamiltonian without
/// further optimization and compares with the stored baseline.
EvalReport zero_shot_eval(const AnglePredictor& predict, const std::vector<DatasetRecord>& records);

/// Per-size ME, MSE, MAE, stddev and outlier count, recomputed from rows.
std::vector<SizeAggregate> aggregate(const std::vector<EvalRow>& rows);

/// Rows with |delta - mean| > stddev (population).
int count_outliers(const std::vector<double>& delta);

struct OutlierEntry {
  int n_atoms = 0;
  int count = 0;
  int outliers = 0;
  std::optional<double> fraction;
  std::optional<double> stddev;
};

std::vector<OutlierEntry> outlier_table(const EvalReport& report);

struct SweepPoint {
  GeometryKind kind = GeometryKind::kLinear;
  int n_atoms = 0;
  int k = 0;
  double step = 0.0;  // Angstrom
  double e_base = 0.0;
  double e_model = 0.0;
  double abs_err_mEh = 0.0;  // floored at 1e-12
  bool converged = true;
};

/// Builds and labels every sweep geometry, then evaluates the predictor on it.
std::vector<SweepPoint> sweep_structured(const AnglePredictor& predict, GeometryKind kind,
                                         const SweepSchedule& schedule,
                                         const LabelConfig& label = {});

/// Same evaluation over already-labeled sweep records.
std::vector<SweepPoint> sweep_from_records(const AnglePredictor& predict,
                                           const std::vector<DatasetRecord>& records);

/// Index of the lowest baseline point, or -1 when empty.
int baseline_minimum(const std::vector<SweepPoint>& curve);

void write_rows_csv(const EvalReport& report, const std::filesystem::path& path);
void write_aggregates_csv(const EvalReport& report, const std::filesystem::path& path);
void write_outliers_csv(const std::vector<OutlierEntry>& table, const std::filesystem::path& path);
void write_sweep_csv(const std::vector<SweepPoint>& curve, const std::filesystem::path& path);

}  // namespace spapred
