#include "spapred/eval.hpp"

#include "spapred/spa.hpp"

#include <cmath>
#include <fstream>
#include <map>

namespace spapred {

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os.precision(17);
  return os;
}

std::string record_id(const DatasetRecord& r) {
  return to_string(r.geometry.kind) + "-" + std::to_string(r.key);
}

double model_energy(const AnglePredictor& predict, const DatasetRecord& r) {
  const auto theta = predict(r.geometry, r.matching);
  if (static_cast<int>(theta.size()) != r.matching.n_pairs())
    throw std::invalid_argument("predictor returned " + std::to_string(theta.size()) +
                                " angles for " + std::to_string(r.matching.n_pairs()) + " pairs");
  return expectation(r.hamiltonian, SpaAnsatz{theta});
}

}  // namespace

int count_outliers(const std::vector<double>& delta) {
  if (delta.size() < 2) return 0;
  double mean = 0.0;
  for (double d : delta) mean += d;
  mean /= static_cast<double>(delta.size());
  double var = 0.0;
  for (double d : delta) var += (d - mean) * (d - mean);
  const double sd = std::sqrt(var / static_cast<double>(delta.size()));
  int n = 0;
  for (double d : delta)
    if (std::abs(d - mean) > sd) ++n;
  return n;
}

std::vector<SizeAggregate> aggregate(const std::vector<EvalRow>& rows) {
  std::map<int, std::vector<double>> groups;
  for (const auto& r : rows) groups[r.n_atoms].push_back(r.delta_mEh);
  std::vector<SizeAggregate> out;
  for (const auto& [n, d] : groups) {
    SizeAggregate a;
    a.n_atoms = n;
    a.count = static_cast<int>(d.size());
    for (double v : d) {
      a.me += v;
      a.mse += v * v;
      a.mae += std::abs(v);
    }
    a.me /= a.count;
    a.mse /= a.count;
    a.mae /= a.count;
    if (a.count >= 2) {
      double var = 0.0;
      for (double v : d) var += (v - a.me) * (v - a.me);
      a.stddev = std::sqrt(var / a.count);
    }
    a.outliers = count_outliers(d);
    out.push_back(a);
  }
  return out;
}

EvalReport zero_shot_eval(const AnglePredictor& predict, const std::vector<DatasetRecord>& records) {
  EvalReport report;
  for (const auto& r : records) {
    EvalRow row;
    row.id = record_id(r);
    row.n_atoms = r.n_atoms();
    row.baseline = r.e_spa;
    row.converged = r.converged;
    try {
      row.model = model_energy(predict, r);
    } catch (const std::exception& e) {
      report.errors.push_back(row.id + ": " + e.what());
      continue;
    }
    row.delta_mEh = (row.model - row.baseline) * kMilliHartree;
    if (row.model < row.baseline - kBelowBaselineSlack) report.below_baseline.push_back(row.id);
    report.rows.push_back(std::move(row));
  }
  report.aggregates = aggregate(report.rows);
  return report;
}

std::vector<OutlierEntry> outlier_table(const EvalReport& report) {
  std::vector<OutlierEntry> out;
  for (const auto& a : aggregate(report.rows)) {
    OutlierEntry e;
    e.n_atoms = a.n_atoms;
    e.count = a.count;
    e.outliers = a.outliers;
    e.stddev = a.stddev;
    if (a.stddev) e.fraction = static_cast<double>(a.outliers) / a.count;
    out.push_back(e);
  }
  return out;
}

std::vector<SweepPoint> sweep_from_records(const AnglePredictor& predict,
                                           const std::vector<DatasetRecord>& records) {
  std::vector<SweepPoint> curve;
  for (const auto& r : records) {
    SweepPoint p;
    p.kind = r.geometry.kind;
    p.n_atoms = r.n_atoms();
    p.k = static_cast<int>(r.key);
    p.step = r.geometry.step;
    p.e_base = r.e_spa;
    p.e_model = model_energy(predict, r);
    p.abs_err_mEh = std::max(kAbsErrorFloor, std::abs(p.e_model - p.e_base) * kMilliHartree);
    p.converged = r.converged;
    curve.push_back(p);
  }
  return curve;
}

std::vector<SweepPoint> sweep_structured(const AnglePredictor& predict, GeometryKind kind,
                                         const SweepSchedule& schedule, const LabelConfig& label) {
  schedule.validate();
  if (kind == GeometryKind::kRandom) throw std::invalid_argument("sweeps are linear or ring");
  if (schedule.n_atoms % 2 != 0 || schedule.n_atoms < 2)
    throw std::invalid_argument("sweeps need an even atom count");
  std::vector<DatasetRecord> records;
  for (int k = 0; k < schedule.T; ++k) {
    const Geometry g = kind == GeometryKind::kLinear ? generate_linear(schedule, k)
                                                     : generate_ring(schedule, k);
    LabelConfig cfg = label;
    cfg.restart_seed = static_cast<std::uint64_t>(k);
    DatasetRecord r = label_instance(g, cfg);
    r.key = static_cast<std::uint64_t>(k);
    records.push_back(std::move(r));
  }
  return sweep_from_records(predict, records);
}

int baseline_minimum(const std::vector<SweepPoint>& curve) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(curve.size()); ++i)
    if (best < 0 || curve[i].e_base < curve[best].e_base) best = i;
  return best;
}

void write_rows_csv(const EvalReport& report, const std::filesystem::path& path) {
  auto os = open_csv(path);
  os << "id,n,B_x,M_x,dE_mEh\n";
  for (const auto& r : report.rows)
    os << r.id << ',' << r.n_atoms << ',' << r.baseline << ',' << r.model << ',' << r.delta_mEh
       << '\n';
}

void write_aggregates_csv(const EvalReport& report, const std::filesystem::path& path) {
  auto os = open_csv(path);
  os << "n,ME_mEh,MSE,stddev,outliers,count,MAE_mEh\n";
  for (const auto& a : report.aggregates) {
    os << a.n_atoms << ',' << a.me << ',' << a.mse << ',';
    if (a.stddev) os << *a.stddev;
    os << ',' << a.outliers << ',' << a.count << ',' << a.mae << '\n';
  }
}

void write_outliers_csv(const std::vector<OutlierEntry>& table, const std::filesystem::path& path) {
  auto os = open_csv(path);
  os << "n,count,outliers,fraction,stddev\n";
  for (const auto& e : table) {
    os << e.n_atoms << ',' << e.count << ',' << e.outliers << ',';
    if (e.fraction) os << *e.fraction;
    os << ',';
    if (e.stddev) os << *e.stddev;
    os << '\n';
  }
}

void write_sweep_csv(const std::vector<SweepPoint>& curve, const std::filesystem::path& path) {
  auto os = open_csv(path);
  os << "kind,n,d_step_angstrom,E_base,E_model,abs_err_mEh,converged\n";
  for (const auto& p : curve)
    os << to_string(p.kind) << ',' << p.n_atoms << ',' << p.step << ',' << p.e_base << ','
       << p.e_model << ',' << p.abs_err_mEh << ',' << (p.converged ? 1 : 0) << '\n';
}

}  // namespace spapred
