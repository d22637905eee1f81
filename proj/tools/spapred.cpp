// Command-line entry point: generate, label, train, eval, sweep, inspect.

#include "spapred/dataset.hpp"
#include "spapred/errors.hpp"
#include "spapred/eval.hpp"
#include "spapred/nn/checkpoint.hpp"
#include "spapred/nn/train.hpp"
#include "spapred/pipeline.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spapred;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

int default_workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

fs::path out_root() {
  const char* env = std::getenv("SPAPRED_OUT_ROOT");
  return env && *env ? fs::path(env) : fs::path(".");
}

void write_run_config(const fs::path& path, const std::string& command, json options,
                      const std::vector<std::string>& argv) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  json j{{"command", command},
         {"options", std::move(options)},
         {"argv", argv},
         {"tool_version", kPipelineVersion},
         {"record_version", kRecordVersion}};
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

std::vector<DatasetRecord> load_all(const std::vector<std::string>& paths, bool keep_going,
                                    bool converged_only = false) {
  std::vector<DatasetRecord> out;
  for (const auto& p : paths) {
    auto report = load_dataset(p, {keep_going, converged_only});
    for (const auto& e : report.errors) std::cerr << "warning: skipped " << e << '\n';
    for (auto& r : report.records) out.push_back(std::move(r));
  }
  return out;
}

void write_records(const std::vector<DatasetRecord>& records, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : records) os << to_jsonl_line(r) << '\n';
}

/// Multi-frame XYZ: atom count, comment, then "H x y z" lines per frame.
std::vector<Geometry> read_xyz(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open " + path.string());
  std::vector<Geometry> frames;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    int n = 0;
    try {
      n = std::stoi(line);
    } catch (const std::exception&) {
      throw DataError(path.string() + " line " + std::to_string(line_no) + ": expected an atom count");
    }
    std::getline(is, line);
    ++line_no;
    Geometry g;
    g.seed = frames.size();
    for (int i = 0; i < n; ++i) {
      if (!std::getline(is, line))
        throw DataError(path.string() + ": frame truncated after line " + std::to_string(line_no));
      ++line_no;
      std::istringstream ls(line);
      std::string sym;
      double x, y, z;
      if (!(ls >> sym >> x >> y >> z) || (sym != "H" && sym != "h"))
        throw DataError(path.string() + " line " + std::to_string(line_no) +
                        ": expected 'H x y z'");
      g.coords.emplace_back(x, y, z);
    }
    frames.push_back(std::move(g));
  }
  return frames;
}

AnglePredictor model_predictor(nn::Model& model) {
  return [&model](const Geometry& g, const PairMatching& m) { return model.predict(g, m); };
}

AnglePredictor zero_predictor() {
  return [](const Geometry&, const PairMatching& m) { return std::vector<double>(m.n_pairs(), 0.0); };
}

void print_aggregates(const EvalReport& report) {
  std::cout << std::left << std::setw(7) << "Atoms" << std::setw(14) << "ME (mEh)"
            << std::setw(16) << "MSE (mEh^2)" << std::setw(14) << "MAE (mEh)" << std::setw(10)
            << "Outliers" << "Count\n";
  for (const auto& a : report.aggregates)
    std::cout << std::setw(7) << a.n_atoms << std::setw(14) << a.me << std::setw(16) << a.mse
              << std::setw(14) << a.mae << std::setw(10) << a.outliers << a.count << '\n';
}

struct LabelFlags {
  bool no_orbital_opt = false;
  bool no_fci = false;
  bool greedy = false;
  bool gradient_descent = false;
  int orbital_cycles = 2;
  int max_vqe_iterations = 500;
  double vqe_tolerance = 1e-7;

  void attach(CLI::App* app) {
    app->add_flag("--no-orbital-opt", no_orbital_opt, "Skip orbital optimization");
    app->add_flag("--no-fci", no_fci, "Do not compute exact reference energies");
    app->add_flag("--greedy-matching", greedy, "Allow greedy matching above 12 atoms");
    app->add_flag("--gradient-descent", gradient_descent, "Use steepest descent instead of BFGS");
    app->add_option("--orbital-cycles", orbital_cycles, "Alternating orbital/angle cycles")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--max-vqe-iterations", max_vqe_iterations)->check(CLI::PositiveNumber);
    app->add_option("--vqe-tolerance", vqe_tolerance)->check(CLI::PositiveNumber);
  }

  LabelConfig config() const {
    LabelConfig c;
    c.orbital_optimization = !no_orbital_opt;
    c.orbital_cycles = orbital_cycles;
    c.compute_fci = !no_fci;
    c.allow_greedy_matching = greedy;
    c.gradient_descent = gradient_descent;
    c.max_vqe_iterations = max_vqe_iterations;
    c.vqe_tolerance = vqe_tolerance;
    return c;
  }
};

struct ScheduleFlags {
  int T = 36;
  double d_min = 0.5;
  double d_max = 4.0;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Pair-angle prediction for separable pair approximation circuits"};
  app.set_version_flag("--version", std::string(kPipelineVersion));
  app.require_subcommand(1);
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "More progress output");

  // generate
  auto* gen = app.add_subcommand("generate", "Generate and label a dataset (JSONL)");
  std::string gen_kind = "random";
  int gen_n = 4;
  int gen_count = 0;
  std::uint64_t gen_seed = 0;
  double gen_dmax_random = 2.5;
  ScheduleFlags gen_sched;
  std::string gen_out;
  int gen_workers = default_workers();
  bool gen_keep_going = false;
  LabelFlags gen_label;
  gen->add_option("--kind", gen_kind, "random, linear or ring")
      ->check(CLI::IsMember({"random", "linear", "ring"}));
  gen->add_option("--n-atoms", gen_n, "Even number of hydrogen atoms")->required();
  auto* count_opt = gen->add_option("--count", gen_count, "Random geometries to label");
  gen->add_option("--seed", gen_seed, "First seed of the random kind");
  auto* dmax_opt = gen->add_option("--d-max", gen_dmax_random,
                                   "Random: displacement scale; sweeps: last step (A)");
  auto* t_opt = gen->add_option("--T", gen_sched.T, "Sweep points")->check(CLI::Range(2, 100000));
  auto* dmin_opt = gen->add_option("--d-min", gen_sched.d_min, "First sweep step (A)");
  gen->add_option("--out", gen_out, "Output JSONL path")->required();
  gen->add_option("--workers", gen_workers)->check(CLI::PositiveNumber);
  gen->add_flag("--keep-going", gen_keep_going, "Continue past failed instances");
  gen_label.attach(gen);

  // label
  auto* lab = app.add_subcommand("label", "Label geometries from an XYZ file");
  std::string lab_in, lab_out;
  LabelFlags lab_label;
  lab->add_option("--xyz", lab_in, "Multi-frame XYZ file of hydrogen clusters")
      ->required()
      ->check(CLI::ExistingFile);
  lab->add_option("--out", lab_out, "Output JSONL path")->required();
  lab_label.attach(lab);

  // train
  auto* tr = app.add_subcommand("train", "Train an angle predictor");
  std::vector<std::string> tr_data;
  std::string tr_head = "mixed";
  nn::TrainOptions tr_opts;
  nn::ModelConfig tr_cfg;
  std::string tr_out;
  bool tr_keep_going = false;
  tr->add_option("--data", tr_data, "Dataset JSONL (repeatable; concatenated)")->required();
  tr->add_option("--head", tr_head)->check(CLI::IsMember({"linear", "mixed"}));
  tr->add_option("--epochs", tr_opts.epochs)->check(CLI::NonNegativeNumber);
  tr->add_option("--lr", tr_opts.learning_rate)->check(CLI::PositiveNumber);
  tr->add_option("--lr-decay", tr_opts.lr_decay)->check(CLI::PositiveNumber);
  tr->add_option("--batch", tr_opts.batch_size)->check(CLI::PositiveNumber);
  tr->add_option("--seed", tr_opts.seed, "Initialization and shuffling seed");
  tr->add_option("--val-fraction", tr_opts.validation_fraction)->check(CLI::Range(0.0, 0.99));
  tr->add_option("--feature-dim", tr_cfg.feature_dim)->check(CLI::PositiveNumber);
  tr->add_option("--out", tr_out, "Output directory")->required();
  tr->add_flag("--keep-going", tr_keep_going, "Skip corrupt dataset lines");

  // eval
  auto* ev = app.add_subcommand("eval", "Zero-shot evaluation of predicted angles");
  std::string ev_model;
  std::vector<std::string> ev_data;
  std::string ev_out;
  bool ev_keep_going = false;
  bool ev_zero = false;
  ev->add_option("--model", ev_model, "Checkpoint")->check(CLI::ExistingFile);
  ev->add_flag("--zero-angles", ev_zero, "Evaluate the theta = 0 reference instead of a model");
  ev->add_option("--data", ev_data, "Dataset JSONL (repeatable)")->required();
  ev->add_option("--out-dir", ev_out, "Defaults to $SPAPRED_OUT_ROOT/eval");
  ev->add_flag("--keep-going", ev_keep_going, "Skip corrupt dataset lines");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Structured linear or ring distance sweep");
  std::string sw_model, sw_kind = "linear", sw_out, sw_data;
  int sw_n = 4;
  ScheduleFlags sw_sched;
  LabelFlags sw_label;
  sw->add_option("--model", sw_model, "Checkpoint")->required()->check(CLI::ExistingFile);
  sw->add_option("--kind", sw_kind)->check(CLI::IsMember({"linear", "ring"}));
  sw->add_option("--n-atoms", sw_n);
  sw->add_option("--T", sw_sched.T)->check(CLI::Range(2, 100000));
  sw->add_option("--d-min", sw_sched.d_min);
  sw->add_option("--d-max", sw_sched.d_max);
  sw->add_option("--data", sw_data, "Use an already labeled sweep dataset")
      ->check(CLI::ExistingFile);
  sw->add_option("--out-dir", sw_out, "Defaults to $SPAPRED_OUT_ROOT/sweep-<kind>-<n>");
  sw_label.attach(sw);

  // inspect
  auto* in = app.add_subcommand("inspect", "Print and verify dataset records or a checkpoint");
  std::string in_data, in_model;
  int in_index = -1;
  double in_tol = 1e-8;
  auto* in_data_opt = in->add_option("--data", in_data, "Dataset JSONL")->check(CLI::ExistingFile);
  auto* in_model_opt = in->add_option("--model", in_model, "Checkpoint")->check(CLI::ExistingFile);
  in_data_opt->excludes(in_model_opt);
  in->add_option("--index", in_index, "Only this record (0-based)");
  in->add_option("--tolerance", in_tol)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) {
      DatasetSpec spec;
      spec.kind = parse_geometry_kind(gen_kind);
      spec.n_atoms = gen_n;
      spec.label = gen_label.config();
      spec.workers = gen_workers;
      spec.keep_going = gen_keep_going;
      if (spec.kind == GeometryKind::kRandom) {
        if (*t_opt || *dmin_opt) throw UsageError("--T and --d-min apply to linear and ring sweeps");
        if (!*count_opt || gen_count < 1) throw UsageError("--kind random requires --count >= 1");
        spec.count = gen_count;
        spec.first_seed = gen_seed;
        spec.d_max = gen_dmax_random;
      } else {
        if (*count_opt) throw UsageError("--count applies to the random kind; sweeps use --T");
        spec.schedule = {gen_n, gen_sched.T, gen_sched.d_min, *dmax_opt ? gen_dmax_random : 4.0};
        if (spec.kind == GeometryKind::kRing && gen_n < 4)
          throw UsageError("ring sweeps need at least 4 atoms");
      }
      if (gen_n < 2 || gen_n % 2 != 0) throw UsageError("--n-atoms must be even and >= 2");
      const fs::path out(gen_out);
      write_run_config(out.string() + ".run_config.json", "generate", spec.to_json(), args);
      const auto summary = generate_dataset(spec, out, [&](std::size_t done, std::size_t total) {
        if (verbosity > 0) std::cerr << "\rlabeled " << done << "/" << total << std::flush;
      });
      if (verbosity > 0) std::cerr << '\n';
      std::cout << "wrote " << summary.total << " records to " << out.string() << " ("
                << summary.written << " new, " << summary.skipped << " resumed, "
                << summary.failed << " failed)\n";
      return summary.failed > 0 ? kNumerical : kOk;
    }

    if (*lab) {
      const LabelConfig cfg = lab_label.config();
      const fs::path out(lab_out);
      write_run_config(out.string() + ".run_config.json", "label",
                       {{"xyz", lab_in}, {"label", cfg.to_json()}}, args);
      std::vector<DatasetRecord> records;
      for (const auto& g : read_xyz(lab_in)) {
        LabelConfig c = cfg;
        c.restart_seed = g.seed;
        records.push_back(label_instance(g, c));
        const auto& r = records.back();
        std::cout << "frame " << r.key << ": E_SPA " << std::setprecision(12) << r.e_spa;
        if (r.e_fci) std::cout << "  E_FCI " << *r.e_fci;
        std::cout << (r.converged ? "" : "  (not converged)") << '\n';
      }
      write_records(records, out);
      return kOk;
    }

    if (*tr) {
      tr_cfg.head = nn::parse_head_kind(tr_head);
      tr_cfg.seed = tr_opts.seed;
      const fs::path out(tr_out);
      write_run_config(out / "run_config.json", "train",
                       {{"data", tr_data}, {"model", tr_cfg.to_json()}, {"train", tr_opts.to_json()}},
                       args);
      const auto records = load_all(tr_data, tr_keep_going);
      tr_opts.on_epoch = [&](const nn::EpochStats& s) {
        if (verbosity > 0 || s.epoch % 10 == 0) {
          std::cerr << "epoch " << s.epoch << " train " << s.train_loss;
          if (s.val_loss) std::cerr << " val " << *s.val_loss;
          std::cerr << '\n';
        }
      };
      const auto result = nn::train(records, tr_cfg, tr_opts);
      nn::save_checkpoint(result.model, out / "model.ckpt",
                          {{"best_epoch", result.best_epoch},
                           {"n_train", result.n_train},
                           {"n_validation", result.n_validation},
                           {"train", tr_opts.to_json()}});
      nn::write_training_log(result.log, out / "train_log.csv");
      std::cout << "trained " << result.model.parameter_count() << " parameters on "
                << result.n_train << " records (" << result.n_validation << " validation, "
                << result.skipped_unconverged << " unconverged skipped); best epoch "
                << result.best_epoch << "\n";
      return kOk;
    }

    if (*ev) {
      if (ev_model.empty() == !ev_zero) throw UsageError("give exactly one of --model or --zero-angles");
      const fs::path out = ev_out.empty() ? out_root() / "eval" : fs::path(ev_out);
      write_run_config(out / "run_config.json", "eval",
                       {{"model", ev_model}, {"zero_angles", ev_zero}, {"data", ev_data}}, args);
      const auto records = load_all(ev_data, ev_keep_going);
      std::optional<nn::Model> model;
      if (!ev_zero) model = nn::load_checkpoint(ev_model);
      const auto report = zero_shot_eval(model ? model_predictor(*model) : zero_predictor(), records);
      write_rows_csv(report, out / "rows.csv");
      write_aggregates_csv(report, out / "aggregates.csv");
      write_outliers_csv(outlier_table(report), out / "outliers.csv");
      print_aggregates(report);
      for (const auto& e : report.errors) std::cerr << "excluded " << e << '\n';
      if (!report.below_baseline.empty())
        std::cerr << report.below_baseline.size() << " rows below their baseline\n";
      return kOk;
    }

    if (*sw) {
      const GeometryKind kind = parse_geometry_kind(sw_kind);
      const fs::path out = sw_out.empty()
                               ? out_root() / ("sweep-" + sw_kind + "-" + std::to_string(sw_n))
                               : fs::path(sw_out);
      const SweepSchedule sched{sw_n, sw_sched.T, sw_sched.d_min, sw_sched.d_max};
      const LabelConfig cfg = sw_label.config();
      json opts{{"model", sw_model}, {"kind", sw_kind}, {"n_atoms", sw_n}, {"T", sched.T},
                {"d_min", sched.d_min}, {"d_max", sched.d_max}, {"label", cfg.to_json()}};
      if (!sw_data.empty()) opts["data"] = sw_data;
      write_run_config(out / "run_config.json", "sweep", opts, args);
      nn::Model model = nn::load_checkpoint(sw_model);
      std::vector<SweepPoint> curve;
      if (!sw_data.empty()) {
        curve = sweep_from_records(model_predictor(model), load_all({sw_data}, false));
      } else {
        DatasetSpec spec;
        spec.kind = kind;
        spec.n_atoms = sw_n;
        spec.schedule = sched;
        spec.label = cfg;
        spec.workers = default_workers();
        const fs::path records = out / "sweep_records.jsonl";
        generate_dataset(spec, records);
        curve = sweep_from_records(model_predictor(model), load_all({records.string()}, false));
      }
      write_sweep_csv(curve, out / "sweep.csv");
      std::cout << "d_step  E_base  E_model  abs_err_mEh\n" << std::setprecision(10);
      for (const auto& p : curve)
        std::cout << p.step << "  " << p.e_base << "  " << p.e_model << "  " << p.abs_err_mEh
                  << (p.converged ? "" : "  (baseline not converged)") << '\n';
      return kOk;
    }

    if (*in) {
      if (!in_model.empty()) {
        json meta;
        const nn::Model m = nn::load_checkpoint(in_model, &meta);
        std::cout << "config: " << m.config().to_json().dump() << '\n'
                  << "parameters: " << m.parameter_count() << '\n'
                  << "metadata: " << meta.dump() << '\n'
                  << "hash: " << std::hex << nn::model_hash(m) << std::dec << '\n';
        return kOk;
      }
      if (in_data.empty()) throw UsageError("inspect needs --data or --model");
      const auto records = load_all({in_data}, false);
      int bad = 0;
      std::cout << std::setprecision(12);
      for (int i = 0; i < static_cast<int>(records.size()); ++i) {
        if (in_index >= 0 && i != in_index) continue;
        const auto& r = records[i];
        const auto check = verify_record(r, in_tol);
        std::cout << "[" << i << "] " << to_string(r.geometry.kind) << " key " << r.key << ", "
                  << r.n_atoms() << " atoms, " << r.hamiltonian.size() << " Pauli terms\n"
                  << "  pairs:";
        for (const auto& [a, b] : r.matching.pairs) std::cout << " (" << a << "," << b << ")";
        std::cout << "\n  theta:";
        for (double t : r.theta) std::cout << ' ' << t;
        std::cout << "\n  E_SPA " << r.e_spa << " (recomputed " << check.recomputed_e_spa
                  << ")  E(theta=0) " << r.reference_energy();
        if (r.e_fci) std::cout << "  E_FCI " << *r.e_fci;
        std::cout << "\n  " << (check.ok ? "ok" : "INVALID");
        for (const auto& v : check.violations) std::cout << "; " << v;
        std::cout << '\n';
        if (!check.ok) ++bad;
      }
      if (in_index >= static_cast<int>(records.size()))
        throw UsageError("--index beyond the " + std::to_string(records.size()) + " records");
      return bad ? kData : kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kOk;
}
