#include "spapred/dataset.hpp"

#include "spapred/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace spapred {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_atomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << content;
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

json read_json_file(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot read " + path.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw DataError("malformed " + path.string() + ": " + e.what());
  }
}

}  // namespace

std::vector<std::uint64_t> DatasetSpec::keys() const {
  std::vector<std::uint64_t> k;
  if (kind == GeometryKind::kRandom) {
    for (int i = 0; i < count; ++i) k.push_back(first_seed + static_cast<std::uint64_t>(i));
  } else {
    schedule.validate();
    for (int i = 0; i < schedule.T; ++i) k.push_back(static_cast<std::uint64_t>(i));
  }
  return k;
}

Geometry DatasetSpec::geometry_for(std::uint64_t key) const {
  switch (kind) {
    case GeometryKind::kRandom:
      return generate_random(n_atoms, d_max, key);
    case GeometryKind::kLinear:
      return generate_linear(schedule, static_cast<int>(key));
    case GeometryKind::kRing:
      return generate_ring(schedule, static_cast<int>(key));
  }
  throw std::logic_error("unhandled geometry kind");
}

json DatasetSpec::identity_json() const {
  json j{{"kind", to_string(kind)}, {"n_atoms", n_atoms}, {"label", label.to_json()},
         {"record_version", kRecordVersion}};
  if (kind == GeometryKind::kRandom) {
    j["count"] = count;
    j["first_seed"] = first_seed;
    j["d_max"] = d_max;
  } else {
    j["T"] = schedule.T;
    j["d_min"] = schedule.d_min;
    j["d_max"] = schedule.d_max;
  }
  return j;
}

json DatasetSpec::to_json() const {
  json j = identity_json();
  j["workers"] = workers;
  j["keep_going"] = keep_going;
  return j;
}

fs::path manifest_path(const fs::path& out) { return out.string() + ".manifest.json"; }

GenerateSummary generate_dataset(const DatasetSpec& spec, const fs::path& out,
                                 const ProgressCallback& progress) {
  const auto keys = spec.keys();
  const std::set<std::uint64_t> wanted(keys.begin(), keys.end());
  const fs::path manifest = manifest_path(out);
  const json identity = spec.identity_json();

  if (fs::exists(manifest)) {
    const json m = read_json_file(manifest);
    if (m.at("spec") != identity)
      throw DataError("dataset spec differs from " + manifest.string() +
                      "; choose a new output path");
  } else if (fs::exists(out) && fs::file_size(out) > 0) {
    throw DataError(out.string() + " exists without a manifest; refusing to overwrite");
  }
  if (out.has_parent_path()) fs::create_directories(out.parent_path());

  // Valid lines from an earlier, possibly interrupted, run.
  std::map<std::uint64_t, std::string> lines;
  if (fs::exists(out)) {
    std::ifstream is(out);
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      try {
        const auto rec = record_from_json(json::parse(line));
        if (wanted.count(rec.key)) lines[rec.key] = line;
      } catch (const std::exception&) {
        // Truncated tail from an interrupted write; relabel it.
      }
    }
  }

  GenerateSummary summary;
  summary.skipped = lines.size();
  std::vector<std::uint64_t> pending;
  for (auto k : keys)
    if (!lines.count(k)) pending.push_back(k);

  std::mutex mu;
  std::vector<std::string> failures;
  const auto write_manifest = [&](bool finalized) {
    json completed = json::array();
    for (const auto& [k, _] : lines) completed.push_back(k);
    json m{{"spec", identity},
           {"completed", completed},
           {"failures", failures},
           {"finalized", finalized},
           {"pipeline_version", kPipelineVersion}};
    write_atomically(manifest, m.dump(2) + "\n");
  };

  {
    std::string content;
    for (const auto& [_, l] : lines) content += l + "\n";
    write_atomically(out, content);
    write_manifest(false);
  }

  std::ofstream os(out, std::ios::app);
  if (!os) throw std::runtime_error("cannot append to " + out.string());

  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr first_error;
  std::size_t done = 0;

  const auto worker = [&]() {
    while (!abort.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pending.size()) return;
      const std::uint64_t key = pending[i];
      try {
        LabelConfig cfg = spec.label;
        cfg.restart_seed = key;
        DatasetRecord rec = label_instance(spec.geometry_for(key), cfg);
        rec.key = key;
        rec.timestamp = utc_timestamp();
        const std::string line = to_jsonl_line(rec);
        std::lock_guard lock(mu);
        os << line << '\n';
        os.flush();
        if (!os) throw std::runtime_error("write failed: " + out.string());
        lines[key] = line;
        ++summary.written;
        write_manifest(false);
        if (progress) progress(++done, pending.size());
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        ++summary.failed;
        failures.push_back("key " + std::to_string(key) + ": " + e.what());
        if (!spec.keep_going && !first_error) {
          first_error = std::current_exception();
          abort.store(true);
        }
      }
    }
  };

  const int n_workers =
      std::max(1, std::min<int>(spec.workers, static_cast<int>(std::max<std::size_t>(1, pending.size()))));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  os.close();

  if (first_error) {
    write_manifest(false);
    std::rethrow_exception(first_error);
  }

  std::string content;
  for (const auto& [_, l] : lines) content += l + "\n";
  write_atomically(out, content);
  write_manifest(true);
  summary.total = lines.size();
  return summary;
}

LoadReport load_dataset(const fs::path& path, const LoadOptions& opts) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open dataset " + path.string());
  LoadReport report;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception& e) {
        throw DataError(std::string("invalid JSON: ") + e.what());
      }
      auto rec = record_from_json(j);
      if (opts.converged_only && !rec.converged) continue;
      report.records.push_back(std::move(rec));
    } catch (const DataError& e) {
      const std::string msg = path.string() + " line " + std::to_string(line_no) + ": " + e.what();
      if (!opts.keep_going) throw DataError(msg);
      report.errors.push_back(msg);
    }
  }
  return report;
}

}  // namespace spapred
