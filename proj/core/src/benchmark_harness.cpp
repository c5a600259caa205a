#include "scsvm/benchmark_harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "scsvm/error.hpp"

namespace scsvm {

std::filesystem::path resolve_dataset_path(const std::string& name_or_path) {
  std::filesystem::path direct(name_or_path);
  if (std::filesystem::exists(direct)) return direct;
  if (const char* dir = std::getenv(kDataDirEnv); dir != nullptr && *dir != '\0') {
    return std::filesystem::path(dir) / name_or_path;
  }
  return direct;
}

std::vector<DatasetEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open manifest '{}'", path.string()));
  const auto base = path.parent_path();
  auto locate = [&base](const std::string& token) {
    std::filesystem::path p(token);
    if (p.is_absolute()) return p;
    if (std::filesystem::exists(base / p)) return base / p;
    return resolve_dataset_path(token);
  };

  std::vector<DatasetEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string name, train, test, extra;
    if (!(fields >> name)) continue;
    if (!(fields >> train)) throw ParseError("manifest entry needs 'name train_path [test_path]'", line_no);
    DatasetEntry entry{name, locate(train), std::nullopt};
    if (fields >> test) entry.test = locate(test);
    if (fields >> extra) throw ParseError("too many fields in manifest entry", line_no);
    entries.push_back(std::move(entry));
  }
  return entries;
}

namespace {

struct LoadedDataset {
  std::string name;
  std::optional<SparseDataset> train;
  std::optional<SparseDataset> test;
  std::string error;
  std::optional<double> dcd_time_s;
  std::optional<double> dcd_accuracy_pct;
};

LoadedDataset load_entry(const DatasetEntry& entry, const BenchConfig& cfg) {
  LoadedDataset out{entry.name, std::nullopt, std::nullopt, {}, std::nullopt, std::nullopt};
  try {
    if (entry.test) {
      auto train = load_signed_dataset(entry.train);
      auto test = load_signed_dataset(*entry.test);
      const auto m = std::max(train.num_features(), test.num_features());
      out.train = train.with_num_features(m);
      out.test = test.with_num_features(m);
    } else {
      auto parts = split(load_signed_dataset(entry.train), cfg.test_fraction, cfg.seed);
      out.train = std::move(parts.train);
      out.test = std::move(parts.test);
    }
    if (cfg.compare_dcd) {
      const auto start = std::chrono::steady_clock::now();
      const auto result = dcd_train(*out.train, cfg.dcd);
      out.dcd_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      out.dcd_accuracy_pct = accuracy(result.model, *out.test);
    }
  } catch (const std::exception& e) {
    out.train.reset();
    out.test.reset();
    out.error = e.what();
  }
  return out;
}

BenchmarkRow run_row(const LoadedDataset& data, double sr, const BenchConfig& cfg) {
  BenchmarkRow row;
  row.dataset = data.name;
  row.sr = sr;
  row.dcd_time_s = data.dcd_time_s;
  row.dcd_accuracy_pct = data.dcd_accuracy_pct;
  if (!data.train) {
    row.failed = true;
    row.error = data.error;
    return row;
  }
  try {
    MpmConfig mpm = cfg.mpm;
    mpm.s.reset();
    mpm.sparse_ratio = sr;
    auto [model, report] = mpm_train(*data.train, mpm);
    row.s = report.s;
    row.k = report.outer_iterations;
    row.cg = report.total_cg;
    row.time_s = report.wall_time_s;
    row.converged = report.converged();
    row.accuracy_pct = accuracy(model, *data.test);
    row.train_misclassified = train_misclassified_count(model, *data.train);
    row.history = std::move(report.history);
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<BenchmarkRow> run_benchmark(const std::vector<DatasetEntry>& datasets, const BenchConfig& cfg) {
  std::vector<LoadedDataset> loaded;
  loaded.reserve(datasets.size());
  for (const auto& entry : datasets) loaded.push_back(load_entry(entry, cfg));

  const std::size_t grid = cfg.sr_grid.size();
  std::vector<BenchmarkRow> rows(loaded.size() * grid);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (auto task = next++; task < rows.size(); task = next++) {
      rows[task] = run_row(loaded[task / grid], cfg.sr_grid[task % grid], cfg);
    }
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(rows.size())));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return rows;
}

std::string benchmark_csv(const std::vector<BenchmarkRow>& rows, bool include_dcd) {
  std::string out = "dataset,sr,k,cg,time_s,accuracy_pct,train_misclassified,s";
  if (include_dcd) out += ",dcd_time_s,dcd_accuracy_pct,time_pair,accuracy_pair";
  out += ",status\n";
  for (const auto& row : rows) {
    const auto sr_pct = fmt::format("{:g}", 100.0 * row.sr);
    if (row.failed) {
      out += fmt::format("{},{},,,,,,", row.dataset, sr_pct);
      if (include_dcd) out += ",,,,";
      out += ",failed\n";
      continue;
    }
    out += fmt::format("{},{},{},{},{:.6f},{:.4f},{},{}", row.dataset, sr_pct, row.k, row.cg, row.time_s,
                       row.accuracy_pct, row.train_misclassified, row.s);
    if (include_dcd) {
      if (row.dcd_accuracy_pct) {
        out += fmt::format(",{:.6f},{:.4f},{:.3f}|{:.3f},{:.2f}|{:.2f}", *row.dcd_time_s, *row.dcd_accuracy_pct,
                           row.time_s, *row.dcd_time_s, row.accuracy_pct, *row.dcd_accuracy_pct);
      } else {
        out += ",,,,";
      }
    }
    out += row.converged ? ",ok\n" : ",not_converged\n";
  }
  return out;
}

std::string benchmark_json(const std::vector<BenchmarkRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json j = {{"dataset", row.dataset}, {"sr", row.sr}, {"failed", row.failed}};
    if (row.failed) {
      j["error"] = row.error;
    } else {
      j.update({{"s", row.s},
                {"k", row.k},
                {"cg", row.cg},
                {"time_s", row.time_s},
                {"accuracy_pct", row.accuracy_pct},
                {"train_misclassified", row.train_misclassified},
                {"converged", row.converged}});
      nlohmann::json history = nlohmann::json::array();
      for (const auto& r : row.history) {
        history.push_back(
            {{"k", r.k}, {"F", r.F}, {"f", r.f}, {"p", r.p}, {"f_prog", r.f_prog}, {"p_prog", r.p_prog},
             {"cg_iterations", r.cg_iterations}});
      }
      j["history"] = std::move(history);
    }
    if (row.dcd_accuracy_pct) {
      j["dcd"] = {{"time_s", *row.dcd_time_s}, {"accuracy_pct", *row.dcd_accuracy_pct}};
    }
    if (const auto ref = reference_run(row.dataset, row.sr)) {
      j["reference"] = {{"k", ref->k}, {"cg", ref->cg}, {"accuracy_pct", ref->accuracy_pct}};
    }
    if (const auto cmp = reference_comparison(row.dataset)) {
      j["reference_comparison"] = {
          {"mpm", cmp->mpm}, {"dcd_l2", cmp->dcd_l2}, {"trn_l2", cmp->trn_l2}, {"dcd_l1", cmp->dcd_l1}};
    }
    out.push_back(std::move(j));
  }
  return out.dump(2);
}

}  // namespace scsvm
