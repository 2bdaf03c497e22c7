#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mstn/errors.hpp"
#include "mstn/exact.hpp"
#include "mstn/heuristic.hpp"
#include "mstn/instance.hpp"
#include "mstn/model_export.hpp"
#include "mstn/oracle.hpp"
#include "mstn/sha256.hpp"
#include "mstn/solve_report.hpp"
#include "mstn/svg.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr double kDeskTimeLimit = 60.0;
constexpr double kPaperTimeLimit = 7200.0;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mstn::ValidationError("cannot write file: " + path.string());
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mstn::ValidationError("cannot read file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct SolveConfig {
  std::string method = "exact-bc";
  double eps = 1e-6;
  double time_limit = kDeskTimeLimit;
  bool time_limit_set = false;
  bool paper_limits = false;

  double effective_time_limit() const { return paper_limits ? kPaperTimeLimit : time_limit; }
};

mstn::SolveReport run_method(const mstn::Instance& inst, const SolveConfig& cfg) {
  if (cfg.method == "exact-bc" || cfg.method == "exact-iter") {
    mstn::ExactOptions opts;
    opts.eps = cfg.eps;
    opts.time_limit = cfg.effective_time_limit();
    return cfg.method == "exact-bc" ? mstn::solve_branch_and_cut(inst, opts)
                                    : mstn::solve_iterative(inst, opts);
  }
  if (cfg.method == "heuristic") {
    mstn::HeuristicOptions opts;
    opts.time_limit = cfg.effective_time_limit();
    return mstn::multistart(inst, opts);
  }
  if (cfg.method == "enumerate") {
    mstn::OracleOptions opts;
    opts.time_limit = cfg.effective_time_limit();
    return mstn::solve_enumerate(inst, opts);
  }
  throw mstn::UsageError("unknown method '" + cfg.method +
                         "' (expected exact-bc, exact-iter, heuristic or enumerate)");
}

// A solve "succeeds" when it ends in the status its configuration asks for.
bool solve_succeeded(const mstn::SolveReport& report, const SolveConfig& cfg) {
  if (report.status == mstn::SolveStatus::Optimal) return true;
  if (report.status == mstn::SolveStatus::TimeLimit) return cfg.time_limit_set;
  return cfg.method == "heuristic";  // GapLimit is the heuristic's normal exit
}

int cmd_gen(const std::vector<int>& ns, const std::vector<int>& dims,
            const std::vector<int>& scenarios, int count, std::uint64_t seed_base,
            const std::string& out_dir) {
  fs::create_directories(out_dir);
  json manifest;
  manifest["seed_base"] = seed_base;
  manifest["count"] = count;
  json list = json::array();
  std::uint64_t index = 0;
  for (int n : ns) {
    for (int dim : dims) {
      for (int scenario : scenarios) {
        for (int i = 0; i < count; ++i) {
          mstn::GeneratorConfig cfg;
          cfg.n = n;
          cfg.dimension = dim;
          cfg.radii_scenario = scenario;
          cfg.seed = seed_base + index++;
          const mstn::Instance inst = mstn::generate(cfg);
          const std::string file_name = inst.name + ".mstn.json";
          const std::string body = mstn::save_instance(inst);
          write_file(fs::path(out_dir) / file_name, body);
          list.push_back(json{{"path", file_name},
                              {"sha256", mstn::sha256_hex(body)},
                              {"n", n},
                              {"dim", dim},
                              {"scenario", scenario},
                              {"seed", cfg.seed}});
        }
      }
    }
  }
  manifest["instances"] = std::move(list);
  write_file(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << index << " instances + manifest to " << out_dir << "\n";
  return 0;
}

int cmd_solve(const std::string& instance_path, const SolveConfig& cfg, std::string out_path,
              const std::string& svg_path) {
  const mstn::Instance inst = mstn::load_instance_file(instance_path);
  mstn::SolveReport report = run_method(inst, cfg);
  mstn::validate_report(inst, report);
  if (out_path.empty()) out_path = instance_path + "." + cfg.method + ".report.json";
  write_file(out_path, mstn::report_to_json(report));
  if (!svg_path.empty()) write_file(svg_path, mstn::render_solution_svg(inst, report));
  std::cout << inst.name << " " << cfg.method << ": objective " << report.objective << " lb "
            << report.bound << " status " << mstn::to_string(report.status) << " ("
            << report.wall_time << "s)\n";
  return solve_succeeded(report, cfg) ? 0 : 1;
}

int cmd_export(const std::string& instance_path, const std::string& format, int max_subset_size,
               std::string out_path) {
  const mstn::Instance inst = mstn::load_instance_file(instance_path);
  std::string body;
  if (format == "sec") {
    body = mstn::export_sec(inst, max_subset_size);
  } else if (format == "mtz") {
    body = mstn::export_mtz(inst);
  } else {
    throw mstn::UsageError("unknown export format '" + format + "' (expected sec or mtz)");
  }
  if (out_path.empty()) out_path = instance_path + "." + format + ".cbf";
  write_file(out_path, body);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

struct BenchRow {
  int scenario = 0;
  int n = 0;
  std::string method;
  std::string instance;
  bool failed = false;
  bool solved = false;
  bool matches_mst = false;
  double cpu = 0, gap0 = 0, gap = 0, obj = 0, lb = 0, ub = 0;
  long sec_cuts = 0, benders_cuts = 0, nodes = 0;
};

std::string csv_num(double v) {
  if (!std::isfinite(v)) return "";
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

int cmd_bench(const std::string& manifest_path, const std::vector<std::string>& methods,
              const std::string& out_csv, const SolveConfig& base_cfg) {
  const json manifest = json::parse(read_file(manifest_path));
  const fs::path base_dir = fs::path(manifest_path).parent_path();

  struct Task {
    fs::path path;
    int scenario, n;
    std::string method;
  };
  std::vector<Task> tasks;
  for (const json& entry : manifest.at("instances")) {
    for (const std::string& method : methods) {
      tasks.push_back({base_dir / entry.at("path").get<std::string>(),
                       entry.at("scenario").get<int>(), entry.at("n").get<int>(), method});
    }
  }

  int threads = 1;
  if (const char* env = std::getenv("MSTN_THREADS")) {
    threads = std::max(1, std::atoi(env));
  }
  threads = std::min<int>(threads, static_cast<int>(tasks.size()));

  std::vector<BenchRow> rows(tasks.size());
  std::atomic<std::size_t> cursor{0};
  std::mutex log_mutex;
  const auto worker = [&] {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= tasks.size()) break;
      const Task& task = tasks[i];
      BenchRow& row = rows[i];
      row.scenario = task.scenario;
      row.n = task.n;
      row.method = task.method;
      row.instance = task.path.filename().string();
      try {
        const mstn::Instance inst = mstn::load_instance_file(task.path.string());
        SolveConfig cfg = base_cfg;
        cfg.method = task.method;
        const mstn::SolveReport report = run_method(inst, cfg);
        mstn::validate_report(inst, report);
        row.solved = solve_succeeded(report, cfg);
        row.cpu = report.wall_time;
        row.gap0 = 100.0 * report.gap0;
        row.gap = 100.0 * report.gap;
        row.obj = report.objective;
        row.lb = report.bound;
        row.ub = task.method == "heuristic" && report.mst_upper > 0.0 ? report.mst_upper
                                                                      : report.objective;
        row.sec_cuts = report.sec_cuts;
        row.benders_cuts = report.benders_cuts;
        row.nodes = report.nodes;
        row.matches_mst = report.matches_center_mst;
      } catch (const std::exception& err) {
        row.failed = true;
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cerr << "bench: " << task.path << " [" << task.method << "] failed: " << err.what()
                  << "\n";
      }
    }
  };
  {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.scenario, a.n, a.method, a.instance) <
           std::tie(b.scenario, b.n, b.method, b.instance);
  });

  const std::string header =
      "r,n,method,cpu_s,sec_cuts,benders_cuts,nodes,gap0_pct,gap_pct,solved_pct,obj,lb,ub";
  std::ostringstream out;
  out << header << "\n";
  for (const BenchRow& row : rows) {
    out << row.scenario << "," << row.n << "," << row.method << ",";
    if (row.failed) {
      out << ",,,,,," << "0" << ",,,\n";
      continue;
    }
    out << csv_num(row.cpu) << "," << row.sec_cuts << "," << row.benders_cuts << "," << row.nodes
        << "," << csv_num(row.gap0) << "," << csv_num(row.gap) << ","
        << (row.solved ? "100" : "0") << "," << csv_num(row.obj) << "," << csv_num(row.lb) << ","
        << csv_num(row.ub) << "\n";
  }
  write_file(out_csv, out.str());

  // Aggregated block averages, plus the deviation/MST columns used for the
  // heuristic tables.
  struct Block {
    std::vector<const BenchRow*> rows;
  };
  std::map<std::tuple<int, int, std::string>, Block> blocks;
  for (const BenchRow& row : rows) {
    if (!row.failed) blocks[{row.scenario, row.n, row.method}].rows.push_back(&row);
  }
  std::ostringstream agg;
  agg << header << ",dev_lb_pct,dev_ub_pct,mst_pct\n";
  for (const auto& [key, block] : blocks) {
    const auto& [scenario, n, method] = key;
    const double count = static_cast<double>(block.rows.size());
    double cpu = 0, gap0 = 0, gap = 0, obj = 0, lb = 0, ub = 0, solved = 0;
    double sec = 0, ben = 0, nodes = 0, dev_lb = 0, dev_ub = 0, mst_match = 0;
    for (const BenchRow* row : block.rows) {
      cpu += row->cpu;
      gap0 += row->gap0;
      gap += row->gap;
      obj += row->obj;
      lb += row->lb;
      ub += row->ub;
      solved += row->solved ? 100.0 : 0.0;
      sec += row->sec_cuts;
      ben += row->benders_cuts;
      nodes += row->nodes;
      dev_lb += row->obj > 1e-12 ? 100.0 * (row->obj - row->lb) / row->obj : 0.0;
      dev_ub += row->ub > 1e-12 ? 100.0 * (row->ub - row->obj) / row->ub : 0.0;
      mst_match += row->matches_mst ? 100.0 : 0.0;
    }
    agg << scenario << "," << n << "," << method << "," << csv_num(cpu / count) << ","
        << csv_num(sec / count) << "," << csv_num(ben / count) << "," << csv_num(nodes / count)
        << "," << csv_num(gap0 / count) << "," << csv_num(gap / count) << ","
        << csv_num(solved / count) << "," << csv_num(obj / count) << "," << csv_num(lb / count)
        << "," << csv_num(ub / count) << "," << csv_num(dev_lb / count) << ","
        << csv_num(dev_ub / count) << "," << csv_num(mst_match / count) << "\n";
  }
  write_file(out_csv + ".aggregate.csv", agg.str());

  const bool all_ok = std::all_of(rows.begin(), rows.end(), [](const BenchRow& row) {
    return !row.failed && row.solved;
  });
  std::cout << "bench: " << rows.size() << " rows -> " << out_csv << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimum spanning trees over movable vertices: solvers and tools"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate benchmark instances");
  std::vector<int> gen_n{5, 6, 7};
  std::vector<int> gen_dim{2};
  std::vector<int> gen_scenarios{1, 2, 3, 4};
  int gen_count = 5;
  std::uint64_t gen_seed_base = 1;
  std::string gen_out = "instances";
  gen->add_option("--n", gen_n, "vertex counts")->delimiter(',');
  gen->add_option("--dim", gen_dim, "dimensions (2 and/or 3)")->delimiter(',');
  gen->add_option("--scenarios", gen_scenarios, "radii scenarios (1..4)")->delimiter(',');
  gen->add_option("--count", gen_count, "instances per combination");
  gen->add_option("--seed-base", gen_seed_base, "first seed; instance i gets seed-base + i");
  gen->add_option("--out", gen_out, "output directory");

  // solve
  auto* solve = app.add_subcommand("solve", "solve one instance");
  std::string solve_instance;
  SolveConfig solve_cfg;
  std::string solve_out, solve_svg;
  solve->add_option("instance", solve_instance, "instance file (.mstn.json)")->required();
  solve->add_option("--method", solve_cfg.method, "exact-bc | exact-iter | heuristic | enumerate");
  solve->add_option("--eps", solve_cfg.eps, "absolute UB-LB gap target");
  auto* tl = solve->add_option("--time-limit", solve_cfg.time_limit, "seconds");
  solve->add_flag("--paper-limits", solve_cfg.paper_limits, "use the 7200 s profile");
  solve->add_option("--out", solve_out, "report path (JSON)");
  solve->add_option("--svg", solve_svg, "also render the solution to this SVG file");

  // export
  auto* exp = app.add_subcommand("export", "write a conic model file");
  std::string exp_instance, exp_format = "sec", exp_out;
  int exp_subset = 4;
  exp->add_option("instance", exp_instance, "instance file")->required();
  exp->add_option("--format", exp_format, "sec | mtz");
  exp->add_option("--max-subset-size", exp_subset, "subset-row truncation (sec format)");
  exp->add_option("--out", exp_out, "output path (.cbf)");

  // bench
  auto* bench = app.add_subcommand("bench", "run methods over a generated manifest");
  std::string bench_manifest, bench_out = "bench.csv";
  std::vector<std::string> bench_methods{"heuristic"};
  SolveConfig bench_cfg;
  bench->add_option("--manifest", bench_manifest, "manifest.json from gen")->required();
  bench->add_option("--methods", bench_methods, "comma-separated method list")->delimiter(',');
  bench->add_option("--out", bench_out, "CSV path");
  bench->add_option("--eps", bench_cfg.eps, "absolute gap target");
  auto* btl = bench->add_option("--time-limit", bench_cfg.time_limit, "seconds per solve");
  bench->add_flag("--paper-limits", bench_cfg.paper_limits, "use the 7200 s profile");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return cmd_gen(gen_n, gen_dim, gen_scenarios, gen_count, gen_seed_base, gen_out);
    }
    if (solve->parsed()) {
      solve_cfg.time_limit_set = tl->count() > 0;
      return cmd_solve(solve_instance, solve_cfg, solve_out, solve_svg);
    }
    if (exp->parsed()) {
      return cmd_export(exp_instance, exp_format, exp_subset, exp_out);
    }
    if (bench->parsed()) {
      bench_cfg.time_limit_set = btl->count() > 0;
      return cmd_bench(bench_manifest, bench_methods, bench_out, bench_cfg);
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
