// Acceptance suite: the CLI run against pinned configurations. Prints one
// PASS/FAIL line per criterion and exits non-zero if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wrapkit/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  std::string file;
  std::vector<std::string> args;
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::vector<Run> runs;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

std::vector<Criterion> criteria() {
  std::vector<Criterion> out;

  Criterion c1{1, "Poisson summation: wrapped vs spectral heat kernel, gap < 1e-8", 10, {}};
  for (const char* g : {"torus1", "torus2", "su2", "so3", "su2xsu2"})
    for (double t : {0.1, 0.5, 1.0, 2.0})
      c1.runs.push_back({std::string("c1_") + g + "_t" + fmt(t) + ".json",
                         {"kernel", "--group", g, "--t", fmt(t), "--grid", "20", "--tol", "1e-10", "--threshold",
                          "1e-8"}});
  out.push_back(c1);

  Criterion c2{2, "Wrapping formula: coefficient gap < 1e-12, pointwise gap < 1e-6", 5, {}};
  for (const char* g : {"su2", "su3"})
    c2.runs.push_back({std::string("c2_") + g + ".json",
                       {"wrap-formula-check", "--group", g, "--mixture-a", "1:0.3", "--mixture-b", "1:0.5",
                        "--points", "32", "--coef-threshold", "1e-12", "--threshold", "1e-6"}});
  out.push_back(c2);

  Criterion c3{3, "Shifted Laplacian: wraplap gap < 1e-12", 2, {}};
  for (const char* g : {"torus1", "torus2", "su2", "so3", "su2xsu2", "su3"})
    for (double t : {0.5, 1.0})
      c3.runs.push_back({std::string("c3_") + g + "_t" + fmt(t) + ".json",
                         {"wraplap-check", "--group", g, "--t", fmt(t), "--threshold", "1e-12"}});
  out.push_back(c3);

  Criterion c4{4, "Semigroup: coefficient gap < 1e-12, quadrature gap < 1e-6", 5, {}};
  for (auto [t, s] : {std::pair{0.5, 0.5}, std::pair{0.3, 0.7}})
    c4.runs.push_back({"c4_su2_t" + fmt(t) + "_s" + fmt(s) + ".json",
                       {"semigroup-check", "--group", "su2", "--t", fmt(t), "--s", fmt(s), "--coef-threshold",
                        "1e-12", "--threshold", "1e-6"}});
  out.push_back(c4);

  Criterion c5{5, "Brownian spectral decay on su2", 60, {}};
  c5.runs.push_back({"c5_su2.json",
                     {"simulate", "--check", "decay", "--group", "su2", "--t", "1", "--paths", "100000", "--step",
                      "0.001", "--seed", "42", "--weight", "1"}});
  out.push_back(c5);

  Criterion c6{6, "Wrapped Brownian motion: |z| <= 3 plus 5h", 180, {}};
  for (const char* g : {"torus1", "su2", "so3"})
    for (double t : {0.5, 1.0})
      c6.runs.push_back({std::string("c6_") + g + "_t" + fmt(t) + ".json",
                         {"wrap-bm-check", "--group", g, "--t", fmt(t), "--paths", "100000", "--step", "0.001",
                          "--seed", "42", "--f", "character"}});
  out.push_back(c6);

  Criterion c7{7, "Empirical density on su2, 12 bins", 120, {}};
  c7.runs.push_back({"c7_su2.json",
                     {"simulate", "--check", "density", "--group", "su2", "--t", "1", "--paths", "200000", "--step",
                      "0.001", "--seed", "42", "--bins", "12"}});
  out.push_back(c7);

  Criterion c8{8, "Complex bend: exact at H=0, ratio error < 1e-4 at t=1e-4", 1, {}};
  for (const char* g : {"torus2", "su2", "so3", "su2xsu2", "su3"})
    c8.runs.push_back({std::string("c8_") + g + ".json",
                       {"bend", "--group", g, "--t", "1e-4", "--radius", "0.3", "--threshold", "1e-4"}});
  out.push_back(c8);

  return out;
}

struct Outcome {
  bool pass = true;
  double seconds = 0.0;
  std::vector<std::string> failures;
};

Outcome execute(const Criterion& c, const fs::path& dir, const std::string& threads) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& r : c.runs) {
    auto args = r.args;
    args.insert(args.end(), {"--threads", threads, "--format", "json", "-o", (dir / r.file).string()});
    const int code = wrapkit::cli::run(args);
    if (code != wrapkit::cli::kExitOk) {
      o.pass = false;
      o.failures.push_back(r.file + " (exit " + std::to_string(code) + ")");
    }
  }
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main() {
  const fs::path root = fs::temp_directory_path() / "wrapkit_acceptance";
  fs::remove_all(root);
  const fs::path dir1 = root / "threads1";
  const fs::path dir4 = root / "threads4";
  fs::create_directories(dir1);
  fs::create_directories(dir4);

  const auto list = criteria();
  std::vector<std::string> lines;
  bool all = true;
  for (const auto& c : list) {
    const Outcome o = execute(c, dir1, "1");
    all = all && o.pass;
    char buf[512];
    std::snprintf(buf, sizeof buf, "criterion %d: %s  %s  [%.1f s, budget %.0f s%s]", c.id, o.pass ? "PASS" : "FAIL",
                  c.title.c_str(), o.seconds, c.budget_s, o.seconds > c.budget_s ? ", over budget" : "");
    std::string line = buf;
    for (const auto& f : o.failures) line += "\n    failed: " + f;
    lines.push_back(line);
    std::cout << line << std::endl;
  }

  bool same = true;
  std::size_t compared = 0;
  std::vector<std::string> diffs;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& c : list) {
    execute(c, dir4, "4");
    for (const auto& r : c.runs) {
      ++compared;
      const auto a = dir1 / r.file;
      const auto b = dir4 / r.file;
      if (!fs::exists(a) || !fs::exists(b) || slurp(a) != slurp(b)) {
        same = false;
        diffs.push_back(r.file);
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  all = all && same;
  char buf[512];
  std::snprintf(buf, sizeof buf, "criterion 9: %s  Determinism: %zu output files byte-identical for --threads 1 and 4  [%.1f s]",
                same ? "PASS" : "FAIL", compared, secs);
  std::string line = buf;
  for (const auto& d : diffs) line += "\n    differs: " + d;
  lines.push_back(line);
  std::cout << line << std::endl;

  std::cout << "\nSummary\n";
  for (const auto& l : lines) std::cout << l.substr(0, l.find('\n')) << "\n";
  std::cout << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << std::endl;
  return all ? 0 : 1;
}
