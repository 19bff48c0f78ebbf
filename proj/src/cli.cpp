#include "wrapkit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "wrapkit/brownian.hpp"
#include "wrapkit/errors.hpp"
#include "wrapkit/heat.hpp"
#include "wrapkit/lie_data.hpp"
#include "wrapkit/output.hpp"
#include "wrapkit/parallel.hpp"
#include "wrapkit/wrapping.hpp"

namespace wrapkit::cli {
namespace {

const std::vector<std::string> kUnechoed = {"help", "threads", "output", "config"};

struct Params {
  std::string group;
  std::string output = "-";
  std::string format = "csv";
  unsigned threads = 1;
  std::string config;

  double t = 1.0;
  double s = 0.5;
  int grid = 16;
  int points = 20;
  double tol = 1e-10;
  double threshold = 1e-8;
  double coef_threshold = 1e-12;
  std::string mixture;
  std::string mixture_a = "1:0.3";
  std::string mixture_b = "1:0.5";
  double cutoff = 50.0;

  double step = 1e-3;
  std::int64_t paths = 100'000;
  std::uint64_t seed = 42;
  std::int64_t chunk = 1000;
  int bins = 12;
  std::string check = "density";
  std::string weight;
  std::string f = "character";
  double radius = 0.3;
};

struct Result {
  Table table;
  bool pass = true;
  std::string summary;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string join_point(const TorusPoint& h) {
  std::string out;
  for (Eigen::Index i = 0; i < h.coords.size(); ++i) {
    if (i) out += ';';
    out += format_double(h.coords[i]);
  }
  return out;
}

std::string short_double(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

IntVector parse_weight(const GroupSpec& g, const std::string& text) {
  IntVector w = IntVector::Zero(g.rank);
  if (text.empty()) {
    w[0] = 1;
    return w;
  }
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stoi(trim(item), &used));
      if (used != trim(item).size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("malformed weight '" + text + "'");
    }
  }
  if (static_cast<int>(parts.size()) != g.rank)
    throw DomainError("weight '" + text + "' needs " + std::to_string(g.rank) + " coordinates");
  for (int i = 0; i < g.rank; ++i) w[i] = parts[i];
  return w;
}

std::vector<std::pair<std::string, std::string>> conventions() {
  return {{"inner_product", "-2tr on su(n); -tr on u(1); -tr/2 on so(3)"},
          {"fourier", "nu^(xi) = int nu(x) exp(-i<xi,x>) dx; p_t^(xi) = exp(-|xi|^2 t/2)"},
          {"heat", "d/dt q = (1/2) Laplacian q; shifted kernel uses |lambda+rho|^2"},
          {"laplacian_sign", "non-positive"},
          {"haar", "normalised to total mass 1"}};
}

std::vector<std::pair<std::string, std::string>> effective_config(const CLI::App& sub) {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("command", sub.get_name());
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (std::find(kUnechoed.begin(), kUnechoed.end(), name) != kUnechoed.end()) continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    if (!value.empty()) out.emplace_back(name, value);
  }
  return out;
}

SdeConfig sde_config(const Params& p) {
  SdeConfig cfg;
  cfg.t = p.t;
  cfg.step = p.step;
  cfg.paths = p.paths;
  cfg.seed = p.seed;
  cfg.chunk = p.chunk;
  cfg.threads = p.threads;
  return cfg;
}

RadialFunction nu_from(const GroupSpec& g, const Params& p) {
  if (!p.mixture.empty()) return gaussian_mixture(g.dim, parse_mixture(p.mixture));
  return heat_gaussian(g.dim, p.t);
}

std::string nu_label(const Params& p) {
  return p.mixture.empty() ? "p_t(t=" + format_double(p.t) + ")" : p.mixture;
}

Result poisson_table(const GroupSpec& g, const RadialFunction& nu, const Params& p) {
  const auto grid = alcove_points(g, static_cast<std::size_t>(p.points));
  const auto rows = poisson_rows(g, nu, grid, p.tol);
  Result r;
  r.table.columns = {"H", "lattice", "spectral", "gap"};
  double max_gap = 0.0;
  for (const auto& row : rows) {
    r.table.rows.push_back({join_point(row.h), row.lattice, row.spectral, row.gap});
    max_gap = std::max(max_gap, std::isnan(row.gap) ? INFINITY : row.gap);
  }
  r.pass = max_gap < p.threshold;
  r.summary = "max gap " + short_double(max_gap);
  return r;
}

Result cmd_kernel(const GroupSpec& g, const Params& p) {
  if (!(p.t > 0)) throw DomainError("t must be positive");
  if (p.grid < 1) throw DomainError("grid must be positive");
  const auto grid = alcove_points(g, static_cast<std::size_t>(p.grid));
  struct Row {
    double spectral = NAN, wrapped = NAN;
    KernelPath path = KernelPath::spectral;
  };
  std::vector<Row> rows(grid.size());
  parallel_for(grid.size(), p.threads, [&](std::size_t i) {
    try {
      rows[i].spectral = spectral_heat_kernel(g, grid[i], p.t, true, p.tol);
    } catch (const ResourceError&) {
    }
    rows[i].wrapped = wrapped_heat_kernel(g, grid[i], p.t, p.tol);
    rows[i].path = preferred_path(g, grid[i], p.t);
  });
  Result r;
  r.table.columns = {"H", "spectral", "wrapped", "gap", "path"};
  double max_gap = 0.0;
  std::int64_t compared = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double gap = std::abs(rows[i].spectral - rows[i].wrapped);
    r.table.rows.push_back({join_point(grid[i]), rows[i].spectral, rows[i].wrapped, gap, to_string(rows[i].path)});
    if (std::isnan(rows[i].spectral)) continue;
    ++compared;
    max_gap = std::max(max_gap, std::isnan(gap) ? INFINITY : gap);
  }
  r.table.footer.emplace_back("compared", std::to_string(compared));
  r.pass = max_gap < p.threshold;
  r.summary = "max gap " + short_double(max_gap) + " over " + std::to_string(compared) + " points";
  return r;
}

Result cmd_semigroup(const GroupSpec& g, const Params& p) {
  const auto pts = alcove_points(g, static_cast<std::size_t>(p.points));
  const auto gap = semigroup_gap(g, p.t, p.s, pts, p.tol, p.threads);
  Result r;
  r.table.columns = {"group", "t", "s", "coefficient_gap", "pointwise_gap", "pass"};
  r.pass = gap.coefficient_gap < p.coef_threshold && gap.pointwise_gap < p.threshold;
  r.table.rows.push_back({g.name, p.t, p.s, gap.coefficient_gap, gap.pointwise_gap, r.pass});
  r.summary = "coefficient gap " + short_double(gap.coefficient_gap) + ", pointwise gap " +
              short_double(gap.pointwise_gap);
  return r;
}

Result cmd_wrap_formula(const GroupSpec& g, const Params& p) {
  const auto a = parse_mixture(p.mixture_a);
  const auto b = parse_mixture(p.mixture_b);
  const auto pts = alcove_points(g, static_cast<std::size_t>(p.points));
  const auto gap = wrap_formula_gap(g, a, b, pts, p.tol, p.threads);
  Result r;
  r.table.columns = {"group", "mixture_a", "mixture_b", "coefficient_gap", "pointwise_gap", "pass"};
  r.pass = gap.coefficient_gap < p.coef_threshold && gap.pointwise_gap < p.threshold;
  r.table.rows.push_back({g.name, p.mixture_a, p.mixture_b, gap.coefficient_gap, gap.pointwise_gap, r.pass});
  r.summary = "coefficient gap " + short_double(gap.coefficient_gap) + ", pointwise gap " +
              short_double(gap.pointwise_gap);
  return r;
}

Result cmd_wraplap(const GroupSpec& g, const Params& p) {
  const RadialFunction nu = nu_from(g, p);
  const double gap = wraplap_check(g, nu, p.cutoff);
  Result r;
  r.table.columns = {"group", "nu", "cutoff", "gap", "pass"};
  r.pass = gap < p.threshold;
  r.table.rows.push_back({g.name, nu_label(p), p.cutoff, gap, r.pass});
  r.summary = "gap " + short_double(gap);
  return r;
}

Result cmd_simulate(const GroupSpec& g, const Params& p) {
  const SdeConfig cfg = sde_config(p);
  Result r;
  if (p.check == "density") {
    const auto rep = empirical_density_check(g, cfg, p.bins);
    r.table.columns = {"lo", "hi", "expected", "observed", "deviation", "threshold", "used"};
    for (const auto& b : rep.bins)
      r.table.rows.push_back({b.lo, b.hi, b.expected, b.observed, b.deviation, b.threshold, b.used});
    r.table.footer.emplace_back("max_deviation", format_double(rep.max_deviation));
    r.table.footer.emplace_back("max_defect", format_double(rep.max_defect));
    r.pass = rep.pass;
    r.summary = "max relative deviation " + short_double(rep.max_deviation);
    return r;
  }
  if (p.check == "decay") {
    const IntVector w = parse_weight(g, p.weight);
    const auto rep = spectral_decay_check(g, w, cfg);
    r.table.columns = {"group", "weight", "t", "step", "paths", "estimate", "std_error",
                       "exact", "scheme", "bias_allowance", "max_defect", "pass"};
    std::string wtext;
    for (int i = 0; i < w.size(); ++i) wtext += (i ? "," : "") + std::to_string(w[i]);
    r.table.rows.push_back({g.name, wtext, p.t, p.step, rep.estimate.n, rep.estimate.mean, rep.estimate.std_error,
                            rep.exact, rep.scheme, rep.bias_allowance, rep.max_defect, rep.pass});
    r.pass = rep.pass;
    r.summary = "|estimate - exact| = " + short_double(std::abs(rep.estimate.mean - rep.exact)) +
                ", allowance " + short_double(3 * rep.estimate.std_error + rep.bias_allowance);
    return r;
  }
  throw DomainError("unknown check '" + p.check + "' (density or decay)");
}

Result cmd_wrap_bm(const GroupSpec& g, const Params& p) {
  const SdeConfig cfg = sde_config(p);
  CentralEvaluator f;
  std::string flabel = p.f;
  if (p.f == "one") {
    f = [](const TorusPoint&) { return 1.0; };
  } else if (p.f == "character") {
    const Weight w = make_weight(g, parse_weight(g, p.weight));
    f = [g, w](const TorusPoint& h) { return character(g, w, h).real(); };
    flabel = "character(";
    for (int i = 0; i < w.coords.size(); ++i) flabel += (i ? "," : "") + std::to_string(w.coords[i]);
    flabel += ")";
  } else {
    throw DomainError("unknown test function '" + p.f + "' (one or character)");
  }
  const auto rep = wrap_bm_check(g, f, cfg);
  Result r;
  r.table.columns = {"group", "f", "t", "step", "paths", "lhs", "lhs_std_error", "rhs", "rhs_std_error",
                     "z", "bias_allowance", "max_defect", "pass"};
  r.table.rows.push_back({g.name, flabel, p.t, p.step, rep.lhs.n, rep.lhs.mean, rep.lhs.std_error, rep.rhs.mean,
                          rep.rhs.std_error, rep.z, rep.bias_allowance, rep.max_defect, rep.pass});
  r.pass = rep.pass;
  r.summary = "z = " + short_double(rep.z);
  return r;
}

Result cmd_bend(const GroupSpec& g, const Params& p) {
  if (!(p.t > 0)) throw DomainError("t must be positive");
  const ComplexGroupSpec gc = complexify(g);
  std::vector<TorusPoint> pts;
  pts.emplace_back(Vector(Vector::Zero(g.rank)));
  const auto dirs = alcove_points(g, 5);
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const double len = p.radius * static_cast<double>(k + 1) / static_cast<double>(dirs.size());
    pts.emplace_back(Vector(dirs[k].coords.normalized() * len));
  }
  const int n = gc.real_dim;
  const double exact_origin = std::pow(2 * M_PI * p.t, -0.5 * n);
  Result r;
  r.table.columns = {"H", "t", "bend", "flat", "j_complex", "ratio_error"};
  double max_err = 0.0;
  bool origin_exact = true;
  for (const auto& h : pts) {
    const double bend = bend_complex(gc, h, p.t);
    const double norm_sq = h.coords.squaredNorm();
    const double flat = flat_heat_kernel(norm_sq, p.t, n);
    const double j = j_complex(gc, h);
    const double log_flat = -0.5 * n * std::log(2 * M_PI * p.t) - norm_sq / (2 * p.t);
    const double ratio = std::exp(log_bend_complex(gc, h, p.t) - log_flat);
    const double err = std::abs(ratio - 1.0 / j);
    if (norm_sq == 0.0) origin_exact = origin_exact && bend == exact_origin;
    max_err = std::max(max_err, std::isnan(err) ? INFINITY : err);
    r.table.rows.push_back({join_point(h), p.t, bend, flat, j, err});
  }
  r.table.footer.emplace_back("complex_group", gc.name);
  r.table.footer.emplace_back("origin_exact", origin_exact ? "true" : "false");
  r.pass = origin_exact && max_err < p.threshold;
  r.summary = std::string("origin ") + (origin_exact ? "exact" : "inexact") + ", max ratio error " +
              short_double(max_err);
  return r;
}

Result cmd_catalog(const std::string& only) {
  Result r;
  r.table.columns = {"name", "rank", "dim", "positive_roots", "weyl_order", "rho", "rho_norm_sq",
                     "torus_volume", "haar_volume"};
  std::vector<std::string> names;
  if (!only.empty()) {
    names.push_back(only);
  } else {
    for (const auto& n : catalog_names()) {
      if (n.find('<') == std::string::npos) {
        names.push_back(n);
      } else {
        names.push_back("torus1");
        names.push_back("torus2");
      }
    }
  }
  for (const auto& name : names) {
    const GroupSpec g = make_group(name);
    std::string rho;
    for (int i = 0; i < g.rank; ++i) rho += (i ? ";" : "") + format_double(g.rho[i]);
    r.table.rows.push_back({g.name, std::int64_t{g.rank}, std::int64_t{g.dim},
                            static_cast<std::int64_t>(g.positive_roots.size()),
                            static_cast<std::int64_t>(g.weyl_group.size()), rho, g.rho_norm_sq, g.torus_volume,
                            g.haar_volume});
  }
  r.summary = std::to_string(names.size()) + " groups";
  return r;
}

// Appends "--key value" for config-file keys not already given as flags.
std::vector<std::string> merge_config(const CLI::App& app, std::vector<std::string> args) {
  if (args.empty() || args[0].empty() || args[0][0] == '-') return args;
  const CLI::App* sub = nullptr;
  for (const CLI::App* s : app.get_subcommands([](const CLI::App*) { return true; }))
    if (s->get_name() == args[0]) sub = s;
  if (!sub) return args;
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  auto given = [&](const std::string& key) {
    for (const auto& a : args)
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
    return false;
  };
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    while (!key.empty() && key[0] == '-') key.erase(0, 1);
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config" || key == "help" || !sub->get_option_no_throw("--" + key))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "' for " + sub->get_name());
    if (given(key)) continue;
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

}  // namespace

int run(const std::vector<std::string>& raw_args) {
  std::deque<Params> store;
  auto fresh = [&store]() -> Params& {
    Params& q = store.emplace_back();
    q.threads = default_threads();
    return q;
  };
  CLI::App app{"wrapkit: heat kernels and the wrapping map on compact Lie groups"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1, 1);

  auto add_common = [](CLI::App* sub, Params& p, bool group_required) {
    auto* g = sub->add_option("--group", p.group, "Catalog group (torus<n>, su2, so3, su2xsu2, su3)");
    if (group_required) g->required();
    sub->add_option("-o,--output", p.output, "Output path, - for stdout");
    sub->add_option("--format", p.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", p.threads, "Worker cap; does not change results")->check(CLI::PositiveNumber);
    sub->add_option("--config", p.config, "key=value file; flags take precedence");
  };
  auto add_sde = [](CLI::App* sub, Params& p) {
    sub->add_option("--t", p.t, "Time");
    sub->add_option("--step", p.step, "Euler step h");
    sub->add_option("--paths", p.paths, "Number of paths");
    sub->add_option("--seed", p.seed, "Random seed");
    sub->add_option("--chunk", p.chunk, "Paths per reduction chunk");
  };

  std::string ran;
  std::function<Result()> action;
  const Params* chosen = nullptr;
  // Each subcommand owns its parameters so per-command defaults stay separate.
  auto command = [&](const std::string& name, const std::string& about, bool group_required,
                     std::function<Result(const Params&)> fn) -> std::pair<CLI::App*, Params*> {
    CLI::App* sub = app.add_subcommand(name, about);
    Params* p = &fresh();
    add_common(sub, *p, group_required);
    sub->callback([&ran, &action, &chosen, name, fn, p] {
      ran = name;
      chosen = p;
      action = [fn, p] { return fn(*p); };
    });
    return {sub, p};
  };

  {
    auto [sub, p] = command("kernel", "Spectral and wrapped heat kernels on an alcove grid", true,
                            [](const Params& q) { return cmd_kernel(make_group(q.group), q); });
    sub->add_option("--t", p->t, "Time");
    sub->add_option("--grid", p->grid, "Number of alcove points");
    sub->add_option("--tol", p->tol, "Truncation tolerance per evaluator");
    sub->add_option("--threshold", p->threshold, "Pass threshold on max gap");
  }
  auto poisson_fn = [](const Params& q) {
    const GroupSpec g = make_group(q.group);
    return poisson_table(g, nu_from(g, q), q);
  };
  {
    auto [sub, p] = command("poisson-check", "Poisson summation: geodesic sum against character sum", true, poisson_fn);
    sub->add_option("--t", p->t, "Time of the flat heat kernel");
    sub->add_option("--mixture", p->mixture, "Gaussian mixture w1:s1,w2:s2,... instead of p_t");
    sub->add_option("--points", p->points, "Number of alcove points");
    sub->add_option("--tol", p->tol, "Truncation tolerance per side");
    sub->add_option("--threshold", p->threshold, "Pass threshold on max gap");
  }
  {
    auto [sub, p] = command("semigroup-check", "q_t * q_s against q_{t+s}", true,
                            [](const Params& q) { return cmd_semigroup(make_group(q.group), q); });
    p->points = 16;
    p->threshold = 1e-6;
    sub->add_option("--t", p->t, "First time");
    sub->add_option("--s", p->s, "Second time");
    sub->add_option("--points", p->points, "Number of comparison points");
    sub->add_option("--tol", p->tol, "Truncation tolerance");
    sub->add_option("--coef-threshold", p->coef_threshold, "Pass threshold on coefficient gap");
    sub->add_option("--threshold", p->threshold, "Pass threshold on pointwise gap");
  }
  {
    auto [sub, p] = command("wrap", "Wrap a Gaussian mixture: geodesic sum and character sum", true, poisson_fn);
    p->points = 8;
    sub->add_option("--mixture", p->mixture, "Gaussian mixture w1:s1,w2:s2,...")->required();
    sub->add_option("--points", p->points, "Number of alcove points");
    sub->add_option("--tol", p->tol, "Truncation tolerance per side");
    sub->add_option("--threshold", p->threshold, "Pass threshold on max gap");
  }
  {
    auto [sub, p] = command("wrap-formula-check", "wrap(a * b) against wrap(a) *_G wrap(b)", true,
                            [](const Params& q) { return cmd_wrap_formula(make_group(q.group), q); });
    p->points = 32;
    p->threshold = 1e-6;
    sub->add_option("--mixture-a", p->mixture_a, "First Gaussian mixture");
    sub->add_option("--mixture-b", p->mixture_b, "Second Gaussian mixture");
    sub->add_option("--points", p->points, "Number of comparison points");
    sub->add_option("--tol", p->tol, "Truncation tolerance");
    sub->add_option("--coef-threshold", p->coef_threshold, "Pass threshold on coefficient gap");
    sub->add_option("--threshold", p->threshold, "Pass threshold on pointwise gap");
  }
  {
    auto [sub, p] = command("wraplap-check", "wrap(L nu) against the shifted Laplacian of wrap(nu)", true,
                            [](const Params& q) { return cmd_wraplap(make_group(q.group), q); });
    p->threshold = 1e-12;
    sub->add_option("--t", p->t, "Time of the flat heat kernel");
    sub->add_option("--mixture", p->mixture, "Gaussian mixture instead of p_t");
    sub->add_option("--cutoff", p->cutoff, "Weight cutoff |lambda+rho|^2");
    sub->add_option("--threshold", p->threshold, "Pass threshold");
  }
  {
    auto [sub, p] = command("simulate", "Brownian motion on the group", true,
                            [](const Params& q) { return cmd_simulate(make_group(q.group), q); });
    add_sde(sub, *p);
    sub->add_option("--check", p->check, "density or decay")->check(CLI::IsMember({"density", "decay"}));
    sub->add_option("--bins", p->bins, "Histogram bins (density)");
    sub->add_option("--weight", p->weight, "Highest weight, comma separated (decay)");
  }
  {
    auto [sub, p] = command("wrap-bm-check", "Flat Brownian motion wrapped against group Brownian motion", true,
                            [](const Params& q) { return cmd_wrap_bm(make_group(q.group), q); });
    add_sde(sub, *p);
    sub->add_option("--f", p->f, "Test function: one or character")->check(CLI::IsMember({"one", "character"}));
    sub->add_option("--weight", p->weight, "Highest weight of the character, comma separated");
  }
  {
    auto [sub, p] = command("bend", "Heat kernel of the complexified group", true,
                            [](const Params& q) { return cmd_bend(make_group(q.group), q); });
    p->t = 1e-4;
    p->threshold = 1e-4;
    sub->add_option("--t", p->t, "Time");
    sub->add_option("--radius", p->radius, "Largest |H| of the sample points");
    sub->add_option("--threshold", p->threshold, "Pass threshold on ratio error");
  }
  {
    auto [sub, p] = command("catalog", "Root data of the catalog groups", false,
                            [](const Params& q) { return cmd_catalog(q.group); });
    (void)sub;
    (void)p;
  }

  try {
    std::vector<std::string> args = merge_config(app, raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    Result r = action();
    std::vector<std::pair<std::string, std::string>> footer = conventions();
    for (auto& kv : effective_config(*app.get_subcommand(ran))) footer.push_back(std::move(kv));
    for (auto& kv : r.table.footer) footer.push_back(std::move(kv));
    footer.emplace_back("status", r.pass ? "pass" : "fail");
    r.table.footer = std::move(footer);
    const Params& p = *chosen;
    write_table(r.table, p.output, p.format == "json" ? Format::json : Format::csv);
    std::cerr << ran << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.summary << ")\n";
    return r.pass ? kExitOk : kExitCheckFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace wrapkit::cli
