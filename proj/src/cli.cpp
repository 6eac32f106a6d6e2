#include "ipp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ipp/checks.hpp"
#include "ipp/cost.hpp"
#include "ipp/io.hpp"
#include "ipp/palm.hpp"
#include "ipp/weakconv.hpp"

namespace ipp {
namespace {

/// Raised by a subcommand whose statistical check failed under --assert.
struct AcceptanceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(trim(std::string(text.substr(start, pos - start))));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("IPP_SEED");
  if (!env || !*env) return 1;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(env, &used, 0);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("IPP_SEED is not an unsigned integer: '") + env + "'");
  }
}

/// `nn:range`, `count:r[:cap]`, `empty:r`.
Functional parse_statistic(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts[0] == "nn" && parts.size() == 2) return nearest_neighbour_distance(to_double(parts[1]));
  if (parts[0] == "count" && (parts.size() == 2 || parts.size() == 3)) {
    return count_in_ball(to_double(parts[1]),
                         parts.size() == 3 ? to_double(parts[2]) : std::numeric_limits<double>::infinity());
  }
  if (parts[0] == "empty" && parts.size() == 2) return empty_ball_indicator(to_double(parts[1]));
  throw std::invalid_argument("unknown statistic '" + text + "'");
}

/// `ball:r`, `nn:range`, `spawn:range`.
Transport parse_transport(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 2) {
    const double v = to_double(parts[1]);
    if (parts[0] == "ball") return ball_transport(v);
    if (parts[0] == "nn") return nearest_neighbour_transport(v);
    if (parts[0] == "spawn") return spawn_transport(v);
  }
  throw std::invalid_argument("unknown transport '" + text + "'");
}

/// `box:x0,x1[,y0,y1[,z0,z1]][@l0[-l1]]` or `ball:x[,y[,z]],r[@level]`,
/// windows separated by ';', each optionally suffixed `[m0,m1]` for a mark
/// interval.
FddWindowSet parse_windows(const Space& space, const std::string& text) {
  FddWindowSet set;
  for (auto item : split(text, ';')) {
    if (item.empty()) continue;
    std::optional<std::pair<double, double>> marks;
    if (const auto lb = item.find('['); lb != std::string::npos) {
      const auto rb = item.find(']', lb);
      if (rb == std::string::npos) throw std::invalid_argument("unclosed mark interval in '" + item + "'");
      const auto m = split(item.substr(lb + 1, rb - lb - 1), ',');
      if (m.size() != 2) throw std::invalid_argument("mark interval needs two bounds");
      marks = std::make_pair(to_double(m[0]), to_double(m[1]));
      item = item.substr(0, lb);
    }
    int level_lo = 0, level_hi = 0;
    if (const auto at = item.find('@'); at != std::string::npos) {
      const auto l = split(item.substr(at + 1), '-');
      level_lo = static_cast<int>(to_double(l[0]));
      level_hi = l.size() > 1 ? static_cast<int>(to_double(l[1])) : level_lo;
      item = item.substr(0, at);
    }
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("window needs a shape prefix: '" + item + "'");
    const std::string shape = item.substr(0, colon);
    std::vector<double> v;
    for (const auto& s : split(item.substr(colon + 1), ',')) v.push_back(to_double(s));
    const auto dim = static_cast<std::size_t>(space.dim());
    if (shape == "box") {
      if (v.size() != 2 * dim) throw std::invalid_argument("box window needs 2 bounds per coordinate");
      std::array<double, 3> lo{}, hi{};
      for (std::size_t a = 0; a < dim; ++a) {
        lo[a] = v[2 * a];
        hi[a] = v[2 * a + 1];
      }
      set.add(Region::box(lo, hi, level_lo, level_hi), marks);
    } else if (shape == "ball") {
      if (v.size() != dim + 1) throw std::invalid_argument("ball window needs a centre and a radius");
      Point c{};
      for (std::size_t a = 0; a < dim; ++a) c.x[a] = v[a];
      c.level = level_lo;
      set.add(Region::ball(c, v[dim]), marks);
    } else {
      throw std::invalid_argument("unknown window shape '" + shape + "'");
    }
  }
  if (set.windows.empty()) throw std::invalid_argument("no fdd windows given");
  return set;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split(text, ',')) out.push_back(to_double(s));
  return out;
}

/// Shared output handling: CSV to --csv or the console.
struct Output {
  std::string csv_path;
  std::ostream* console = nullptr;

  void emit(const std::string& text) const {
    if (csv_path.empty()) {
      *console << text;
      return;
    }
    std::ofstream os(csv_path);
    if (!os) throw FormatError("cannot write " + csv_path);
    os << text;
  }
};

void require(bool assert_mode, bool ok, const std::string& what) {
  if (assert_mode && !ok) throw AcceptanceFailure("acceptance check failed: " + what);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::vector<std::string> config_file_tokens(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open config file " + path);
  std::vector<std::string> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(is, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError(path + ": line " + std::to_string(number) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw FormatError(path + ": line " + std::to_string(number) + ": empty key");
    out.push_back("--" + key + "=" + value);
  }
  return out;
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Invariant point process experiments", "ipp"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }

  // Config-file values become flags placed right after the subcommand name
  // so that explicit flags, which come later, take precedence.
  std::string config_path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) {
      config_path = args[k + 1];
      args.erase(args.begin() + static_cast<long>(k), args.begin() + static_cast<long>(k) + 2);
      break;
    }
    if (args[k].rfind("--config=", 0) == 0) {
      config_path = args[k].substr(9);
      args.erase(args.begin() + static_cast<long>(k));
      break;
    }
  }
  if (!config_path.empty()) {
    try {
      auto tokens = config_file_tokens(config_path);
      const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return a.rfind("-", 0) != 0; });
      const auto at = sub == args.end() ? args.end() : sub + 1;
      args.insert(at, tokens.begin(), tokens.end());
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitPrecondition;
    }
  }

  Output output;
  output.console = &out;
  bool assert_mode = false;
  std::size_t replicas = 0;
  std::string space_text;
  double t = 1.0;

  auto common = [&](CLI::App* sub, std::size_t default_replicas) {
    sub->add_option("--seed", seed, "master seed (default: $IPP_SEED or 1)");
    sub->add_option("--csv", output.csv_path, "write the CSV report here instead of stdout");
    sub->add_flag("--assert", assert_mode, "exit 3 when a statistical acceptance check fails");
    sub->add_option("--replicas", replicas, "Monte Carlo replicas")->check(CLI::PositiveNumber);
    sub->callback([&replicas, default_replicas] {
      if (replicas == 0) replicas = default_replicas;
    });
  };

  // sample
  auto* sample = app.add_subcommand("sample", "draw one configuration");
  std::string process_text, out_path, graph_text;
  std::size_t replica_index = 0;
  sample->add_option("--space", space_text, "space descriptor")->required();
  sample->add_option("--process", process_text, "process descriptor")->required();
  sample->add_option("--seed", seed, "master seed (default: $IPP_SEED or 1)");
  sample->add_option("--replica", replica_index, "replica index of the seed stream");
  sample->add_option("--graph", graph_text, "also write a PPG1 graph built by this rule");
  sample->add_option("--out", out_path, "output path (stdout when absent)");

  // verify
  auto* verify = app.add_subcommand("verify", "Palm, Poisson and factor-map law checks");
  common(verify, 2000);
  std::string verify_kind, statistic_text = "nn:3", transport_text = "ball:1", offsets_text, eps_text = "0.1,0.3,0.5";
  double alpha = 0.01, p_keep = 0.3, radius = 1.0, cap = 5.0, delta = 1.0;
  std::size_t min_edges = 10000;
  verify->add_option("kind", verify_kind, "poisson|thinning|thickening|percolation|encoding|colouring|mecke|clmm|mtp|palm-thickening")
      ->required()
      ->check(CLI::IsMember({"poisson", "thinning", "thickening", "percolation", "encoding", "colouring", "mecke",
                             "clmm", "mtp", "palm-thickening"}));
  verify->add_option("--space", space_text, "space descriptor")->default_val("torus2:20");
  verify->add_option("--t", t, "intensity")->default_val(1.0);
  verify->add_option("--process", process_text, "process descriptor (clmm, mtp)");
  verify->add_option("--statistic", statistic_text, "nn:R | count:r[:cap] | empty:r");
  verify->add_option("--transport", transport_text, "ball:r | nn:R | spawn:R");
  verify->add_option("--offsets", offsets_text, "thickening offsets x[,y][@level];...");
  verify->add_option("--alpha", alpha, "test level");
  verify->add_option("--p", p_keep, "thinning retention probability");
  verify->add_option("--radius", radius, "graph or ball radius");
  verify->add_option("--cap", cap, "ball-count truncation (clmm)");
  verify->add_option("--eps", eps_text, "percolation levels");
  verify->add_option("--min-edges", min_edges, "percolation edge budget");
  verify->add_option("--delta", delta, "encoding separation");
  int colours = 2;
  double rho = 2.0;
  verify->add_option("--colours", colours, "colour count (colouring)");
  verify->add_option("--rho", rho, "colouring neighbourhood radius");

  // cost
  auto* cost = app.add_subcommand("cost", "graphing cost upper bounds");
  common(cost, 200);
  std::string cost_kind, factor_graph_text, factor_step;
  int rank = 2, levels = 40;
  double covol = 1.0, side = 20.0;
  cost->add_option("kind", cost_kind, "graphing|lattice|vertical|monotone")
      ->required()
      ->check(CLI::IsMember({"graphing", "lattice", "vertical", "monotone"}));
  cost->add_option("--space", space_text, "space descriptor");
  cost->add_option("--process", process_text, "process descriptor");
  cost->add_option("--graph", graph_text, "graphing rule(s), ';'-separated: dist:R | knn:k | cayley[:spacing] | vertical");
  cost->add_option("--factor-step", factor_step, "factor map appended to the process (monotone)");
  cost->add_option("--factor-graph", factor_graph_text, "graphing rule(s) for the factor (monotone)");
  cost->add_option("--rank", rank, "lattice rank");
  cost->add_option("--covol", covol, "lattice covolume");
  cost->add_option("--t", t, "base intensity (vertical)");
  cost->add_option("--side", side, "base torus side (vertical)");
  cost->add_option("--levels", levels, "level count (vertical)");
  cost->add_option("--eps", eps_text, "percolation levels (vertical)");

  // gxz
  auto* gxz = app.add_subcommand("gxz", "straightening map convergence diagnostics");
  common(gxz, 2000);
  GxzParams gp;
  std::string ns_text = "2,5,10,20";
  gxz->add_option("--t", gp.t, "intensity");
  gxz->add_option("--ns", ns_text, "comma-separated n values");
  gxz->add_option("--side", gp.side, "base side");
  gxz->add_option("--levels", gp.levels, "level count");
  gxz->add_option("--successor-eps", gp.successor_eps, "successor radius");
  gxz->add_option("--wobble-radius", gp.wobble_radius, "wobble ball radius");

  // wobble
  auto* wobble = app.add_subcommand("wobble", "(eps, R)-wobble distance between two PPC1 files");
  std::string path_a, path_b;
  double wobble_r = 1.0;
  wobble->add_option("a", path_a, "first configuration")->required();
  wobble->add_option("b", path_b, "second configuration")->required();
  wobble->add_option("--R", wobble_r, "ball radius")->required();
  wobble->add_option("--csv", output.csv_path, "write the CSV report here instead of stdout");

  // fdd
  auto* fdd = app.add_subcommand("fdd", "finite-dimensional distribution comparison");
  common(fdd, 5000);
  std::string process_b_text, windows_text, expect = "same";
  fdd->add_option("--space", space_text, "space descriptor")->required();
  fdd->add_option("--process-a", process_text, "first process")->required();
  fdd->add_option("--process-b", process_b_text, "second process (default: the first, seed-disjoint)");
  fdd->add_option("--windows", windows_text, "box:x0,x1[,y0,y1][@l0-l1];ball:x,y,r ...")->required();
  fdd->add_option("--expect", expect, "same|different (for --assert)")->check(CLI::IsMember({"same", "different"}));
  fdd->add_option("--alpha", alpha, "test level");

  // render
  auto* render = app.add_subcommand("render", "SVG picture of a PPC1 or PPG1 file");
  std::string render_in;
  render->add_option("input", render_in, "PPC1 or PPG1 file")->required();
  render->add_option("--graph", graph_text, "graphing rule to draw");
  render->add_option("--out", out_path, "SVG path")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitPrecondition;
  }

  try {
    if (sample->parsed()) {
      const Space space = Space::parse(space_text);
      const ProcessSpec spec = parse_process(space, process_text);
      Rng rng = make_stream(seed, replica_index, StreamRole::Base);
      Configuration c = spec.sample(rng);
      c.seed = seed;
      std::ostringstream os;
      if (graph_text.empty()) {
        write_configuration(os, c);
      } else {
        write_graph(os, c, parse_graphing(space.dim(), graph_text).build(c));
      }
      if (out_path.empty()) {
        out << os.str();
      } else {
        std::ofstream f(out_path);
        if (!f) throw FormatError("cannot write " + out_path);
        f << os.str();
      }
      return kExitOk;
    }

    if (verify->parsed()) {
      const Space space = Space::parse(space_text);
      if (verify_kind == "poisson" || verify_kind == "thinning" || verify_kind == "thickening" ||
          verify_kind == "percolation" || verify_kind == "encoding" || verify_kind == "colouring") {
        CheckReport rep;
        if (verify_kind == "poisson") rep = poisson_law_check(space, t, replicas, seed, alpha);
        if (verify_kind == "thinning") rep = thinning_law_check(space, t, p_keep, replicas, seed, alpha);
        if (verify_kind == "thickening") {
          const auto offsets = parse_offsets(space, offsets_text.empty() ? "0,0;0.5,0" : offsets_text);
          rep = thickening_count_check(space, t, offsets, replicas, seed);
        }
        if (verify_kind == "percolation") {
          const auto eps = parse_list(eps_text);
          rep = percolation_law_check(space, t, radius, eps, min_edges, seed);
        }
        if (verify_kind == "encoding") rep = encoding_roundtrip_check(space, t, delta, replicas, seed);
        if (verify_kind == "colouring") rep = colouring_law_check(space, t, colours, rho, replicas, seed, alpha);
        output.emit(rep.csv());
        require(assert_mode, rep.passed, rep.name);
        return kExitOk;
      }
      if (verify_kind == "mtp") {
        const ProcessSpec spec =
            parse_process(space, process_text.empty() ? "poisson:" + fmt(t) : process_text);
        const auto rep = verify_mtp(spec, parse_transport(transport_text), replicas, seed);
        output.emit("transport,replicas,mean_out,mean_in,stderr,max_relative_error,progenitor_out,pvalue,exact,passed\n" +
                    rep.transport + "," + std::to_string(rep.replicas) + "," + fmt(rep.mean_out) + "," +
                    fmt(rep.mean_in) + "," + fmt(rep.stderr_) + "," + fmt(rep.max_relative_error) + "," +
                    fmt(rep.progenitor_out) + "," + fmt(rep.pvalue) + "," + (rep.exact ? "1" : "0") + "," +
                    (rep.passed ? "1" : "0") + "\n");
        require(assert_mode, rep.passed, "mass transport " + rep.transport);
        return kExitOk;
      }
      VerifierReport rep;
      if (verify_kind == "mecke") {
        rep = verify_mecke_slivnyak(t, space, parse_statistic(statistic_text), replicas, seed, alpha);
      } else if (verify_kind == "clmm") {
        const ProcessSpec spec =
            parse_process(space, process_text.empty() ? "poisson:" + fmt(t) : process_text);
        rep = verify_clmm(spec, window_ball_count_functional(space, radius, cap), replicas, seed);
      } else {
        const auto offsets = parse_offsets(space, offsets_text.empty() ? "0,0;0.5,0" : offsets_text);
        rep = verify_palm_of_thickening(poisson_process(space, t), offsets, parse_statistic(statistic_text),
                                        replicas, seed, alpha);
      }
      output.emit(VerifierReport::csv_header() + "\n" + rep.csv_row() + "\n");
      require(assert_mode, rep.passed, rep.verifier);
      return kExitOk;
    }

    if (cost->parsed()) {
      if (cost_kind == "lattice") {
        output.emit("rank,covol,cost\n" + std::to_string(rank) + "," + fmt(covol) + "," +
                    fmt(lattice_cost(rank, covol)) + "\n");
        return kExitOk;
      }
      if (cost_kind == "vertical") {
        const ProcessSpec base = poisson_process(Space::torus(1, side), t);
        const Graphing g = parse_graphing(1, graph_text.empty() ? "dist:3" : graph_text);
        auto eps = parse_list(eps_text);
        std::string text = CostEstimate::csv_header() + ",base_mean_degree,base_connected_frac,predicted_cost\n";
        std::vector<double> costs;
        bool ok = true;
        for (double e : eps) {
          const auto rep = vertical_cost_experiment(base, g, e, levels, replicas, seed);
          text += rep.estimate.csv_row() + "," + fmt(rep.base_degree.value) + "," +
                  fmt(rep.base_connected_fraction) + "," + fmt(rep.predicted_cost) + "\n";
          ok = ok && std::abs(rep.estimate.cost - rep.predicted_cost) <= 0.05 * rep.predicted_cost;
          ok = ok && (e == 0.0 || rep.estimate.connected_fraction >= 0.9);
          costs.push_back(rep.estimate.cost);
        }
        for (std::size_t i = 0; i < eps.size(); ++i) {
          for (std::size_t j = 0; j < eps.size(); ++j) {
            if (eps[i] < eps[j]) ok = ok && costs[i] < costs[j];
          }
        }
        output.emit(text);
        require(assert_mode, ok, "vertical cost construction");
        return kExitOk;
      }
      const Space space = Space::parse(space_text);
      const ProcessSpec spec = parse_process(space, process_text);
      auto graphings = [&](const std::string& text) {
        std::vector<Graphing> gs;
        for (const auto& g : split(text, ';')) gs.push_back(parse_graphing(space.dim(), g));
        return gs;
      };
      if (graph_text.empty()) throw std::invalid_argument("--graph is required");
      if (cost_kind == "graphing") {
        std::string text = CostEstimate::csv_header() + "\n";
        for (const auto& g : graphings(graph_text)) text += graphing_cost(spec, g, replicas, seed).csv_row() + "\n";
        output.emit(text);
        return kExitOk;
      }
      const ProcessSpec factor =
          parse_process(space, factor_step.empty() ? process_text : process_text + "|" + factor_step);
      const auto fg = graphings(factor_graph_text.empty() ? graph_text : factor_graph_text);
      const auto sg = graphings(graph_text);
      const auto rep = monotonicity_spotcheck(spec, factor, sg, fg, replicas, seed);
      std::string text = "side," + CostEstimate::csv_header() + "\n";
      for (const auto& c : rep.source) text += "source," + c.csv_row() + "\n";
      for (const auto& c : rep.factor) text += "factor," + c.csv_row() + "\n";
      output.emit(text);
      err << rep.message << "\n";
      return kExitOk;
    }

    if (gxz->parsed()) {
      gp.ns.clear();
      for (double n : parse_list(ns_text)) gp.ns.push_back(static_cast<int>(n));
      gp.replicas = replicas;
      gp.seed = seed;
      const auto rows = gxz_convergence_experiment(gp);
      std::string text = GxzRow::csv_header() + "\n";
      bool ok = true;
      const int top = *std::max_element(gp.ns.begin(), gp.ns.end());
      for (const auto& r : rows) {
        text += r.csv_row() + "\n";
        ok = ok && r.successor >= r.bound - 0.02 && r.strip_gof.pvalue > 0.01;
        if (r.n == top) ok = ok && r.fdd.pvalue > 0.01;
      }
      output.emit(text);
      require(assert_mode, ok, "straightening diagnostics");
      return kExitOk;
    }

    if (wobble->parsed()) {
      const auto rep = wobble_distance(load_configuration(path_a), load_configuration(path_b), wobble_r);
      output.emit(WobbleResult::csv_header() + "\n" + rep.csv_row() + "\n");
      return kExitOk;
    }

    if (fdd->parsed()) {
      const Space space = Space::parse(space_text);
      const ProcessSpec a = parse_process(space, process_text);
      const ProcessSpec b = parse_process(space, process_b_text.empty() ? process_text : process_b_text);
      const auto windows = parse_windows(space, windows_text);
      auto draw = [&](const ProcessSpec& spec, StreamRole role) {
        std::vector<Configuration> v(replicas);
        for (std::size_t r = 0; r < replicas; ++r) {
          Rng rng = make_stream(seed, r, role);
          v[r] = spec.sample(rng);
        }
        return v;
      };
      const auto rep = fdd_compare(draw(a, StreamRole::Base), draw(b, StreamRole::ArmB), windows);
      output.emit(FddReport::csv_header() + "\n" + rep.csv_row() + "\n");
      require(assert_mode, expect == "same" ? rep.pvalue > alpha : rep.pvalue < alpha, "fdd comparison");
      return kExitOk;
    }

    if (render->parsed()) {
      std::ifstream is(render_in);
      if (!is) throw FormatError("cannot open " + render_in);
      std::string magic(4, '\0');
      is.read(magic.data(), 4);
      is.seekg(0);
      Configuration c;
      std::optional<FactorGraph> g;
      if (magic == "PPG1") {
        auto [cc, gg] = read_graph(is);
        c = std::move(cc);
        g = std::move(gg);
      } else {
        c = read_configuration(is);
      }
      if (!graph_text.empty()) g = parse_graphing(c.space.dim(), graph_text).build(c);
      std::ofstream os(out_path);
      if (!os) throw FormatError("cannot write " + out_path);
      os << render_svg(c, g);
      return kExitOk;
    }
  } catch (const AcceptanceFailure& e) {
    err << e.what() << "\n";
    return kExitAcceptance;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }
  return kExitPrecondition;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(std::move(args), std::cout, std::cerr);
}

}  // namespace ipp
