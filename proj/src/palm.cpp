#include "ipp/palm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ipp/neighbours.hpp"
#include "ipp/parallel.hpp"

namespace ipp {
namespace {

bool range_is_local(const Space& space, double range) {
  return std::isfinite(range) && range < space.half_width();
}

std::vector<std::uint32_t> neighbours_of(const Configuration& config, std::size_t root,
                                         double range) {
  std::vector<std::uint32_t> out;
  for (std::size_t k = 0; k < config.size(); ++k) {
    if (k != root && config.space.distance(config.points[root], config.points[k]) <= range) {
      out.push_back(static_cast<std::uint32_t>(k));
    }
  }
  return out;
}

RootedSample rooted_for(const Configuration& config, std::size_t root, double range) {
  if (range_is_local(config.space, range)) {
    return reroot_local(config, root, neighbours_of(config, root, range));
  }
  return reroot(config, root);
}

std::array<double, 4> displacement_key(const Space& space, const Point& from, const Point& to) {
  if (!space.periodic()) {
    const Point w = space.recenter(from, to);
    return {w.x[0], w.x[1], 0.0, 0.0};
  }
  const Displacement g = space.displacement(from, to);
  return {g.v[0], g.v[1], g.v[2], static_cast<double>(g.levels)};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

double mean_of(const std::vector<double>& v) {
  RunningStats s;
  for (double x : v) {
    if (std::isfinite(x)) s.add(x);
  }
  return s.mean();
}

double se_of(const std::vector<double>& v) {
  RunningStats s;
  for (double x : v) {
    if (std::isfinite(x)) s.add(x);
  }
  return s.standard_error();
}

}  // namespace

RootedSample reroot(const Configuration& config, std::size_t root) {
  RootedSample s;
  s.config.space = config.space;
  s.config.marked = config.marked;
  s.config.seed = config.seed;
  s.config.provenance = config.provenance;
  s.origin_index = root;
  s.root_index = root;
  s.root = config.points[root];
  s.config.points.reserve(config.size());
  s.ids.reserve(config.size());
  for (std::size_t k = 0; k < config.size(); ++k) {
    s.config.points.push_back(config.space.recenter(s.root, config.points[k]));
    s.ids.push_back(static_cast<std::uint32_t>(k));
  }
  return s;
}

RootedSample reroot_local(const Configuration& config, std::size_t root,
                          std::span<const std::uint32_t> neighbours) {
  RootedSample s;
  s.config.space = config.space;
  s.config.marked = config.marked;
  s.config.seed = config.seed;
  s.origin_index = 0;
  s.root_index = root;
  s.root = config.points[root];
  const bool lineage = !config.provenance.empty();
  auto add = [&](std::size_t k) {
    s.config.points.push_back(config.space.recenter(s.root, config.points[k]));
    s.ids.push_back(static_cast<std::uint32_t>(k));
    if (lineage) {
      s.config.provenance.parent.push_back(config.provenance.parent[k]);
      s.config.provenance.progenitor.push_back(config.provenance.progenitor[k]);
    }
  };
  add(root);
  for (auto k : neighbours) {
    if (k != root) add(k);
  }
  return s;
}

std::vector<RootedSample> palm_reroot(const Configuration& config, const Region& window) {
  std::vector<RootedSample> out;
  for (std::size_t k = 0; k < config.size(); ++k) {
    if (window.contains(config.space, config.points[k])) out.push_back(reroot(config, k));
  }
  return out;
}

Functional nearest_neighbour_distance(double range) {
  return {"nn_distance",
          [range](const RootedSample& s) {
            const auto& o = s.config.points[s.origin_index];
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < s.config.size(); ++k) {
              if (k != s.origin_index) best = std::min(best, s.config.space.distance(o, s.config.points[k]));
            }
            return best <= range ? best : std::numeric_limits<double>::infinity();
          },
          range};
}

Functional count_in_ball(double radius, double cap) {
  return {"ball_count",
          [radius, cap](const RootedSample& s) {
            const auto& o = s.config.points[s.origin_index];
            double c = 0.0;
            for (std::size_t k = 0; k < s.config.size(); ++k) {
              if (k != s.origin_index && s.config.space.distance(o, s.config.points[k]) <= radius) c += 1.0;
            }
            return std::min(c, cap);
          },
          radius};
}

Functional empty_ball_indicator(double radius) {
  const auto count = count_in_ball(radius);
  return {"empty_ball", [count](const RootedSample& s) { return count.eval(s) == 0.0 ? 1.0 : 0.0; },
          radius};
}

Functional constant_one() {
  return {"one", [](const RootedSample&) { return 1.0; }, 0.0};
}

EstimateReport estimate_palm_expectation(const ProcessSpec& spec, const Functional& h,
                                         std::size_t replicas, std::uint64_t seed,
                                         std::optional<Region> window) {
  if (spec.intensity && *spec.intensity <= 0.0) {
    throw std::invalid_argument("Palm expectation of a zero-intensity process");
  }
  if (replicas == 0) throw std::invalid_argument("at least one replica is required");
  const Region u = window.value_or(Region::statistics_window(spec.space));
  struct Sums {
    double total = 0.0;
    double count = 0.0;
  };
  const auto per = map_replicas(replicas, [&](std::size_t r) {
    Rng rng = make_stream(seed, r, StreamRole::Base);
    const Configuration c = spec.sample(rng);
    Sums s;
    const bool local = range_is_local(c.space, h.range);
    NeighbourLists nb;
    if (local) nb = neighbours_within(c.space, c.points, h.range);
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (!u.contains(c.space, c.points[k])) continue;
      const RootedSample rs = local ? reroot_local(c, k, nb.of(k)) : reroot(c, k);
      s.total += h.eval(rs);
      s.count += 1.0;
    }
    return s;
  });

  EstimateReport rep;
  rep.name = h.name;
  rep.replicas = replicas;
  rep.seed = seed;
  rep.window = u.describe(spec.space);
  std::vector<double> num, den;
  for (const auto& s : per) {
    num.push_back(s.total);
    den.push_back(s.count);
  }
  if (spec.intensity) {
    RunningStats st;
    for (double x : num) st.add(x);
    const double norm = *spec.intensity * u.volume(spec.space);
    rep.value = st.mean() / norm;
    rep.stderr_ = st.standard_error() / norm;
  } else {
    const auto ratio = ratio_estimate(num, den);
    rep.value = ratio.value;
    rep.stderr_ = ratio.stderr_;
  }
  return rep;
}

RootedSample sample_palm_root(const ProcessSpec& spec, const Region& window, double range,
                              Rng& rng) {
  double cap = 0.0;
  if (spec.intensity) {
    const double m = *spec.intensity * window.volume(spec.space);
    if (m <= 0.0) throw std::invalid_argument("Palm sampling of a zero-intensity process");
    cap = m + 6.0 * std::sqrt(m) + 10.0;
  } else {
    for (int k = 0; k < 20; ++k) {
      cap = std::max(cap, static_cast<double>(count_in(spec.sample(rng), window)));
    }
    if (cap == 0.0) throw std::invalid_argument("Palm sampling: no points seen in the window");
    cap = 1.5 * cap + 10.0;
  }
  for (int attempt = 0; attempt < 1'000'000; ++attempt) {
    const Configuration c = spec.sample(rng);
    std::vector<std::size_t> inside;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (window.contains(c.space, c.points[k])) inside.push_back(k);
    }
    if (inside.empty()) continue;
    if (uniform01(rng) * cap >= static_cast<double>(inside.size())) continue;
    const auto pick = inside[static_cast<std::size_t>(uniform01(rng) * static_cast<double>(inside.size()))];
    return rooted_for(c, pick, range);
  }
  throw std::runtime_error("Palm sampling did not accept a configuration");
}

std::string VerifierReport::csv_header() { return "verifier,statistic,n,lhs,rhs,stderr,pvalue,seed"; }

std::string VerifierReport::csv_row() const {
  return verifier + "," + statistic + "," + std::to_string(n) + "," + fmt(lhs) + "," + fmt(rhs) +
         "," + fmt(stderr_) + "," + fmt(pvalue) + "," + std::to_string(seed);
}

VerifierReport verify_mecke_slivnyak(double t, const Space& space, const Functional& statistic,
                                     std::size_t samples_per_arm, std::uint64_t seed,
                                     double alpha) {
  if (samples_per_arm < 100) throw std::invalid_argument("Mecke-Slivnyak check needs at least 100 samples per arm");
  VerifierReport rep{"mecke", statistic.name, samples_per_arm, 0.0, 0.0, 0.0, 1.0, seed, true};
  if (t == 0.0) return rep;  // both arms are the lone origin

  const ProcessSpec spec = poisson_process(space, t);
  const Region window = Region::statistics_window(space);
  const auto palm_arm = map_replicas(samples_per_arm, [&](std::size_t i) {
    Rng rng = make_stream(seed, i, StreamRole::Base);
    return statistic.eval(sample_palm_root(spec, window, statistic.range, rng));
  });
  const auto adjoined_arm = map_replicas(samples_per_arm, [&](std::size_t i) {
    Rng rng = make_stream(seed, i, StreamRole::ArmB);
    Configuration c = sample_poisson(space, t, rng);
    c.points.push_back(Point{});
    return statistic.eval(rooted_for(c, c.size() - 1, statistic.range));
  });
  const auto ks = ks_two_sample(palm_arm, adjoined_arm);
  rep.lhs = mean_of(palm_arm);
  rep.rhs = mean_of(adjoined_arm);
  rep.stderr_ = std::hypot(se_of(palm_arm), se_of(adjoined_arm));
  rep.pvalue = ks.pvalue;
  rep.passed = ks.pvalue > alpha;
  return rep;
}

TwoPointFunctional product_functional(std::string name, std::function<double(const Point&)> weight,
                                      const Functional& statistic) {
  TwoPointFunctional f;
  f.name = std::move(name);
  f.range = statistic.range;
  f.weight = weight;
  f.statistic = statistic.eval;
  f.eval = [weight, stat = statistic.eval](const Point& x, const RootedSample& omega) {
    const double w = weight(x);
    return w == 0.0 ? 0.0 : w * stat(omega);
  };
  return f;
}

TwoPointFunctional window_ball_count_functional(const Space& space, double radius, double cap) {
  std::array<double, 3> half{};
  for (int a = 0; a < space.dim(); ++a) half[static_cast<std::size_t>(a)] = 0.5 * space.side(a);
  const int dim = space.dim();
  auto weight = [half, dim](const Point& x) {
    for (int a = 0; a < dim; ++a) {
      if (x.x[static_cast<std::size_t>(a)] >= half[static_cast<std::size_t>(a)]) return 0.0;
    }
    return 1.0;
  };
  return product_functional("half_window_x_ball_count", weight, count_in_ball(radius, cap));
}

VerifierReport verify_clmm(const ProcessSpec& spec, const TwoPointFunctional& f,
                           std::size_t replicas, std::uint64_t seed, int quadrature_cells) {
  const Space& space = spec.space;
  if (!space.periodic()) throw std::invalid_argument("the Campbell check runs on periodic windows");
  if (!range_is_local(space, f.range)) {
    throw std::invalid_argument("two-point functional needs a range below half the window");
  }
  if (replicas < 2) throw std::invalid_argument("the Campbell check needs at least two replicas");

  // Midpoint quadrature nodes over the window (every level on cylinders).
  std::vector<Point> nodes;
  double cell_volume = 1.0;
  {
    std::array<int, 3> cells{1, 1, 1};
    for (int a = 0; a < space.dim(); ++a) {
      cells[static_cast<std::size_t>(a)] = quadrature_cells;
      cell_volume *= space.side(a) / quadrature_cells;
    }
    const int levels = space.has_levels() ? space.levels() : 1;
    for (int l = 0; l < levels; ++l) {
      for (int k2 = 0; k2 < cells[2]; ++k2) {
        for (int k1 = 0; k1 < cells[1]; ++k1) {
          for (int k0 = 0; k0 < cells[0]; ++k0) {
            Point p;
            const std::array<int, 3> k{k0, k1, k2};
            for (int a = 0; a < space.dim(); ++a) {
              const auto i = static_cast<std::size_t>(a);
              p.x[i] = (k[i] + 0.5) * space.side(a) / quadrature_cells;
            }
            p.level = l;
            nodes.push_back(p);
          }
        }
      }
    }
  }
  const bool product = f.weight && f.statistic;
  double weight_integral = 0.0;
  if (product) {
    for (const auto& p : nodes) weight_integral += f.weight(p) * cell_volume;
  }
  auto inner_integral = [&](const RootedSample& omega) {
    if (product) return weight_integral == 0.0 ? 0.0 : weight_integral * f.statistic(omega);
    double acc = 0.0;
    for (const auto& p : nodes) acc += f.eval(p, omega) * cell_volume;
    return acc;
  };

  const auto lhs = map_replicas(replicas, [&](std::size_t r) {
    Rng rng = make_stream(seed, r, StreamRole::Base);
    const Configuration c = spec.sample(rng);
    const auto nb = neighbours_within(space, c.points, f.range);
    double sum = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (product && f.weight(c.points[k]) == 0.0) continue;
      sum += f.eval(c.points[k], reroot_local(c, k, nb.of(k)));
    }
    return sum;
  });
  // Intensity * E_0[...] with E_0 estimated over the whole window reduces to
  // the per-replica root sum divided by the window volume.
  const double volume = space.volume();
  const auto rhs = map_replicas(replicas, [&](std::size_t r) {
    Rng rng = make_stream(seed, r, StreamRole::ArmB);
    const Configuration c = spec.sample(rng);
    const auto nb = neighbours_within(space, c.points, f.range);
    double sum = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) sum += inner_integral(reroot_local(c, k, nb.of(k)));
    return sum / volume;
  });

  VerifierReport rep;
  rep.verifier = "clmm";
  rep.statistic = f.name;
  rep.n = replicas;
  rep.seed = seed;
  rep.lhs = mean_of(lhs);
  rep.rhs = mean_of(rhs);
  rep.stderr_ = std::hypot(se_of(lhs), se_of(rhs));
  const double diff = rep.lhs - rep.rhs;
  const double z = diff == 0.0 ? 0.0 : (rep.stderr_ > 0.0 ? diff / rep.stderr_ : std::numeric_limits<double>::infinity());
  rep.pvalue = std::isfinite(z) ? normal_two_sided_p(z) : 0.0;
  rep.passed = std::abs(z) < 3.0;
  return rep;
}

Transport ball_transport(double radius) {
  return {"ball",
          [radius](const RootedSample& v, std::size_t src, std::size_t dst) {
            return v.config.space.distance(v.config.points[src], v.config.points[dst]) < radius ? 1.0 : 0.0;
          },
          radius};
}

Transport nearest_neighbour_transport(double range) {
  return {"nearest_neighbour",
          [range](const RootedSample& v, std::size_t src, std::size_t dst) {
            if (src == dst) return 0.0;
            const auto& space = v.config.space;
            const auto& pts = v.config.points;
            std::size_t best = src;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < pts.size(); ++k) {
              if (k == src) continue;
              const double d = space.distance(pts[src], pts[k]);
              if (d < best_d ||
                  (d == best_d && displacement_key(space, pts[src], pts[k]) <
                                      displacement_key(space, pts[src], pts[best]))) {
                best = k;
                best_d = d;
              }
            }
            return best == dst && best_d <= range ? 1.0 : 0.0;
          },
          range};
}

Transport spawn_transport(double range) {
  return {"spawn",
          [](const RootedSample& v, std::size_t src, std::size_t dst) {
            const auto& pv = v.config.provenance;
            if (pv.empty()) throw std::invalid_argument("spawn transport needs provenance");
            return pv.progenitor[src] && pv.parent[src] == pv.parent[dst] ? 1.0 : 0.0;
          },
          range};
}

MtpReport verify_mtp(const ProcessSpec& spec, const Transport& t, std::size_t replicas,
                     std::uint64_t seed, double rel_tol) {
  const Space& space = spec.space;
  if (!(t.range > 0.0) || !std::isfinite(t.range)) throw std::invalid_argument("transport needs a finite range");
  if (space.periodic() && !(2.0 * t.range < space.half_width())) {
    throw std::invalid_argument("transport range must stay below a quarter of the window");
  }
  if (!space.periodic() && space.margin() < 2.0 * t.range) {
    throw std::invalid_argument("free-boundary margin must cover twice the transport range");
  }
  const double view_radius = 2.0 * t.range;
  const Region window = Region::statistics_window(space);

  // Translation probe: a diagonally invariant T cannot notice a global move.
  {
    Rng rng = make_stream(seed, 0, StreamRole::Probe);
    const Configuration c = spec.sample(rng);
    const auto nb = neighbours_within(space, c.points, view_radius);
    Displacement g;
    if (space.periodic()) {
      for (int a = 0; a < space.dim(); ++a) g.v[static_cast<std::size_t>(a)] = uniform01(rng) * space.side(a);
      if (space.has_levels()) g.levels = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(space.levels()));
      if (space.kind() == SpaceKind::Lattice) {
        for (int a = 0; a < 2; ++a) {
          auto& v = g.v[static_cast<std::size_t>(a)];
          v = std::floor(v / space.lattice_spacing()) * space.lattice_spacing();
        }
      }
    } else {
      g.angle = 2.0 * std::numbers::pi * uniform01(rng);
    }
    for (std::size_t k = 0; k < std::min<std::size_t>(c.size(), 20); ++k) {
      const RootedSample view = reroot_local(c, k, nb.of(k));
      RootedSample moved = view;
      for (auto& p : moved.config.points) p = space.translate(g, p);
      moved.root = space.translate(g, view.root);
      for (std::size_t a = 0; a < view.config.size(); ++a) {
        for (std::size_t b = 0; b < view.config.size(); ++b) {
          if (std::abs(t.eval(view, a, b) - t.eval(moved, a, b)) > 1e-9) {
            throw std::invalid_argument("transport '" + t.name + "' depends on absolute coordinates");
          }
        }
      }
    }
  }

  struct Totals {
    double out = 0.0, in = 0.0, n = 0.0, prog_out = 0.0, prog_n = 0.0;
  };
  const auto per = map_replicas(replicas, [&](std::size_t r) {
    Rng rng = make_stream(seed, r, StreamRole::Base);
    const Configuration c = spec.sample(rng);
    const auto nb = neighbours_within(space, c.points, view_radius);
    const bool lineage = !c.provenance.empty();
    Totals tot;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (!window.contains(space, c.points[k])) continue;
      const RootedSample view = reroot_local(c, k, nb.of(k));
      const auto& o = view.config.points[view.origin_index];
      double out = 0.0, in = 0.0;
      for (std::size_t j = 0; j < view.config.size(); ++j) {
        if (space.distance(o, view.config.points[j]) > t.range) continue;
        out += t.eval(view, view.origin_index, j);
        in += t.eval(view, j, view.origin_index);
      }
      tot.out += out;
      tot.in += in;
      tot.n += 1.0;
      if (lineage && c.provenance.progenitor[k]) {
        tot.prog_out += out;
        tot.prog_n += 1.0;
      }
    }
    return tot;
  });

  MtpReport rep;
  rep.transport = t.name;
  rep.replicas = replicas;
  rep.exact = space.periodic();
  std::vector<double> out, in, n, diff;
  double prog_out = 0.0, prog_n = 0.0;
  for (const auto& tot : per) {
    out.push_back(tot.out);
    in.push_back(tot.in);
    n.push_back(tot.n);
    diff.push_back(tot.out - tot.in);
    prog_out += tot.prog_out;
    prog_n += tot.prog_n;
    const double scale = std::max(std::abs(tot.out), std::abs(tot.in));
    if (scale > 0.0) rep.max_relative_error = std::max(rep.max_relative_error, std::abs(tot.out - tot.in) / scale);
  }
  rep.progenitor_out = prog_n > 0.0 ? prog_out / prog_n : 0.0;
  const double total_n = std::accumulate(n.begin(), n.end(), 0.0);
  if (total_n == 0.0) {
    rep.passed = true;
    return rep;
  }
  const auto mo = ratio_estimate(out, n);
  const auto mi = ratio_estimate(in, n);
  rep.mean_out = mo.value;
  rep.mean_in = mi.value;
  rep.stderr_ = mo.stderr_;
  if (rep.exact) {
    rep.passed = rep.max_relative_error < rel_tol;
    rep.pvalue = rep.passed ? 1.0 : 0.0;
  } else {
    const auto d = ratio_estimate(diff, n);
    const double z = d.stderr_ > 0.0 ? d.value / d.stderr_ : (d.value == 0.0 ? 0.0 : 1e9);
    rep.pvalue = normal_two_sided_p(z);
    rep.passed = std::abs(z) < 3.0;
  }
  return rep;
}

VerifierReport verify_palm_of_thickening(const ProcessSpec& poisson_base,
                                         std::span<const Displacement> offsets,
                                         const Functional& statistic, std::size_t samples_per_arm,
                                         std::uint64_t seed, double alpha) {
  if (samples_per_arm < 100) throw std::invalid_argument("thickening check needs at least 100 samples per arm");
  const std::vector<Displacement> f(offsets.begin(), offsets.end());
  const ProcessSpec thick = then(
      poisson_base, "thicken", [f](Configuration c, Rng&) { return constant_thicken(c, f); },
      static_cast<double>(f.size()));
  const Region window = Region::statistics_window(poisson_base.space);

  const auto palm_arm = map_replicas(samples_per_arm, [&](std::size_t i) {
    Rng rng = make_stream(seed, i, StreamRole::Base);
    return statistic.eval(sample_palm_root(thick, window, statistic.range, rng));
  });
  const auto built_arm = map_replicas(samples_per_arm, [&](std::size_t i) {
    Rng rng = make_stream(seed, i, StreamRole::ArmB);
    Configuration base = poisson_base.sample(rng);
    base.points.push_back(Point{});
    const Configuration c = constant_thicken(base, f);
    const std::size_t x = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(f.size()));
    const std::size_t root = (base.size() - 1) * f.size() + x;
    return statistic.eval(rooted_for(c, root, statistic.range));
  });
  const auto ks = ks_two_sample(palm_arm, built_arm);
  VerifierReport rep;
  rep.verifier = "thickening";
  rep.statistic = statistic.name;
  rep.n = samples_per_arm;
  rep.seed = seed;
  rep.lhs = mean_of(palm_arm);
  rep.rhs = mean_of(built_arm);
  rep.stderr_ = std::hypot(se_of(palm_arm), se_of(built_arm));
  rep.pvalue = ks.pvalue;
  rep.passed = ks.pvalue > alpha;
  return rep;
}

}  // namespace ipp
