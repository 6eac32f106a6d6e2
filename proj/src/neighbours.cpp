#include "ipp/neighbours.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace ipp {
namespace {

struct CellGrid {
  int axes = 0;
  std::array<int, 3> cells{1, 1, 1};
  std::array<double, 3> width{1.0, 1.0, 1.0};
  std::vector<std::uint32_t> start;  // size total + 1
  std::vector<std::uint32_t> items;

  std::size_t flat(const std::array<int, 3>& c) const {
    return (static_cast<std::size_t>(c[2]) * static_cast<std::size_t>(cells[1]) +
            static_cast<std::size_t>(c[1])) *
               static_cast<std::size_t>(cells[0]) +
           static_cast<std::size_t>(c[0]);
  }

  std::array<int, 3> cell_of(const Space& space, const Point& p) const {
    std::array<int, 3> c{0, 0, 0};
    for (int a = 0; a < axes; ++a) {
      const auto i = static_cast<std::size_t>(a);
      const double coord = wrap_coord(space.axis_coord(p, a), space.axis_length(a));
      c[i] = std::min(cells[i] - 1, static_cast<int>(coord / width[i]));
    }
    return c;
  }
};

CellGrid build_grid(const Space& space, std::span<const Point> points, double r) {
  CellGrid g;
  g.axes = space.axes();
  // Cap the per-axis cell count so tiny radii do not explode the grid;
  // wider cells stay correct because only adjacency to r matters.
  const double cap = std::ceil(std::pow(2.0 * static_cast<double>(points.size()) + 8.0,
                                        1.0 / g.axes));
  std::size_t total = 1;
  for (int a = 0; a < g.axes; ++a) {
    const auto i = static_cast<std::size_t>(a);
    const double len = space.axis_length(a);
    double n = r > 0.0 ? std::floor(len / r) : cap;
    n = std::clamp(n, 1.0, cap);
    g.cells[i] = static_cast<int>(n);
    g.width[i] = len / n;
    total *= static_cast<std::size_t>(g.cells[i]);
  }
  std::vector<std::uint32_t> cell_index(points.size());
  std::vector<std::uint32_t> counts(total + 1, 0);
  for (std::size_t k = 0; k < points.size(); ++k) {
    cell_index[k] = static_cast<std::uint32_t>(g.flat(g.cell_of(space, points[k])));
    ++counts[cell_index[k] + 1];
  }
  for (std::size_t c = 0; c < total; ++c) counts[c + 1] += counts[c];
  g.start = counts;
  g.items.resize(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    g.items[counts[cell_index[k]]++] = static_cast<std::uint32_t>(k);
  }
  return g;
}

std::vector<int> axis_offsets(int cells) {
  std::vector<int> out;
  for (int d : {-1, 0, 1}) {
    const int w = ((d % cells) + cells) % cells;
    if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
  }
  return out;
}

std::vector<IndexPair> pairs_on_grid(const Space& space, std::span<const Point> points,
                                     double r) {
  const CellGrid grid = build_grid(space, points, r);
  std::array<std::vector<int>, 3> offsets;
  for (int a = 0; a < 3; ++a) {
    offsets[static_cast<std::size_t>(a)] =
        a < grid.axes ? axis_offsets(grid.cells[static_cast<std::size_t>(a)]) : std::vector<int>{0};
  }

  std::vector<std::vector<IndexPair>> per_thread(static_cast<std::size_t>(omp_get_max_threads()));
  const auto n = static_cast<long long>(points.size());
#pragma omp parallel
  {
    auto& local = per_thread[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
    for (long long ii = 0; ii < n; ++ii) {
      const auto i = static_cast<std::uint32_t>(ii);
      const auto home = grid.cell_of(space, points[i]);
      for (int o2 : offsets[2]) {
        for (int o1 : offsets[1]) {
          for (int o0 : offsets[0]) {
            std::array<int, 3> c{(home[0] + o0) % grid.cells[0], (home[1] + o1) % grid.cells[1],
                                 (home[2] + o2) % grid.cells[2]};
            const auto f = grid.flat(c);
            for (auto k = grid.start[f]; k < grid.start[f + 1]; ++k) {
              const auto j = grid.items[k];
              if (j <= i) continue;
              if (space.distance(points[i], points[j]) <= r) local.push_back({i, j});
            }
          }
        }
      }
    }
  }
  std::vector<IndexPair> out;
  for (auto& v : per_thread) out.insert(out.end(), v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IndexPair> pairs_all_parallel(const Space& space, std::span<const Point> points,
                                          double r) {
  std::vector<std::vector<IndexPair>> per_thread(static_cast<std::size_t>(omp_get_max_threads()));
  const auto n = static_cast<long long>(points.size());
#pragma omp parallel
  {
    auto& local = per_thread[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic, 16)
    for (long long ii = 0; ii < n; ++ii) {
      const auto i = static_cast<std::uint32_t>(ii);
      for (auto j = i + 1; j < points.size(); ++j) {
        if (space.distance(points[i], points[j]) <= r) local.push_back({i, j});
      }
    }
  }
  std::vector<IndexPair> out;
  for (auto& v : per_thread) out.insert(out.end(), v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<IndexPair> close_pairs(const Space& space, std::span<const Point> points,
                                   double r) {
  if (points.size() < 2 || r < 0.0) return {};
  if (!space.periodic()) return pairs_all_parallel(space, points, r);
  return pairs_on_grid(space, points, r);
}

std::vector<IndexPair> close_pairs_serial(const Space& space,
                                          std::span<const Point> points, double r) {
  std::vector<IndexPair> out;
  if (r < 0.0) return out;
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    for (auto j = i + 1; j < points.size(); ++j) {
      if (space.distance(points[i], points[j]) <= r) out.push_back({i, j});
    }
  }
  return out;
}

NeighbourLists neighbour_lists(std::size_t n, std::span<const IndexPair> pairs) {
  NeighbourLists nl;
  nl.offsets.assign(n + 1, 0);
  for (const auto& p : pairs) {
    ++nl.offsets[p.i + 1];
    ++nl.offsets[p.j + 1];
  }
  for (std::size_t k = 0; k < n; ++k) nl.offsets[k + 1] += nl.offsets[k];
  nl.items.resize(nl.offsets[n]);
  std::vector<std::uint32_t> fill(nl.offsets.begin(), nl.offsets.end() - 1);
  for (const auto& p : pairs) {
    nl.items[fill[p.i]++] = p.j;
    nl.items[fill[p.j]++] = p.i;
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::sort(nl.items.begin() + nl.offsets[k], nl.items.begin() + nl.offsets[k + 1]);
  }
  return nl;
}

NeighbourLists neighbours_within(const Space& space, std::span<const Point> points,
                                 double r) {
  const auto pairs = close_pairs(space, points, r);
  return neighbour_lists(points.size(), pairs);
}

}  // namespace ipp
