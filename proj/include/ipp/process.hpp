#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ipp/configuration.hpp"
#include "ipp/rng.hpp"
#include "ipp/space.hpp"

namespace ipp {

// ---------------------------------------------------------------------------
// Samplers

/// Poisson process of intensity t: a Poisson(t * volume) count placed
/// uniformly in the window.
Configuration sample_poisson(const Space& space, double t, Rng& rng);

/// a + spacing * Z^d intersected with the window, spacing = covol^(1/d), a
/// uniform in a fundamental cell. Requires a torus whose side is a
/// multiple of the spacing.
Configuration sample_lattice_shift(const Space& space, double covol, Rng& rng);

// ---------------------------------------------------------------------------
// Factor maps

/// Attaches IID Uniform[0,1] marks.
Configuration iid_mark(Configuration config, Rng& rng);

/// Keeps the points whose mark is at most p; the result is unmarked.
Configuration p_thin(const Configuration& config, double p);

/// Keeps the points whose nearest other point is farther than delta.
Configuration delta_thin(const Configuration& config, double delta);

/// Union of the translates gF over input points g. F must contain the zero
/// displacement and the translates must not collide. Records provenance.
Configuration constant_thicken(const Configuration& config, std::span<const Displacement> offsets);

/// Owner of `query` in the Voronoi tessellation: the nearest point, ties
/// broken by the lexicographically smallest displacement from the query.
std::size_t voronoi_assign(const Configuration& config, const Point& query);

/// Glues an independent Poisson(t) sample into each Voronoi cell; the sample
/// for cell g is generated from a stream derived from g's mark alone.
Configuration glue_poisson_in_cells(const Configuration& config, double t);

/// Adds points from a fixed grid of spacing <= R/2 (scanned in a fixed
/// order, each accepted iff farther than R/2 from everything so far) so the
/// output is R-coarsely dense.
Configuration complete_to_net(const Configuration& config, double r);

/// Stacks a torus_1 configuration on every level of `cyl:L:levels`.
/// Output order is level-major: index = level * |base| + base index.
Configuration vertical_coupling(const Configuration& base, int levels);

/// Straightening map: keep marks <= 1/n as progenitors, then copy each onto
/// the next n - 1 levels (mod the level count). Unmarked output.
Configuration straighten_phi_n(const Configuration& config, int n);

/// Base coordinates of a cylinder column: points whose base coordinate
/// agrees within kPointEpsilon are grouped, in ascending base order.
std::vector<std::vector<std::size_t>> columns(const Configuration& config);

// ---------------------------------------------------------------------------
// Process laws

/// A sampler together with the metadata estimators need.
struct ProcessSpec {
  std::string name;
  Space space;
  std::optional<double> intensity;  ///< known intensity, if any
  std::function<Configuration(Rng&)> sample;
};

ProcessSpec poisson_process(const Space& space, double t);
ProcessSpec iid_poisson_process(const Space& space, double t);
ProcessSpec lattice_shift_process(const Space& space, double covol);
/// Vertically coupled Poisson(t) on a cylinder space.
ProcessSpec vertical_poisson_process(const Space& cylinder, double t);

/// Appends a factor map to a process. `intensity_factor` rescales the known
/// intensity, or drops it when absent.
ProcessSpec then(ProcessSpec base, std::string step_name,
                 std::function<Configuration(Configuration, Rng&)> step,
                 std::optional<double> intensity_factor);

/// Parses `family:param` optionally followed by `|step` factor maps:
/// families poisson:t, iid_poisson:t, lattice:covol, vpoisson:t; steps
/// mark, pthin:p, dthin:delta, thicken:x,y;x,y..., phi:n, net:R, glue:t.
ProcessSpec parse_process(const Space& space, std::string_view descriptor);

/// Parses a displacement list `x[,y[,z]][@level];...`.
std::vector<Displacement> parse_offsets(const Space& space, std::string_view text);

}  // namespace ipp
