#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "ipp/configuration.hpp"
#include "ipp/graph.hpp"

namespace ipp {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// PPC1 text: `PPC1 <space> marked=<0|1> n=<count>`, then one point per
/// line (coordinates, level on cylinders, mark if marked) printed with 17
/// significant digits. Lines starting with '#' are ignored.
void write_configuration(std::ostream& os, const Configuration& config);
Configuration read_configuration(std::istream& is);

void save_configuration(const std::string& path, const Configuration& config);
Configuration load_configuration(const std::string& path);

/// PPG1 text: `PPG1 n=<points> m=<edges>`, the PPC1 block, then `i j` lines.
void write_graph(std::ostream& os, const Configuration& config, const FactorGraph& graph);
std::pair<Configuration, FactorGraph> read_graph(std::istream& is);

/// SVG picture: points as circles coloured by mark, edges as segments.
std::string render_svg(const Configuration& config, const std::optional<FactorGraph>& graph,
                       int size = 640);

}  // namespace ipp
