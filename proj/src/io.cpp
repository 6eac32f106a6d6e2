#include "ipp/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace ipp {
namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Line reader that skips comments and blank lines and tracks line numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  bool next(std::string& line) {
    while (std::getline(is_, line)) {
      ++number_;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    }
    return false;
  }
  std::size_t number() const { return number_; }
  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError("line " + std::to_string(number_) + ": " + what);
  }

 private:
  std::istream& is_;
  std::size_t number_ = 0;
};

std::vector<std::string> split(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& s, double& v) {
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && !s.empty();
}

bool parse_size(const std::string& s, std::size_t& v) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

std::string expect_field(LineReader& in, const std::string& tok, const std::string& key) {
  if (tok.rfind(key + "=", 0) != 0) in.fail("expected '" + key + "=...', got '" + tok + "'");
  return tok.substr(key.size() + 1);
}

Configuration read_configuration_body(LineReader& in) {
  std::string line;
  if (!in.next(line)) in.fail("missing PPC1 header");
  const auto head = split(line);
  if (head.size() != 4 || head[0] != "PPC1") in.fail("malformed PPC1 header");
  Configuration c;
  try {
    c.space = Space::parse(head[1]);
  } catch (const std::exception& e) {
    in.fail(e.what());
  }
  const std::string marked = expect_field(in, head[2], "marked");
  if (marked != "0" && marked != "1") in.fail("marked must be 0 or 1");
  c.marked = marked == "1";
  std::size_t n = 0;
  if (!parse_size(expect_field(in, head[3], "n"), n)) in.fail("bad point count");

  const std::size_t columns = static_cast<std::size_t>(c.space.dim()) + (c.space.has_levels() ? 1 : 0) + (c.marked ? 1 : 0);
  c.points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!in.next(line)) in.fail("file ends after " + std::to_string(k) + " of " + std::to_string(n) + " points");
    const auto tok = split(line);
    if (tok.size() != columns) {
      in.fail("expected " + std::to_string(columns) + " columns, got " + std::to_string(tok.size()) +
              (c.marked ? "" : " (configuration declared unmarked)"));
    }
    Point p{};
    std::size_t col = 0;
    for (int a = 0; a < c.space.dim(); ++a) {
      if (!parse_double(tok[col++], p.x[static_cast<std::size_t>(a)])) in.fail("bad coordinate");
    }
    if (c.space.has_levels()) {
      std::size_t level = 0;
      if (!parse_size(tok[col++], level)) in.fail("bad level");
      p.level = static_cast<std::int32_t>(level);
    }
    if (c.marked && !parse_double(tok[col++], p.mark)) in.fail("bad mark");
    c.points.push_back(p);
  }
  try {
    validate(c);
  } catch (const std::exception& e) {
    in.fail(e.what());
  }
  return c;
}

}  // namespace

void write_configuration(std::ostream& os, const Configuration& config) {
  os << "PPC1 " << config.space.descriptor() << " marked=" << (config.marked ? 1 : 0) << " n=" << config.size()
     << "\n";
  for (const auto& p : config.points) {
    for (int a = 0; a < config.space.dim(); ++a) {
      if (a) os << ' ';
      os << g17(p.x[static_cast<std::size_t>(a)]);
    }
    if (config.space.has_levels()) os << ' ' << p.level;
    if (config.marked) os << ' ' << g17(p.mark);
    os << "\n";
  }
}

Configuration read_configuration(std::istream& is) {
  LineReader in(is);
  return read_configuration_body(in);
}

void save_configuration(const std::string& path, const Configuration& config) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot write " + path);
  write_configuration(os, config);
  if (!os) throw FormatError("write failed for " + path);
}

Configuration load_configuration(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path);
  try {
    return read_configuration(is);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_graph(std::ostream& os, const Configuration& config, const FactorGraph& graph) {
  if (graph.vertex_count != config.size()) throw FormatError("graph and configuration sizes differ");
  os << "PPG1 n=" << config.size() << " m=" << graph.edge_count() << "\n";
  write_configuration(os, config);
  for (const auto& e : graph.edges) os << e.i << ' ' << e.j << "\n";
}

std::pair<Configuration, FactorGraph> read_graph(std::istream& is) {
  LineReader in(is);
  std::string line;
  if (!in.next(line)) in.fail("missing PPG1 header");
  const auto head = split(line);
  if (head.size() != 3 || head[0] != "PPG1") in.fail("malformed PPG1 header");
  std::size_t n = 0, m = 0;
  if (!parse_size(expect_field(in, head[1], "n"), n)) in.fail("bad point count");
  if (!parse_size(expect_field(in, head[2], "m"), m)) in.fail("bad edge count");
  Configuration c = read_configuration_body(in);
  if (c.size() != n) in.fail("configuration block has " + std::to_string(c.size()) + " points, header says " + std::to_string(n));
  FactorGraph g;
  g.vertex_count = n;
  for (std::size_t k = 0; k < m; ++k) {
    if (!in.next(line)) in.fail("file ends after " + std::to_string(k) + " of " + std::to_string(m) + " edges");
    const auto tok = split(line);
    std::size_t i = 0, j = 0;
    if (tok.size() != 2 || !parse_size(tok[0], i) || !parse_size(tok[1], j)) in.fail("bad edge line");
    g.edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
  }
  try {
    validate(g);
  } catch (const std::exception& e) {
    in.fail(e.what());
  }
  return {std::move(c), std::move(g)};
}

std::string render_svg(const Configuration& config, const std::optional<FactorGraph>& graph, int size) {
  const Space& s = config.space;
  const double pad = 10.0;
  const double span = size - 2 * pad;
  // Picture coordinates in [0,1]^2.
  auto place = [&](const Point& p) -> std::pair<double, double> {
    switch (s.kind()) {
      case SpaceKind::Hyperbolic:
        return {0.5 + 0.5 * p.x[0], 0.5 - 0.5 * p.x[1]};
      case SpaceKind::Cylinder:
        return {p.x[0] / s.side(0), 1.0 - (p.level + 0.5) / s.levels()};
      default:
        if (s.dim() == 1) return {p.x[0] / s.side(0), 0.5};
        return {p.x[0] / s.side(0), 1.0 - p.x[1] / s.side(1)};
    }
  };
  auto ramp = [](double m) {
    const int r = static_cast<int>(std::lround(255 * m));
    const int b = 255 - r;
    const int g = static_cast<int>(std::lround(255 * (1.0 - std::abs(2.0 * m - 1.0)) * 0.6));
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
     << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  os << "<title>" << s.descriptor() << " n=" << config.size() << "</title>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << size << "\" height=\"" << size << "\" fill=\"white\"/>\n";
  if (s.kind() == SpaceKind::Hyperbolic) {
    os << "<circle cx=\"" << size / 2.0 << "\" cy=\"" << size / 2.0 << "\" r=\"" << span / 2.0
       << "\" fill=\"none\" stroke=\"#888888\"/>\n";
  } else {
    os << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << span << "\" height=\"" << span
       << "\" fill=\"none\" stroke=\"#888888\"/>\n";
  }
  const double radius = std::clamp(span / (2.0 * std::sqrt(static_cast<double>(config.size()) + 1.0)) * 0.3, 1.0, 6.0);
  if (graph) {
    os << "<g stroke=\"#444444\" stroke-width=\"0.6\">\n";
    for (const auto& e : graph->edges) {
      const Point& a = config.points.at(e.i);
      Point b = config.points.at(e.j);
      if (s.periodic() && s.kind() != SpaceKind::Cylinder) {
        // Draw the short way round from a.
        const Displacement d = s.displacement(a, b);
        for (int k = 0; k < s.dim(); ++k) b.x[static_cast<std::size_t>(k)] = a.x[static_cast<std::size_t>(k)] + d.v[static_cast<std::size_t>(k)];
      }
      const auto [ax, ay] = place(a);
      const auto [bx, by] = place(b);
      os << "<line x1=\"" << pad + span * ax << "\" y1=\"" << pad + span * ay << "\" x2=\"" << pad + span * bx
         << "\" y2=\"" << pad + span * by << "\"/>\n";
    }
    os << "</g>\n";
  }
  os << "<g stroke=\"none\">\n";
  for (const auto& p : config.points) {
    const auto [x, y] = place(p);
    os << "<circle cx=\"" << pad + span * x << "\" cy=\"" << pad + span * y << "\" r=\"" << radius
       << "\" fill=\"" << (config.marked ? ramp(p.mark) : std::string("#1f4e9c")) << "\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace ipp
