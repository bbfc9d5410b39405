#include "krf/grid.hpp"

#include "krf/chart.hpp"
#include "krf/errors.hpp"

namespace krf {

std::vector<double> fs_arclength_grid(double L, int nodes) {
  if (nodes < 16) throw ConfigError("grid needs at least 16 nodes");
  if (L <= 0) throw ConfigError("grid half-width L must be positive");
  const double t0 = theta_of_s(-L), t1 = theta_of_s(L);
  std::vector<double> s(nodes);
  for (int j = 0; j < nodes; ++j) {
    const double theta = t0 + (t1 - t0) * j / (nodes - 1);
    s[j] = s_of_theta(theta);
  }
  s.front() = -L;  // pin endpoints exactly
  s.back() = L;
  return s;
}

std::vector<double> uniform_s_grid(double L, int nodes) {
  if (nodes < 16) throw ConfigError("grid needs at least 16 nodes");
  if (L <= 0) throw ConfigError("grid half-width L must be positive");
  std::vector<double> s(nodes);
  for (int j = 0; j < nodes; ++j) s[j] = -L + 2.0 * L * j / (nodes - 1);
  s.front() = -L;
  s.back() = L;
  return s;
}

std::vector<double> make_grid(const std::string& kind, double L, int nodes) {
  if (kind == "fs_arclength") return fs_arclength_grid(L, nodes);
  if (kind == "uniform") return uniform_s_grid(L, nodes);
  throw ConfigError("unknown grid kind: " + kind);
}

void validate_grid(const std::vector<double>& s) {
  if (s.size() < 16) throw ConfigError("grid needs at least 16 nodes");
  for (size_t j = 0; j + 1 < s.size(); ++j)
    if (!(s[j] < s[j + 1])) throw ConfigError("grid must be strictly increasing");
}

}  // namespace krf
