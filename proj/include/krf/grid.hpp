// Grid builders for radial profiles.  Grids are strictly increasing s-arrays
// spanning [-L, L].
#pragma once

#include <string>
#include <vector>

namespace krf {

// Nodes equispaced in the chart angle theta (Fubini-Study arclength).  This
// is the preferred grid: it equidistributes the physical resolution, which
// also equalizes the explicit-stepping CFL limit across the grid.
std::vector<double> fs_arclength_grid(double L, int nodes);

// Nodes equispaced in s.  Valid for static diagnostics; severely stiff for
// explicit flow stepping because it over-resolves the poles.
std::vector<double> uniform_s_grid(double L, int nodes);

std::vector<double> make_grid(const std::string& kind, double L, int nodes);

// Throws ConfigError unless strictly increasing with >= 16 nodes.
void validate_grid(const std::vector<double>& s);

}  // namespace krf
