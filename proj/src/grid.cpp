#include "thinfilm/grid.hpp"

#include <algorithm>
#include <numeric>

#include "thinfilm/error.hpp"

namespace thinfilm {

std::string to_string(Boundary b) {
  return b == Boundary::Periodic ? "periodic" : "neumann";
}

Boundary boundary_from_string(const std::string& name) {
  if (name == "neumann") return Boundary::NeumannZeroFlux;
  if (name == "periodic") return Boundary::Periodic;
  throw InputError("invalid parameter 'boundary': expected neumann or periodic, got '" + name + "'");
}

Grid::Grid(double half_width, int cells, Boundary boundary)
    : half_width_(half_width), cells_(cells), boundary_(boundary) {
  if (!(half_width > 0.0)) throw InputError("invalid parameter 'half_width': must be > 0");
  if (cells < 16) throw InputError("invalid parameter 'cells': need at least 16 cells");
  dx_ = 2.0 * half_width / cells;
}

std::vector<double> Grid::centers() const {
  std::vector<double> x(cells_);
  for (int i = 0; i < cells_; ++i) x[i] = center(i);
  return x;
}

int Grid::resolve(int i) const {
  if (periodic()) return ((i % cells_) + cells_) % cells_;
  if (i < 0) return -i - 1;
  if (i >= cells_) return 2 * cells_ - 1 - i;
  return i;
}

std::array<int, 4> Grid::face_stencil(int f) const {
  return {resolve(f - 1), resolve(f), resolve(f + 1), resolve(f + 2)};
}

double Field::min() const { return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end()); }
double Field::max() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }
double Field::mean() const {
  return values.empty() ? 0.0 : std::accumulate(values.begin(), values.end(), 0.0) / values.size();
}

} // namespace thinfilm
