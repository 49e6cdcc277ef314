#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace thinfilm {

enum class Boundary { NeumannZeroFlux, Periodic };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& name);

// Uniform cell-centred mesh on (-a, a).
class Grid {
public:
  Grid() = default;
  Grid(double half_width, int cells, Boundary boundary = Boundary::NeumannZeroFlux);

  double half_width() const { return half_width_; }
  int cells() const { return cells_; }
  double dx() const { return dx_; }
  Boundary boundary() const { return boundary_; }
  bool periodic() const { return boundary_ == Boundary::Periodic; }

  double center(int i) const { return -half_width_ + (i + 0.5) * dx_; }
  std::vector<double> centers() const;

  // Faces carrying a (possibly) non-zero flux.  Face f sits between cells f
  // and f+1 (mod N when periodic); Neumann boundary faces carry zero flux.
  int interior_faces() const { return periodic() ? cells_ : cells_ - 1; }

  // Cell indices u_{f-1}, u_f, u_{f+1}, u_{f+2} feeding face f, with ghost
  // cells resolved by even reflection or wraparound.
  std::array<int, 4> face_stencil(int f) const;

  // Index of cell i after ghost resolution (i may lie in [-2, N+1]).
  int resolve(int i) const;

  bool operator==(const Grid&) const = default;

private:
  double half_width_ = 1.0;
  int cells_ = 16;
  double dx_ = 0.125;
  Boundary boundary_ = Boundary::NeumannZeroFlux;
};

// Nodal film height at one instant.
struct Field {
  std::vector<double> values;
  double time = 0.0;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  double min() const;
  double max() const;
  double mean() const;
};

} // namespace thinfilm
