#pragma once

#include <string>

#include "thinfilm/grid.hpp"

namespace thinfilm {

struct InitialProfile {
  enum class Kind { Constant, Bump, Sine, Parabola, FromFile };
  Kind kind = Kind::Constant;
  double value = 1.0;                        // Constant
  double center = 0.0, width = 0.5;          // Bump: height (1 - ((x-center)/width)^2)_+^power
  double height = 1.0, power = 2.0;
  double base = 1.0, amplitude = 0.1;        // Sine: base + amplitude cos(wavenumber (x + a))
  double wavenumber = 3.141592653589793;
  double left = -0.5, right = 0.5;           // Parabola: 4 height (x-left)_+(right-x)_+/(right-left)^2
  std::string path;                          // FromFile: one "u" or "x u" per line

  void validate() const;
  bool operator==(const InitialProfile&) const = default;
};

std::string to_string(InitialProfile::Kind kind);
InitialProfile::Kind profile_kind_from_string(const std::string& name);

// Samples the profile at cell centres; the result is nonnegative.
Field generate(const InitialProfile& profile, const Grid& grid);

} // namespace thinfilm
