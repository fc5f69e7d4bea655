#pragma once

#include <functional>
#include <string>

#include "wavelab/radial_field.hpp"

namespace wavelab {

// Radial data profile with its derivative, vanishing for r > support.
struct RadialProfile {
  std::string id;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  double support = 0.0;

  double operator()(double r) const { return value(r); }
};

namespace profiles {

RadialProfile zero();
// exp(1 - 1/(1 - (r/a)^2)) for r < a: smooth, peak 1 at r = 0.
RadialProfile bump(double radius);
// (1 - (r/a)^2)^4 for r < a.
RadialProfile poly_bump(double radius);

// Lookup by id: "zero", "bump", "poly_bump". Throws std::invalid_argument.
RadialProfile by_id(const std::string& id, double radius);

}  // namespace profiles

struct FreeSolution {
  RadialField field;
  // sup over the grid of |u0| (1+t)(1+|t-r|) / eps (n = 3 decay weight).
  double decay_constant = 0.0;
};

// Free radial wave in three space dimensions with data (eps f, eps g), via
// d'Alembert on v = r u with odd extension. At r = 0 the limit
// u(t,0) = eps (f(t) + t f'(t) + t g(t)) is used.
// Throws std::invalid_argument if n != 3 or a profile's support exceeds R - 1.
FreeSolution free_radial_n3(const RadialProfile& f, const RadialProfile& g, double eps, double R, const Grid& grid,
                            int n = 3);

}  // namespace wavelab
