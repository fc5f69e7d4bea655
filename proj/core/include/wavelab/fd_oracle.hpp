#pragma once

#include <functional>

#include "wavelab/radial_field.hpp"

namespace wavelab {

struct FdOracleOptions {
  // Spatial step of the oracle is grid.dr / refine.
  int refine = 2;
  // Courant number dt/dr; clipped to 1 for n = 3 and to 0.4 otherwise.
  double courant = 1.0;
};

// Second-order centered finite-difference solver for the radial wave
// equation u_tt = u_rr + (n-1)/r u_r + F with data u = f, u_t = g at t = 0.
// n = 3 evolves v = r u (v_tt = v_rr + r F, v(t,0) = 0); other n use the
// conservative r^{n-1}-weighted Laplacian with u_r(t,0) = 0. The spatial
// domain extends to r_max + t_max so the outer boundary never reaches the
// output grid. Output is sampled on `grid`.
RadialField fd_radial_solve(int n, const std::function<double(double)>& f, const std::function<double(double)>& g,
                            const std::function<double(double, double)>& F, const Grid& grid,
                            const FdOracleOptions& opts = {});

// Centered discrete D'Alembertian (1/r)(d_tt - d_rr)(r u) at interior nodes
// 1 <= i <= nt-2, 1 <= j <= nr-2 (n = 3). Other nodes are zero.
RadialField dalembertian_n3(const RadialField& u);

}  // namespace wavelab
