// Prints fibering profiles for the semilinear model at a few levels c:
// the root of the derivative column is the Nehari projection t_c(u), and the
// value column shows the max/min structure of t -> lambda_c(t u).

#include <cstdio>

#include "nehari/nehari.hpp"

int main() {
  using namespace nehari;
  const Grid grid = build_grid(1, 64);
  const ModelSpec model =
      ModelSpec::semilinear(grid, NonlinearitySpec::pure_power(4.0));
  const Field u = laplacian_eigenbasis(grid, 1).front().second;

  std::vector<double> ts;
  for (int i = 0; i <= 40; ++i) ts.push_back(0.05 * std::pow(10.0, 2.0 * i / 40.0));

  for (double c : {0.5, 1.0, 2.0}) {
    const FiberingResult proj = solve_t_c(model, u, c);
    std::printf("# c = %g   t_c(u) = %.12g   (%s of the fiber map)\n", c, proj.t,
                proj.kind == FiberingResult::Kind::max ? "max" : "min");
    std::printf("t,value,derivative\n");
    for (const ProfileRow& row : fibering_profile(model, u, c, ts))
      std::printf("%.6g,%.10g,%.10g\n", row.t, row.value, row.derivative);
    std::printf("\n");
  }
  return 0;
}
