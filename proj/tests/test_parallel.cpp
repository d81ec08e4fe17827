#include "doctest.h"

#include <random>

#include "weldlab/capacity.hpp"
#include "weldlab/equivariant.hpp"
#include "weldlab/kernels.hpp"
#include "weldlab/logsingular.hpp"
#include "weldlab/polygon.hpp"
#include "weldlab/zipper.hpp"

using namespace weldlab;

TEST_SUITE("parallel") {

TEST_CASE("pair energies") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, kTwoPi);
  std::vector<double> t(1500), w(1500);
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = U(rng);
    w[k] = 1.0 / t.size();
  }
  CHECK(kernels::atom_pair_energy(t, w) == kernels::atom_pair_energy_serial(t, w));
  CHECK(kernels::normalized_pair_energy(t) == kernels::normalized_pair_energy_serial(t));
}

TEST_CASE("cell matrix and potential") {
  const auto cells = arc_cells(ArcSet({{0.3, 2.0}, {3.0, 1.5}}), 300);
  const Eigen::MatrixXd a = kernels::cell_kernel_matrix(cells);
  const Eigen::MatrixXd b = kernels::cell_kernel_matrix_serial(cells);
  CHECK((a.array() == b.array()).all());
  const std::vector<double> w(cells.size(), 1.0 / cells.size());
  std::vector<double> x;
  for (int k = 0; k < 777; ++k) x.push_back(kTwoPi * k / 777);
  CHECK(kernels::cell_potential(cells, w, x) == kernels::cell_potential_serial(cells, w, x));
}

TEST_CASE("unzipping") {
  std::vector<Complex> z;
  const PolygonCurve L({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
  for (const auto& p : sample_boundary(L, 2048)) z.push_back(L.point(p));
  const UnzipResult a = unzip(z);
  const UnzipResult b = unzip_serial(z);
  CHECK(a.interior == b.interior);
  CHECK(a.exterior == b.exterior);
}

TEST_CASE("functional equation residual") {
  const EquivariantResult r = build_equivariant(EquivariantSpec{});
  const SampleGrid g(10000);
  const ResidualWindow win{r.window_lo, r.window_hi};
  CHECK(functional_equation_residual(r.W, r.sigma(), r.tau(), g, win) ==
        functional_equation_residual_serial(r.W, r.sigma(), r.tau(), g, win));
}

TEST_CASE("sup distance") {
  const LogSingularMap m = build_log_singular({0.0, 3.0}, {0.5, 2.0}, 3);
  const SampleGrid g(20000, 1e-4);
  CHECK(sup_distance(m.h, CircleHomeo::identity(), g) == sup_distance_serial(m.h, CircleHomeo::identity(), g));
}

}  // TEST_SUITE
