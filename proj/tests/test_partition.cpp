#include "dgschwarz/generation.hpp"
#include "dgschwarz/mesh_io.hpp"
#include "dgschwarz/partition.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

using namespace dgschwarz;

namespace {

std::vector<int> quadrants(int n) {
  std::vector<int> part(n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) part[j * n + i] = (i >= n / 2 ? 1 : 0) + (j >= n / 2 ? 2 : 0);
  }
  return part;
}

}  // namespace

TEST_CASE("agglomerate examples") {
  const PolytopicMesh m = quad_grid(16);
  SUBCASE("identity") {
    const Partition p = agglomerate(m, m.n_cells(), AgglomerationMethod::coordinate_bisection);
    CHECK(p.n_parts == 256);
    std::vector<int> sorted = p.part_of;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 256; ++i) CHECK(sorted[i] == i);
  }
  SUBCASE("one part") {
    const Partition p = agglomerate(m, 1, AgglomerationMethod::coordinate_bisection);
    CHECK(p.n_parts == 1);
    CHECK(std::all_of(p.part_of.begin(), p.part_of.end(), [](int x) { return x == 0; }));
  }
  SUBCASE("16 balanced parts") {
    const Partition p = agglomerate(m, 16, AgglomerationMethod::coordinate_bisection);
    for (const auto& cells : p.cells_of_part()) CHECK(cells.size() == 16);
  }
  SUBCASE("range errors") {
    CHECK_THROWS_AS(agglomerate(m, 0, AgglomerationMethod::coordinate_bisection), MeshError);
    CHECK_THROWS_AS(agglomerate(m, 257, AgglomerationMethod::coordinate_bisection), MeshError);
  }
}

TEST_CASE("agglomerate Voronoi meshes: balanced and connected") {
  const PolytopicMesh m = generate_voronoi(random_seeds(Domain::unit_lshape(), 500, 17), Domain::unit_lshape(), 3);
  for (int n_parts : {2, 7, 16, 64, 125}) {
    const Partition p = agglomerate(m, n_parts, AgglomerationMethod::coordinate_bisection);
    CHECK(p.n_parts == n_parts);
    std::size_t lo = m.n_cells();
    std::size_t hi = 0;
    for (const auto& cells : p.cells_of_part()) {
      lo = std::min(lo, cells.size());
      hi = std::max(hi, cells.size());
    }
    CHECK(hi <= 2 * lo);
    // make_partition re-validates connectivity.
    CHECK_NOTHROW(make_partition(m, p.part_of));
  }
}

TEST_CASE("partition file") {
  const PolytopicMesh m = quad_grid(4);
  const auto dir = std::filesystem::temp_directory_path() / "dgschwarz_partition_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "parts.txt";
  write_partition_file(make_partition(m, quadrants(4)), path);
  const Partition p = agglomerate(m, 4, AgglomerationMethod::from_file, path);
  CHECK(p.part_of == quadrants(4));
  CHECK_THROWS_AS(agglomerate(m, 5, AgglomerationMethod::from_file, path), MeshError);
  {
    std::ofstream out(path);
    out << "0\n1\n";
  }
  CHECK_THROWS_AS(agglomerate(m, 2, AgglomerationMethod::from_file, path), MeshError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("make_partition rejects disconnected parts") {
  const PolytopicMesh m = quad_grid(3);
  std::vector<int> part(9, 0);
  part[0] = 1;
  part[8] = 1;
  CHECK_THROWS_AS(make_partition(m, part), MeshError);
}

TEST_CASE("coarsen examples") {
  SUBCASE("identity partition keeps the mesh") {
    const PolytopicMesh m = generate_voronoi(random_seeds(Domain::unit_square(), 40, 2), Domain::unit_square(), 2);
    const CoarseMesh c = coarsen(m, identity_partition(m));
    REQUIRE(c.mesh.n_cells() == m.n_cells());
    for (int k = 0; k < m.n_cells(); ++k) {
      CHECK(c.mesh.cell_area(k) == doctest::Approx(m.cell_area(k)).epsilon(1e-14));
      CHECK(c.mesh.cell_diameter(k) == doctest::Approx(m.cell_diameter(k)).epsilon(1e-14));
    }
  }
  SUBCASE("2x2 grid into one part") {
    const PolytopicMesh m = quad_grid(2);
    const CoarseMesh c = coarsen(m, make_partition(m, std::vector<int>(4, 0)));
    REQUIRE(c.mesh.n_cells() == 1);
    CHECK(c.mesh.cell_area(0) == doctest::Approx(1.0));
    CHECK(c.mesh.mesh_size() == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("4x4 quadrants") {
    const PolytopicMesh m = quad_grid(4);
    const CoarseMesh c = coarsen(m, make_partition(m, quadrants(4)));
    REQUIRE(c.mesh.n_cells() == 4);
    for (int k = 0; k < 4; ++k) CHECK(c.mesh.cell_diameter(k) == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK(c.nesting.parent == quadrants(4));
  }
  SUBCASE("annulus part is rejected") {
    const PolytopicMesh m = quad_grid(3);
    std::vector<int> part(9, 0);
    part[4] = 1;
    CHECK_THROWS_AS(coarsen(m, make_partition(m, part)), MeshError);
  }
}

TEST_CASE("coarse areas equal summed child areas") {
  const PolytopicMesh m = generate_voronoi(random_seeds(Domain::unit_lshape(), 600, 4), Domain::unit_lshape(), 4);
  const Partition p = agglomerate(m, 37, AgglomerationMethod::coordinate_bisection);
  const CoarseMesh c = coarsen(m, p);
  std::vector<double> sums(p.n_parts, 0.0);
  for (int k = 0; k < m.n_cells(); ++k) sums[p.part_of[k]] += m.cell_area(k);
  for (int j = 0; j < p.n_parts; ++j) CHECK(std::abs(c.mesh.cell_area(j) - sums[j]) <= 1e-10 * sums[j]);
}

TEST_CASE("nesting_map examples") {
  SUBCASE("coarsened mesh is nested with parent = partition") {
    const PolytopicMesh m = generate_voronoi(random_seeds(Domain::unit_square(), 300, 8), Domain::unit_square(), 3);
    const Partition p = agglomerate(m, 20, AgglomerationMethod::coordinate_bisection);
    const CoarseMesh c = coarsen(m, p);
    const NestingMap map = nesting_map(m, c.mesh);
    REQUIRE(is_nested(map));
    CHECK(std::get<NestedMap>(map).parent == p.part_of);
  }
  SUBCASE("fine equals coarse") {
    const PolytopicMesh m = quad_grid(5);
    const NestingMap map = nesting_map(m, m);
    REQUIRE(is_nested(map));
    const auto& parent = std::get<NestedMap>(map).parent;
    for (int k = 0; k < m.n_cells(); ++k) CHECK(parent[k] == k);
  }
  SUBCASE("4x4 quads vs independent 2-cell Voronoi") {
    const PolytopicMesh fine = quad_grid(4);
    const PolytopicMesh coarse = generate_voronoi({Vec2(0.3, 0.41), Vec2(0.77, 0.6)}, Domain::unit_square(), 0);
    const NestingMap map = nesting_map(fine, coarse);
    REQUIRE_FALSE(is_nested(map));
    std::vector<double> sums(16, 0.0);
    for (const auto& o : std::get<NonNestedMap>(map).overlaps) sums[o.fine] += o.area;
    for (double s : sums) CHECK(std::abs(s - 1.0 / 16) < 1e-8 / 16);
  }
  SUBCASE("forced intersection on a nested pair") {
    const PolytopicMesh m = quad_grid(4);
    const CoarseMesh c = coarsen(m, make_partition(m, quadrants(4)));
    const NestingMap map = nesting_map(m, c.mesh, true);
    REQUIRE_FALSE(is_nested(map));
    for (const auto& o : std::get<NonNestedMap>(map).overlaps) CHECK(o.coarse == quadrants(4)[o.fine]);
  }
}

TEST_CASE("non-nested overlap coverage on Voronoi pairs") {
  const Domain d = Domain::unit_square();
  const PolytopicMesh fine = generate_voronoi(random_seeds(d, 250, 21), d, 3);
  const PolytopicMesh coarse = generate_voronoi(random_seeds(d, 17, 22), d, 3);
  const NestingMap map = nesting_map(fine, coarse);
  REQUIRE_FALSE(is_nested(map));
  std::vector<double> sums(fine.n_cells(), 0.0);
  double total = 0.0;
  for (const auto& o : std::get<NonNestedMap>(map).overlaps) {
    sums[o.fine] += o.area;
    total += o.area;
  }
  for (int k = 0; k < fine.n_cells(); ++k) CHECK(std::abs(sums[k] - fine.cell_area(k)) <= 1e-8 * fine.cell_area(k));
  CHECK(std::abs(total - 1.0) < 1e-10);
}

TEST_CASE("coloring_bound examples") {
  const PolytopicMesh m = quad_grid(4);
  CHECK(coloring_bound(m, make_partition(m, std::vector<int>(16, 0))) == 0);
  std::vector<int> halves(16);
  for (int k = 0; k < 16; ++k) halves[k] = (k % 4) >= 2 ? 1 : 0;
  CHECK(coloring_bound(m, make_partition(m, halves)) == 1);
  CHECK(coloring_bound(m, make_partition(m, quadrants(4))) == 3);
  // Interior cell of a quad grid touches 8 neighbours.
  CHECK(coloring_bound(m, identity_partition(m)) == 8);
}
