#include "dgschwarz/generation.hpp"

#include <doctest.h>

#include <cmath>

using namespace dgschwarz;

namespace {

double total_area(const PolytopicMesh& m) {
  double a = 0.0;
  for (int c = 0; c < m.n_cells(); ++c) a += m.cell_area(c);
  return a;
}

}  // namespace

TEST_CASE("generate_voronoi examples") {
  SUBCASE("one seed") {
    const PolytopicMesh m = generate_voronoi({Vec2(0.3, 0.6)}, Domain::unit_square(), 0);
    REQUIRE(m.n_cells() == 1);
    CHECK(m.cell_area(0) == doctest::Approx(1.0));
  }
  SUBCASE("four symmetric seeds") {
    const PolytopicMesh m = generate_voronoi({Vec2(0.25, 0.25), Vec2(0.75, 0.25), Vec2(0.25, 0.75), Vec2(0.75, 0.75)},
                                             Domain::unit_square(), 0);
    REQUIRE(m.n_cells() == 4);
    for (int c = 0; c < 4; ++c) {
      CHECK(m.cell_area(c) == doctest::Approx(0.25).epsilon(1e-14));
      CHECK(m.cells()[c].size() == 4);
    }
  }
  SUBCASE("2000 random seeds") {
    const PolytopicMesh m = generate_voronoi(random_seeds(Domain::unit_square(), 2000, 42), Domain::unit_square(), 0);
    CHECK(m.n_cells() == 2000);
    CHECK(std::abs(total_area(m) - 1.0) < 1e-10);
  }
}

TEST_CASE("generate_voronoi errors") {
  CHECK_THROWS_AS(generate_voronoi({Vec2(0.2, 0.2), Vec2(0.2, 0.2)}, Domain::unit_square(), 0), MeshError);
  CHECK_THROWS_AS(generate_voronoi({Vec2(1.5, 0.2)}, Domain::unit_square(), 0), MeshError);
  CHECK_THROWS_AS(generate_voronoi({Vec2(0.75, 0.75)}, Domain::unit_lshape(), 0), MeshError);
}

TEST_CASE("Voronoi cells are convex within each domain piece") {
  const Domain d = Domain::unit_lshape();
  const PolytopicMesh m = generate_voronoi(random_seeds(d, 400, 9), d, 5);
  CHECK(std::abs(total_area(m) - 0.75) < 1e-10);
  // Only cells touching the re-entrant corner may be non-convex.
  for (int c = 0; c < m.n_cells(); ++c) {
    const Polygon poly = m.cell_polygon(c);
    bool at_corner = false;
    for (const auto& v : poly) at_corner = at_corner || (v - Vec2(0.5, 0.5)).norm() < 1e-12;
    CHECK((is_convex(poly) || at_corner));
  }
}

TEST_CASE("Lloyd relaxation is deterministic") {
  const auto seeds = random_seeds(Domain::unit_square(), 50, 1);
  const PolytopicMesh a = generate_voronoi(seeds, Domain::unit_square(), 10);
  const PolytopicMesh b = generate_voronoi(seeds, Domain::unit_square(), 10);
  CHECK(a.cells() == b.cells());
  for (int i = 0; i < a.n_vertices(); ++i) CHECK(a.vertices()[i] == b.vertices()[i]);
}

TEST_CASE("generate_structured examples") {
  const PolytopicMesh q2 = generate_structured(StructuredKind::quad, 2);
  CHECK(q2.n_cells() == 4);
  for (int c = 0; c < 4; ++c) CHECK(q2.cell_area(c) == doctest::Approx(0.25));
  const PolytopicMesh q16 = generate_structured(StructuredKind::quad, 16);
  CHECK(q16.n_cells() == 256);
  CHECK(q16.mesh_size() == doctest::Approx(std::sqrt(2.0) / 16));
  const PolytopicMesh l = generate_structured(StructuredKind::lshape_voronoi16, 2024);
  CHECK(l.n_cells() == 16);
  CHECK(std::abs(total_area(l) - 0.75) < 1e-10);
}

TEST_CASE("refine_cells produces a conforming nested mesh") {
  const PolytopicMesh coarse = lshape_voronoi16(3);
  const PolytopicMesh fine = refine_cells(coarse, 8, 3, 5);
  CHECK(fine.n_cells() == 16 * 8);
  CHECK(std::abs(total_area(fine) - 0.75) < 1e-10);
  // Conformity: extract_topology would throw on overlaps; boundary length equals the L-shape perimeter.
  const FaceSet fs = extract_topology(fine);
  double boundary = 0.0;
  for (const auto& f : fs.faces) {
    if (f.is_boundary()) boundary += f.measure;
  }
  CHECK(std::abs(boundary - 4.0) < 1e-10);
}
