#pragma once

#include "dgschwarz/mesh.hpp"

#include <cstdint>
#include <vector>

namespace dgschwarz {

/// Uniformly distributed, pairwise distinct points inside `domain`.
std::vector<Vec2> random_seeds(const Domain& domain, std::size_t count, std::uint64_t seed);

/// Voronoi diagram of `seeds` clipped to `domain`, followed by `lloyd_iters`
/// centroidal relaxations. Each cell is convex inside every convex piece of
/// the domain. Throws MeshError for duplicate seeds or seeds outside the domain.
PolytopicMesh generate_voronoi(std::vector<Vec2> seeds, const Domain& domain, int lloyd_iters);

/// Uniform n x n quadrilateral grid of (0,1)^2.
PolytopicMesh quad_grid(int n);

/// 16-cell Lloyd-relaxed Voronoi grid of the unit L-shape.
PolytopicMesh lshape_voronoi16(std::uint64_t seed);

enum class StructuredKind { quad, lshape_voronoi16 };

PolytopicMesh generate_structured(StructuredKind kind, std::uint64_t n_or_seed);

/// Refines every cell of `coarse` independently into a relaxed Voronoi
/// diagram with `cells_per_coarse` cells. The result is nested in `coarse`;
/// vertices on shared coarse edges are inserted on both sides so that the
/// fine mesh is conforming.
PolytopicMesh refine_cells(const PolytopicMesh& coarse, int cells_per_coarse, std::uint64_t seed,
                           int lloyd_iters);

}  // namespace dgschwarz
