#pragma once

// Anderson-Putnam approximant built from the uncollared doubled tiles, its
// integer cohomology, the substitution action on cochains and cohomology, and
// the hull cohomology as a direct limit.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "robinson/linalg.hpp"
#include "robinson/substitution.hpp"

namespace robinson {

enum class Corner { south_west = 0, south_east = 1, north_east = 2, north_west = 3 };

// Faces are counterclockwise; before identification horizontal edges point
// east and vertical edges north.
struct CellComplex {
  int faces = 0;
  int edges = 0;
  int vertices = 0;
  std::vector<std::array<int, 4>> face_edges;     // by Side
  std::vector<std::array<int, 4>> face_vertices;  // by Corner
  IntegerMatrix boundary2;  // edges x faces
  IntegerMatrix boundary1;  // vertices x edges

  int euler_characteristic() const noexcept { return vertices - edges + faces; }
};

// Requires a passing border-forcing check (PreconditionError otherwise).
CellComplex build_complex(int tile_count, const AdjacencyTables& adj, const CheckResult& border_forcing);

// Complexes given directly by their boundary maps (tests and comparisons).
CellComplex complex_from_boundaries(IntegerMatrix boundary2, IntegerMatrix boundary1);

struct CohomologyPresentation {
  AbelianGroupDescriptor group;
  // Representative cochains of the generators, as columns: free first,
  // then one per torsion factor.
  IntegerMatrix generators;
  // Kernel basis of the outgoing coboundary and its left inverse, and the
  // change of basis U taking kernel coordinates to generator coordinates.
  IntegerMatrix kernel, kernel_left, to_generators;
  std::vector<int> free_rows, torsion_rows;  // rows of U per generator
};

struct ApproximantCohomology {
  std::array<CohomologyPresentation, 3> h;
};

ApproximantCohomology approximant_cohomology(const CellComplex& c);

struct InducedAction {
  IntegerMatrix A0, A1, A2;  // on cochains
  std::array<IntegerMatrix, 3> a;  // on cohomology generators
};

// Throws IllDefinedMapError if an edge or vertex class has images that
// depend on the representative, CheckFailedError if a commutation identity
// fails.
InducedAction induced_maps(const NormalRule& n, const CellComplex& c, const ApproximantCohomology& h);

struct CohomologyResult {
  std::array<AbelianGroupDescriptor, 3> approximant;
  std::array<DirectLimitDescriptor, 3> hull;
  std::array<std::map<mpz_class, int>, 3> spectra;
};

CohomologyResult hull_cohomology(const ApproximantCohomology& h, const InducedAction& act);

}  // namespace robinson
