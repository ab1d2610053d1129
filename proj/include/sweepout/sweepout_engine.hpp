#pragma once

#include "sweepout/cube_decomposition.hpp"
#include "sweepout/cube_lattice.hpp"
#include "sweepout/filling_radius.hpp"
#include "sweepout/pseudo_homology.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sweepout {

/**
 * A filling P of M = boundary(P) together with a map of the vertices of P to
 * sample points of M. P is glued from single (n+1)-cubes on the grid {-1, 1}.
 */
struct FillingInput {
  GluedComplex P;
  FiniteMetricSpace metric;
  std::vector<std::size_t> vertex_images;  // indexed by vertex id of P
  Rational nu = 0;
  /// Reject top cells of P with two or more faces on the boundary.
  bool strict_single_boundary_face = false;
};

/// Vertex id of P at the corner of chart `chart` with the given bits
/// (bit i set = coordinate i is +1).
std::size_t corner_vertex(const GluedComplex& P, int chart, unsigned bits);

/// Image point of every vertex of P, given per chart corner; glued corners
/// must agree. Throws DomainError on conflicts or missing corners.
std::vector<std::size_t> vertex_images_from_corners(const GluedComplex& P,
                                                    const std::vector<std::vector<std::size_t>>& per_chart);

/** A facet of a cube of P lying on the boundary. */
struct BoundaryFacet {
  int chart = 0;
  int axis = 0;
  int side = 1;  // -1 or +1
  std::size_t p_cell = 0;
};

/** A point of T given in the coordinates of one of its charts. */
struct TPoint {
  int chart = 0;
  std::vector<Rational> coords;
};

/**
 * The sweepout of N over T built from a filling. T has one chart per cube of
 * P (the piece Z^{n-1}) followed by one chart per boundary facet (the piece
 * Z^{n-2} x [0, 1/2], whose level coordinate sits on the facet's normal axis).
 * N and Q share the charts of P on the grid {-1, -eps, 0, eps, 1}.
 */
struct SweepoutBundle {
  int n = 0;
  Rational eps;
  FillingInput input;
  std::vector<BoundaryFacet> boundary_facets;
  std::size_t cube_count = 0;
  GluedComplex N;
  GluedComplex T;
  GluedComplex Q;  // the tube around the 1-skeleton together with the boundary of P
  PseudomanifoldReport n_report;
  std::vector<Rational> edge_lengths;  // per edge of P
  Rational delta;
  std::vector<std::string> notes;

  bool is_boundary_chart(int t_chart) const { return t_chart >= static_cast<int>(cube_count); }
  const BoundaryFacet& facet_of_chart(int t_chart) const {
    return boundary_facets[static_cast<std::size_t>(t_chart) - cube_count];
  }
  /// The map h on a point of N given in chart coordinates; the result is the
  /// canonical point of T.
  PointKey h(int chart, const std::vector<Rational>& coords) const;
  /// Orientation of a top cell of N given as a chart cell (+1 or -1).
  int n_orientation(const CubicalCell& top_cell) const;
  /// Length of the image of an edge between two corners of chart `chart`
  /// (vectors of +-1).
  Rational corner_distance(int chart, const std::vector<int>& u, const std::vector<int>& v) const;
  std::size_t corner_image(int chart, const std::vector<int>& corner) const;
};

/// Thrown when a top cell of P has more than one boundary face and the strict
/// check is enabled.
class SubdivisionRequiredError : public DomainError {
 public:
  using DomainError::DomainError;
};

SweepoutBundle build_bundle(const FillingInput& input);

/** An edge of a fiber, with its collapse onto an edge of P. */
struct FiberEdge {
  int chart = 0;  // chart of N carrying `from` and `to`
  std::vector<Rational> from, to;
  PointKey from_key, to_key, mid_key;
  std::size_t p_edge = 0;
  Rational length;
  int sign = 1;  // coefficient of the oriented segment from -> to
};

struct FiberComponent {
  std::vector<FiberEdge> edges;
  Rational length;
  bool simple_cycle = false;
};

struct FiberRecord {
  TPoint base;
  PointKey base_key;
  std::optional<std::pair<int, std::size_t>> base_cell;  // (dim, id) in T
  std::vector<Rational> delta_point;                     // image in the simplex quotient, when computed
  int cube_dimension = 0;
  bool cube_skeleton = false;
  std::size_t vertex_count = 0;
  std::vector<PointKey> vertices;
  std::vector<FiberEdge> edges;
  std::vector<FiberComponent> components;
  Rational total_length;
  Rational max_component_length;
  Rational max_edge_length;
  std::set<std::size_t> image_points;
  Rational image_diameter;
  bool oriented = false;
};

/// Fills components, lengths and image data of a record whose vertices and
/// edges are set. `corners` lists the corners of chart `chart` of P that the
/// fiber vertices collapse to.
void summarize_fiber(const SweepoutBundle& bundle, FiberRecord& record, const std::vector<std::vector<int>>& corners,
                     int chart);

/// Fiber over a point of T; the point must lie on T.
FiberRecord fiber_at(const SweepoutBundle& bundle, const TPoint& t);
/// Fiber over the barycenter of a cell of T.
FiberRecord fiber(const SweepoutBundle& bundle, int dim, std::size_t cell);
/// Fibers over every cell of T.
std::vector<FiberRecord> all_fibers(const SweepoutBundle& bundle);

struct WaistBound {
  Rational waist_upper;    // max fiber length
  Rational urysohn_upper;  // max over fibers of image diameter + longest edge
  Rational certified_max;  // (n+1) 2^n delta
  std::size_t fibers = 0;
  std::size_t max_edges = 0;
};

/// Max fiber length over all cells of T.
Rational waist_upper_bound(const SweepoutBundle& bundle);
WaistBound measure_waist(const SweepoutBundle& bundle);
SweepoutMeasurements measurements(const WaistBound& bound);

struct HomologyAudit {
  bool homologous = false;
  ChainVector n_cycle;         // cycle of N in the ambient
  ChainVector boundary_cycle;  // cycle of the boundary of P in the ambient
  ChainVector witness;         // boundary(witness) = n_cycle + boundary_cycle
  bool witness_verified = false;
  std::string note;
};

/// Cycle of N in the ambient Q (top cells of N as cells of Q).
ChainVector n_cycle_in_ambient(const SweepoutBundle& bundle);
/// Cycle of the subdivided boundary of P in Q.
ChainVector boundary_cycle_in_ambient(const SweepoutBundle& bundle);

/// Decides over Z2 whether N and the boundary of P are homologous in Q and
/// returns a verified witness. A non-cycle input raises DomainError.
HomologyAudit homology_audit(const SweepoutBundle& bundle);
HomologyAudit homology_audit(const SweepoutBundle& bundle, const ChainVector& n_cycle);

}  // namespace sweepout
