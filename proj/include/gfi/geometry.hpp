#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gfi/graph.hpp"
#include "gfi/random.hpp"

namespace gfi {

using Points = Eigen::Matrix<double, Eigen::Dynamic, 3>;

/// N >= 1 finite points in R^3.
class PointCloud {
 public:
  explicit PointCloud(Points points);

  const Points& points() const { return points_; }
  int size() const { return static_cast<int>(points_.rows()); }
  Eigen::Vector3d point(int i) const { return points_.row(i).transpose(); }

 private:
  Points points_;
};

using Face = std::array<int, 3>;

/// Triangle soup over shared vertices. Faces reference valid, distinct vertices.
class TriangleMesh {
 public:
  TriangleMesh(Points vertices, std::vector<Face> faces);

  const Points& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  int num_vertices() const { return static_cast<int>(vertices_.rows()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }

  PointCloud cloud() const { return PointCloud(vertices_); }

 private:
  Points vertices_;
  std::vector<Face> faces_;
};

enum class MeshFormat { kOff, kObj };

/// Parses OFF (0-indexed) or OBJ (1-indexed, only `v` and `f` honored, polygons
/// fan-triangulated). Throws ParseError naming the offending line.
TriangleMesh load_mesh(std::string_view text, MeshFormat format);
/// Reads a mesh file, choosing the format from the extension.
TriangleMesh read_mesh_file(const std::string& path);
std::string write_off(const TriangleMesh& mesh);

/// Euclidean edge lengths over the deduplicated face edges. Coincident
/// endpoints get weight kZeroEdgeWeight so shortest paths stay well defined.
WeightedGraph mesh_to_graph(const TriangleMesh& mesh);
inline constexpr double kZeroEdgeWeight = 1e-12;

/// Centers at the origin and scales so that max |coordinate| == 1.
PointCloud normalize_points(const PointCloud& cloud);
TriangleMesh normalize_mesh(const TriangleMesh& mesh);

/// Per-vertex share (1/3) of incident triangle areas, normalized to sum 1.
/// Vertices without faces get a 1e-12 floor before normalization.
Eigen::VectorXd area_weights(const TriangleMesh& mesh);

/// Area-weighted average of incident face normals, unit length (zero for
/// vertices without faces).
VertexField vertex_normals(const TriangleMesh& mesh);

struct MaskSet {
  std::vector<int> indices;  // sorted
  double fraction = 0.0;
};

struct MaskedField {
  VertexField masked;
  MaskSet mask;
};

/// Zeroes round(fraction * N) rows chosen uniformly without replacement.
MaskedField mask_field(const VertexField& field, double fraction, Rng& rng);

// Built-in generators.
TriangleMesh uv_sphere(int rings, int segments, double radius = 1.0);
/// UV sphere with roughly `target` vertices (segments = 2 * rings).
TriangleMesh uv_sphere_with_vertices(int target);
TriangleMesh icosahedron();
TriangleMesh icosphere(int subdivisions);
/// nx x ny vertex grid over [0, nx-1] x [0, ny-1] in the z = 0 plane.
TriangleMesh grid_mesh(int nx, int ny, double spacing = 1.0);
TriangleMesh torus(int major_segments, int minor_segments, double major_radius = 1.0,
                   double minor_radius = 0.35);

}  // namespace gfi
