#include "gfi/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "gfi/error.hpp"

namespace gfi {

PointCloud::PointCloud(Points points) : points_(std::move(points)) {
  if (points_.rows() < 1) throw InvalidArgument("point cloud needs at least one point");
  if (!points_.allFinite()) throw InvalidArgument("point cloud has non-finite coordinates");
}

TriangleMesh::TriangleMesh(Points vertices, std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  if (!vertices_.allFinite()) throw InvalidArgument("mesh has non-finite coordinates");
  const int n = num_vertices();
  for (const Face& f : faces_) {
    for (int i : f)
      if (i < 0 || i >= n) throw InvalidArgument("face index out of range");
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) throw InvalidArgument("degenerate face");
  }
}

namespace {

struct Line {
  int number;
  std::vector<std::string_view> tokens;
};

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// Non-empty lines with '#' comments stripped.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    auto tokens = split_ws(raw);
    if (!tokens.empty()) lines.push_back({number, std::move(tokens)});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

double parse_real(std::string_view tok, int line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(value))
    throw ParseError("invalid number '" + std::string(tok) + "'", line);
  return value;
}

long parse_int(std::string_view tok, int line) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("invalid integer '" + std::string(tok) + "'", line);
  return value;
}

void check_face(const Face& f, int n, int line) {
  for (int i : f)
    if (i < 0 || i >= n) throw ParseError("face index out of range", line);
  if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) throw ParseError("degenerate face", line);
}

TriangleMesh parse_off(std::string_view text) {
  auto lines = tokenize(text);
  if (lines.empty() || lines[0].tokens[0] != "OFF")
    throw ParseError("missing OFF header", lines.empty() ? 1 : lines[0].number);
  std::size_t cursor = 0;
  std::vector<std::string_view> counts(lines[0].tokens.begin() + 1, lines[0].tokens.end());
  int counts_line = lines[0].number;
  if (counts.empty()) {
    if (lines.size() < 2) throw ParseError("missing counts line", lines[0].number + 1);
    counts = lines[1].tokens;
    counts_line = lines[1].number;
    cursor = 2;
  } else {
    cursor = 1;
  }
  if (counts.size() < 2) throw ParseError("counts line needs vertex and face counts", counts_line);
  const long nv = parse_int(counts[0], counts_line);
  const long nf = parse_int(counts[1], counts_line);
  if (nv < 0 || nf < 0) throw ParseError("negative counts", counts_line);
  if (lines.size() < cursor + static_cast<std::size_t>(nv + nf))
    throw ParseError("unexpected end of file", lines.empty() ? 1 : lines.back().number + 1);

  Points vertices(nv, 3);
  for (long i = 0; i < nv; ++i) {
    const Line& l = lines[cursor++];
    if (l.tokens.size() < 3) throw ParseError("vertex line needs 3 coordinates", l.number);
    for (int c = 0; c < 3; ++c) vertices(i, c) = parse_real(l.tokens[c], l.number);
  }
  std::vector<Face> faces;
  faces.reserve(nf);
  for (long i = 0; i < nf; ++i) {
    const Line& l = lines[cursor++];
    const long k = parse_int(l.tokens[0], l.number);
    if (k != 3) throw ParseError("non-triangle face", l.number);
    if (l.tokens.size() < 4) throw ParseError("face line needs 3 indices", l.number);
    Face f;
    for (int c = 0; c < 3; ++c) f[c] = static_cast<int>(parse_int(l.tokens[1 + c], l.number));
    check_face(f, static_cast<int>(nv), l.number);
    faces.push_back(f);
  }
  return TriangleMesh(std::move(vertices), std::move(faces));
}

TriangleMesh parse_obj(std::string_view text) {
  auto lines = tokenize(text);
  std::vector<Eigen::Vector3d> verts;
  struct RawFace {
    int line;
    std::vector<long> idx;
  };
  std::vector<RawFace> raw_faces;
  for (const Line& l : lines) {
    if (l.tokens[0] == "v") {
      if (l.tokens.size() < 4) throw ParseError("vertex line needs 3 coordinates", l.number);
      verts.emplace_back(parse_real(l.tokens[1], l.number), parse_real(l.tokens[2], l.number),
                         parse_real(l.tokens[3], l.number));
    } else if (l.tokens[0] == "f") {
      RawFace rf{l.number, {}};
      for (std::size_t t = 1; t < l.tokens.size(); ++t) {
        std::string_view tok = l.tokens[t];
        tok = tok.substr(0, tok.find('/'));
        long idx = parse_int(tok, l.number);
        // negative indices count back from the vertices read so far
        if (idx < 0) idx = static_cast<long>(verts.size()) + idx + 1;
        rf.idx.push_back(idx - 1);
      }
      if (rf.idx.size() < 3) throw ParseError("face needs at least 3 vertices", l.number);
      raw_faces.push_back(std::move(rf));
    }
  }
  const int n = static_cast<int>(verts.size());
  Points vertices(n, 3);
  for (int i = 0; i < n; ++i) vertices.row(i) = verts[i].transpose();
  std::vector<Face> faces;
  for (const RawFace& rf : raw_faces) {
    for (std::size_t k = 1; k + 1 < rf.idx.size(); ++k) {
      Face f{static_cast<int>(rf.idx[0]), static_cast<int>(rf.idx[k]),
             static_cast<int>(rf.idx[k + 1])};
      check_face(f, n, rf.line);
      faces.push_back(f);
    }
  }
  return TriangleMesh(std::move(vertices), std::move(faces));
}

}  // namespace

TriangleMesh load_mesh(std::string_view text, MeshFormat format) {
  return format == MeshFormat::kOff ? parse_off(text) : parse_obj(text);
}

TriangleMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open mesh file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string ext = path.substr(path.find_last_of('.') + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == "off") return load_mesh(ss.str(), MeshFormat::kOff);
  if (ext == "obj") return load_mesh(ss.str(), MeshFormat::kObj);
  throw Error("unsupported mesh extension '." + ext + "'");
}

std::string write_off(const TriangleMesh& mesh) {
  std::ostringstream out;
  out.precision(17);
  out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_faces() << " 0\n";
  for (int i = 0; i < mesh.num_vertices(); ++i)
    out << mesh.vertices()(i, 0) << ' ' << mesh.vertices()(i, 1) << ' ' << mesh.vertices()(i, 2)
        << '\n';
  for (const Face& f : mesh.faces()) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  return out.str();
}

WeightedGraph mesh_to_graph(const TriangleMesh& mesh) {
  std::vector<Edge> edges;
  edges.reserve(3 * mesh.faces().size());
  const Points& x = mesh.vertices();
  for (const Face& f : mesh.faces()) {
    for (int k = 0; k < 3; ++k) {
      int u = f[k], v = f[(k + 1) % 3];
      if (u > v) std::swap(u, v);
      const double len = (x.row(u) - x.row(v)).norm();
      edges.push_back({u, v, len > 0.0 ? len : kZeroEdgeWeight});
    }
  }
  return WeightedGraph(mesh.num_vertices(), edges);
}

PointCloud normalize_points(const PointCloud& cloud) {
  Points p = cloud.points();
  const Eigen::RowVector3d centroid = p.colwise().mean();
  p.rowwise() -= centroid;
  const double scale = p.cwiseAbs().maxCoeff();
  if (scale > 0.0) {
    p /= scale;
    // Re-center: the division reintroduces rounding in the mean.
    p.rowwise() -= p.colwise().mean();
  } else {
    p.setZero();
  }
  return PointCloud(std::move(p));
}

TriangleMesh normalize_mesh(const TriangleMesh& mesh) {
  return TriangleMesh(normalize_points(mesh.cloud()).points(), mesh.faces());
}

Eigen::VectorXd area_weights(const TriangleMesh& mesh) {
  const Points& x = mesh.vertices();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(mesh.num_vertices());
  double total = 0.0;
  for (const Face& f : mesh.faces()) {
    const Eigen::Vector3d e1 = (x.row(f[1]) - x.row(f[0])).transpose();
    const Eigen::Vector3d e2 = (x.row(f[2]) - x.row(f[0])).transpose();
    const double area = 0.5 * e1.cross(e2).norm();
    total += area;
    for (int i : f) w[i] += area / 3.0;
  }
  if (!(total > 0.0)) throw InvalidArgument("mesh has zero total area");
  for (double& v : w)
    if (v <= 0.0) v = 1e-12;
  return w / w.sum();
}

VertexField vertex_normals(const TriangleMesh& mesh) {
  const Points& x = mesh.vertices();
  VertexField n = VertexField::Zero(mesh.num_vertices(), 3);
  for (const Face& f : mesh.faces()) {
    const Eigen::Vector3d e1 = (x.row(f[1]) - x.row(f[0])).transpose();
    const Eigen::Vector3d e2 = (x.row(f[2]) - x.row(f[0])).transpose();
    // |e1 x e2| = 2 * area, so the raw cross product is already area weighted
    const Eigen::RowVector3d c = e1.cross(e2).transpose();
    for (int i : f) n.row(i) += c;
  }
  for (int i = 0; i < n.rows(); ++i) {
    const double len = n.row(i).norm();
    if (len > 0.0) n.row(i) /= len;
  }
  return n;
}

MaskedField mask_field(const VertexField& field, double fraction, Rng& rng) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw InvalidArgument("mask fraction must lie in (0, 1)");
  const int n = static_cast<int>(field.rows());
  const int k = static_cast<int>(std::lround(fraction * n));
  MaskedField out{field, {sample_without_replacement(n, k, rng), fraction}};
  std::sort(out.mask.indices.begin(), out.mask.indices.end());
  for (int i : out.mask.indices) out.masked.row(i).setZero();
  return out;
}

TriangleMesh uv_sphere(int rings, int segments, double radius) {
  if (rings < 2 || segments < 3) throw InvalidArgument("uv_sphere needs rings >= 2, segments >= 3");
  const int n = segments * (rings - 1) + 2;
  Points v(n, 3);
  v.row(0) << 0.0, 0.0, radius;
  for (int r = 1; r < rings; ++r) {
    const double theta = std::numbers::pi * r / rings;
    for (int s = 0; s < segments; ++s) {
      const double phi = 2.0 * std::numbers::pi * s / segments;
      v.row(1 + (r - 1) * segments + s) << radius * std::sin(theta) * std::cos(phi),
          radius * std::sin(theta) * std::sin(phi), radius * std::cos(theta);
    }
  }
  v.row(n - 1) << 0.0, 0.0, -radius;
  auto ring = [&](int r, int s) { return 1 + (r - 1) * segments + (s % segments); };
  std::vector<Face> faces;
  for (int s = 0; s < segments; ++s) faces.push_back({0, ring(1, s), ring(1, s + 1)});
  for (int r = 1; r + 1 < rings; ++r)
    for (int s = 0; s < segments; ++s) {
      faces.push_back({ring(r, s), ring(r + 1, s), ring(r + 1, s + 1)});
      faces.push_back({ring(r, s), ring(r + 1, s + 1), ring(r, s + 1)});
    }
  for (int s = 0; s < segments; ++s) faces.push_back({n - 1, ring(rings - 1, s + 1), ring(rings - 1, s)});
  return TriangleMesh(std::move(v), std::move(faces));
}

TriangleMesh uv_sphere_with_vertices(int target) {
  const int rings = std::max(2, static_cast<int>(std::lround(std::sqrt(target / 2.0))));
  return uv_sphere(rings, 2 * rings);
}

TriangleMesh icosahedron() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  Points v(12, 3);
  v << -1, t, 0, 1, t, 0, -1, -t, 0, 1, -t, 0, 0, -1, t, 0, 1, t, 0, -1, -t, 0, 1, -t, t, 0, -1, t,
      0, 1, -t, 0, -1, -t, 0, 1;
  v.rowwise().normalize();
  std::vector<Face> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                         {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                         {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                         {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return TriangleMesh(std::move(v), std::move(f));
}

TriangleMesh icosphere(int subdivisions) {
  TriangleMesh mesh = icosahedron();
  for (int level = 0; level < subdivisions; ++level) {
    std::vector<Eigen::Vector3d> verts;
    for (int i = 0; i < mesh.num_vertices(); ++i) verts.push_back(mesh.vertices().row(i).transpose());
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      verts.push_back((verts[a] + verts[b]).normalized());
      const int id = static_cast<int>(verts.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<Face> faces;
    for (const Face& f : mesh.faces()) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      faces.push_back({f[0], ab, ca});
      faces.push_back({f[1], bc, ab});
      faces.push_back({f[2], ca, bc});
      faces.push_back({ab, bc, ca});
    }
    Points v(static_cast<int>(verts.size()), 3);
    for (std::size_t i = 0; i < verts.size(); ++i) v.row(i) = verts[i].transpose();
    mesh = TriangleMesh(std::move(v), std::move(faces));
  }
  return mesh;
}

TriangleMesh grid_mesh(int nx, int ny, double spacing) {
  if (nx < 2 || ny < 2) throw InvalidArgument("grid needs at least 2 x 2 vertices");
  Points v(nx * ny, 3);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) v.row(j * nx + i) << i * spacing, j * spacing, 0.0;
  std::vector<Face> faces;
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      const int a = j * nx + i, b = a + 1, c = a + nx, d = c + 1;
      faces.push_back({a, b, d});
      faces.push_back({a, d, c});
    }
  return TriangleMesh(std::move(v), std::move(faces));
}

TriangleMesh torus(int major_segments, int minor_segments, double major_radius, double minor_radius) {
  if (major_segments < 3 || minor_segments < 3) throw InvalidArgument("torus needs >= 3 segments");
  Points v(major_segments * minor_segments, 3);
  for (int i = 0; i < major_segments; ++i) {
    const double u = 2.0 * std::numbers::pi * i / major_segments;
    for (int j = 0; j < minor_segments; ++j) {
      const double w = 2.0 * std::numbers::pi * j / minor_segments;
      v.row(i * minor_segments + j) << (major_radius + minor_radius * std::cos(w)) * std::cos(u),
          (major_radius + minor_radius * std::cos(w)) * std::sin(u), minor_radius * std::sin(w);
    }
  }
  std::vector<Face> faces;
  auto id = [&](int i, int j) { return (i % major_segments) * minor_segments + (j % minor_segments); };
  for (int i = 0; i < major_segments; ++i)
    for (int j = 0; j < minor_segments; ++j) {
      faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return TriangleMesh(std::move(v), std::move(faces));
}

}  // namespace gfi
