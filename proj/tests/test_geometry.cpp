#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gfi/csv.hpp"
#include "gfi/error.hpp"
#include "gfi/geometry.hpp"

using namespace gfi;

TEST_CASE("OFF minimal triangle") {
  const TriangleMesh m = load_mesh("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n", MeshFormat::kOff);
  CHECK(m.num_vertices() == 3);
  CHECK(m.num_faces() == 1);
}

TEST_CASE("OFF round trip through writer") {
  const TriangleMesh m = icosahedron();
  const TriangleMesh back = load_mesh(write_off(m), MeshFormat::kOff);
  CHECK(back.faces() == m.faces());
  CHECK((back.vertices() - m.vertices()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("OFF errors name the line") {
  try {
    load_mesh("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 0 1\n", MeshFormat::kOff);
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 6);
    CHECK(std::string(e.what()).find("degenerate face") != std::string::npos);
  }
  CHECK_THROWS_AS(load_mesh("OFX\n0 0 0\n", MeshFormat::kOff), ParseError);
  try {
    load_mesh("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n", MeshFormat::kOff);
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 6);
  }
  try {
    load_mesh("OFF\n4 1 0\n0 0 0\n1 0 0\n0 1 0\n1 1 0\n4 0 1 2 3\n", MeshFormat::kOff);
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 7);
  }
}

TEST_CASE("OBJ indices are one-based, polygons fan out") {
  const TriangleMesh m = load_mesh(
      "# comment\nv 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 1 0\nvn 0 0 1\nf 1 2 3\nf 1/1/1 2/2/1 4 3\n",
      MeshFormat::kObj);
  REQUIRE(m.num_faces() == 3);
  CHECK(m.faces()[0] == Face{0, 1, 2});
  CHECK(m.faces()[1] == Face{0, 1, 3});
  CHECK(m.faces()[2] == Face{0, 3, 2});
  CHECK_THROWS_AS(load_mesh("v 0 0 0\nv 1 0 0\nf 1 2 5\n", MeshFormat::kObj), ParseError);
}

TEST_CASE("mesh_to_graph weights and dedup") {
  const TriangleMesh one = load_mesh("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n", MeshFormat::kOff);
  const WeightedGraph g = mesh_to_graph(one);
  REQUIRE(g.num_edges() == 3);
  std::vector<double> w;
  for (const Edge& e : g.edges()) w.push_back(e.weight);
  std::sort(w.begin(), w.end());
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(1.0));
  CHECK(w[2] == doctest::Approx(std::sqrt(2.0)));

  const TriangleMesh two = grid_mesh(2, 2);
  CHECK(mesh_to_graph(two).num_edges() == 5);
  Points p(2, 3);
  p << 0, 0, 0, 1, 0, 0;
  CHECK(mesh_to_graph(TriangleMesh(p, {})).num_edges() == 0);
}

TEST_CASE("coincident vertices get a tiny positive weight") {
  Points p(3, 3);
  p << 0, 0, 0, 0, 0, 0, 1, 0, 0;
  const WeightedGraph g = mesh_to_graph(TriangleMesh(p, {Face{0, 1, 2}}));
  CHECK(g.min_positive_weight() == kZeroEdgeWeight);
}

TEST_CASE("normalize_points") {
  Points p(2, 3);
  p << 0, 0, 0, 2, 0, 0;
  const Points n = normalize_points(PointCloud(p)).points();
  CHECK(n(0, 0) == doctest::Approx(-1.0));
  CHECK(n(1, 0) == doctest::Approx(1.0));

  Points single(1, 3);
  single << 5, 5, 5;
  CHECK(normalize_points(PointCloud(single)).points().isZero());

  Points cube(8, 3);
  for (int i = 0; i < 8; ++i) cube.row(i) << (i & 1 ? 1 : -1), (i & 2 ? 1 : -1), (i & 4 ? 1 : -1);
  const Points once = normalize_points(PointCloud(cube)).points();
  CHECK((once - cube).cwiseAbs().maxCoeff() <= 1e-12);

  const Points sphere = normalize_points(uv_sphere(9, 14, 3.0).cloud()).points();
  CHECK(sphere.colwise().mean().cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(sphere.cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
  const Points twice = normalize_points(PointCloud(sphere)).points();
  CHECK((twice - sphere).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("area weights") {
  const TriangleMesh one = load_mesh("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n", MeshFormat::kOff);
  const Eigen::VectorXd w = area_weights(one);
  for (int i = 0; i < 3; ++i) CHECK(w[i] == doctest::Approx(1.0 / 3.0));

  const Eigen::VectorXd g = area_weights(grid_mesh(2, 2));
  // Diagonal 0-3 is shared by both triangles.
  CHECK(g[0] == doctest::Approx(2.0 * g[1]));
  CHECK(g[3] == doctest::Approx(2.0 * g[2]));

  const Eigen::VectorXd ico = area_weights(icosahedron());
  for (int i = 0; i < 12; ++i) CHECK(ico[i] == doctest::Approx(1.0 / 12.0));

  const TriangleMesh torus_mesh = torus(12, 8);
  CHECK(std::abs(area_weights(torus_mesh).sum() - 1.0) <= 1e-12);

  Points flat(3, 3);
  flat << 0, 0, 0, 1, 0, 0, 2, 0, 0;
  CHECK_THROWS_AS(area_weights(TriangleMesh(flat, {Face{0, 1, 2}})), InvalidArgument);
}

TEST_CASE("area weights are permutation equivariant") {
  const TriangleMesh m = uv_sphere(6, 9);
  const int n = m.num_vertices();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(3);
  std::shuffle(perm.begin(), perm.end(), rng);
  Points p(n, 3);
  for (int i = 0; i < n; ++i) p.row(perm[i]) = m.vertices().row(i);
  std::vector<Face> faces;
  for (const Face& f : m.faces()) faces.push_back({perm[f[0]], perm[f[1]], perm[f[2]]});
  const Eigen::VectorXd a = area_weights(m), b = area_weights(TriangleMesh(p, faces));
  for (int i = 0; i < n; ++i) CHECK(b[perm[i]] == doctest::Approx(a[i]).epsilon(1e-12));
}

TEST_CASE("vertex normals on a sphere point outward") {
  const TriangleMesh m = icosphere(2);
  const VertexField n = vertex_normals(m);
  for (int i = 0; i < m.num_vertices(); ++i)
    CHECK(n.row(i).dot(m.vertices().row(i).normalized()) > 0.99);
}

TEST_CASE("mask_field") {
  Rng rng(11);
  VertexField f = VertexField::Random(10, 3);
  const MaskedField m = mask_field(f, 0.8, rng);
  CHECK(m.mask.indices.size() == 8);
  CHECK(std::is_sorted(m.mask.indices.begin(), m.mask.indices.end()));
  for (int i : m.mask.indices) CHECK(m.masked.row(i).isZero());

  VertexField restored = m.masked;
  for (int i : m.mask.indices) restored.row(i) = f.row(i);
  CHECK(restored == f);

  Rng small(1);
  const MaskedField half = mask_field(VertexField::Ones(2, 1), 0.5, small);
  CHECK(half.masked.sum() == 1.0);

  Rng a(5), b(5);
  CHECK(mask_field(f, 0.3, a).mask.indices == mask_field(f, 0.3, b).mask.indices);
  CHECK_THROWS_AS(mask_field(f, 1.0, a), InvalidArgument);
}

TEST_CASE("generators") {
  const TriangleMesh s = uv_sphere(10, 20);
  CHECK(s.num_vertices() == 20 * 9 + 2);
  CHECK(is_connected(mesh_to_graph(s)));
  // Euler characteristic of a sphere.
  CHECK(s.num_vertices() - static_cast<int>(mesh_to_graph(s).num_edges()) + s.num_faces() == 2);
  CHECK(icosphere(1).num_vertices() == 42);
  const TriangleMesh t = torus(10, 6);
  CHECK(t.num_vertices() - static_cast<int>(mesh_to_graph(t).num_edges()) + t.num_faces() == 0);
  const int target = 4000;
  CHECK(std::abs(uv_sphere_with_vertices(target).num_vertices() - target) < target / 10);
}

TEST_CASE("CSV parsing") {
  const Eigen::MatrixXd m = parse_csv("x,y\n1,2\n3.5, -4\n");
  REQUIRE(m.rows() == 2);
  CHECK(m(1, 0) == 3.5);
  CHECK(m(1, 1) == -4.0);
  CHECK(parse_csv("1\n2\n").rows() == 2);
  CHECK_THROWS_AS(parse_csv("1,2\n3\n"), ParseError);
  CHECK_THROWS_AS(parse_csv("a\nb\n"), ParseError);
  const Eigen::MatrixXd r = Eigen::MatrixXd::Random(5, 3);
  CHECK(parse_csv(format_csv(r, {"a", "b", "c"})) == r);
}
