#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smacollide/fem.hpp"
#include "smacollide/linalg.hpp"

#include <Eigen/Dense>

#include <array>

using namespace smacollide;

namespace {

Mesh unit_triangle() {
  Mesh m;
  m.nodes.resize(3, 2);
  m.nodes << 0, 0, 1, 0, 0, 1;
  m.triangles.resize(1, 3);
  m.triangles << 0, 1, 2;
  m.width = m.height = 1.0;
  return m;
}

double max_asym(const SparseMatrix& a) {
  const Eigen::MatrixXd d(a);
  return (d - d.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("unit right triangle element matrices") {
  const Mesh m = unit_triangle();
  Eigen::Matrix3d k_ref;
  k_ref << 2, -1, -1, -1, 1, 0, -1, 0, 1;
  k_ref *= 0.5;
  CHECK((Eigen::MatrixXd(assemble_scalar_stiffness(m)) - k_ref).cwiseAbs().maxCoeff() < 1e-15);

  Eigen::Matrix3d m_ref;
  m_ref << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  m_ref /= 24.0;
  CHECK((Eigen::MatrixXd(assemble_scalar_mass(m, false)) - m_ref).cwiseAbs().maxCoeff() < 1e-16);
  const Eigen::MatrixXd ml(assemble_scalar_mass(m, true));
  CHECK((ml - Eigen::Matrix3d::Identity() / 6.0).cwiseAbs().maxCoeff() < 1e-16);
  CHECK((lumped_mass(m) - Eigen::Vector3d::Constant(1.0 / 6.0)).cwiseAbs().maxCoeff() < 1e-16);
}

TEST_CASE("global properties on structured meshes") {
  for (auto pattern : {DiagonalPattern::Forward, DiagonalPattern::Symmetric}) {
    const Mesh m = build_structured_mesh(6, 4, 2e-3, 1e-3, {}, pattern);
    const SparseMatrix a = assemble_scalar_stiffness(m);
    const SparseMatrix mc = assemble_scalar_mass(m, false);
    const SparseMatrix e = assemble_elastic_stiffness(m);
    const SparseMatrix mv = assemble_vector_mass(m);
    CHECK(max_asym(a) == 0.0);
    CHECK(max_asym(mc) == 0.0);
    CHECK(max_asym(e) == 0.0);
    CHECK(max_asym(mv) == 0.0);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.num_nodes());
    CHECK((a * ones).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(ones.dot(mc * ones) == doctest::Approx(2e-6).epsilon(1e-12));
    CHECK(lumped_mass(m).sum() == doctest::Approx(2e-6).epsilon(1e-12));
  }
}

TEST_CASE("elastic kernel: translations and rotation") {
  const Mesh m = build_structured_mesh(5, 5, 1.0, 1.0);
  const SparseMatrix e = assemble_elastic_stiffness(m);
  const int n = m.num_nodes();
  Eigen::VectorXd tx(2 * n), ty(2 * n), rot(2 * n);
  for (int i = 0; i < n; ++i) {
    tx.segment<2>(2 * i) << 1, 0;
    ty.segment<2>(2 * i) << 0, 1;
    rot.segment<2>(2 * i) << -m.nodes(i, 1), m.nodes(i, 0);
  }
  const double scale = Eigen::MatrixXd(e).cwiseAbs().maxCoeff();
  CHECK((e * tx).cwiseAbs().maxCoeff() < 1e-13 * scale);
  CHECK((e * ty).cwiseAbs().maxCoeff() < 1e-13 * scale);
  CHECK((e * rot).cwiseAbs().maxCoeff() < 1e-13 * scale);
}

TEST_CASE("Korn: positive after clamping Gamma0 on a 2x2 mesh") {
  const Mesh m = build_structured_mesh(2, 2, 1.0, 1.0);
  const Eigen::MatrixXd e(assemble_elastic_stiffness(m));
  std::vector<int> free;
  const auto fixed = nodes_with_tag(m, BoundaryTag::Gamma0);
  for (int i = 0; i < m.num_nodes(); ++i)
    if (!std::binary_search(fixed.begin(), fixed.end(), i)) {
      free.push_back(2 * i);
      free.push_back(2 * i + 1);
    }
  Eigen::MatrixXd r(free.size(), free.size());
  for (std::size_t i = 0; i < free.size(); ++i)
    for (std::size_t j = 0; j < free.size(); ++j) r(i, j) = e(free[i], free[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
  CHECK(es.eigenvalues().minCoeff() > 1e-3);
  // without clamping the three rigid modes are in the kernel
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(e);
  CHECK(std::abs(full.eigenvalues()(2)) < 1e-12);
  CHECK(full.eigenvalues()(3) > 1e-3);
}

TEST_CASE("constant strain energy") {
  const Mesh m = build_structured_mesh(7, 3, 2.0, 0.5);
  const SparseMatrix e = assemble_elastic_stiffness(m);
  Eigen::VectorXd u(2 * m.num_nodes());
  for (int i = 0; i < m.num_nodes(); ++i) u.segment<2>(2 * i) << m.nodes(i, 0), -m.nodes(i, 1);
  CHECK(u.dot(e * u) == doctest::Approx(2.0 * 1.0).epsilon(1e-12));
}

TEST_CASE("discrete Green identity for f = x") {
  for (auto pattern : {DiagonalPattern::Forward, DiagonalPattern::Symmetric}) {
    const Mesh m = build_structured_mesh(8, 5, 1.5, 1.0, {}, pattern);
    const SparseMatrix a = assemble_scalar_stiffness(m);
    Eigen::VectorXd flux = Eigen::VectorXd::Zero(m.num_nodes());
    for (const auto& e : all_boundary_edges(m))
      for (int v : e.nodes) flux(v) += 0.5 * e.length * e.normal.x();
    const Eigen::VectorXd ax = a * Eigen::VectorXd(m.nodes.col(0));
    CHECK((ax - flux).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("boundary traction") {
  const Mesh m = build_structured_mesh(3, 3, 3.0, 3.0);
  CHECK(assemble_boundary_traction(m, BoundaryTag::Gamma1, Eigen::Vector2d::Zero()).cwiseAbs().maxCoeff() == 0.0);

  // one loaded edge of length 1
  const Eigen::Vector2d g(2.0, -3.0);
  const Eigen::VectorXd f = assemble_boundary_traction(m, BoundaryTag::Gamma1, g, 1.5);
  const auto edge = boundary_edges_with_tag(m, BoundaryTag::Gamma1).at(0);
  for (int i = 0; i < m.num_nodes(); ++i) {
    const bool on = i == edge.nodes[0] || i == edge.nodes[1];
    if (on) {
      CHECK(f(2 * i) == doctest::Approx(0.5 * 1.5 * g.x()));
      CHECK(f(2 * i + 1) == doctest::Approx(0.5 * 1.5 * g.y()));
    } else {
      CHECK(f.segment<2>(2 * i).norm() == 0.0);
    }
  }

  // the whole bottom, three edges: interior nodes collect two halves
  const Eigen::VectorXd fb = assemble_boundary_traction(m, BoundaryTag::Gamma0, Eigen::Vector2d(0.0, 1.0));
  CHECK(fb(2 * 0 + 1) == doctest::Approx(0.5));
  CHECK(fb(2 * 1 + 1) == doctest::Approx(1.0));
  CHECK(fb(2 * 2 + 1) == doctest::Approx(1.0));
  CHECK(fb(2 * 3 + 1) == doctest::Approx(0.5));
  CHECK(fb.sum() == doctest::Approx(3.0));

  // per-edge values and the quadrature overload agree for constants
  const std::vector<Eigen::Vector2d> per_edge(3, Eigen::Vector2d(0.0, 1.0));
  CHECK((assemble_boundary_traction(m, BoundaryTag::Gamma0, per_edge) - fb).cwiseAbs().maxCoeff() < 1e-15);
  const std::array<BoundaryTag, 1> tags{BoundaryTag::Gamma0};
  const Eigen::VectorXd fq =
      assemble_boundary_traction(m, tags, [](const Eigen::Vector2d&, const Eigen::Vector2d&) { return Eigen::Vector2d(0, 1); });
  CHECK((fq - fb).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("volume quadrature") {
  double w = 0.0;
  for (const auto& q : triangle_quadrature()) w += q.weight;
  CHECK(w == doctest::Approx(1.0).epsilon(1e-15));
  const Mesh m = build_structured_mesh(3, 2, 1.0, 2.0);
  CHECK(assemble_volume_load(m, [](const Eigen::Vector2d&) { return 1.0; }).sum() == doctest::Approx(2.0));
  // degree-5 exactness: int_0^1 int_0^2 x^2 y^3 = 1/3 * 4
  CHECK(assemble_volume_load(m, [](const Eigen::Vector2d& x) { return x.x() * x.x() * x.y() * x.y() * x.y(); }).sum() ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-13));
  // interpolant of a linear field has zero L2 error
  const ScalarField lin = m.nodes.col(0) * 2.0 + m.nodes.col(1);
  CHECK(l2_error(m, lin, [](const Eigen::Vector2d& x) { return 2 * x.x() + x.y(); }) < 1e-14);
}

TEST_CASE("degenerate triangle is reported with its index") {
  Mesh m = build_structured_mesh(2, 1, 2.0, 1.0);
  m.nodes.row(4) = m.nodes.row(1);  // collapse triangle(s) using node 4
  bool caught = false;
  try {
    assemble_scalar_stiffness(m);
  } catch (const AssemblyError& e) {
    caught = true;
    CHECK(e.triangle() >= 0);
    CHECK(std::string(e.what()).find("triangle") != std::string::npos);
  }
  CHECK(caught);
}

TEST_CASE("assembly is reproducible bit for bit") {
  const Mesh m = build_structured_mesh(9, 7, 1e-3, 1e-3);
  const SparseMatrix a = assemble_elastic_stiffness(m), b = assemble_elastic_stiffness(m);
  CHECK(Eigen::MatrixXd(a - b).cwiseAbs().maxCoeff() == 0.0);
}
