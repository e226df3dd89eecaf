#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "memdg/errors.hpp"
#include "memdg/mesh.hpp"
#include "memdg/problem.hpp"

using namespace memdg;

namespace {

Domain2D unit_box() { return Domain2D(-1.0, 1.0, -1.0, 1.0, 0.0); }

double quad_area(const Mesh& mesh, int e) {
  const auto& q = mesh.elements[e];
  double a = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Point2 p = mesh.vertices[q[i]];
    const Point2 r = mesh.vertices[q[(i + 1) % 4]];
    a += p.x * r.y - r.x * p.y;
  }
  return 0.5 * a;
}

}  // namespace

TEST_CASE("smallest aligned mesh: counts and classification") {
  const Mesh mesh = build_structured_mesh(unit_box(), 2, 2);
  CHECK(mesh.n_elements() == 4);
  int interior = 0, interface = 0, boundary = 0;
  for (const auto& f : mesh.faces) {
    if (f.kind == FaceKind::Interior) ++interior;
    if (f.kind == FaceKind::Interface) ++interface;
    if (f.kind == FaceKind::Boundary) ++boundary;
  }
  CHECK(interior == 2);
  CHECK(interface == 2);
  CHECK(boundary == 8);
  CHECK(mesh.summary().find("interface 2") != std::string::npos);
}

TEST_CASE("4x4 mesh has 16 elements") {
  const Mesh mesh = build_structured_mesh(unit_box(), 4, 4);
  CHECK(mesh.n_elements() == 16);
}

TEST_CASE("odd subdivision misses the interface") {
  CHECK_THROWS_AS(build_structured_mesh(unit_box(), 3, 3), InterfaceNotAligned);
}

TEST_CASE("uniform refinement quadrisects and halves h exactly") {
  const Mesh coarse = build_structured_mesh(unit_box(), 2, 2);
  const Mesh fine = refine_uniform(coarse);
  CHECK(fine.n_elements() == 16);
  CHECK(fine.element_h[0] == coarse.element_h[0] / 2.0);  // bit-exact
  const Mesh finer = refine_uniform(fine);
  CHECK(finer.n_elements() == 64);
  int interface = 0;
  for (const auto& f : finer.faces)
    if (f.kind == FaceKind::Interface) ++interface;
  CHECK(interface == 8);
}

TEST_CASE("face handshake: every element sees exactly four faces") {
  const Mesh mesh = build_structured_mesh(unit_box(), 4, 6);
  std::map<int, int> count;
  for (const auto& f : mesh.faces) {
    ++count[f.plus_element];
    if (!f.is_boundary()) ++count[f.minus_element];
  }
  for (int e = 0; e < mesh.n_elements(); ++e) CHECK(count[e] == 4);
}

TEST_CASE("face neighbor indices are mutually consistent") {
  const Mesh mesh = build_structured_mesh(unit_box(), 4, 4);
  for (const auto& f : mesh.faces) {
    if (f.is_boundary()) {
      CHECK(f.minus_element == -1);
      continue;
    }
    CHECK(f.plus_element != f.minus_element);
    // plus/minus centers straddle the face along its normal
    const Point2 cp = mesh.element_center(f.plus_element);
    const Point2 cm = mesh.element_center(f.minus_element);
    CHECK(dot(cm - cp, f.normal) > 0.0);
  }
}

TEST_CASE("interface faces sit on the interface line with the 1->2 normal") {
  const Mesh mesh = build_structured_mesh(Domain2D(-1.0, 1.0, 0.0, 2.0, 0.0), 6, 3);
  int found = 0;
  for (const auto& f : mesh.faces) {
    CHECK(std::abs(norm(f.normal) - 1.0) <= 1e-14);
    if (f.kind != FaceKind::Interface) continue;
    ++found;
    CHECK(std::abs(f.p0.x) <= 1e-12);
    CHECK(std::abs(f.p1.x) <= 1e-12);
    CHECK(mesh.element_subdomain[f.plus_element] == 1);
    CHECK(mesh.element_subdomain[f.minus_element] == 2);
    CHECK(f.normal.x == doctest::Approx(1.0));
  }
  CHECK(found == 3);
}

TEST_CASE("no element straddles the interface") {
  const Mesh mesh = build_structured_mesh(unit_box(), 8, 4);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    double lo = 1e300, hi = -1e300;
    for (int v : mesh.elements[e]) {
      lo = std::min(lo, mesh.vertices[v].x);
      hi = std::max(hi, mesh.vertices[v].x);
    }
    if (mesh.element_subdomain[e] == 1)
      CHECK(hi <= 1e-12);
    else
      CHECK(lo >= -1e-12);
  }
}

TEST_CASE("element areas sum to the domain area") {
  const Mesh mesh = build_structured_mesh(Domain2D(-1.0, 1.0, -0.5, 1.5, 0.0), 4, 6);
  double total = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) total += quad_area(mesh, e);
  CHECK(std::abs(total - mesh.area()) <= 1e-12 * mesh.area());
}

TEST_CASE("shape regularity witness is finite and tight for squares") {
  const Mesh mesh = build_structured_mesh(unit_box(), 4, 4);
  // h / inradius = sqrt(2) h_cell / (h_cell / 2) = 2 sqrt(2) for squares
  CHECK(mesh.shape_regularity() == doctest::Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("reference map round trip and point location") {
  const Mesh mesh = build_structured_mesh(unit_box(), 4, 4);
  const Point2 p{0.3, -0.7};
  const int e = mesh.locate(p);
  const Point2 ref = mesh.to_reference(e, p);
  CHECK(std::abs(ref.x) <= 1.0 + 1e-14);
  CHECK(std::abs(ref.y) <= 1.0 + 1e-14);
  const Point2 back = mesh.from_reference(e, ref);
  CHECK(back.x == doctest::Approx(p.x));
  CHECK(back.y == doctest::Approx(p.y));
  // interface-line ties resolve toward the requested compartment
  CHECK(mesh.element_subdomain[mesh.locate({0.0, 0.5}, 1)] == 1);
  CHECK(mesh.element_subdomain[mesh.locate({0.0, 0.5}, 2)] == 2);
}

TEST_CASE("domain invariants") {
  CHECK_THROWS_AS(Domain2D(-1.0, 1.0, -1.0, 1.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(Domain2D(-1.0, 1.0, 1.0, -1.0, 0.0), std::invalid_argument);
  const Domain2D single = Domain2D::without_interface(0.0, 1.0, 0.0, 1.0);
  const Mesh mesh = build_structured_mesh(single, 3, 3);
  for (const auto& f : mesh.faces) CHECK(f.kind != FaceKind::Interface);
}

TEST_CASE("diffusion contrast check") {
  const Mesh mesh = build_structured_mesh(unit_box(), 4, 4);

  SUBCASE("identity diffusion passes for any admissible bound") {
    auto a = [](double, Point2, int) { return Eigen::VectorXd::Ones(1).eval(); };
    CHECK(check_diffusion_contrast(mesh, a, 1, 1.0).all_pass);
    CHECK(check_diffusion_contrast(mesh, a, 1, 5.0).all_pass);
  }

  SUBCASE("a tenfold jump across an interior line fails the bound 5") {
    auto a = [](double, Point2 x, int) {
      return Eigen::VectorXd::Constant(1, x.x < -0.5 ? 10.0 : 1.0).eval();
    };
    const auto report = check_diffusion_contrast(mesh, a, 1, 5.0);
    CHECK_FALSE(report.all_pass);
    int failures = 0;
    for (const auto& entry : report.entries)
      if (!entry.pass) ++failures;
    CHECK(failures == 4);  // the x = -0.5 column of vertical faces
  }

  SUBCASE("jumps across the interface are exempt") {
    auto a = [](double, Point2, int sub) {
      return Eigen::VectorXd::Constant(1, sub == 1 ? 10.0 : 1.0).eval();
    };
    CHECK(check_diffusion_contrast(mesh, a, 1, 5.0).all_pass);
  }
}
