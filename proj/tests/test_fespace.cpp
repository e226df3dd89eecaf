#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "memdg/errors.hpp"
#include "memdg/fespace.hpp"

using namespace memdg;

namespace {

Mesh unit_mesh(int n) { return build_structured_mesh(Domain2D(-1, 1, -1, 1, 0.0), n, n); }

double monomial_integral_1d(int p) { return p % 2 == 1 ? 0.0 : 2.0 / (p + 1); }

}  // namespace

TEST_CASE("gauss rules: closed forms and analytic integral") {
  const QuadratureRule r1 = gauss_legendre_1d(1);
  CHECK(r1.points[0] == doctest::Approx(0.0));
  CHECK(r1.weights[0] == doctest::Approx(2.0));

  const QuadratureRule r2 = gauss_legendre_1d(2);
  CHECK(r2.points[0] == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(r2.points[1] == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(r2.weights[0] == doctest::Approx(1.0));
  CHECK(r2.weights[1] == doctest::Approx(1.0));

  const QuadratureRule r3 = gauss_legendre_1d(3);
  double quartic = 0.0;
  for (int q = 0; q < 3; ++q) quartic += r3.weights[q] * std::pow(r3.points[q], 4);
  CHECK(std::abs(quartic - 2.0 / 5.0) <= 1e-14);

  CHECK_THROWS_AS(gauss_legendre_1d(0), UnsupportedOrder);
  CHECK_THROWS_AS(gauss_legendre_1d(31), UnsupportedOrder);
}

TEST_CASE("gauss rules: positivity, weight sum, declared exactness") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int n : {1, 2, 3, 5, 8, 13, 21, 30}) {
    const QuadratureRule r = gauss_legendre_1d(n);
    double sum = 0.0;
    for (double w : r.weights) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(sum == doctest::Approx(2.0));
    // random polynomial of the declared exactness degree
    std::vector<double> c(r.exactness + 1);
    double exact = 0.0;
    for (int p = 0; p <= r.exactness; ++p) {
      c[p] = coef(rng);
      exact += c[p] * monomial_integral_1d(p);
    }
    double quad = 0.0;
    for (int q = 0; q < r.size(); ++q) {
      double v = 0.0, xp = 1.0;
      for (int p = 0; p <= r.exactness; ++p) {
        v += c[p] * xp;
        xp *= r.points[q];
      }
      quad += r.weights[q] * v;
    }
    CHECK(std::abs(quad - exact) <= 1e-12 * (1.0 + std::abs(exact)));
  }
}

TEST_CASE("basis represents constants and monomials exactly") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> pt(-1.0, 1.0);

  SUBCASE("constant function, degree 1") {
    const ReferenceBasis basis(1);
    // constant 1 is the first Legendre mode
    Eigen::VectorXd coeff = Eigen::VectorXd::Zero(4);
    coeff[0] = 1.0;
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::VectorXd v = basis.eval_values({pt(rng), pt(rng)});
      CHECK(v.dot(coeff) == doctest::Approx(1.0));
    }
  }

  SUBCASE("x^2 y at degree 2, with gradients") {
    const ReferenceBasis basis(2);
    // x^2 = (P0 + 2 P2)/3, y = P1: modes (a=0,b=1) and (a=2,b=1)
    Eigen::VectorXd coeff = Eigen::VectorXd::Zero(9);
    coeff[1 * 3 + 0] = 1.0 / 3.0;
    coeff[1 * 3 + 2] = 2.0 / 3.0;
    Eigen::VectorXd v;
    Eigen::MatrixXd g;
    for (int trial = 0; trial < 20; ++trial) {
      const Point2 p{pt(rng), pt(rng)};
      basis.eval(p, v, g);
      CHECK(std::abs(v.dot(coeff) - p.x * p.x * p.y) <= 1e-13);
      CHECK(std::abs(g.col(0).dot(coeff) - 2.0 * p.x * p.y) <= 1e-12);
      CHECK(std::abs(g.col(1).dot(coeff) - p.x * p.x) <= 1e-12);
    }
  }

  SUBCASE("gradient against central differences") {
    const ReferenceBasis basis(2);
    std::mt19937 rng2(3);
    std::uniform_real_distribution<double> inner(-0.9, 0.9);
    Eigen::VectorXd coeff = Eigen::VectorXd::Random(9);
    const double h = 1e-6;
    Eigen::VectorXd v;
    Eigen::MatrixXd g;
    for (int trial = 0; trial < 10; ++trial) {
      const Point2 p{inner(rng2), inner(rng2)};
      basis.eval(p, v, g);
      const double fd_x = (basis.eval_values({p.x + h, p.y}).dot(coeff) -
                           basis.eval_values({p.x - h, p.y}).dot(coeff)) /
                          (2 * h);
      const double fd_y = (basis.eval_values({p.x, p.y + h}).dot(coeff) -
                           basis.eval_values({p.x, p.y - h}).dot(coeff)) /
                          (2 * h);
      CHECK(std::abs(g.col(0).dot(coeff) - fd_x) <= 1e-6);
      CHECK(std::abs(g.col(1).dot(coeff) - fd_y) <= 1e-6);
    }
  }

  SUBCASE("Gram matrix is the positive diagonal of reference norms") {
    const ReferenceBasis basis(2);
    const QuadratureRule2D rule = tensor_rule(gauss_legendre_1d(4));
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(9, 9);
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::VectorXd v = basis.eval_values(rule.points[q]);
      gram += rule.weights[q] * v * v.transpose();
    }
    for (int j = 0; j < 9; ++j) {
      CHECK(gram(j, j) == doctest::Approx(basis.ref_l2_squared(j)));
      CHECK(gram(j, j) > 0.0);
      for (int k = 0; k < 9; ++k)
        if (k != j) CHECK(std::abs(gram(j, k)) <= 1e-14 * gram.norm());
    }
  }
}

TEST_CASE("trace quadrature pairs reference points to one physical point") {
  const Mesh mesh = unit_mesh(4);
  const FeSpace space(mesh, 1, 1);
  const QuadratureRule line = gauss_legendre_1d(3);

  SUBCASE("vertical interior face maps to (1,t) and (-1,t)") {
    for (const Face& f : mesh.faces) {
      if (f.is_boundary() || f.axis != 0) continue;
      const TracePoints tp = trace_quadrature(mesh, f, line);
      for (int q = 0; q < 3; ++q) {
        CHECK(tp.plus_ref[q].x == doctest::Approx(1.0));
        CHECK(tp.plus_ref[q].y == doctest::Approx(tp.params[q]));
        CHECK(tp.minus_ref[q].x == doctest::Approx(-1.0));
        CHECK(tp.minus_ref[q].y == doctest::Approx(tp.params[q]));
      }
      break;
    }
  }

  SUBCASE("push-forward of both sides agrees to 1e-13 on all faces") {
    const Mesh rect = build_structured_mesh(Domain2D(-1.5, 2.5, 0.25, 1.75, 0.5), 8, 6);
    for (const Face& f : rect.faces) {
      const TracePoints tp = trace_quadrature(rect, f, line);
      for (std::size_t q = 0; q < tp.physical.size(); ++q) {
        const Point2 xp = rect.from_reference(f.plus_element, tp.plus_ref[q]);
        CHECK(norm(xp - tp.physical[q]) <= 1e-13);
        if (!f.is_boundary()) {
          const Point2 xm = rect.from_reference(f.minus_element, tp.minus_ref[q]);
          CHECK(norm(xm - tp.physical[q]) <= 1e-13);
        }
      }
      if (f.is_boundary()) CHECK(tp.minus_ref.empty());
    }
  }
}

TEST_CASE("dof map: blocks are disjoint and exhaustive") {
  const Mesh mesh = unit_mesh(4);
  DegreeMap degrees{std::vector<int>(mesh.n_elements(), 1)};
  degrees.element_degree[3] = 2;  // hp data is allowed
  const FeSpace space(mesh, degrees, 2);
  int expected = 0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const int m = degrees.element_degree[e];
    expected += 2 * (m + 1) * (m + 1);
  }
  CHECK(space.total_dofs() == expected);
  std::vector<int> hits(space.total_dofs(), 0);
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int c = 0; c < 2; ++c)
      for (int j = 0; j < space.dofs().block[e]; ++j) ++hits[space.dofs()(e, c, j)];
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("uniform-degree dof count matches n (m+1)^2 cells") {
  const Mesh mesh = unit_mesh(4);
  const FeSpace space(mesh, 2, 2);
  CHECK(space.total_dofs() == 2 * 9 * 16);
  for (const Face& f : mesh.faces) {
    CHECK(space.face_degree(f) == doctest::Approx(2.0));
    CHECK(space.face_h(f) == doctest::Approx(mesh.element_h[0]));
  }
}

TEST_CASE("mapped gradient chain rule against finite differences") {
  const Mesh mesh = build_structured_mesh(Domain2D(0.0, 2.0, 0.0, 1.0, 1.0), 4, 2);
  const FeSpace space(mesh, 2, 1);
  Eigen::VectorXd U = Eigen::VectorXd::Random(space.total_dofs());
  const double h = 1e-6;
  const int e = 5;
  for (const Point2 ref : {Point2{0.2, -0.4}, Point2{-0.6, 0.1}}) {
    const Point2 x = mesh.from_reference(e, ref);
    const Eigen::Vector2d g = space.gradient_at(U, e, 0, ref);
    const double fdx = (space.value_at(U, e, 0, mesh.to_reference(e, {x.x + h, x.y})) -
                        space.value_at(U, e, 0, mesh.to_reference(e, {x.x - h, x.y}))) /
                       (2 * h);
    const double fdy = (space.value_at(U, e, 0, mesh.to_reference(e, {x.x, x.y + h})) -
                        space.value_at(U, e, 0, mesh.to_reference(e, {x.x, x.y - h}))) /
                       (2 * h);
    CHECK(std::abs(g[0] - fdx) <= 1e-5 * (1.0 + std::abs(fdx)));
    CHECK(std::abs(g[1] - fdy) <= 1e-5 * (1.0 + std::abs(fdy)));
  }
}

TEST_CASE("projection reproduces discrete functions") {
  const Mesh mesh = unit_mesh(2);
  const FeSpace space(mesh, 2, 2);
  std::mt19937 rng(17);
  std::normal_distribution<double> normal;
  Eigen::VectorXd U(space.total_dofs());
  for (int i = 0; i < U.size(); ++i) U[i] = normal(rng);
  const Eigen::VectorXd back = space.project(
      [&](Point2 x, int sub) { return space.values_at(U, x, sub); });
  CHECK((back - U).cwiseAbs().maxCoeff() <= 1e-13 * U.cwiseAbs().maxCoeff());
}

TEST_CASE("2d quadrature integrates random polynomials of full degree") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int m : {1, 2}) {
    const QuadratureRule line = gauss_legendre_1d(m + 2);
    const QuadratureRule2D rule = tensor_rule(line);
    const int deg = line.exactness;
    double exact = 0.0, quad = 0.0;
    Eigen::MatrixXd c(deg + 1, deg + 1);
    for (int p = 0; p <= deg; ++p)
      for (int r = 0; r <= deg; ++r) {
        c(p, r) = coef(rng);
        exact += c(p, r) * monomial_integral_1d(p) * monomial_integral_1d(r);
      }
    for (int q = 0; q < rule.size(); ++q) {
      double v = 0.0;
      for (int p = 0; p <= deg; ++p)
        for (int r = 0; r <= deg; ++r)
          v += c(p, r) * std::pow(rule.points[q].x, p) * std::pow(rule.points[q].y, r);
      quad += rule.weights[q] * v;
    }
    CHECK(std::abs(quad - exact) <= 1e-12 * (1.0 + std::abs(exact)));
  }
}
