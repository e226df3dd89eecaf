#include "memdg/fespace.hpp"

#include <stdexcept>

namespace memdg {

Point2 side_point(int side, double t) {
  switch (side) {
    case 0: return {-1.0, t};
    case 1: return {1.0, t};
    case 2: return {t, -1.0};
    case 3: return {t, 1.0};
    default: throw std::invalid_argument("side_point: side in 0..3");
  }
}

TracePoints trace_quadrature(const Mesh&, const Face& face, const QuadratureRule& rule) {
  TracePoints tp;
  const int nq = rule.size();
  tp.params = rule.points;
  tp.weights.resize(nq);
  tp.physical.resize(nq);
  tp.plus_ref.resize(nq);
  if (!face.is_boundary()) tp.minus_ref.resize(nq);
  for (int q = 0; q < nq; ++q) {
    const double t = rule.points[q];
    tp.weights[q] = rule.weights[q] * 0.5 * face.length;
    tp.physical[q] = face.at(t);
    tp.plus_ref[q] = side_point(face.plus_side, t);
    if (!face.is_boundary()) tp.minus_ref[q] = side_point(face.minus_side, t);
  }
  return tp;
}

FeSpace::FeSpace(const Mesh& mesh, int uniform_degree, int n_components)
    : FeSpace(mesh, DegreeMap{std::vector<int>(mesh.n_elements(), uniform_degree)},
              n_components) {}

FeSpace::FeSpace(const Mesh& mesh, DegreeMap degrees, int n_components)
    : mesh_(&mesh), degrees_(std::move(degrees)) {
  if (static_cast<int>(degrees_.element_degree.size()) != mesh.n_elements())
    throw std::invalid_argument("FeSpace: degree map size mismatch");
  dofs_.n_components = n_components;
  dofs_.offset.resize(mesh.n_elements());
  dofs_.block.resize(mesh.n_elements());
  int next = 0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const int m = degrees_.element_degree[e];
    if (m < 0) throw std::invalid_argument("FeSpace: negative degree");
    dofs_.offset[e] = next;
    dofs_.block[e] = (m + 1) * (m + 1);
    next += n_components * dofs_.block[e];
  }
  dofs_.total_dofs = next;
  build_tables();
}

void FeSpace::build_tables() {
  for (int m : degrees_.element_degree) {
    if (tables_by_degree_.count(m)) continue;
    Tables t;
    t.m = m;
    t.nb = (m + 1) * (m + 1);
    const ReferenceBasis basis(m);

    auto fill_volume = [&](const QuadratureRule2D& rule, Eigen::MatrixXd& val,
                           Eigen::MatrixXd& dxi, Eigen::MatrixXd& deta) {
      const int nq = rule.size();
      val.resize(nq, t.nb);
      dxi.resize(nq, t.nb);
      deta.resize(nq, t.nb);
      Eigen::VectorXd v;
      Eigen::MatrixXd g;
      for (int q = 0; q < nq; ++q) {
        basis.eval(rule.points[q], v, g);
        val.row(q) = v.transpose();
        dxi.row(q) = g.col(0).transpose();
        deta.row(q) = g.col(1).transpose();
      }
    };

    t.vol = tensor_rule(gauss_legendre_1d(m + 2));
    fill_volume(t.vol, t.val, t.dxi, t.deta);
    t.vol_err = tensor_rule(gauss_legendre_1d(m + 4));
    fill_volume(t.vol_err, t.val_err, t.dxi_err, t.deta_err);

    t.ref_l2.resize(t.nb);
    for (int j = 0; j < t.nb; ++j) t.ref_l2[j] = basis.ref_l2_squared(j);

    auto fill_traces = [&](const QuadratureRule& line, std::array<Eigen::MatrixXd, 4>& val,
                           std::array<Eigen::MatrixXd, 4>& dxi,
                           std::array<Eigen::MatrixXd, 4>& deta) {
      Eigen::VectorXd v;
      Eigen::MatrixXd g;
      for (int side = 0; side < 4; ++side) {
        const int nq = line.size();
        val[side].resize(nq, t.nb);
        dxi[side].resize(nq, t.nb);
        deta[side].resize(nq, t.nb);
        for (int q = 0; q < nq; ++q) {
          basis.eval(side_point(side, line.points[q]), v, g);
          val[side].row(q) = v.transpose();
          dxi[side].row(q) = g.col(0).transpose();
          deta[side].row(q) = g.col(1).transpose();
        }
      }
    };

    t.line = gauss_legendre_1d(m + 2);
    fill_traces(t.line, t.tval, t.tdxi, t.tdeta);
    t.line_err = gauss_legendre_1d(m + 4);
    fill_traces(t.line_err, t.tval_err, t.tdxi_err, t.tdeta_err);

    tables_by_degree_.emplace(m, std::move(t));
  }
}

double FeSpace::value_at(const Eigen::VectorXd& U, int e, int comp, Point2 ref) const {
  const ReferenceBasis basis(degree(e));
  const Eigen::VectorXd v = basis.eval_values(ref);
  double s = 0.0;
  for (int j = 0; j < v.size(); ++j) s += U[dofs_(e, comp, j)] * v[j];
  return s;
}

Eigen::Vector2d FeSpace::gradient_at(const Eigen::VectorXd& U, int e, int comp,
                                     Point2 ref) const {
  const ReferenceBasis basis(degree(e));
  Eigen::VectorXd v;
  Eigen::MatrixXd g;
  basis.eval(ref, v, g);
  Eigen::Vector2d grad = Eigen::Vector2d::Zero();
  for (int j = 0; j < v.size(); ++j) {
    const double c = U[dofs_(e, comp, j)];
    grad[0] += c * g(j, 0);
    grad[1] += c * g(j, 1);
  }
  grad[0] *= grad_scale_x();
  grad[1] *= grad_scale_y();
  return grad;
}

Eigen::VectorXd FeSpace::values_at(const Eigen::VectorXd& U, Point2 p,
                                   int subdomain_hint) const {
  const int e = mesh_->locate(p, subdomain_hint);
  const Point2 ref = mesh_->to_reference(e, p);
  Eigen::VectorXd out(n_components());
  for (int c = 0; c < n_components(); ++c) out[c] = value_at(U, e, c, ref);
  return out;
}

Eigen::VectorXd FeSpace::project(
    const std::function<Eigen::VectorXd(Point2, int)>& fn) const {
  Eigen::VectorXd U = Eigen::VectorXd::Zero(total_dofs());
  for (int e = 0; e < mesh_->n_elements(); ++e) {
    const Tables& t = tables(e);
    const int sub = mesh_->element_subdomain[e];
    Eigen::MatrixXd moments = Eigen::MatrixXd::Zero(t.nb, n_components());
    for (int q = 0; q < t.vol_err.size(); ++q) {
      const Point2 x = mesh_->from_reference(e, t.vol_err.points[q]);
      const Eigen::VectorXd f = fn(x, sub);
      moments += t.vol_err.weights[q] * t.val_err.row(q).transpose() * f.transpose();
    }
    for (int c = 0; c < n_components(); ++c)
      for (int j = 0; j < t.nb; ++j) U[dofs_(e, c, j)] = moments(j, c) / t.ref_l2[j];
  }
  return U;
}

}  // namespace memdg
