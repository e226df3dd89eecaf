#pragma once

#include <array>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "memdg/basis.hpp"
#include "memdg/mesh.hpp"
#include "memdg/quadrature.hpp"

namespace memdg {

/// Per-element polynomial degree with the averaged face value.
struct DegreeMap {
  std::vector<int> element_degree;
  double face_average(const Face& f) const {
    if (f.is_boundary()) return element_degree[f.plus_element];
    return 0.5 * (element_degree[f.plus_element] + element_degree[f.minus_element]);
  }
};

/// Contiguous per-element, per-component dof blocks.
struct DofMap {
  int n_components = 1;
  std::vector<int> offset;  // per element
  std::vector<int> block;   // per element: basis size (m+1)^2
  int total_dofs = 0;

  int operator()(int e, int comp, int j) const { return offset[e] + comp * block[e] + j; }
  int element_begin(int e) const { return offset[e]; }
  int element_size(int e) const { return n_components * block[e]; }
};

/// Reference point on a quad side at arclength parameter t in [-1,1].
/// Sides: 0 left, 1 right, 2 bottom, 3 top.
Point2 side_point(int side, double t);

/// Paired quadrature data on a face: for every 1D node the reference
/// coordinates in the plus and (if present) minus neighbor map to the same
/// physical point.
struct TracePoints {
  std::vector<double> params;      // 1D nodes
  std::vector<double> weights;     // scaled by face length / 2
  std::vector<Point2> physical;
  std::vector<Point2> plus_ref;
  std::vector<Point2> minus_ref;   // empty on boundary faces
};
TracePoints trace_quadrature(const Mesh& mesh, const Face& face, const QuadratureRule& rule);

/// Broken tensor-product Legendre space on a structured mesh: quadrature and
/// basis tables, dof map, trace evaluation. All tables are immutable after
/// construction and shareable across threads.
///
/// Quadrature orders: (m+2)^2 volume / m+2 face points for assembly, and
/// (m+4)^2 / m+4 for error norms and projections.
class FeSpace {
 public:
  struct Tables {
    int m = 1;
    int nb = 4;
    QuadratureRule2D vol;
    Eigen::MatrixXd val, dxi, deta;  // nq x nb
    QuadratureRule2D vol_err;
    Eigen::MatrixXd val_err, dxi_err, deta_err;
    Eigen::VectorXd ref_l2;  // exact L2 norms squared on the reference square
    QuadratureRule line;
    std::array<Eigen::MatrixXd, 4> tval, tdxi, tdeta;  // per side
    QuadratureRule line_err;
    std::array<Eigen::MatrixXd, 4> tval_err, tdxi_err, tdeta_err;
  };

  FeSpace(const Mesh& mesh, int uniform_degree, int n_components);
  FeSpace(const Mesh& mesh, DegreeMap degrees, int n_components);

  const Mesh& mesh() const { return *mesh_; }
  int n_components() const { return dofs_.n_components; }
  int total_dofs() const { return dofs_.total_dofs; }
  const DofMap& dofs() const { return dofs_; }
  const DegreeMap& degrees() const { return degrees_; }

  int degree(int e) const { return degrees_.element_degree[e]; }
  double face_degree(const Face& f) const { return degrees_.face_average(f); }
  /// Face-averaged element diameter {h}.
  double face_h(const Face& f) const {
    const auto& h = mesh_->element_h;
    if (f.is_boundary()) return h[f.plus_element];
    return 0.5 * (h[f.plus_element] + h[f.minus_element]);
  }

  const Tables& tables(int e) const { return tables_by_degree_.at(degree(e)); }
  const Tables& tables_for_degree(int m) const { return tables_by_degree_.at(m); }

  /// Constant affine geometry factors (uniform cells).
  double jacobian() const { return 0.25 * mesh_->dx * mesh_->dy; }
  double grad_scale_x() const { return 2.0 / mesh_->dx; }
  double grad_scale_y() const { return 2.0 / mesh_->dy; }

  /// Pointwise evaluation of a coefficient vector.
  double value_at(const Eigen::VectorXd& U, int e, int comp, Point2 ref) const;
  Eigen::Vector2d gradient_at(const Eigen::VectorXd& U, int e, int comp, Point2 ref) const;
  /// All components at a physical point (subdomain hint resolves grid-line ties).
  Eigen::VectorXd values_at(const Eigen::VectorXd& U, Point2 p, int subdomain_hint = 0) const;

  /// Componentwise L2-orthogonal projection (diagonal with the Legendre basis).
  Eigen::VectorXd project(
      const std::function<Eigen::VectorXd(Point2, int subdomain)>& fn) const;

 private:
  void build_tables();

  const Mesh* mesh_;
  DegreeMap degrees_;
  DofMap dofs_;
  std::map<int, Tables> tables_by_degree_;
};

}  // namespace memdg
