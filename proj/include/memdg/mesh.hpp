#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "memdg/geometry.hpp"

namespace memdg {

enum class FaceKind { Interior, Interface, Boundary };

// Local side ids of a quad: 0 = left (xi=-1), 1 = right (xi=+1),
// 2 = bottom (eta=-1), 3 = top (eta=+1).
struct Face {
  FaceKind kind = FaceKind::Interior;
  int plus_element = -1;
  int minus_element = -1;  // -1 on boundary faces
  Point2 normal;           // unit; points plus -> minus, outward on boundary
  Point2 p0, p1;           // endpoints, ascending along the face axis
  double length = 0.0;
  int plus_side = -1;
  int minus_side = -1;
  int axis = 0;  // 0: vertical face (normal +-x), 1: horizontal face

  bool is_boundary() const { return kind == FaceKind::Boundary; }
  /// Physical point of the arclength parameter t in [-1, 1].
  Point2 at(double t) const {
    return {0.5 * (p0.x + p1.x) + 0.5 * t * (p1.x - p0.x),
            0.5 * (p0.y + p1.y) + 0.5 * t * (p1.y - p0.y)};
  }
};

/// Axis-aligned structured quadrilateral mesh of a two-compartment box with
/// the membrane interface contained in the mesh skeleton. Immutable after
/// construction; safe to share read-only across threads.
struct Mesh {
  Domain2D domain = Domain2D::without_interface(0, 1, 0, 1);
  int nx = 0, ny = 0;
  double dx = 0.0, dy = 0.0;

  std::vector<Point2> vertices;
  std::vector<std::array<int, 4>> elements;  // vertex ids, counter-clockwise
  std::vector<int> element_subdomain;        // 1 or 2
  std::vector<double> element_h;             // cell diagonal
  std::vector<Face> faces;

  int n_elements() const { return static_cast<int>(elements.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }

  Point2 element_center(int e) const;
  /// Lower-left corner of element e.
  Point2 element_origin(int e) const;
  /// Map a physical point inside element e to reference coordinates.
  Point2 to_reference(int e, Point2 p) const;
  Point2 from_reference(int e, Point2 ref) const;

  /// Element containing p; ties on internal grid lines are resolved toward
  /// the requested subdomain (1 or 2; 0 = no preference).
  int locate(Point2 p, int subdomain_hint = 0) const;

  double area() const { return domain.area(); }
  /// Shape-regularity witness: max over elements of h / inradius.
  double shape_regularity() const;
  std::string summary() const;
};

/// Uniform nx-by-ny mesh; requires a grid line to coincide with the domain
/// interface (within 1e-12 of the domain width), else InterfaceNotAligned.
Mesh build_structured_mesh(const Domain2D& domain, int nx, int ny);

/// Quadrisect every element; interface alignment is preserved and the
/// element diameter halves exactly.
Mesh refine_uniform(const Mesh& mesh);

/// Diagnostic check of the diffusion contrast bound across faces not on the
/// interface: C_A^{-1} <= |A|_{inf,k} |A^{-1}|_{inf,k'} <= C_A.
struct ContrastEntry {
  int face = -1;
  double product = 0.0;  // max over the two element orderings
  bool pass = true;
};
struct ContrastReport {
  std::vector<ContrastEntry> entries;
  bool all_pass = true;
};
ContrastReport check_diffusion_contrast(
    const Mesh& mesh,
    const std::function<Eigen::VectorXd(double, Point2, int subdomain)>& diffusion,
    int n_components, double c_a, double t = 0.0);

/// Per-component partition of the outer boundary into Dirichlet and Neumann
/// parts, decided from the face midpoint and outward normal.
struct BoundarySpec {
  std::function<bool(int component, Point2 midpoint, Point2 normal)> is_dirichlet;

  static BoundarySpec all_dirichlet();
  static BoundarySpec all_neumann();
  /// Dirichlet on the vertical sides x = x0, x1; Neumann on the horizontal ones.
  static BoundarySpec dirichlet_vertical_sides();
};

}  // namespace memdg
