#include "memdg/mesh.hpp"

#include <cmath>
#include <sstream>

#include "memdg/errors.hpp"

namespace memdg {

Point2 Mesh::element_center(int e) const {
  const auto& q = elements[e];
  return {0.25 * (vertices[q[0]].x + vertices[q[1]].x + vertices[q[2]].x + vertices[q[3]].x),
          0.25 * (vertices[q[0]].y + vertices[q[1]].y + vertices[q[2]].y + vertices[q[3]].y)};
}

Point2 Mesh::element_origin(int e) const { return vertices[elements[e][0]]; }

Point2 Mesh::to_reference(int e, Point2 p) const {
  const Point2 c = element_center(e);
  return {2.0 * (p.x - c.x) / dx, 2.0 * (p.y - c.y) / dy};
}

Point2 Mesh::from_reference(int e, Point2 ref) const {
  const Point2 c = element_center(e);
  return {c.x + 0.5 * dx * ref.x, c.y + 0.5 * dy * ref.y};
}

int Mesh::locate(Point2 p, int subdomain_hint) const {
  auto clampi = [](int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); };
  int ix = clampi(static_cast<int>(std::floor((p.x - domain.x0) / dx)), 0, nx - 1);
  int iy = clampi(static_cast<int>(std::floor((p.y - domain.y0) / dy)), 0, ny - 1);
  // Points on an internal vertical grid line belong to either neighbor; honor
  // the requested compartment so two-sided interface traces resolve correctly.
  const double xl = domain.x0 + ix * dx;
  if (subdomain_hint != 0) {
    if (std::abs(p.x - xl) < 1e-13 && ix > 0 &&
        element_subdomain[iy * nx + ix] != subdomain_hint)
      --ix;
    else if (std::abs(p.x - (xl + dx)) < 1e-13 && ix + 1 < nx &&
             element_subdomain[iy * nx + ix] != subdomain_hint)
      ++ix;
  }
  return iy * nx + ix;
}

double Mesh::shape_regularity() const {
  // Inradius of an a-by-b rectangle is min(a,b)/2.
  const double inr = 0.5 * std::min(dx, dy);
  double worst = 0.0;
  for (double h : element_h) worst = std::max(worst, h / inr);
  return worst;
}

std::string Mesh::summary() const {
  std::ostringstream os;
  int n_int = 0, n_ifc = 0, n_bnd = 0;
  for (const auto& f : faces) {
    if (f.kind == FaceKind::Interior) ++n_int;
    else if (f.kind == FaceKind::Interface) ++n_ifc;
    else ++n_bnd;
  }
  os << "mesh " << nx << "x" << ny << " on [" << domain.x0 << "," << domain.x1
     << "]x[" << domain.y0 << "," << domain.y1 << "]";
  if (domain.interface_x) os << ", interface at x=" << *domain.interface_x;
  os << "\n  elements: " << n_elements() << " (h=" << (element_h.empty() ? 0.0 : element_h[0])
     << "), vertices: " << vertices.size() << "\n  faces: " << n_faces() << " (interior "
     << n_int << ", interface " << n_ifc << ", boundary " << n_bnd << ")"
     << "\n  shape regularity (h/inradius): " << shape_regularity();
  return os.str();
}

Mesh build_structured_mesh(const Domain2D& domain, int nx, int ny) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("build_structured_mesh: nx, ny >= 1");
  Mesh mesh;
  mesh.domain = domain;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.dx = domain.width() / nx;
  mesh.dy = domain.height() / ny;

  int k_interface = -1;
  if (domain.interface_x) {
    const double c = *domain.interface_x;
    const double tol = 1e-12 * domain.width();
    for (int k = 1; k < nx; ++k)
      if (std::abs(domain.x0 + k * mesh.dx - c) <= tol) {
        k_interface = k;
        break;
      }
    if (k_interface < 0)
      throw InterfaceNotAligned("no grid line within " + std::to_string(tol) +
                                " of interface x=" + std::to_string(c) +
                                " for nx=" + std::to_string(nx));
  }

  auto column_x = [&](int ix) {
    if (ix == k_interface) return *domain.interface_x;  // snap exactly
    if (ix == nx) return domain.x1;
    return domain.x0 + ix * mesh.dx;
  };
  auto row_y = [&](int iy) {
    if (iy == ny) return domain.y1;
    return domain.y0 + iy * mesh.dy;
  };

  mesh.vertices.reserve((nx + 1) * (ny + 1));
  for (int iy = 0; iy <= ny; ++iy)
    for (int ix = 0; ix <= nx; ++ix) mesh.vertices.push_back({column_x(ix), row_y(iy)});

  const double h = std::sqrt(mesh.dx * mesh.dx + mesh.dy * mesh.dy);
  mesh.elements.reserve(nx * ny);
  mesh.element_subdomain.reserve(nx * ny);
  mesh.element_h.assign(nx * ny, h);
  auto vid = [&](int ix, int iy) { return iy * (nx + 1) + ix; };
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      mesh.elements.push_back({vid(ix, iy), vid(ix + 1, iy), vid(ix + 1, iy + 1), vid(ix, iy + 1)});
      const int sub = (k_interface >= 0 && ix >= k_interface) ? 2 : 1;
      mesh.element_subdomain.push_back(sub);
    }

  auto eid = [&](int ix, int iy) { return iy * nx + ix; };

  // Vertical faces (normal along +-x). Internal faces take the left element
  // as plus, so interface faces have plus in compartment 1 and normal (1,0).
  for (int ix = 0; ix <= nx; ++ix)
    for (int iy = 0; iy < ny; ++iy) {
      Face f;
      f.axis = 0;
      f.p0 = {column_x(ix), row_y(iy)};
      f.p1 = {column_x(ix), row_y(iy + 1)};
      f.length = f.p1.y - f.p0.y;
      if (ix == 0) {
        f.kind = FaceKind::Boundary;
        f.plus_element = eid(0, iy);
        f.plus_side = 0;
        f.normal = {-1.0, 0.0};
      } else if (ix == nx) {
        f.kind = FaceKind::Boundary;
        f.plus_element = eid(nx - 1, iy);
        f.plus_side = 1;
        f.normal = {1.0, 0.0};
      } else {
        f.kind = (ix == k_interface) ? FaceKind::Interface : FaceKind::Interior;
        f.plus_element = eid(ix - 1, iy);
        f.minus_element = eid(ix, iy);
        f.plus_side = 1;
        f.minus_side = 0;
        f.normal = {1.0, 0.0};
      }
      mesh.faces.push_back(f);
    }

  // Horizontal faces (normal along +-y), plus = lower element.
  for (int iy = 0; iy <= ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      Face f;
      f.axis = 1;
      f.p0 = {column_x(ix), row_y(iy)};
      f.p1 = {column_x(ix + 1), row_y(iy)};
      f.length = f.p1.x - f.p0.x;
      if (iy == 0) {
        f.kind = FaceKind::Boundary;
        f.plus_element = eid(ix, 0);
        f.plus_side = 2;
        f.normal = {0.0, -1.0};
      } else if (iy == ny) {
        f.kind = FaceKind::Boundary;
        f.plus_element = eid(ix, ny - 1);
        f.plus_side = 3;
        f.normal = {0.0, 1.0};
      } else {
        f.kind = FaceKind::Interior;
        f.plus_element = eid(ix, iy - 1);
        f.minus_element = eid(ix, iy);
        f.plus_side = 3;
        f.minus_side = 2;
        f.normal = {0.0, 1.0};
      }
      mesh.faces.push_back(f);
    }

  return mesh;
}

Mesh refine_uniform(const Mesh& mesh) {
  return build_structured_mesh(mesh.domain, 2 * mesh.nx, 2 * mesh.ny);
}

ContrastReport check_diffusion_contrast(
    const Mesh& mesh, const std::function<Eigen::VectorXd(double, Point2, int)>& diffusion,
    int n_components, double c_a, double t) {
  const int ne = mesh.n_elements();
  // Per-element sup of |a_i| and |1/a_i|. Samples stay strictly inside the
  // element so fields jumping exactly on mesh lines attribute cleanly.
  std::vector<double> sup_a(ne, 0.0), sup_inv(ne, 0.0);
  const double s[4] = {-0.93, -0.33, 0.33, 0.93};
  for (int e = 0; e < ne; ++e) {
    for (double sx : s)
      for (double sy : s) {
        const Eigen::VectorXd a =
            diffusion(t, mesh.from_reference(e, {sx, sy}), mesh.element_subdomain[e]);
        for (int i = 0; i < n_components; ++i) {
          sup_a[e] = std::max(sup_a[e], std::abs(a[i]));
          sup_inv[e] = std::max(sup_inv[e], 1.0 / std::abs(a[i]));
        }
      }
  }
  ContrastReport report;
  for (int fi = 0; fi < mesh.n_faces(); ++fi) {
    const Face& f = mesh.faces[fi];
    if (f.kind != FaceKind::Interior) continue;  // interface faces are exempt
    ContrastEntry entry;
    entry.face = fi;
    const double p1 = sup_a[f.plus_element] * sup_inv[f.minus_element];
    const double p2 = sup_a[f.minus_element] * sup_inv[f.plus_element];
    entry.product = std::max(p1, p2);
    entry.pass = (p1 >= 1.0 / c_a && p1 <= c_a && p2 >= 1.0 / c_a && p2 <= c_a);
    report.all_pass = report.all_pass && entry.pass;
    report.entries.push_back(entry);
  }
  return report;
}

BoundarySpec BoundarySpec::all_dirichlet() {
  return {[](int, Point2, Point2) { return true; }};
}

BoundarySpec BoundarySpec::all_neumann() {
  return {[](int, Point2, Point2) { return false; }};
}

BoundarySpec BoundarySpec::dirichlet_vertical_sides() {
  return {[](int, Point2, Point2 n) { return std::abs(n.x) > 0.5; }};
}

}  // namespace memdg
