#include "memdg/problem.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace memdg {

Vec ProblemDefinition::divergence_of_advection(double t, Point2 x, int subdomain) const {
  if (advection_div) return advection_div(t, x, subdomain);
  const double h = 1e-6;
  const Mat2 bxp = advection(t, {x.x + h, x.y}, subdomain);
  const Mat2 bxm = advection(t, {x.x - h, x.y}, subdomain);
  const Mat2 byp = advection(t, {x.x, x.y + h}, subdomain);
  const Mat2 bym = advection(t, {x.x, x.y - h}, subdomain);
  Vec div(n_components);
  for (int i = 0; i < n_components; ++i)
    div[i] = (bxp(i, 0) - bxm(i, 0)) / (2 * h) + (byp(i, 1) - bym(i, 1)) / (2 * h);
  return div;
}

std::vector<std::string> ProblemDefinition::validate(const Mesh& mesh, double t) const {
  std::vector<std::string> warnings;
  if (gamma < 0.0 || gamma > 2.0)
    warnings.push_back("reaction growth exponent gamma=" + std::to_string(gamma) +
                       " outside the admissible range [0, 2] for d=2");
  std::vector<bool> has_dirichlet(n_components, false);
  for (const Face& f : mesh.faces) {
    if (!f.is_boundary()) continue;
    const Point2 mid = f.at(0.0);
    for (int i = 0; i < n_components; ++i)
      if (boundary.is_dirichlet(i, mid, f.normal)) has_dirichlet[i] = true;
  }
  for (int i = 0; i < n_components; ++i)
    if (!has_dirichlet[i])
      warnings.push_back("component " + std::to_string(i) +
                         " has an empty Dirichlet boundary; the dG functional "
                         "may fail to be a norm");
  if (diffusion) {
    double amin = std::numeric_limits<double>::infinity();
    for (int e = 0; e < mesh.n_elements(); ++e) {
      const Vec a = diffusion(t, mesh.element_center(e), mesh.element_subdomain[e]);
      amin = std::min(amin, a.minCoeff());
    }
    if (!(amin > 0.0))
      warnings.push_back("sampled diffusion is not positive (min " + std::to_string(amin) +
                         ")");
    else if (alpha_min > 0.0 && amin < alpha_min)
      warnings.push_back("sampled diffusion dips below the declared alpha_min");
  }
  return warnings;
}

std::vector<std::string> InterfaceModel::validate(const Mesh& mesh,
                                                  const ProblemDefinition& problem,
                                                  double t) const {
  std::vector<std::string> warnings;
  for (const Face& f : mesh.faces) {
    if (f.kind != FaceKind::Interface) continue;
    for (double s : {-0.774596669241483, 0.0, 0.774596669241483}) {
      const Point2 x = f.at(s);
      const Vec w1 = weight1(x), w2 = weight2(x), r = friction(x);
      for (int i = 0; i < n_components; ++i) {
        if (std::abs(w1[i] + w2[i] - 1.0) > 1e-14)
          throw std::invalid_argument("InterfaceModel: weights must sum to one");
        if (w1[i] < -1e-14 || w1[i] > 1 + 1e-14 || r[i] < -1e-14 || r[i] > 1 + 1e-14)
          warnings.push_back("interface weight or friction outside [0,1]");
      }
      const Mat2 B = problem.advection(t, x, 1);
      for (int i = 0; i < n_components; ++i) {
        const double bn1 = B(i, 0) * f.normal.x + B(i, 1) * f.normal.y;
        if ((bn1 >= 0.0 && w1[i] < w2[i]) || (bn1 < 0.0 && w1[i] >= w2[i])) {
          std::ostringstream os;
          os << "interface weights of component " << i
             << " do not let the upwind side dominate at x=(" << x.x << "," << x.y
             << "): B.n=" << bn1 << ", upsilon1=" << w1[i];
          warnings.push_back(os.str());
        }
      }
    }
  }
  return warnings;
}

InterfaceModel make_constant_interface(const Eigen::MatrixXd& P, const Vec& upsilon1,
                                       const Vec& upsilon2, const Vec& friction) {
  InterfaceModel m;
  m.n_components = static_cast<int>(P.rows());
  m.permeability_is_constant = true;
  m.P = P;
  m.weight1 = [upsilon1](Point2) { return upsilon1; };
  m.weight2 = [upsilon2](Point2) { return upsilon2; };
  m.friction = [friction](Point2) { return friction; };
  return m;
}

Vec interface_upwind(const InterfaceModel& model, const ProblemDefinition& problem,
                     double t, Point2 x, Point2 n1) {
  const Vec w1 = model.weight1(x);
  const Mat2 B = problem.advection(t, x, 1);
  Vec out(model.n_components);
  for (int i = 0; i < model.n_components; ++i)
    out[i] = (w1[i] - 0.5) * (B(i, 0) * n1.x + B(i, 1) * n1.y);
  return out;
}

std::function<Vec(double, Point2, int)> constant_field(const Vec& v) {
  return [v](double, Point2, int) { return v; };
}

std::function<Mat2(double, Point2, int)> constant_advection(const Mat2& b) {
  return [b](double, Point2, int) { return b; };
}

std::function<Vec(double, Point2)> constant_boundary_data(const Vec& v) {
  return [v](double, Point2) { return v; };
}

std::function<Vec(double, Point2, int)> zero_source(int n) {
  return [n](double, Point2, int) { return Vec::Zero(n).eval(); };
}

}  // namespace memdg
