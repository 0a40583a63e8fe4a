#include "dgschwarz/assembly.hpp"

#include <unsupported/Eigen/SparseExtra>

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <string>

namespace dgschwarz {

DiffusionField::DiffusionField(std::vector<double> rho) : rho_(std::move(rho)) {
  for (double r : rho_) {
    if (!std::isfinite(r) || r < 1.0) {
      throw AssemblyError("diffusion coefficient must be finite and >= 1, got " + std::to_string(r));
    }
  }
}

DiffusionField DiffusionField::constant(int n_cells, double value) {
  return DiffusionField(std::vector<double>(n_cells, value));
}

double harmonic_average(double a, std::optional<double> b) {
  if (!(a > 0.0) || (b && !(*b > 0.0))) throw AssemblyError("harmonic_average: arguments must be positive");
  if (!b) return a;
  return 2.0 * a * *b / (a + *b);
}

FacePenalty penalty_values(const PolytopicMesh& mesh, const FaceSet& faces, const DiffusionField& rho, int p,
                           double c_sigma) {
  if (!(c_sigma > 0.0)) throw AssemblyError("penalty_values: C_sigma must be positive");
  if (rho.size() != mesh.n_cells()) throw AssemblyError("penalty_values: rho has wrong length");
  FacePenalty out;
  const std::size_t n = faces.faces.size();
  out.sigma.resize(n);
  out.omega.resize(n);
  out.rho_avg.resize(n);
  out.h_avg.resize(n);
  for (std::size_t f = 0; f < n; ++f) {
    const Face& face = faces.faces[f];
    const int kp = face.plus.cell;
    std::optional<double> rho_m;
    std::optional<double> h_m;
    if (!face.is_boundary()) {
      rho_m = rho[face.minus->cell];
      h_m = mesh.cell_diameter(face.minus->cell);
    }
    out.rho_avg[f] = harmonic_average(rho[kp], rho_m);
    out.h_avg[f] = harmonic_average(mesh.cell_diameter(kp), h_m);
    out.sigma[f] = c_sigma * out.rho_avg[f] * p * p / out.h_avg[f];
    out.omega[f] = face.is_boundary() ? 1.0 : *rho_m / (rho[kp] + *rho_m);
  }
  return out;
}

namespace {

Eigen::Map<const Eigen::VectorXd> weights_of(const QuadratureRule& rule) {
  return {rule.weights.data(), static_cast<Eigen::Index>(rule.weights.size())};
}

void add_block(std::vector<Eigen::Triplet<double>>& trip, int row0, int col0, const Eigen::MatrixXd& block) {
  for (Eigen::Index i = 0; i < block.rows(); ++i) {
    for (Eigen::Index j = 0; j < block.cols(); ++j) {
      if (block(i, j) != 0.0) trip.emplace_back(row0 + static_cast<int>(i), col0 + static_cast<int>(j), block(i, j));
    }
  }
}

// Traces of one side of a face at the face quadrature points.
struct SideTrace {
  int cell = -1;
  double sign = 1.0;    // +1 on the plus side, -1 on the minus side
  double weight = 1.0;  // share in the weighted average
  Eigen::MatrixXd value;
  Eigen::MatrixXd dn;   // normal derivative along the plus-to-minus normal
};

std::vector<SideTrace> face_traces(const DGSpace& space, const Face& face, const QuadratureRule& rule, double omega) {
  std::vector<SideTrace> sides;
  sides.reserve(2);
  auto add = [&](int cell, double sign, double weight) {
    SideTrace s;
    s.cell = cell;
    s.sign = sign;
    s.weight = weight;
    Eigen::MatrixXd dx;
    Eigen::MatrixXd dy;
    space.eval_all(cell, rule.points, s.value, dx, dy);
    s.dn = face.normal.x() * dx + face.normal.y() * dy;
    sides.push_back(std::move(s));
  };
  add(face.plus.cell, 1.0, omega);
  if (!face.is_boundary()) add(face.minus->cell, -1.0, 1.0 - omega);
  return sides;
}

void check_space(const DGSpace& space, const DiffusionField& rho) {
  if (rho.size() != space.mesh().n_cells()) throw AssemblyError("diffusion field does not match the mesh");
}

}  // namespace

SparseMatrix assemble_sipdg(const DGSpace& space, const DiffusionField& rho, double c_sigma) {
  check_space(space, rho);
  const int p = space.degree();
  if (p < 1) throw AssemblyError("assemble_sipdg: polynomial degree must be at least 1");
  const PolytopicMesh& mesh = space.mesh();
  const FaceSet& faces = space.faces();
  const FacePenalty pen = penalty_values(mesh, faces, rho, p, c_sigma);
  const int nl = space.n_local();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nl) * nl * (mesh.n_cells() + 2 * faces.n_interior + faces.n_boundary));

  for (int k = 0; k < mesh.n_cells(); ++k) {
    const QuadratureRule rule = space.cell_quadrature(k, 2 * p);
    Eigen::MatrixXd v;
    Eigen::MatrixXd dx;
    Eigen::MatrixXd dy;
    space.eval_all(k, rule.points, v, dx, dy);
    const auto w = weights_of(rule);
    const Eigen::MatrixXd block = rho[k] * (dx.transpose() * w.asDiagonal() * dx + dy.transpose() * w.asDiagonal() * dy);
    add_block(trip, space.dof_offset(k), space.dof_offset(k), block);
  }

  for (std::size_t f = 0; f < faces.faces.size(); ++f) {
    const Face& face = faces.faces[f];
    const QuadratureRule rule = face_rule(face, 2 * p + 1);
    const auto w = weights_of(rule);
    const auto sides = face_traces(space, face, rule, pen.omega[f]);
    for (const auto& s : sides) {
      for (const auto& t : sides) {
        // Row: test function on side s; column: trial function on side t.
        const Eigen::MatrixXd wt = w.asDiagonal() * t.value;
        Eigen::MatrixXd block = -s.sign * t.weight * rho[t.cell] * (s.value.transpose() * w.asDiagonal() * t.dn);
        block -= t.sign * s.weight * rho[s.cell] * (s.dn.transpose() * wt);
        block += pen.sigma[f] * s.sign * t.sign * (s.value.transpose() * wt);
        add_block(trip, space.dof_offset(s.cell), space.dof_offset(t.cell), block);
      }
    }
  }

  SparseMatrix a(space.n_dofs(), space.n_dofs());
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();
  return a;
}

Eigen::VectorXd assemble_rhs(const DGSpace& space, const ScalarField& f) {
  Eigen::VectorXd b(space.n_dofs());
  const int degree = std::min(2 * space.degree() + 2, kMaxQuadratureDegree);
  for (int k = 0; k < space.mesh().n_cells(); ++k) {
    const QuadratureRule rule = space.cell_quadrature(k, degree);
    Eigen::VectorXd fw(rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q) fw[q] = rule.weights[q] * f(rule.points[q]);
    b.segment(space.dof_offset(k), space.n_local()) = space.eval(k, rule.points).transpose() * fw;
  }
  return b;
}

SparseMatrix assemble_mass(const DGSpace& space) {
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < space.mesh().n_cells(); ++k) {
    const QuadratureRule rule = space.cell_quadrature(k, 2 * space.degree());
    const Eigen::MatrixXd v = space.eval(k, rule.points);
    add_block(trip, space.dof_offset(k), space.dof_offset(k), v.transpose() * weights_of(rule).asDiagonal() * v);
  }
  SparseMatrix m(space.n_dofs(), space.n_dofs());
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

SparseMatrix assemble_mixed_mass(const DGSpace& fine, const DGSpace& coarse, const NestingMap& nesting) {
  const PolytopicMesh& fm = fine.mesh();
  const PolytopicMesh& cm = coarse.mesh();
  const int degree = fine.degree() + coarse.degree();
  std::vector<Eigen::Triplet<double>> trip;
  auto add_region = [&](int k, int j, const QuadratureRule& rule) {
    const Eigen::MatrixXd phi = fine.eval(k, rule.points);
    const Eigen::MatrixXd psi = coarse.eval(j, rule.points);
    add_block(trip, fine.dof_offset(k), coarse.dof_offset(j), phi.transpose() * weights_of(rule).asDiagonal() * psi);
  };

  if (const auto* nested = std::get_if<NestedMap>(&nesting)) {
    if (static_cast<int>(nested->parent.size()) != fm.n_cells()) {
      throw AssemblyError("assemble_mixed_mass: parent map does not match the fine mesh");
    }
    for (int k = 0; k < fm.n_cells(); ++k) {
      const int j = nested->parent[k];
      if (j < 0 || j >= cm.n_cells()) throw AssemblyError("assemble_mixed_mass: parent index out of range");
      add_region(k, j, fine.cell_quadrature(k, degree));
    }
  } else {
    const auto& overlaps = std::get<NonNestedMap>(nesting).overlaps;
    std::vector<double> covered(fm.n_cells(), 0.0);
    for (const auto& o : overlaps) {
      if (o.fine < 0 || o.fine >= fm.n_cells() || o.coarse < 0 || o.coarse >= cm.n_cells()) {
        throw AssemblyError("assemble_mixed_mass: overlap references a missing cell");
      }
      const std::vector<Triangle> tris = triangulate_polygon(o.region);
      add_region(o.fine, o.coarse, composite_rule(tris, degree));
      covered[o.fine] += o.area;
    }
    for (int k = 0; k < fm.n_cells(); ++k) {
      if (std::abs(covered[k] - fm.cell_area(k)) > 1e-8 * fm.cell_area(k)) {
        throw AssemblyError("assemble_mixed_mass: overlaps of fine cell " + std::to_string(k) +
                            " do not cover it");
      }
    }
  }
  SparseMatrix g(fine.n_dofs(), coarse.n_dofs());
  g.setFromTriplets(trip.begin(), trip.end());
  g.makeCompressed();
  return g;
}

LiftedField assemble_lifting(const DGSpace& space, LiftingWeight weight, const DiffusionField& rho,
                             const Eigen::VectorXd& v) {
  check_space(space, rho);
  if (v.size() != space.n_dofs()) throw AssemblyError("assemble_lifting: coefficient vector has wrong length");
  const int nl = space.n_local();
  LiftedField r{Eigen::VectorXd::Zero(space.n_dofs()), Eigen::VectorXd::Zero(space.n_dofs())};
  for (const Face& face : space.faces().faces) {
    const QuadratureRule rule = face_rule(face, 2 * space.degree() + 1);
    double omega = 1.0;
    if (!face.is_boundary()) {
      omega = weight == LiftingWeight::unit ? 0.5 : rho[face.minus->cell] / (rho[face.plus.cell] + rho[face.minus->cell]);
    }
    const auto sides = face_traces(space, face, rule, omega);
    Eigen::VectorXd jump = Eigen::VectorXd::Zero(rule.size());
    for (const auto& s : sides) jump += s.sign * s.value * v.segment(space.dof_offset(s.cell), nl);
    const Eigen::VectorXd wj = weights_of(rule).cwiseProduct(jump);
    for (const auto& s : sides) {
      const Eigen::VectorXd t = s.weight * (s.value.transpose() * wj);
      r.x.segment(space.dof_offset(s.cell), nl) -= face.normal.x() * t;
      r.y.segment(space.dof_offset(s.cell), nl) -= face.normal.y() * t;
    }
  }
  // Local mass solves.
  for (int k = 0; k < space.mesh().n_cells(); ++k) {
    const QuadratureRule rule = space.cell_quadrature(k, 2 * space.degree());
    const Eigen::MatrixXd phi = space.eval(k, rule.points);
    const Eigen::LLT<Eigen::MatrixXd> mass(phi.transpose() * weights_of(rule).asDiagonal() * phi);
    r.x.segment(space.dof_offset(k), nl) = mass.solve(r.x.segment(space.dof_offset(k), nl));
    r.y.segment(space.dof_offset(k), nl) = mass.solve(r.y.segment(space.dof_offset(k), nl));
  }
  return r;
}

namespace {

// Sum over faces of int sigma [u].[v].
double penalty_term(const DGSpace& space, const FacePenalty& pen, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const int nl = space.n_local();
  double total = 0.0;
  const auto& faces = space.faces().faces;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const QuadratureRule rule = face_rule(faces[f], 2 * space.degree() + 1);
    const auto sides = face_traces(space, faces[f], rule, pen.omega[f]);
    Eigen::VectorXd ju = Eigen::VectorXd::Zero(rule.size());
    Eigen::VectorXd jv = Eigen::VectorXd::Zero(rule.size());
    for (const auto& s : sides) {
      ju += s.sign * s.value * u.segment(space.dof_offset(s.cell), nl);
      jv += s.sign * s.value * v.segment(space.dof_offset(s.cell), nl);
    }
    total += pen.sigma[f] * weights_of(rule).dot(ju.cwiseProduct(jv));
  }
  return total;
}

}  // namespace

double evaluate_lifting_form(const DGSpace& space, const DiffusionField& rho, double c_sigma, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& v) {
  check_space(space, rho);
  const LiftedField ru = assemble_lifting(space, LiftingWeight::weighted, rho, u);
  const LiftedField rv = assemble_lifting(space, LiftingWeight::weighted, rho, v);
  const int nl = space.n_local();
  double volume = 0.0;
  for (int k = 0; k < space.mesh().n_cells(); ++k) {
    const QuadratureRule rule = space.cell_quadrature(k, 2 * space.degree());
    Eigen::MatrixXd phi;
    Eigen::MatrixXd dx;
    Eigen::MatrixXd dy;
    space.eval_all(k, rule.points, phi, dx, dy);
    const int o = space.dof_offset(k);
    const Eigen::VectorXd ux = dx * u.segment(o, nl);
    const Eigen::VectorXd uy = dy * u.segment(o, nl);
    const Eigen::VectorXd vx = dx * v.segment(o, nl);
    const Eigen::VectorXd vy = dy * v.segment(o, nl);
    const Eigen::VectorXd rvx = phi * rv.x.segment(o, nl);
    const Eigen::VectorXd rvy = phi * rv.y.segment(o, nl);
    const Eigen::VectorXd rux = phi * ru.x.segment(o, nl);
    const Eigen::VectorXd ruy = phi * ru.y.segment(o, nl);
    const Eigen::VectorXd integrand = ux.cwiseProduct(vx) + uy.cwiseProduct(vy) + ux.cwiseProduct(rvx) +
                                      uy.cwiseProduct(rvy) + vx.cwiseProduct(rux) + vy.cwiseProduct(ruy);
    volume += rho[k] * weights_of(rule).dot(integrand);
  }
  const FacePenalty pen = penalty_values(space.mesh(), space.faces(), rho, space.degree(), c_sigma);
  return volume + penalty_term(space, pen, u, v);
}

double energy_norm(const DGSpace& space, const DiffusionField& rho, double c_sigma, const Eigen::VectorXd& v) {
  check_space(space, rho);
  if (v.size() != space.n_dofs()) throw AssemblyError("energy_norm: coefficient vector has wrong length");
  const int nl = space.n_local();
  double total = 0.0;
  for (int k = 0; k < space.mesh().n_cells(); ++k) {
    const QuadratureRule rule = space.cell_quadrature(k, 2 * space.degree());
    Eigen::MatrixXd dx;
    Eigen::MatrixXd dy;
    space.eval_grad(k, rule.points, dx, dy);
    const Eigen::VectorXd gx = dx * v.segment(space.dof_offset(k), nl);
    const Eigen::VectorXd gy = dy * v.segment(space.dof_offset(k), nl);
    total += rho[k] * weights_of(rule).dot(gx.cwiseAbs2() + gy.cwiseAbs2());
  }
  const FacePenalty pen = penalty_values(space.mesh(), space.faces(), rho, space.degree(), c_sigma);
  total += penalty_term(space, pen, v, v);
  return std::sqrt(total);
}

void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path) {
  if (!Eigen::saveMarket(a, path.string())) throw AssemblyError("cannot write matrix file " + path.string());
}

}  // namespace dgschwarz
