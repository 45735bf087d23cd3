#include "dlab/symmetrize.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace dlab {

namespace {

// Index of the element matching x up to phase, or -1.
int find_up_to_phase(const std::vector<Operator>& elems, const Operator& x,
                     double tol) {
  for (std::size_t m = 0; m < elems.size(); ++m)
    if (equal_up_to_phase(x, elems[m], tol)) return static_cast<int>(m);
  return -1;
}

void check_same_dim(const DecouplingGroup& g, const Operator& h,
                    const char* who) {
  if (g.dim() != h.rows() || h.rows() != h.cols())
    throw ArgumentError(std::string(who) + ": dimension mismatch (group dim " +
                        std::to_string(g.dim()) + ", operator " +
                        std::to_string(h.rows()) + "x" +
                        std::to_string(h.cols()) + ")");
}

Eigen::VectorXcd vec(const Operator& x) {
  return Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
}

Operator unvec(const Eigen::VectorXcd& v, Eigen::Index d) {
  return Eigen::Map<const Operator>(v.data(), d, d);
}

}  // namespace

DecouplingGroup verify_group(std::vector<Operator> elements, double tol) {
  if (elements.empty())
    throw ArgumentError("verify_group: empty element list");
  const Eigen::Index d = elements.front().rows();
  for (std::size_t j = 0; j < elements.size(); ++j) {
    const Operator& g = elements[j];
    if (g.rows() != d || g.cols() != d)
      throw ArgumentError("verify_group: element " + std::to_string(j) +
                          " has mismatched dimensions");
    if (!is_unitary(g, 1e-10))
      throw ArgumentError("verify_group: element " + std::to_string(j) +
                          " is not unitary");
  }
  if (elements.size() > 4096)
    throw ClosureError("verify_group: group order exceeds cap 4096");

  const Operator id = identity_op(d);
  int id_at = find_up_to_phase(elements, id, tol);
  if (id_at < 0)
    throw StructureError("verify_group: no identity element (up to phase)");
  // Normalize: exact identity, stored first.
  elements.erase(elements.begin() + id_at);
  elements.insert(elements.begin(), id);

  for (std::size_t j = 0; j < elements.size(); ++j) {
    for (std::size_t k = 0; k < elements.size(); ++k) {
      Operator prod = elements[j] * elements[k];
      if (find_up_to_phase(elements, prod, tol) < 0)
        throw ClosureError("verify_group: not closed, g_" + std::to_string(j) +
                           " * g_" + std::to_string(k) +
                           " is outside the set (up to phase)");
    }
    if (find_up_to_phase(elements, elements[j].adjoint().eval(), tol) < 0)
      throw ClosureError("verify_group: inverse of g_" + std::to_string(j) +
                         " is outside the set (up to phase)");
  }

  DecouplingGroup g;
  g.elements = std::move(elements);
  return g;
}

DecouplingGroup close_group(const std::vector<Operator>& generators, int cap,
                            double tol) {
  if (generators.empty())
    throw ArgumentError("close_group: empty generating set");
  const Eigen::Index d = generators.front().rows();
  std::vector<Operator> elems;
  elems.push_back(identity_op(d));
  for (const Operator& g : generators) {
    if (!is_unitary(g, 1e-10))
      throw ArgumentError("close_group: generator is not unitary");
    if (find_up_to_phase(elems, g, tol) < 0) elems.push_back(g);
  }
  // Breadth-first products until no new element appears.
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = 0; j < elems.size(); ++j) {
      Operator prod = elems[i] * elems[j];
      if (find_up_to_phase(elems, prod, tol) < 0) {
        if (static_cast<int>(elems.size()) >= cap)
          throw ClosureError(
              "close_group: generated set exceeds cap " + std::to_string(cap) +
              " elements; generators likely generate an infinite group");
        elems.push_back(std::move(prod));
      }
    }
  }
  return verify_group(std::move(elems), tol);
}

ErrorSpace make_error_space(std::vector<Operator> generators, double tol) {
  if (generators.empty())
    throw ArgumentError("make_error_space: no generators");
  const Eigen::Index d = generators.front().rows();
  for (std::size_t a = 0; a < generators.size(); ++a) {
    const Operator& e = generators[a];
    if (e.rows() != d || e.cols() != d)
      throw ArgumentError("make_error_space: generator " + std::to_string(a) +
                          " has mismatched dimensions");
    if (!is_hermitian(e, tol))
      throw ArgumentError("make_error_space: generator " + std::to_string(a) +
                          " is not Hermitian");
    if (std::abs(e.trace()) > tol * std::max<double>(1.0, hs_norm(e)))
      throw ArgumentError("make_error_space: generator " + std::to_string(a) +
                          " is not traceless");
  }
  // Linear independence through the Gram matrix rank.
  const int n = static_cast<int>(generators.size());
  Eigen::MatrixXcd gram(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      gram(a, b) = hs_inner(generators[a], generators[b]);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gram);
  double smax = svd.singularValues()(0);
  int rank = 0;
  for (int k = 0; k < n; ++k)
    if (svd.singularValues()(k) > 1e-9 * smax) ++rank;
  if (rank != n)
    throw ArgumentError(
        "make_error_space: generators are linearly dependent (rank " +
        std::to_string(rank) + " of " + std::to_string(n) + ")");
  ErrorSpace e;
  e.generators = std::move(generators);
  return e;
}

Operator project(const DecouplingGroup& g, const Operator& h) {
  check_same_dim(g, h, "project");
  Operator sum = zero_op(g.dim());
  for (const Operator& gj : g.elements) sum += gj.adjoint() * h * gj;
  return sum / static_cast<double>(g.order());
}

bool in_centralizer(const DecouplingGroup& g, const Operator& o, double tol) {
  check_same_dim(g, o, "in_centralizer");
  const double scale = std::max(1.0, hs_norm(o));
  for (const Operator& gj : g.elements)
    if (hs_norm(commutator(o, gj)) > tol * scale) return false;
  return true;
}

CorrectabilityReport is_correctable(const DecouplingGroup& g,
                                    const ErrorSpace& e, double tol) {
  CorrectabilityReport report;
  report.correctable = true;
  for (const Operator& gen : e.generators) {
    double r = hs_norm(project(g, gen));
    report.residuals.push_back(r);
    if (r > tol * std::max(1.0, hs_norm(gen))) report.correctable = false;
  }
  return report;
}

DecouplingGroup twist(const DecouplingGroup& g, const Operator& p,
                      double tol) {
  check_same_dim(g, p, "twist");
  if (!is_unitary(p, tol > 0 ? std::max(tol, 1e-10) : 1e-10))
    throw ArgumentError("twist: P is not unitary");
  DecouplingGroup out;
  out.elements.reserve(g.elements.size());
  out.elements.push_back(identity_op(g.dim()));  // P^dag 1 P exactly
  for (std::size_t j = 1; j < g.elements.size(); ++j)
    out.elements.push_back(p.adjoint() * g.elements[j] * p);
  return out;
}

std::vector<Operator> centralizer_basis(const DecouplingGroup& g,
                                        double rel_threshold) {
  const Eigen::Index d = g.dim();
  Eigen::MatrixXcd images(d * d, d * d);
  // Columns: Pi_G applied to each matrix unit E_ij.
  Eigen::Index col = 0;
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      Operator unit = zero_op(d);
      unit(i, j) = 1.0;
      images.col(col++) = vec(project(g, unit));
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(images, Eigen::ComputeThinU);
  double smax = svd.singularValues()(0);
  std::vector<Operator> basis;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    if (svd.singularValues()(k) <= rel_threshold * smax) break;
    Operator b = unvec(svd.matrixU().col(k), d);
    // Fix the overall phase so results are deterministic: largest entry real
    // and positive.
    Eigen::Index r(0), c(0);
    b.cwiseAbs().maxCoeff(&r, &c);
    Cplx pivot = b(r, c);
    if (std::abs(pivot) > 0) b *= std::conj(pivot) / std::abs(pivot);
    basis.push_back(std::move(b));
  }
  return basis;
}

Eigen::MatrixXcd projector_superoperator(const DecouplingGroup& g) {
  const Eigen::Index d = g.dim();
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(d * d, d * d);
  // vec(A X B) = (B^T (x) A) vec(X) for column stacking; here A = g^dag, B = g.
  for (const Operator& gj : g.elements)
    s += tensor(gj.transpose(), gj.adjoint());
  return s / static_cast<double>(g.order());
}

DecouplingGroup embed_group(const DecouplingGroup& g, Eigen::Index bath_dim) {
  if (bath_dim == 1) return g;
  DecouplingGroup out;
  out.elements.reserve(g.elements.size());
  for (const Operator& gj : g.elements)
    out.elements.push_back(embed_system(gj, bath_dim));
  return out;
}

}  // namespace dlab
