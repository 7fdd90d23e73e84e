#include "levyexit/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <sstream>

#include "levyexit/errors.hpp"

namespace levyexit {

Polynomial::Polynomial(CVec coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::constant(cplx c) { return Polynomial(CVec{c}); }

Polynomial Polynomial::from_roots(const CVec& roots, cplx lead) {
  CVec c{lead};
  for (cplx r : roots) {
    CVec next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  return Polynomial(std::move(c));
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == cplx(0.0)) c_.pop_back();
}

cplx Polynomial::operator()(cplx z) const {
  cplx acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  CVec d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  CVec r(std::max(c_.size(), o.c_.size()), 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * cplx(-1.0); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (c_.empty() || o.c_.empty()) return {};
  CVec r(c_.size() + o.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(cplx s) const {
  CVec r = c_;
  for (auto& v : r) v *= s;
  return Polynomial(std::move(r));
}

Polynomial Polynomial::deflate(cplx r) const {
  if (c_.size() <= 1) return {};
  // synthetic division from the top
  CVec q(c_.size() - 1);
  cplx carry = 0.0;
  for (std::size_t k = c_.size() - 1; k >= 1; --k) {
    carry = c_[k] + carry * r;
    q[k - 1] = carry;
  }
  return Polynomial(std::move(q));
}

CVec Polynomial::roots() const {
  const int n = degree();
  if (n < 1) return {};
  if (n == 1) return {-c_[0] / c_[1]};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c_[i] / c_[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  CVec out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  // a couple of Newton steps on the polynomial itself tighten the eigenvalues
  const Polynomial d = derivative();
  for (auto& z : out) {
    for (int it = 0; it < 2; ++it) {
      const cplx dz = d(z);
      if (dz == cplx(0.0)) break;
      const cplx step = (*this)(z) / dz;
      if (!std::isfinite(std::abs(step))) break;
      z -= step;
    }
  }
  return out;
}

PartialFractions partial_fractions(const Polynomial& num, const CVec& poles, cplx lead) {
  const int np = static_cast<int>(poles.size());
  if (num.degree() > np) fail(ErrorCode::NotDefined, "partial_fractions: improper rational function");
  PartialFractions pf;
  pf.poles = poles;
  pf.constant = (num.degree() == np && np >= 0 && !num.is_zero()) ? num.leading() / lead : cplx(0.0);
  pf.residues.resize(poles.size());
  for (int k = 0; k < np; ++k) {
    cplx den = lead;
    for (int l = 0; l < np; ++l)
      if (l != k) den *= poles[k] - poles[l];
    if (den == cplx(0.0)) fail(ErrorCode::MultipleRootDetected, "partial_fractions: repeated pole");
    pf.residues[k] = num(poles[k]) / den;
  }
  return pf;
}

void require_simple(const CVec& roots, double tol, const char* what) {
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < tol * (1.0 + std::abs(roots[i]))) {
        std::ostringstream os;
        os << what << ": roots " << roots[i] << " and " << roots[j] << " coincide";
        fail(ErrorCode::MultipleRootDetected, os.str());
      }
}

}  // namespace levyexit
