#pragma once
// Lower and upper symbols, quantization of functions on the sphere and
// cubature rules that make the resolution of identity exact.

#include "spinboard/kernels.hpp"
#include "spinboard/su2kit.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace spinboard {

// Gauss-Legendre in cos(theta) times a uniform phi grid. Integrates every
// spherical harmonic of degree <= degree exactly; weights sum to 4 pi.
struct SphereQuadrature {
  int degree = 0;
  std::vector<Vec3> nodes;
  std::vector<double> weights;
};

SphereQuadrature sphere_quadrature(int degree);

// Complex spherical harmonics Y_lm for l <= lmax at omega, index l*l + l + m.
std::vector<cplx> spherical_harmonics(int lmax, const Vec3& omega);
inline int harmonic_index(int l, int m) { return l * l + l + m; }

using SphereFunction = std::function<cplx(const Vec3&)>;

// (2S+1)/(4 pi) * integral f(w) |w><w| dw. f_degree bounds the harmonic
// degree of f and sets the cubature order to 2S + f_degree.
CMat quantize(const SphereFunction& f, int f_degree, SpinMagnitude s, Exec exec = Exec::parallel);

// c_l = ||quantize(Y_l0)||_HS, l = 0..2S, so that quantize(Y_lm) = c_l T_lm.
// The Berezin eigenvalue on degree l is 4 pi c_l^2 / (2S+1).
std::vector<double> quantization_eigenvalues(SpinMagnitude s);

// f(w) = sum_{l <= lmax} coeff[l*l+l+m] Y_lm(w)
struct SymbolExpansion {
  SpinMagnitude spin{1};
  int lmax = 0;
  std::vector<cplx> coeff;

  cplx operator()(const Vec3& omega) const;
  double real(const Vec3& omega) const { return (*this)(omega).real(); }
};

class HarmonicContentError : public std::runtime_error {
 public:
  HarmonicContentError(int degree, double weight);
  int degree() const { return degree_; }
  double weight() const { return weight_; }

 private:
  int degree_;
  double weight_;
};

// Minimal-degree upper symbol: quantize(result) == A. lmax < 0 means 2S.
// Throws HarmonicContentError naming the first degree above lmax with
// content above tol.
SymbolExpansion upper_symbol(const CMat& a, SpinMagnitude s, int lmax = -1, double tol = 1e-10);

// <w|A|w> for a product coherent state.
cplx lower_symbol(const CMat& a, SpinMagnitude s, const ClassicalConfig& config);

// Upper and lower symbols of a two-site operator via the product rule:
// h = sum C_ab T_a (x) T_b in the spherical tensor basis.
class BondSymbol {
 public:
  BondSymbol(const CMat& h, SpinMagnitude s);
  double upper(const Vec3& a, const Vec3& b) const;
  double lower(const Vec3& a, const Vec3& b) const;
  // Upper symbol with harmonics precomputed for each endpoint.
  double upper_from_harmonics(const Eigen::VectorXcd& ya, const Eigen::VectorXcd& yb) const;
  Eigen::VectorXcd scaled_harmonics(const Vec3& omega) const;
  // C * yb, so that upper = ya^T (C yb)
  Eigen::VectorXcd contract_right(const Eigen::VectorXcd& yb) const { return coeff_ * yb; }
  SpinMagnitude spin() const { return spin_; }
  const CMat& op() const { return h_; }

 private:
  SpinMagnitude spin_;
  CMat h_;
  CMat coeff_;                 // C_ab
  std::vector<double> scale_;  // 1/c_l per harmonic index
};

// Orthonormal spherical tensor operators T_lm (Hilbert-Schmidt), built as
// normalized quantized harmonics. Cached per spin.
struct TensorBasis {
  SpinMagnitude spin{1};
  std::vector<double> c;  // HS norm of quantize(Y_l0) per l
  std::vector<CMat> t;    // index l*l+l+m
};
const TensorBasis& tensor_basis(SpinMagnitude s);

}  // namespace spinboard
