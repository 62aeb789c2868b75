#pragma once
// Spin-S operators, coherent states, overlaps, rotations and
// distances between classical configurations.

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace spinboard {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using ClassicalConfig = std::vector<Vec3>;

// Spin magnitude stored as the integer 2S so half-integers are exact.
class SpinMagnitude {
 public:
  explicit SpinMagnitude(int two_s);
  static SpinMagnitude from_value(double s);

  int two_s() const { return two_s_; }
  double value() const { return 0.5 * two_s_; }
  int dim() const { return two_s_ + 1; }
  bool operator==(const SpinMagnitude&) const = default;

 private:
  int two_s_;
};

// Basis |M>, M = -S..S, index i = M + S.
struct SpinOperators {
  CMat x, y, z, plus, minus;
};

SpinOperators spin_operators(SpinMagnitude s);

Vec3 from_angles(double theta, double phi);
// (theta, phi) with phi in (-pi, pi]; phi = 0 at the poles.
std::pair<double, double> to_angles(const Vec3& omega);
// Conjugation by complex conjugation of the standard basis: y -> -y.
Vec3 sigma(const Vec3& omega);

CVec coherent_state(SpinMagnitude s, const Vec3& omega);
// Kronecker product of site coherent states, site 0 most significant.
CVec product_state(SpinMagnitude s, const ClassicalConfig& config);

// <b|a> in closed form.
cplx overlap(SpinMagnitude s, const Vec3& a, const Vec3& b);

// exp(i t axis.S); axis must be a unit vector.
CMat rotation_unitary(SpinMagnitude s, const Vec3& axis, double t);
// The rotation R with U (w.S) U^dagger = (R w).S for U = rotation_unitary(axis, t).
// It turns by -t in the right-handed sense about axis.
Mat3 rotation_matrix(const Vec3& axis, double t);

struct ConfigDistances {
  double l1 = 0.0;       // sum_r |a_r - b_r|
  double l2sq = 0.0;     // sum_r |a_r - b_r|^2
  double mixed = 0.0;    // sum_r min(sqrt(S)|a_r - b_r|, S|a_r - b_r|^2)
  double sqrt_s_l1 = 0.0;
  double eta = 0.25;     // |<a|b>| <= exp(-eta * mixed)
};

ConfigDistances config_distances(SpinMagnitude s, const ClassicalConfig& a,
                                 const ClassicalConfig& b);

// Number of sites where a and b differ.
int differing_sites(const ClassicalConfig& a, const ClassicalConfig& b);

// Dense helpers on product spaces (site 0 most significant).
CMat embed_site_operator(const CMat& op, int site, int n_sites, int dim);
CMat embed_two_site_operator(const CMat& op, int site_a, int site_b, int n_sites, int dim);
// Permutation of tensor factors: factor r of the input lands at position perm[r].
CMat permute_sites(const CMat& op, const std::vector<int>& perm, int dim);
long long checked_power(int base, int exponent, long long cap);

}  // namespace spinboard
