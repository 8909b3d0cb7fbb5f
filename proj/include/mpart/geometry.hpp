#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "mpart/error.hpp"

namespace mpart {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Distance below which a point counts as lying on a region boundary.
inline constexpr double kBoundaryTol = 1e-12;

/// A vector of Euclidean norm one. Construction normalizes and rejects zero input.
class UnitVector {
 public:
  UnitVector() = default;
  explicit UnitVector(const Vector& v);

  [[nodiscard]] const Vector& vec() const noexcept { return v_; }
  [[nodiscard]] Eigen::Index size() const noexcept { return v_.size(); }
  [[nodiscard]] double operator[](Eigen::Index i) const { return v_[i]; }
  [[nodiscard]] double dot(const Vector& p) const { return v_.dot(p); }
  [[nodiscard]] UnitVector operator-() const {
    UnitVector out;
    out.v_ = -v_;
    return out;
  }

  static UnitVector axis(Eigen::Index dim, Eigen::Index i);

 private:
  Vector v_;
};

/// Positive side is {p : normal.p - offset > 0}.
struct OrientedHyperplane {
  UnitVector normal;
  double offset = 0.0;

  [[nodiscard]] double signed_distance(const Vector& p) const { return normal.dot(p) - offset; }
  [[nodiscard]] OrientedHyperplane reoriented() const { return {-normal, -offset}; }
  [[nodiscard]] Eigen::Index dim() const { return normal.size(); }
};

/// Orthonormal pair spanning an oriented 2-plane.
struct Frame2 {
  UnitVector x;
  UnitVector y;

  /// Gram-Schmidt on (x, y); throws if they are parallel.
  static Frame2 from_vectors(const Vector& x, const Vector& y);
  static Frame2 standard(Eigen::Index dim);
  [[nodiscard]] Eigen::Index dim() const { return x.size(); }
  /// Rotates the frame inside its own plane by `angle` (counterclockwise in (x, y)).
  [[nodiscard]] Frame2 rotated(double angle) const;
};

/// Oriented line inside a k-dimensional subspace. Column 0 of `basis` is the line.
struct OrientedFlag {
  Matrix basis;  // dim x k, orthonormal columns

  static OrientedFlag from_vectors(const Matrix& columns);
  [[nodiscard]] UnitVector line() const { return UnitVector(basis.col(0)); }
  [[nodiscard]] Eigen::Index dim() const { return basis.rows(); }
  [[nodiscard]] Eigen::Index k() const { return basis.cols(); }
  [[nodiscard]] OrientedFlag flipped() const;
};

/// Invertible homogeneous transformation of R^d; the last coordinate is the homogenizer.
struct ProjectiveMap {
  Matrix matrix;  // (d+1) x (d+1), |det| = 1

  /// Normalizes to unit |determinant|; throws if singular.
  static ProjectiveMap from_matrix(const Matrix& m);
  static ProjectiveMap identity(Eigen::Index dim);
  [[nodiscard]] Eigen::Index dim() const { return matrix.rows() - 1; }
  [[nodiscard]] Vector homogeneous_image(const Vector& p) const;
};

Vector gnomonic_project(const Vector& p);
Vector gnomonic_lift(const Vector& q);

/// Lifted normal (n, -c)/|.| of the hyperplane through the origin of R^{d+1} whose
/// trace on the plane x_{d+1} = 1 is h.
UnitVector lift_hyperplane(const OrientedHyperplane& h);
/// Inverse of lift_hyperplane; nullopt when the lifted hyperplane is the equator.
std::optional<OrientedHyperplane> decode_hyperplane(const UnitVector& lifted);

ProjectiveMap projective_from_hyperplane(const OrientedHyperplane& h);
/// Same construction from the lifted normal of a hyperplane through the origin of R^{d+1};
/// also covers the equator (the map is then a rotation fixing infinity).
ProjectiveMap projective_from_lifted(const UnitVector& lifted_normal);
Vector apply_projective(const ProjectiveMap& t, const Vector& p);
/// Image of a hyperplane. The result is oriented so that the positive side of h,
/// restricted to points with positive homogeneous image weight, maps to its positive side.
OrientedHyperplane apply_projective(const ProjectiveMap& t, const OrientedHyperplane& h);

/// Special orthogonal matrix R with R u = v.
Matrix rotation_taking(const UnitVector& u, const UnitVector& v);

/// Orthonormal basis (columns) of the orthogonal complement of the column span.
Matrix orthonormal_complement(const Matrix& columns);

/// Modified Gram-Schmidt on columns; throws ZeroVector on rank deficiency.
Matrix orthonormalize(const Matrix& columns);

/// Angle in [0, pi] between two nonzero vectors, robust near 0 and pi.
double angle_between(const Vector& a, const Vector& b);

/// Reduces an angle into [0, 2 pi).
double wrap_two_pi(double a);

}  // namespace mpart
