#include "mpart/geometry.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mpart {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NearEquator: return "NearEquator";
    case ErrorCode::AtInfinity: return "AtInfinity";
    case ErrorCode::AtomOnBoundary: return "AtomOnBoundary";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateProjection: return "DegenerateProjection";
    case ErrorCode::NoBisection: return "NoBisection";
    case ErrorCode::BlockMismatch: return "BlockMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::AliasingError: return "AliasingError";
    case ErrorCode::NearZero: return "NearZero";
    case ErrorCode::GeneralPositionViolation: return "GeneralPositionViolation";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::InfeasibleDimension: return "InfeasibleDimension";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

UnitVector::UnitVector(const Vector& v) {
  require(v.size() >= 1, "unit vector needs dimension >= 1");
  require(v.allFinite(), "unit vector has non-finite coordinates");
  const double n = v.norm();
  if (n < 1e-300) fail(ErrorCode::ZeroVector, "cannot normalize the zero vector");
  // Vectors already of unit length up to rounding are kept bit for bit.
  v_ = std::abs(n - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon() ? v : Vector(v / n);
}

UnitVector UnitVector::axis(Eigen::Index dim, Eigen::Index i) {
  return UnitVector(Vector::Unit(dim, i));
}

Frame2 Frame2::from_vectors(const Vector& x, const Vector& y) {
  require(x.size() == y.size() && x.size() >= 2, "frame vectors must share dimension >= 2");
  Matrix m(x.size(), 2);
  m.col(0) = x;
  m.col(1) = y;
  const Matrix q = orthonormalize(m);
  return {UnitVector(q.col(0)), UnitVector(q.col(1))};
}

Frame2 Frame2::standard(Eigen::Index dim) {
  return {UnitVector::axis(dim, 0), UnitVector::axis(dim, 1)};
}

Frame2 Frame2::rotated(double angle) const {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {UnitVector(c * x.vec() + s * y.vec()), UnitVector(-s * x.vec() + c * y.vec())};
}

OrientedFlag OrientedFlag::from_vectors(const Matrix& columns) {
  require(columns.cols() >= 1 && columns.cols() <= columns.rows(),
          "flag needs 1 <= k <= dim columns");
  return {orthonormalize(columns)};
}

OrientedFlag OrientedFlag::flipped() const {
  OrientedFlag f = *this;
  f.basis.col(0) = -f.basis.col(0);
  return f;
}

ProjectiveMap ProjectiveMap::from_matrix(const Matrix& m) {
  require(m.rows() == m.cols() && m.rows() >= 2, "projective map must be square of size >= 2");
  const double det = m.determinant();
  if (!(std::abs(det) > 0.0) || !std::isfinite(det))
    fail(ErrorCode::InvalidArgument, "projective map is singular");
  const double scale = std::pow(std::abs(det), 1.0 / static_cast<double>(m.rows()));
  ProjectiveMap t{m / scale};
  if (std::abs(t.matrix.determinant()) < 1e-9)
    fail(ErrorCode::InvalidArgument, "projective map is numerically singular");
  return t;
}

ProjectiveMap ProjectiveMap::identity(Eigen::Index dim) {
  return {Matrix::Identity(dim + 1, dim + 1)};
}

Vector ProjectiveMap::homogeneous_image(const Vector& p) const {
  if (p.size() != dim()) fail(ErrorCode::DimensionMismatch, "point dimension does not match map");
  Vector h(p.size() + 1);
  h.head(p.size()) = p;
  h[p.size()] = 1.0;
  return matrix * h;
}

Vector gnomonic_project(const Vector& p) {
  require(p.size() >= 2, "gnomonic projection needs a point of S^d with d >= 1");
  const Eigen::Index d = p.size() - 1;
  if (p[d] <= 1e-9)
    fail(ErrorCode::NearEquator, "point is on or below the equator (last coordinate <= 1e-9)");
  return p.head(d) / p[d];
}

Vector gnomonic_lift(const Vector& q) {
  require(q.allFinite(), "gnomonic lift needs a finite point");
  Vector h(q.size() + 1);
  h.head(q.size()) = q;
  h[q.size()] = 1.0;
  return h / h.norm();
}

UnitVector lift_hyperplane(const OrientedHyperplane& h) {
  Vector n(h.dim() + 1);
  n.head(h.dim()) = h.normal.vec();
  n[h.dim()] = -h.offset;
  return UnitVector(n);
}

std::optional<OrientedHyperplane> decode_hyperplane(const UnitVector& lifted) {
  const Eigen::Index d = lifted.size() - 1;
  const Vector head = lifted.vec().head(d);
  const double n = head.norm();
  if (n < 1e-12) return std::nullopt;
  return OrientedHyperplane{UnitVector(head), -lifted[d] / n};
}

ProjectiveMap projective_from_hyperplane(const OrientedHyperplane& h) {
  return projective_from_lifted(lift_hyperplane(h));
}

ProjectiveMap projective_from_lifted(const UnitVector& lifted_normal) {
  const Eigen::Index d = lifted_normal.size() - 1;
  UnitVector n = lifted_normal;
  // Either orientation sends h to infinity; this one is near the identity for far hyperplanes.
  if (n[d] < 0.0) n = -n;
  return ProjectiveMap::from_matrix(rotation_taking(n, UnitVector::axis(d + 1, d)));
}

Vector apply_projective(const ProjectiveMap& t, const Vector& p) {
  const Vector h = t.homogeneous_image(p);
  const Eigen::Index d = t.dim();
  if (std::abs(h[d]) <= 1e-12) fail(ErrorCode::AtInfinity, "point is mapped to infinity");
  return h.head(d) / h[d];
}

OrientedHyperplane apply_projective(const ProjectiveMap& t, const OrientedHyperplane& h) {
  if (h.dim() != t.dim()) fail(ErrorCode::DimensionMismatch, "hyperplane dimension does not match map");
  const Vector image = t.matrix.transpose().fullPivLu().solve(lift_hyperplane(h).vec());
  auto decoded = decode_hyperplane(UnitVector(image));
  if (!decoded) fail(ErrorCode::AtInfinity, "hyperplane is mapped to the hyperplane at infinity");
  return *decoded;
}

Matrix rotation_taking(const UnitVector& u, const UnitVector& v) {
  require(u.size() == v.size(), "rotation_taking: dimension mismatch");
  const Eigen::Index d = u.size();
  const Vector& a = u.vec();
  const Vector& b = v.vec();
  if ((a + b).norm() < 1e-9) {
    // Half turn in the plane of u and the first coordinate axis not parallel to u.
    Eigen::Index axis = 0;
    while (axis < d && std::abs(a[axis]) > 1.0 - 1e-9) ++axis;
    require(axis < d && d >= 2, "rotation_taking: no half-turn plane available in dimension 1");
    Vector w = Vector::Unit(d, axis) - a[axis] * a;
    w.normalize();
    return Matrix::Identity(d, d) - 2.0 * a * a.transpose() - 2.0 * w * w.transpose();
  }
  const Matrix k = b * a.transpose() - a * b.transpose();
  const double c = a.dot(b);
  return Matrix::Identity(d, d) + k + (k * k) / (1.0 + c);
}

Matrix orthonormalize(const Matrix& columns) {
  Matrix q = columns;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    }
    const double n = q.col(j).norm();
    if (n < 1e-12) fail(ErrorCode::ZeroVector, "columns are linearly dependent");
    q.col(j) /= n;
  }
  return q;
}

Matrix orthonormal_complement(const Matrix& columns) {
  const Eigen::Index d = columns.rows();
  const Eigen::Index r = columns.cols();
  Matrix out(d, d - r);
  Eigen::Index filled = 0;
  Matrix basis(d, d);
  basis.leftCols(r) = columns;
  Eigen::Index have = r;
  for (Eigen::Index axis = 0; axis < d && filled < d - r; ++axis) {
    Vector c = Vector::Unit(d, axis);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < have; ++i) c -= basis.col(i).dot(c) * basis.col(i);
    const double n = c.norm();
    if (n < 1e-6) continue;
    c /= n;
    basis.col(have++) = c;
    out.col(filled++) = c;
  }
  require(filled == d - r, "orthonormal_complement: input columns are not independent");
  return out;
}

double angle_between(const Vector& a, const Vector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) fail(ErrorCode::ZeroVector, "angle with a zero vector");
  const double c = a.dot(b) / (na * nb);
  const double s = (a / na - b / nb).norm();
  if (std::abs(c) < 0.7) return std::acos(c);
  // 2 asin(|a/|a| - b/|b||/2) avoids the acos cancellation near 0 and pi.
  return 2.0 * std::asin(std::min(1.0, s / 2.0));
}

double wrap_two_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

}  // namespace mpart
