#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <limits>
#include <optional>

// Exact algebra on the space of symmetric traceless 3x3 tensors (Q-tensors):
// bulk potential, its gradient, eigen-decomposition, biaxiality, and the
// distance to the uniaxial vacuum manifold.

namespace nematic {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Uniaxial order parameter of the vacuum manifold, (b + sqrt(b^2+24ac)) / 4c.
/// Throws std::invalid_argument unless a >= 0, b > 0, c > 0.
double s_star(double a, double b, double c);

/// Bulk constants and derived quantities. W = +infinity encodes strong
/// (Dirichlet) anchoring, W = 0 disables the surface term entirely.
class MaterialParams {
public:
    MaterialParams(double a, double b, double c, double L,
                   double W = std::numeric_limits<double>::infinity());

    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }
    double L() const { return L_; }
    double W() const { return W_; }
    double sStar() const { return s_star_; }
    /// Additive constant making min f = 0 over the vacuum manifold.
    double C0() const { return C0_; }
    bool strongAnchoring() const { return std::isinf(W_); }

private:
    double a_, b_, c_, L_, W_;
    double s_star_;
    double C0_;
};

/// Symmetric traceless 3x3 tensor stored as 5 coordinates in the orthonormal
/// basis
///   A1 = sqrt(3/2) (ez ez - I/3),  A2 = (ex ex - ey ey)/sqrt(2),
///   A3 = (ex ey + ey ex)/sqrt(2),  A4 = (ex ez + ez ex)/sqrt(2),
///   A5 = (ey ez + ez ey)/sqrt(2),
/// so that |Q|_F^2 = sum u_j^2 and reconstruction is exactly traceless.
class QTensor {
public:
    QTensor() : u_{0, 0, 0, 0, 0} {}
    explicit QTensor(const std::array<double, 5>& u) : u_(u) {}

    static QTensor fromMatrix(const Mat3& Q);

    const std::array<double, 5>& u() const { return u_; }
    double& operator[](int j) { return u_[static_cast<size_t>(j)]; }
    double operator[](int j) const { return u_[static_cast<size_t>(j)]; }

    Mat3 matrix() const;
    double norm() const;
    double squaredNorm() const;

    QTensor& operator+=(const QTensor& o);
    QTensor& operator-=(const QTensor& o);
    QTensor& operator*=(double t);
    friend QTensor operator+(QTensor l, const QTensor& r) { return l += r; }
    friend QTensor operator-(QTensor l, const QTensor& r) { return l -= r; }
    friend QTensor operator*(double t, QTensor q) { return q *= t; }
    double dot(const QTensor& o) const;

private:
    std::array<double, 5> u_;
};

/// Eigenvalues sorted descending with a right-handed orthonormal frame.
/// Degenerate eigenspaces get a deterministic frame (Gram-Schmidt against
/// the canonical axes in index order); eigenvector signs are fixed by making
/// the largest-magnitude component positive.
struct EigenSystem {
    std::array<double, 3> lambda;
    std::array<Vec3, 3> frame;
};

/// Uniaxial tensor s (n n^T - I/3). n must be unit to within 1e-10.
QTensor from_director(const Vec3& n, double s);

/// f(Q) = -a/2 tr(Q^2) - b/3 tr(Q^3) + c/4 tr(Q^2)^2 + C0, with min f = 0.
double bulk_potential(const QTensor& Q, const MaterialParams& p);

/// Gradient of f restricted to the traceless symmetric space:
/// -a Q - b (Q^2 - |Q|^2 I/3) + c |Q|^2 Q.
QTensor bulk_gradient(const QTensor& Q, const MaterialParams& p);

/// Closed-form (trigonometric) symmetric eigen-solver with a cyclic-Jacobi
/// fallback near degenerate discriminants.
EigenSystem eigen_system(const QTensor& Q);

/// Biaxiality parameter 1 - 6 tr(Q^3)^2 / |Q|^6, clamped to [0,1].
/// Empty when |Q| < 1e-14 (the parameter is undefined at Q = 0).
std::optional<double> biaxiality(const QTensor& Q);

/// Frobenius distance to the vacuum manifold, via the nearest-point
/// projection s* (v1 v1^T - I/3) onto the leading eigenvector. When the
/// leading eigenvalue is degenerate any leading direction gives the same
/// distance.
double dist_to_ustar(const QTensor& Q, const MaterialParams& p);

/// Q_infinity = s* (ez ez^T - I/3), the uniform far-field state.
QTensor q_infinity(const MaterialParams& p);

/// Q_s(x) = s* (er er^T - I/3), the radial (homeotropic) anchoring tensor.
QTensor q_surface(const Vec3& x, const MaterialParams& p);

}  // namespace nematic
