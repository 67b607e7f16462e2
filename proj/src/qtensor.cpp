#include "nematic/qtensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nematic {

namespace {

constexpr double kSqrt6 = 2.449489742783178098;
constexpr double kSqrt2 = 1.414213562373095049;

// Largest |f| for the potential restricted to the uniaxial path
// s -> s (n n^T - I/3): tr(Q^2) = 2 s^2 / 3, tr(Q^3) = 2 s^3 / 9.
double uniaxial_potential_no_c0(double s, double a, double b, double c) {
    return -a / 3.0 * s * s - 2.0 * b / 27.0 * s * s * s +
           c / 9.0 * s * s * s * s;
}

void sort3_descending(std::array<double, 3>& l, std::array<Vec3, 3>& v) {
    auto swap = [&](int i, int j) {
        std::swap(l[static_cast<size_t>(i)], l[static_cast<size_t>(j)]);
        std::swap(v[static_cast<size_t>(i)], v[static_cast<size_t>(j)]);
    };
    if (l[0] < l[1]) swap(0, 1);
    if (l[1] < l[2]) swap(1, 2);
    if (l[0] < l[1]) swap(0, 1);
}

void fix_sign(Vec3& v) {
    int imax = 0;
    for (int k = 1; k < 3; ++k)
        if (std::abs(v[k]) > std::abs(v[imax])) imax = k;
    if (v[imax] < 0) v = -v;
}

// Cyclic Jacobi on a symmetric 3x3; robust at any degeneracy.
void jacobi3(const Mat3& A0, std::array<double, 3>& lam, Mat3& V) {
    Mat3 A = A0;
    V.setIdentity();
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = A(0, 1) * A(0, 1) + A(0, 2) * A(0, 2) + A(1, 2) * A(1, 2);
        if (off < 1e-34 * (1.0 + A.squaredNorm())) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (A(p, q) == 0.0) continue;
                double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
                double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                if (theta < 0) t = -t;
                double cth = 1.0 / std::sqrt(1.0 + t * t);
                double sth = t * cth;
                Mat3 J = Mat3::Identity();
                J(p, p) = cth; J(q, q) = cth;
                J(p, q) = sth; J(q, p) = -sth;
                A = J.transpose() * A * J;
                A(p, q) = A(q, p) = 0.0;
                V = V * J;
            }
        }
    }
    lam = {A(0, 0), A(1, 1), A(2, 2)};
}

// Deterministic orthonormal completion of a (possibly degenerate) eigenspace:
// Gram-Schmidt of the canonical axes, in index order, against `fixed`.
Vec3 gram_schmidt_axis(const std::array<Vec3, 3>& fixed, int nfixed) {
    static const Vec3 axes[3] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    for (const Vec3& e : axes) {
        Vec3 v = e;
        for (int k = 0; k < nfixed; ++k)
            v -= v.dot(fixed[static_cast<size_t>(k)]) * fixed[static_cast<size_t>(k)];
        double n = v.norm();
        if (n > 1e-6) return v / n;
    }
    throw std::logic_error("gram_schmidt_axis: no admissible axis");
}

}  // namespace

double s_star(double a, double b, double c) {
    if (!(a >= 0.0) || !(b > 0.0) || !(c > 0.0))
        throw std::invalid_argument("s_star: requires a >= 0, b > 0, c > 0");
    return (b + std::sqrt(b * b + 24.0 * a * c)) / (4.0 * c);
}

MaterialParams::MaterialParams(double a, double b, double c, double L, double W)
    : a_(a), b_(b), c_(c), L_(L), W_(W) {
    if (!(L > 0.0))
        throw std::invalid_argument("MaterialParams: requires L > 0");
    if (!(W >= 0.0))  // W = 0 switches the anchoring term off
        throw std::invalid_argument("MaterialParams: requires W >= 0");
    s_star_ = s_star(a, b, c);  // validates a, b, c
    C0_ = -uniaxial_potential_no_c0(s_star_, a, b, c);
}

QTensor QTensor::fromMatrix(const Mat3& Q) {
    QTensor q;
    q.u_[0] = std::sqrt(1.5) * Q(2, 2);
    q.u_[1] = (Q(0, 0) - Q(1, 1)) / kSqrt2;
    q.u_[2] = kSqrt2 * Q(0, 1);
    q.u_[3] = kSqrt2 * Q(0, 2);
    q.u_[4] = kSqrt2 * Q(1, 2);
    return q;
}

Mat3 QTensor::matrix() const {
    Mat3 Q;
    const double d1 = u_[0] / kSqrt6;  // A1 diagonal contribution
    Q(0, 0) = -d1 + u_[1] / kSqrt2;
    Q(1, 1) = -d1 - u_[1] / kSqrt2;
    Q(2, 2) = 2.0 * d1;
    Q(0, 1) = Q(1, 0) = u_[2] / kSqrt2;
    Q(0, 2) = Q(2, 0) = u_[3] / kSqrt2;
    Q(1, 2) = Q(2, 1) = u_[4] / kSqrt2;
    return Q;
}

double QTensor::squaredNorm() const {
    double s = 0;
    for (double x : u_) s += x * x;
    return s;
}

double QTensor::norm() const { return std::sqrt(squaredNorm()); }

QTensor& QTensor::operator+=(const QTensor& o) {
    for (int j = 0; j < 5; ++j) u_[static_cast<size_t>(j)] += o.u_[static_cast<size_t>(j)];
    return *this;
}

QTensor& QTensor::operator-=(const QTensor& o) {
    for (int j = 0; j < 5; ++j) u_[static_cast<size_t>(j)] -= o.u_[static_cast<size_t>(j)];
    return *this;
}

QTensor& QTensor::operator*=(double t) {
    for (double& x : u_) x *= t;
    return *this;
}

double QTensor::dot(const QTensor& o) const {
    double s = 0;
    for (int j = 0; j < 5; ++j) s += u_[static_cast<size_t>(j)] * o.u_[static_cast<size_t>(j)];
    return s;
}

QTensor from_director(const Vec3& n, double s) {
    if (std::abs(n.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("from_director: n must be a unit vector");
    Mat3 Q = s * (n * n.transpose() - Mat3::Identity() / 3.0);
    return QTensor::fromMatrix(Q);
}

QTensor q_infinity(const MaterialParams& p) {
    return from_director(Vec3::UnitZ(), p.sStar());
}

QTensor q_surface(const Vec3& x, const MaterialParams& p) {
    return from_director(x.normalized(), p.sStar());
}

double bulk_potential(const QTensor& Q, const MaterialParams& p) {
    const Mat3 M = Q.matrix();
    const double tr2 = Q.squaredNorm();
    const double tr3 = (M * M * M).trace();
    return -0.5 * p.a() * tr2 - p.b() / 3.0 * tr3 + 0.25 * p.c() * tr2 * tr2 +
           p.C0();
}

QTensor bulk_gradient(const QTensor& Q, const MaterialParams& p) {
    const Mat3 M = Q.matrix();
    const double tr2 = Q.squaredNorm();
    Mat3 G = -p.a() * M -
             p.b() * (M * M - tr2 / 3.0 * Mat3::Identity()) +
             p.c() * tr2 * M;
    return QTensor::fromMatrix(G);
}

EigenSystem eigen_system(const QTensor& Q) {
    EigenSystem es;
    const Mat3 M = Q.matrix();
    const double nrm2 = Q.squaredNorm();

    if (nrm2 < 1e-28) {  // zero tensor: canonical convention
        es.lambda = {0.0, 0.0, 0.0};
        es.frame = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
        return es;
    }

    // Characteristic polynomial of a traceless symmetric matrix:
    //   x^3 - (|Q|^2/2) x - det(Q) = 0.
    const double pc = -0.5 * nrm2;
    const double qc = -M.determinant();
    // disc = -4 pc^3 - 27 qc^2 >= 0; vanishes iff eigenvalues degenerate.
    const double disc = -4.0 * pc * pc * pc - 27.0 * qc * qc;
    const double scale6 = nrm2 * nrm2 * nrm2;
    const bool near_degenerate = disc < 1e-9 * scale6;

    std::array<double, 3> lam;
    std::array<Vec3, 3> vecs;

    if (near_degenerate) {
        Mat3 V;
        jacobi3(M, lam, V);
        for (int k = 0; k < 3; ++k) vecs[static_cast<size_t>(k)] = V.col(k);
        sort3_descending(lam, vecs);
        // Re-span numerically degenerate eigenspaces deterministically.
        const double dtol = 1e-8 * std::sqrt(nrm2);
        if (std::abs(lam[0] - lam[1]) <= dtol && std::abs(lam[1] - lam[2]) <= dtol) {
            vecs = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
        } else if (std::abs(lam[0] - lam[1]) <= dtol) {
            fix_sign(vecs[2]);
            std::array<Vec3, 3> fixed = {vecs[2], Vec3::Zero(), Vec3::Zero()};
            fixed[1] = gram_schmidt_axis(fixed, 1);
            fixed[2] = gram_schmidt_axis(fixed, 2);
            vecs[0] = fixed[1];
            vecs[1] = fixed[2];
        } else if (std::abs(lam[1] - lam[2]) <= dtol) {
            fix_sign(vecs[0]);
            std::array<Vec3, 3> fixed = {vecs[0], Vec3::Zero(), Vec3::Zero()};
            fixed[1] = gram_schmidt_axis(fixed, 1);
            fixed[2] = gram_schmidt_axis(fixed, 2);
            vecs[1] = fixed[1];
            vecs[2] = fixed[2];
        }
    } else {
        // Trigonometric roots of x^3 + pc x + qc = 0:
        // x = 2 prad cos(theta + 2 pi k / 3), prad = sqrt(|Q|^2 / 6),
        // cos(3 theta) = det(Q) / (2 prad^3).
        const double prad = std::sqrt(nrm2 / 6.0);
        double arg = -qc / (2.0 * prad * prad * prad);
        arg = std::clamp(arg, -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        lam[0] = 2.0 * prad * std::cos(theta);
        lam[2] = 2.0 * prad * std::cos(theta + 2.0 * M_PI / 3.0);
        lam[1] = -lam[0] - lam[2];

        // Spectral projector columns: (M - l_j I)(M - l_k I) spans the l_i
        // eigenspace; take the largest column.
        for (int i = 0; i < 3; ++i) {
            const double lj = lam[static_cast<size_t>((i + 1) % 3)];
            const double lk = lam[static_cast<size_t>((i + 2) % 3)];
            Mat3 P = (M - lj * Mat3::Identity()) * (M - lk * Mat3::Identity());
            int cmax = 0;
            double best = -1.0;
            for (int c = 0; c < 3; ++c) {
                double n = P.col(c).squaredNorm();
                if (n > best) { best = n; cmax = c; }
            }
            vecs[static_cast<size_t>(i)] = P.col(cmax).normalized();
        }
        sort3_descending(lam, vecs);
        // Orthonormalize against accumulated roundoff.
        vecs[1] -= vecs[1].dot(vecs[0]) * vecs[0];
        vecs[1].normalize();
        vecs[2] -= vecs[2].dot(vecs[0]) * vecs[0];
        vecs[2] -= vecs[2].dot(vecs[1]) * vecs[1];
        vecs[2].normalize();
    }

    for (auto& v : vecs) fix_sign(v);
    es.lambda = lam;
    es.frame = vecs;
    return es;
}

std::optional<double> biaxiality(const QTensor& Q) {
    const double nrm = Q.norm();
    if (nrm < 1e-14) return std::nullopt;
    const Mat3 M = Q.matrix();
    const double tr3 = (M * M * M).trace();
    const double n2 = nrm * nrm;
    double beta = 1.0 - 6.0 * tr3 * tr3 / (n2 * n2 * n2);
    return std::clamp(beta, 0.0, 1.0);
}

double dist_to_ustar(const QTensor& Q, const MaterialParams& p) {
    const EigenSystem es = eigen_system(Q);
    const QTensor proj = from_director(es.frame[0], p.sStar());
    return (Q - proj).norm();
}

}  // namespace nematic
