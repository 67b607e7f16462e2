#pragma once

#include "nematic/qtensor.hpp"

#include <vector>

// Closed-form quadrupolar limit around a unit spherical colloid:
//   Q0 = alpha(r) (er er - I/3) + beta(r) (ez ez - I/3),
//   alpha(r) = s* w/(3+w) / r^3,   beta(r) = s* (1 - w/(1+w) / r),
// with Saturn-ring radius, eigenvalue branches, mean director, and the
// uniaxial-locus scan.

namespace nematic {

/// Limiting anchoring strength w in (0, +inf] together with s*. The
/// coefficients w/(3+w) and w/(1+w) are taken to 1 at w = +inf.
class QuadrupolarConfig {
public:
    QuadrupolarConfig(double w, double s_star);

    double w() const { return w_; }
    double sStar() const { return s_star_; }
    /// w/(3+w), in (0,1], equal to 1 exactly at w = +inf.
    double cw3() const { return cw3_; }
    /// w/(1+w), in (0,1], equal to 1 exactly at w = +inf.
    double cw1() const { return cw1_; }

    double alpha(double r) const { return s_star_ * cw3_ / (r * r * r); }
    double beta(double r) const { return s_star_ * (1.0 - cw1_ / r); }

private:
    double w_, s_star_, cw3_, cw1_;
};

/// Saturn-ring radius: the root r > 1 of r^3 - w/(1+w) r^2 - w/(3+w) = 0.
/// An interior ring exists iff w > sqrt(3); at w = sqrt(3) the root sits on
/// the particle surface (boundary = true, exists = false).
struct RingResult {
    bool exists = false;
    bool boundary = false;
    double r_w = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
};

/// Ring equation polynomial p(w, r) = r^3 - w/(1+w) r^2 - w/(3+w).
double ring_polynomial(double w, double r);

/// Bisection on [1,2] plus Newton polish; throws on w <= 0.
RingResult ring_radius(double w);

/// Q0 evaluated at a lab-frame point with |x| >= 1 (throws otherwise).
QTensor q0_eval(const Vec3& x, const QuadrupolarConfig& cfg);

/// Closed-form eigenvalue branches at (r, phi), sorted descending:
/// sigma/6 +- sqrt(sigma^2/4 - nu sin^2 phi) and -sigma/3, where
/// sigma = alpha + beta, nu = alpha beta.
std::array<double, 3> q0_eigenvalues(double r, double phi,
                                     const QuadrupolarConfig& cfg);

/// Mean director (leading eigenvector) in the azimuth-0 half plane,
/// n0 = sqrt((1-mu)/2) e_rho +- sqrt((1+mu)/2) e_z (+ above the equator),
/// together with mu. Throws within 1e-10 of the ring locus, where the
/// leading eigenvalue is degenerate.
struct DirectorResult {
    Vec3 n0;
    double mu;
};
DirectorResult director(double r, double phi, const QuadrupolarConfig& cfg);

/// n0 n0^T, continuous across the equator (away from the ring).
Mat3 director_projector(double r, double phi, const QuadrupolarConfig& cfg);

/// Grid cells where biaxiality(Q0) < tol, reduced to locus points; an
/// equatorial crossing is polished to the root of alpha(r) - beta(r).
/// The scan grid must exclude the axis.
struct LocusPoint {
    double r;
    double phi;
};
std::vector<LocusPoint> uniaxial_locus_scan(const QuadrupolarConfig& cfg,
                                            const std::vector<double>& rs,
                                            const std::vector<double>& phis,
                                            double tol);

}  // namespace nematic
