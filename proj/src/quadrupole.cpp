#include "nematic/quadrupole.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nematic {

namespace {
constexpr double kSqrt3 = 1.732050807568877294;
}

QuadrupolarConfig::QuadrupolarConfig(double w, double s_star)
    : w_(w), s_star_(s_star) {
    if (!(w > 0.0))
        throw std::invalid_argument("QuadrupolarConfig: requires w > 0");
    if (!(s_star > 0.0))
        throw std::invalid_argument("QuadrupolarConfig: requires s_star > 0");
    if (std::isinf(w)) {
        cw3_ = 1.0;
        cw1_ = 1.0;
    } else {
        cw3_ = w / (3.0 + w);
        cw1_ = w / (1.0 + w);
    }
}

double ring_polynomial(double w, double r) {
    const double cw1 = std::isinf(w) ? 1.0 : w / (1.0 + w);
    const double cw3 = std::isinf(w) ? 1.0 : w / (3.0 + w);
    return r * r * r - cw1 * r * r - cw3;
}

RingResult ring_radius(double w) {
    if (!(w > 0.0)) throw std::invalid_argument("ring_radius: requires w > 0");
    RingResult res;
    // (1+w)(3+w) p(w,1) = 3 - w^2: an interior root needs w > sqrt(3).
    if (!(w > kSqrt3)) {
        res.exists = false;
        if (std::abs(w - kSqrt3) <= 1e-12 * kSqrt3) {
            res.boundary = true;  // surface ring, root exactly at r = 1
            res.r_w = 1.0;
            res.residual = std::abs(ring_polynomial(w, 1.0));
        }
        return res;
    }

    // p(w,1) < 0 < p(w,2) and p is increasing in r on (1, inf).
    double lo = 1.0, hi = 2.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (ring_polynomial(w, mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double r = 0.5 * (lo + hi);
    const double cw1 = std::isinf(w) ? 1.0 : w / (1.0 + w);
    for (int k = 0; k < 2; ++k) {
        const double p = ring_polynomial(w, r);
        const double dp = 3.0 * r * r - 2.0 * cw1 * r;
        r -= p / dp;
    }
    res.exists = true;
    res.r_w = r;
    res.residual = std::abs(ring_polynomial(w, r));
    return res;
}

QTensor q0_eval(const Vec3& x, const QuadrupolarConfig& cfg) {
    const double r = x.norm();
    if (r < 1.0 - 1e-12)
        throw std::invalid_argument("q0_eval: requires |x| >= 1");
    const Vec3 er = x / r;
    const Mat3 I3 = Mat3::Identity() / 3.0;
    Mat3 Q = cfg.alpha(r) * (er * er.transpose() - I3) +
             cfg.beta(r) * (Vec3::UnitZ() * Vec3::UnitZ().transpose() - I3);
    return QTensor::fromMatrix(Q);
}

std::array<double, 3> q0_eigenvalues(double r, double phi,
                                     const QuadrupolarConfig& cfg) {
    const double sigma = cfg.alpha(r) + cfg.beta(r);
    const double nu = cfg.alpha(r) * cfg.beta(r);
    const double s = std::sin(phi);
    // radicand = (alpha-beta)^2/4 + nu cos^2(phi) >= 0
    const double rad = std::max(0.0, sigma * sigma / 4.0 - nu * s * s);
    const double root = std::sqrt(rad);
    std::array<double, 3> lam = {sigma / 6.0 + root, sigma / 6.0 - root,
                                 -sigma / 3.0};
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    return lam;
}

DirectorResult director(double r, double phi, const QuadrupolarConfig& cfg) {
    const auto lam = q0_eigenvalues(r, phi, cfg);
    if (lam[0] - lam[1] < 1e-10)
        throw std::domain_error("director: leading eigenvalue degenerate (ring locus)");
    const double alpha = cfg.alpha(r);
    const double beta = cfg.beta(r);
    const double c2 = 1.0 - 2.0 * std::sin(phi) * std::sin(phi);  // cos(2 phi)
    const double mu = (alpha * c2 + beta) /
                      std::sqrt(alpha * alpha + beta * beta + 2.0 * alpha * beta * c2);
    DirectorResult out;
    out.mu = mu;
    const double nrho = std::sqrt(std::max(0.0, (1.0 - mu) / 2.0));
    const double nz = std::sqrt(std::max(0.0, (1.0 + mu) / 2.0));
    // e_z component reflected below the equator; e_rho = e_x at azimuth 0.
    out.n0 = Vec3(nrho, 0.0, phi <= M_PI / 2.0 ? nz : -nz);
    return out;
}

Mat3 director_projector(double r, double phi, const QuadrupolarConfig& cfg) {
    const Vec3 n = director(r, phi, cfg).n0;
    return n * n.transpose();
}

std::vector<LocusPoint> uniaxial_locus_scan(const QuadrupolarConfig& cfg,
                                            const std::vector<double>& rs,
                                            const std::vector<double>& phis,
                                            double tol) {
    std::vector<LocusPoint> out;
    bool hit = false;
    for (double phi : phis) {
        for (double r : rs) {
            const Vec3 x(r * std::sin(phi), 0.0, r * std::cos(phi));
            const auto beta = biaxiality(q0_eval(x, cfg));
            if (beta && *beta < tol) hit = true;
        }
    }
    if (!hit) return out;

    // Theory places the locus on the equator at the root of alpha = beta,
    // the same equation as the ring polynomial; polish it by bisection on
    // the signed gap alpha(r) - beta(r), which is strictly decreasing.
    auto gap = [&](double r) { return cfg.alpha(r) - cfg.beta(r); };
    double lo = rs.front(), hi = rs.back();
    if (gap(lo) <= 0.0 || gap(hi) >= 0.0) {
        // No sign change on the sampled ray: report the raw minimum cell.
        double best_r = lo, best_beta = 1.0;
        for (double r : rs) {
            const Vec3 x(r, 0.0, 0.0);
            const auto b = biaxiality(q0_eval(x, cfg));
            if (b && *b < best_beta) {
                best_beta = *b;
                best_r = r;
            }
        }
        out.push_back({best_r, M_PI / 2.0});
        return out;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (gap(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    out.push_back({0.5 * (lo + hi), M_PI / 2.0});
    return out;
}

}  // namespace nematic
