#include "nematic/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace nematic {

namespace {

// int s^-4 ds = (a^-3 - b^-3) / 3 over [a, b]; equals int r^2 dr.
double radial_metric(double a, double b) {
    return (std::pow(a, -3.0) - std::pow(b, -3.0)) / 3.0;
}

// int dr over the s-cell [a, b], a < b: r spans 1/b .. 1/a.
double radial_flat(double a, double b) { return 1.0 / a - 1.0 / b; }

// int 1/sin dphi = ln tan(phi/2)
double log_tan_half(double phi) { return std::log(std::tan(phi / 2.0)); }

}  // namespace

ExteriorGrid::ExteriorGrid(double R_out, int Ns, int Nphi)
    : R_out_(R_out), Ns_(Ns), Nphi_(Nphi) {
    if (!(R_out > 2.0))
        throw std::invalid_argument("ExteriorGrid: requires R_out > 2");
    if (Ns < 8 || Nphi < 8)
        throw std::invalid_argument("ExteriorGrid: requires Ns, Nphi >= 8");

    const double s_min = 1.0 / R_out;
    ds_ = (1.0 - s_min) / (Ns - 1);
    dphi_ = M_PI / (Nphi - 1);

    r_.resize(static_cast<size_t>(Ns));
    for (int j = 0; j < Ns; ++j)
        r_[static_cast<size_t>(j)] = (j == Ns - 1) ? R_out : 1.0 / s(j);

    sinphi_.resize(static_cast<size_t>(Nphi));
    cosphi_.resize(static_cast<size_t>(Nphi));
    for (int i = 0; i < Nphi; ++i) {
        sinphi_[static_cast<size_t>(i)] = std::sin(phi(i));
        cosphi_[static_cast<size_t>(i)] = std::cos(phi(i));
    }
    sinphi_[0] = sinphi_[static_cast<size_t>(Nphi - 1)] = 0.0;
    cosphi_[0] = 1.0;
    cosphi_[static_cast<size_t>(Nphi - 1)] = -1.0;

    // Nodal weights: exact metric integrals over adjacent half-cells.
    ws_.resize(static_cast<size_t>(Ns));
    for (int j = 0; j < Ns; ++j) {
        const double hi = std::min(1.0, s(j) + ds_ / 2.0);
        const double lo = std::max(s_min, s(j) - ds_ / 2.0);
        ws_[static_cast<size_t>(j)] = radial_metric(lo, hi);
    }
    wphi_.resize(static_cast<size_t>(Nphi));
    for (int i = 0; i < Nphi; ++i) {
        const double lo = std::max(0.0, phi(i) - dphi_ / 2.0);
        const double hi = std::min(M_PI, phi(i) + dphi_ / 2.0);
        wphi_[static_cast<size_t>(i)] = std::cos(lo) - std::cos(hi);
    }

    cvol_.resize(cellCount());
    cang_.resize(cellCount());
    caxis_.resize(cellCount());
    for (int j = 0; j < Ns - 1; ++j) {
        const double shi = s(j);
        const double slo = s(j + 1);
        const double rad_vol = radial_metric(slo, shi);
        const double rad_flat = radial_flat(slo, shi);
        for (int i = 0; i < Nphi - 1; ++i) {
            const double plo = phi(i);
            const double phi_hi = phi(i + 1);
            const double ang = std::cos(plo) - std::cos(phi_hi);
            cvol_[cell(j, i)] = rad_vol * ang;
            cang_[cell(j, i)] = rad_flat * ang;
            // ln tan is -inf at the axis endpoints: integrate from/to the
            // half-cell edge instead; the integrand carried against this
            // weight (sin^2 of a field vanishing on the axis) is O(phi^2).
            const double alo = (i == 0) ? plo + dphi_ / 2.0 : plo;
            const double ahi = (i == Nphi - 2) ? phi_hi - dphi_ / 2.0 : phi_hi;
            caxis_[cell(j, i)] = rad_flat * (log_tan_half(ahi) - log_tan_half(alo));
        }
    }
}

double ExteriorGrid::cellR(int j, int i) const {
    (void)i;
    return 2.0 / (s(j) + s(j + 1));
}

double ExteriorGrid::domainVolume() const {
    double v = 0.0;
    for (int j = 0; j < Ns_; ++j)
        for (int i = 0; i < Nphi_; ++i) v += nodeWeight(j, i);
    return v;
}

}  // namespace nematic
