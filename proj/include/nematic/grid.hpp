#pragma once

#include <cstddef>
#include <vector>

// Exterior-domain grid for the unit colloid: mapped radial coordinate
// s = 1/r, uniformly spaced on [1/R_out, 1], and polar angle phi on [0, pi].
// Row j = 0 is the particle surface r = 1; row j = Ns-1 is r = R_out.
// Quadrature weights integrate the spherical volume element r^2 sin(phi)
// per unit azimuthal radian, with the metric factors integrated exactly
// over grid cells.

namespace nematic {

class ExteriorGrid {
public:
    ExteriorGrid(double R_out, int Ns, int Nphi);

    int Ns() const { return Ns_; }
    int Nphi() const { return Nphi_; }
    double Rout() const { return R_out_; }
    double ds() const { return ds_; }
    double dphi() const { return dphi_; }

    double s(int j) const { return 1.0 - j * ds_; }
    double r(int j) const { return r_[static_cast<size_t>(j)]; }
    double phi(int i) const { return i * dphi_; }
    double rho(int j, int i) const { return r(j) * sin_phi(i); }
    double sin_phi(int i) const { return sinphi_[static_cast<size_t>(i)]; }
    double cos_phi(int i) const { return cosphi_[static_cast<size_t>(i)]; }

    size_t node(int j, int i) const {
        return static_cast<size_t>(j) * static_cast<size_t>(Nphi_) +
               static_cast<size_t>(i);
    }
    size_t nodeCount() const {
        return static_cast<size_t>(Ns_) * static_cast<size_t>(Nphi_);
    }

    /// Exact nodal weight for integrals of g(r,phi) r^2 sin(phi) dr dphi.
    double nodeWeight(int j, int i) const {
        return ws_[static_cast<size_t>(j)] * wphi_[static_cast<size_t>(i)];
    }
    /// Exact nodal weight for surface integrals sin(phi) dphi on a row.
    double surfaceWeight(int i) const { return wphi_[static_cast<size_t>(i)]; }

    // Cell quantities ((Ns-1) x (Nphi-1) cells, cell (j,i) between node rows
    // j,j+1 and columns i,i+1). The three metric integrals are exact:
    //   cellVol  = int int r^2 sin(phi) dr dphi
    //   cellAng  = int int sin(phi) dr dphi
    //   cellAxis = int int (1 / sin(phi)) dr dphi
    size_t cell(int j, int i) const {
        return static_cast<size_t>(j) * static_cast<size_t>(Nphi_ - 1) +
               static_cast<size_t>(i);
    }
    size_t cellCount() const {
        return static_cast<size_t>(Ns_ - 1) * static_cast<size_t>(Nphi_ - 1);
    }
    double cellVol(int j, int i) const { return cvol_[cell(j, i)]; }
    double cellAng(int j, int i) const { return cang_[cell(j, i)]; }
    double cellAxis(int j, int i) const { return caxis_[cell(j, i)]; }
    /// Cell-center coordinates (arithmetic means in the (s, phi) chart).
    double cellR(int j, int i) const;
    double cellPhi(int j, int i) const { return (phi(i) + phi(i + 1)) / 2.0; }

    /// Quadrature of a constant-1 field; equals (R_out^3 - 1) * 2/3 exactly
    /// up to roundoff.
    double domainVolume() const;

private:
    double R_out_;
    int Ns_, Nphi_;
    double ds_, dphi_;
    std::vector<double> r_, sinphi_, cosphi_;
    std::vector<double> ws_, wphi_;
    std::vector<double> cvol_, cang_, caxis_;
};

}  // namespace nematic
