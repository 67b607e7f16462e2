#pragma once

#include "nematic/axifield.hpp"
#include "nematic/grid.hpp"
#include "nematic/ldg.hpp"

#include <vector>

// Axisymmetric S2-harmonic-map problem on the exterior half plane: the
// director n = sin(psi) e_rho + cos(psi) e_z with scalar unknown psi(rho, z),
// energy
//   E(psi) = int [ |d_rho psi|^2 + |d_z psi|^2 + sin^2(psi)/rho^2 ] rho drho dz,
// strong anchoring psi = phi at r = 1, a far-field gauge value in {0, pi}
// at the outer row, and on-axis point defects read off as 0 <-> pi jumps.

namespace nematic {

struct PsiField {
    int Ns = 0, Nphi = 0;
    std::vector<double> psi;

    PsiField() = default;
    explicit PsiField(const ExteriorGrid& g)
        : Ns(g.Ns()), Nphi(g.Nphi()), psi(g.nodeCount(), 0.0) {}

    size_t node(int j, int i) const {
        return static_cast<size_t>(j) * static_cast<size_t>(Nphi) +
               static_cast<size_t>(i);
    }
    double& at(int j, int i) { return psi[node(j, i)]; }
    double at(int j, int i) const { return psi[node(j, i)]; }
    bool shapeMatches(const ExteriorGrid& g) const {
        return Ns == g.Ns() && Nphi == g.Nphi();
    }
};

struct Defect {
    double z0;
    int jump;  // +1 for a 0 -> pi crossing upward, -1 for pi -> 0
};

struct DefectCensus {
    std::vector<Defect> defects;
    /// Axis positions that stayed unclassifiable (pi/4 <= psi <= 3pi/4 in
    /// every probed column); never silently dropped.
    std::vector<double> unresolved;
};

/// psi = phi * exp(-k (r - 1)): anchored boundary, rapid decay to 0.
PsiField psi_init_boundary_decay(const ExteriorGrid& g, double k = 5.0);
/// Difference of polar angles seen from the origin and from a virtual point
/// defect at (0, 0, z_d) on the lower axis; seeds the 0/pi jump at z_d.
PsiField psi_init_hedgehog_below(const ExteriorGrid& g, double z_d = -1.26);
/// psi = 0 except the anchored boundary row.
PsiField psi_init_uniform(const ExteriorGrid& g);
/// z-mirror conjugate psi'(rho, z) = pi - psi(rho, -z).
PsiField psi_mirror(const PsiField& F);

/// Quadrature of the energy density over the truncated half plane; the
/// smooth factors are sampled at cell centers against exactly integrated
/// metric weights.
double psi_energy(const PsiField& F, const ExteriorGrid& g);

/// Gradient flow of E(psi) with per-step clamping to [0, pi], Dirichlet
/// psi = phi at r = 1, the far-field gauge at the outer row, and axis values
/// diagnosed from the adjacent column. Residual is the projected residual of
/// the Euler-Lagrange equation at interior off-axis nodes.
std::pair<PsiField, SolveReport> psi_relax(const PsiField& F0,
                                           const ExteriorGrid& g,
                                           const StepSchedule& schedule,
                                           double farFieldPsi = 0.0);

/// Scans the two axis segments |z| > 1 for 0 <-> pi state flips, classified
/// from the nearest off-axis columns (thresholds pi/4 and 3pi/4, escalating
/// up to three columns out). Defect positions by linear interpolation of
/// psi - pi/2.
DefectCensus detect_defects(const PsiField& F, const ExteriorGrid& g);

/// Signed degree quadrature -1/2 int d_phi(psi) sin(psi) dphi on the circle
/// of radius r (trapezoid, centered differences). Throws when r is within
/// one radial cell of a detected defect.
double degree(const PsiField& F, const ExteriorGrid& g, double r);

/// Pointwise uniaxial lift s* (n n^T - I/3) to the tensor components
/// (m_rr, m_tt, m_rz) = s* (sin^2 psi - 1/3, -1/3, sin psi cos psi).
AxiQField lift_to_qtensor(const PsiField& F, const MaterialParams& p);

/// Hardy-type tail integral of sin^2(psi) / (rho^2 + z^2) over nodes with
/// r >= rMin (finite far-field gauge diagnostic).
double psi_hardy_tail(const PsiField& F, const ExteriorGrid& g, double rMin);

}  // namespace nematic
