#pragma once

#include "nematic/grid.hpp"
#include "nematic/qtensor.hpp"
#include "nematic/quadrupole.hpp"

#include <vector>

// Axisymmetric Q-tensor field: three scalars per node, the cylindrical-frame
// components of Q as the matrix
//     [ m_rr  0     m_rz ]
//     [ 0     m_tt  0    ]
//     [ m_rz  0    -m_rr-m_tt ]
// in the (e_rho, e_theta, e_z) frame. Smoothness on the axis requires
// m_rz = 0 and m_rr = m_tt there.

namespace nematic {

struct AxiQField {
    int Ns = 0, Nphi = 0;
    std::vector<double> mrr, mtt, mrz;

    AxiQField() = default;
    explicit AxiQField(const ExteriorGrid& g)
        : Ns(g.Ns()),
          Nphi(g.Nphi()),
          mrr(g.nodeCount(), 0.0),
          mtt(g.nodeCount(), 0.0),
          mrz(g.nodeCount(), 0.0) {}

    size_t node(int j, int i) const {
        return static_cast<size_t>(j) * static_cast<size_t>(Nphi) +
               static_cast<size_t>(i);
    }
    bool shapeMatches(const ExteriorGrid& g) const {
        return Ns == g.Ns() && Nphi == g.Nphi();
    }

    /// Reconstructed Q-tensor at a node (azimuth-0 half plane: e_rho = e_x).
    QTensor tensor(int j, int i) const;
    void setTensor(int j, int i, double m_rr, double m_tt, double m_rz);
};

/// |Q1 - Q2|_F^2 from component differences (includes the zz entry).
inline double comp_frob2(double da, double db, double dc) {
    return da * da + db * db + (da + db) * (da + db) + 2.0 * dc * dc;
}

/// Components of the radial anchoring tensor Q_s at polar angle phi:
/// s* (sin^2 phi - 1/3, -1/3, sin phi cos phi).
void qs_components(double s_star, double sinphi, double cosphi, double& m_rr,
                   double& m_tt, double& m_rz);

/// Uniform far-field state Q_inf on every node.
AxiQField axifield_uniform_far(const MaterialParams& p, const ExteriorGrid& g);

/// Closed-form quadrupolar limit sampled on the grid (axis rows exact).
AxiQField axifield_from_q0(const QuadrupolarConfig& cfg, const ExteriorGrid& g);

/// z-mirror conjugate field: (s, phi) -> (s, pi - phi) with m_rz negated.
AxiQField mirror_z(const AxiQField& F);

/// Discrete Laplacian of the field on interior nodes (zero elsewhere):
/// radial part s^4 d^2/ds^2 (exact Kelvin form of d_rr + (2/r) d_r),
/// conservative angular part (1/sin)(sin g')'/r^2, and the azimuthal
/// curvature coupling (-2(m_rr-m_tt), +2(m_rr-m_tt), -m_rz)/rho^2.
void discrete_laplacian(const AxiQField& F, const ExteriorGrid& g,
                        std::vector<double>& La, std::vector<double>& Lb,
                        std::vector<double>& Lc);

/// Elastic energy density |grad Q|^2 from frame components and their
/// in-plane derivatives at a point with cylindrical radius rho:
/// |d_rho Q|^2 + |d_z Q|^2 + (2 (m_rr - m_tt)^2 + 2 m_rz^2) / rho^2.
double elastic_density(const std::array<double, 3>& m,
                       const std::array<double, 3>& dm_drho,
                       const std::array<double, 3>& dm_dz, double rho);

/// Max-norm residuals of the closed-form limit under the discrete operators:
/// interior |Laplacian Q0| and the boundary mismatch of the anchoring
/// condition at r = 1 (Robin for finite w, Dirichlet for w = inf).
struct HarmonicRobinCheck {
    double interiorResidual;
    double boundaryResidual;
};
HarmonicRobinCheck verify_harmonic_robin(const QuadrupolarConfig& cfg,
                                         const ExteriorGrid& g);

}  // namespace nematic
