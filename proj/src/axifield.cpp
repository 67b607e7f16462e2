#include "nematic/axifield.hpp"

#include <cmath>
#include <stdexcept>

namespace nematic {

QTensor AxiQField::tensor(int j, int i) const {
    const size_t n = node(j, i);
    Mat3 Q;
    const double a = mrr[n], b = mtt[n], c = mrz[n];
    Q << a, 0.0, c, 0.0, b, 0.0, c, 0.0, -a - b;
    return QTensor::fromMatrix(Q);
}

void AxiQField::setTensor(int j, int i, double m_rr, double m_tt, double m_rz) {
    const size_t n = node(j, i);
    mrr[n] = m_rr;
    mtt[n] = m_tt;
    mrz[n] = m_rz;
}

void qs_components(double s_star, double sinphi, double cosphi, double& m_rr,
                   double& m_tt, double& m_rz) {
    m_rr = s_star * (sinphi * sinphi - 1.0 / 3.0);
    m_tt = -s_star / 3.0;
    m_rz = s_star * sinphi * cosphi;
}

AxiQField axifield_uniform_far(const MaterialParams& p, const ExteriorGrid& g) {
    AxiQField F(g);
    const double v = -p.sStar() / 3.0;
    for (size_t n = 0; n < g.nodeCount(); ++n) {
        F.mrr[n] = v;
        F.mtt[n] = v;
        F.mrz[n] = 0.0;  // Q_inf has e_z eigenvalue 2 s*/3
    }
    return F;
}

AxiQField axifield_from_q0(const QuadrupolarConfig& cfg, const ExteriorGrid& g) {
    AxiQField F(g);
    for (int j = 0; j < g.Ns(); ++j) {
        const double r = g.r(j);
        const double alpha = cfg.alpha(r);
        const double beta = cfg.beta(r);
        for (int i = 0; i < g.Nphi(); ++i) {
            const double sp = g.sin_phi(i);
            const double cp = g.cos_phi(i);
            // er = sin(phi) e_rho + cos(phi) e_z in the rotating frame
            const double m_rr = alpha * (sp * sp - 1.0 / 3.0) - beta / 3.0;
            const double m_tt = -(alpha + beta) / 3.0;
            const double m_rz = alpha * sp * cp;
            F.setTensor(j, i, m_rr, m_tt, m_rz);
        }
    }
    return F;
}

AxiQField mirror_z(const AxiQField& F) {
    AxiQField M = F;
    for (int j = 0; j < F.Ns; ++j) {
        for (int i = 0; i < F.Nphi; ++i) {
            const size_t src = F.node(j, F.Nphi - 1 - i);
            const size_t dst = F.node(j, i);
            M.mrr[dst] = F.mrr[src];
            M.mtt[dst] = F.mtt[src];
            M.mrz[dst] = -F.mrz[src];
        }
    }
    return M;
}

void discrete_laplacian(const AxiQField& F, const ExteriorGrid& g,
                        std::vector<double>& La, std::vector<double>& Lb,
                        std::vector<double>& Lc) {
    if (!F.shapeMatches(g))
        throw std::invalid_argument("discrete_laplacian: field/grid shape mismatch");
    const int Ns = g.Ns(), Nphi = g.Nphi();
    La.assign(g.nodeCount(), 0.0);
    Lb.assign(g.nodeCount(), 0.0);
    Lc.assign(g.nodeCount(), 0.0);
    const double inv_ds2 = 1.0 / (g.ds() * g.ds());
    const double inv_dphi2 = 1.0 / (g.dphi() * g.dphi());

    for (int j = 1; j < Ns - 1; ++j) {
        const double s = g.s(j);
        const double s4 = s * s * s * s;
        const double r = g.r(j);
        const double inv_r2 = 1.0 / (r * r);
        for (int i = 1; i < Nphi - 1; ++i) {
            const size_t n = g.node(j, i);
            const size_t nN = g.node(j + 1, i), nS = g.node(j - 1, i);
            const size_t nE = g.node(j, i + 1), nW = g.node(j, i - 1);
            const double sp = g.sin_phi(i);
            const double sp_e = std::sin(g.phi(i) + g.dphi() / 2.0);
            const double sp_w = std::sin(g.phi(i) - g.dphi() / 2.0);
            const double rho = r * sp;
            const double inv_rho2 = 1.0 / (rho * rho);

            auto lap = [&](const std::vector<double>& m) {
                const double rad = s4 * (m[nN] - 2.0 * m[n] + m[nS]) * inv_ds2;
                const double ang = (sp_e * (m[nE] - m[n]) - sp_w * (m[n] - m[nW])) *
                                   inv_dphi2 / sp;
                return rad + inv_r2 * ang;
            };
            const double la = lap(F.mrr);
            const double lb = lap(F.mtt);
            const double lc = lap(F.mrz);
            const double d = F.mrr[n] - F.mtt[n];
            La[n] = la - 2.0 * d * inv_rho2;
            Lb[n] = lb + 2.0 * d * inv_rho2;
            Lc[n] = lc - F.mrz[n] * inv_rho2;
        }
    }
}

double elastic_density(const std::array<double, 3>& m,
                       const std::array<double, 3>& dm_drho,
                       const std::array<double, 3>& dm_dz, double rho) {
    const double grad2 = comp_frob2(dm_drho[0], dm_drho[1], dm_drho[2]) +
                         comp_frob2(dm_dz[0], dm_dz[1], dm_dz[2]);
    const double d = m[0] - m[1];
    const double azim = 2.0 * d * d + 2.0 * m[2] * m[2];
    return grad2 + azim / (rho * rho);
}

HarmonicRobinCheck verify_harmonic_robin(const QuadrupolarConfig& cfg,
                                         const ExteriorGrid& g) {
    const AxiQField F = axifield_from_q0(cfg, g);
    std::vector<double> La, Lb, Lc;
    discrete_laplacian(F, g, La, Lb, Lc);

    HarmonicRobinCheck out{0.0, 0.0};
    for (int j = 1; j < g.Ns() - 1; ++j)
        for (int i = 1; i < g.Nphi() - 1; ++i) {
            const size_t n = g.node(j, i);
            const double f2 = comp_frob2(La[n], Lb[n], Lc[n]);
            out.interiorResidual = std::max(out.interiorResidual, std::sqrt(f2));
        }

    // Anchoring mismatch at r = 1. The exterior normal of the domain points
    // into the ball, so d/dnu = -d/dr = d/ds at s = 1.
    const double s_star = cfg.sStar();
    for (int i = 0; i < g.Nphi(); ++i) {
        double qs_rr, qs_tt, qs_rz;
        qs_components(s_star, g.sin_phi(i), g.cos_phi(i), qs_rr, qs_tt, qs_rz);
        const size_t n0 = g.node(0, i), n1 = g.node(1, i), n2 = g.node(2, i);
        double mis2;
        if (std::isinf(cfg.w())) {
            mis2 = comp_frob2(F.mrr[n0] - qs_rr, F.mtt[n0] - qs_tt,
                              F.mrz[n0] - qs_rz);
        } else {
            auto robin = [&](const std::vector<double>& m, double qs) {
                // one-sided second-order d/ds at the surface row
                const double dds =
                    (3.0 * m[n0] - 4.0 * m[n1] + m[n2]) / (2.0 * g.ds());
                return (1.0 / cfg.w()) * dds - (qs - m[n0]);
            };
            mis2 = comp_frob2(robin(F.mrr, qs_rr), robin(F.mtt, qs_tt),
                              robin(F.mrz, qs_rz));
        }
        out.boundaryResidual = std::max(out.boundaryResidual, std::sqrt(mis2));
    }
    return out;
}

}  // namespace nematic
