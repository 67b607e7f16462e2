#include "nematic/ldg.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <random>

namespace nematic {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// grad f of an axisymmetric tensor in frame components (closed under the
// algebra of matrices [[a,0,c],[0,b,0],[c,0,-a-b]]).
void bulk_gradient_components(double a, double b, double c,
                              const MaterialParams& p, double& ga, double& gb,
                              double& gc) {
    const double zz = -a - b;
    const double tr2 = a * a + b * b + zz * zz + 2.0 * c * c;
    // M^2 entries needed
    const double sq_rr = a * a + c * c;
    const double sq_tt = b * b;
    const double sq_rz = c * (a + zz);
    ga = -p.a() * a - p.b() * (sq_rr - tr2 / 3.0) + p.c() * tr2 * a;
    gb = -p.a() * b - p.b() * (sq_tt - tr2 / 3.0) + p.c() * tr2 * b;
    gc = -p.a() * c - p.b() * sq_rz + p.c() * tr2 * c;
}

double frob_norm_comp(double a, double b, double c) {
    return std::sqrt(comp_frob2(a, b, c));
}

// 5x5 Hessian of f at Q in the orthonormal basis coordinates.
Eigen::Matrix<double, 5, 5> bulk_hessian(const QTensor& Q,
                                         const MaterialParams& p) {
    const Mat3 M = Q.matrix();
    const double tr2 = Q.squaredNorm();
    Eigen::Matrix<double, 5, 5> H;
    std::array<Mat3, 5> basis;
    {
        const double s6 = std::sqrt(6.0), s2 = std::sqrt(2.0);
        basis[0] << -1 / s6, 0, 0, 0, -1 / s6, 0, 0, 0, 2 / s6;
        basis[1] << 1 / s2, 0, 0, 0, -1 / s2, 0, 0, 0, 0;
        basis[2] << 0, 1 / s2, 0, 1 / s2, 0, 0, 0, 0, 0;
        basis[3] << 0, 0, 1 / s2, 0, 0, 0, 1 / s2, 0, 0;
        basis[4] << 0, 0, 0, 0, 0, 1 / s2, 0, 1 / s2, 0;
    }
    for (int j = 0; j < 5; ++j) {
        for (int k = j; k < 5; ++k) {
            const Mat3& P = basis[static_cast<size_t>(j)];
            const Mat3& R = basis[static_cast<size_t>(k)];
            // d^2/dsdt f(Q + sP + tR)
            const double tQP = (M * P).trace();
            const double tQR = (M * R).trace();
            const double tPR = (P * R).trace();
            const double v = -p.a() * tPR -
                             p.b() * ((M * P * R).trace() + (M * R * P).trace()) +
                             p.c() * (2.0 * tQP * tQR + tr2 * tPR);
            H(j, k) = v;
            H(k, j) = v;
        }
    }
    return H;
}

struct ConstraintContext {
    const MaterialParams& p;
    const ExteriorGrid& g;
};

void impose_rows(AxiQField& F, const ConstraintContext& ctx) {
    const ExteriorGrid& g = ctx.g;
    const MaterialParams& p = ctx.p;
    const int Ns = g.Ns(), Nphi = g.Nphi();
    const double h = g.ds();

    // inner row r = 1
    for (int i = 0; i < Nphi; ++i) {
        double qs_rr, qs_tt, qs_rz;
        qs_components(p.sStar(), g.sin_phi(i), g.cos_phi(i), qs_rr, qs_tt, qs_rz);
        const size_t n0 = g.node(0, i), n1 = g.node(1, i), n2 = g.node(2, i);
        if (p.strongAnchoring()) {
            F.mrr[n0] = qs_rr;
            F.mtt[n0] = qs_tt;
            F.mrz[n0] = qs_rz;
        } else if (p.W() == 0.0) {
            F.mrr[n0] = (4.0 * F.mrr[n1] - F.mrr[n2]) / 3.0;
            F.mtt[n0] = (4.0 * F.mtt[n1] - F.mtt[n2]) / 3.0;
            F.mrz[n0] = (4.0 * F.mrz[n1] - F.mrz[n2]) / 3.0;
        } else {
            // (L/W) dQ/dnu = Qs - Q with nu = -e_r; in the mapped coordinate
            // dQ/dnu = +dQ/ds at s = 1, discretized one-sided second order.
            const double wl = p.W() / p.L();
            const double denom = 3.0 / (2.0 * h) + wl;
            auto row = [&](std::vector<double>& m, double qs) {
                m[n0] = ((4.0 * m[n1] - m[n2]) / (2.0 * h) + wl * qs) / denom;
            };
            row(F.mrr, qs_rr);
            row(F.mtt, qs_tt);
            row(F.mrz, qs_rz);
        }
    }

    // outer row r = R_out: uniform far field
    const double v = -p.sStar() / 3.0;
    for (int i = 0; i < Nphi; ++i) {
        const size_t n = g.node(Ns - 1, i);
        F.mrr[n] = v;
        F.mtt[n] = v;
        F.mrz[n] = 0.0;
    }

    // axis columns: m_rz = 0, m_rr = m_tt, m_rr + m_tt extrapolated evenly
    for (int j = 1; j < Ns - 1; ++j) {
        for (int i : {0, Nphi - 1}) {
            const int i1 = (i == 0) ? 1 : Nphi - 2;
            const int i2 = (i == 0) ? 2 : Nphi - 3;
            const size_t n = g.node(j, i), m1 = g.node(j, i1), m2 = g.node(j, i2);
            const double sum1 = F.mrr[m1] + F.mtt[m1];
            const double sum2 = F.mrr[m2] + F.mtt[m2];
            const double sum0 = (4.0 * sum1 - sum2) / 3.0;
            F.mrr[n] = sum0 / 2.0;
            F.mtt[n] = sum0 / 2.0;
            F.mrz[n] = 0.0;
        }
    }
}

double sup_norm(const AxiQField& F) {
    double s = 0.0;
    for (size_t n = 0; n < F.mrr.size(); ++n)
        s = std::max(s, comp_frob2(F.mrr[n], F.mtt[n], F.mrz[n]));
    return std::sqrt(s);
}

// Interior update direction L Lap Q - grad f(Q); returns max-norm.
double flow_direction(const AxiQField& F, const MaterialParams& p,
                      const ExteriorGrid& g, std::vector<double>& Ra,
                      std::vector<double>& Rb, std::vector<double>& Rc) {
    std::vector<double> La, Lb, Lc;
    discrete_laplacian(F, g, La, Lb, Lc);
    Ra.assign(g.nodeCount(), 0.0);
    Rb.assign(g.nodeCount(), 0.0);
    Rc.assign(g.nodeCount(), 0.0);
    double worst = 0.0;
    for (int j = 1; j < g.Ns() - 1; ++j) {
        for (int i = 1; i < g.Nphi() - 1; ++i) {
            const size_t n = g.node(j, i);
            double ga, gb, gc;
            bulk_gradient_components(F.mrr[n], F.mtt[n], F.mrz[n], p, ga, gb, gc);
            Ra[n] = p.L() * La[n] - ga;
            Rb[n] = p.L() * Lb[n] - gb;
            Rc[n] = p.L() * Lc[n] - gc;
            worst = std::max(worst, comp_frob2(Ra[n], Rb[n], Rc[n]));
        }
    }
    return std::sqrt(worst);
}

double explicit_stable_dt(const MaterialParams& p, const ExteriorGrid& g,
                          double lip) {
    double lam = 0.0;
    const double inv_ds2 = 1.0 / (g.ds() * g.ds());
    const double inv_dphi2 = 1.0 / (g.dphi() * g.dphi());
    for (int j = 1; j < g.Ns() - 1; ++j) {
        const double s = g.s(j);
        const double s4 = s * s * s * s;
        const double r = g.r(j);
        for (int i = 1; i < g.Nphi() - 1; ++i) {
            const double rho = g.rho(j, i);
            const double geom = 4.0 * s4 * inv_ds2 +
                                4.0 * inv_dphi2 / (r * r) + 4.0 / (rho * rho);
            lam = std::max(lam, geom);
        }
    }
    return 1.8 / (p.L() * lam + lip);
}

// --- semi-implicit machinery -------------------------------------------

// Unknown ordering: 3 * node + component (0: m_rr, 1: m_tt, 2: m_rz).
struct ImplicitOperator {
    SpMat A;
    std::unique_ptr<Eigen::SparseLU<SpMat>> lu;
};

std::unique_ptr<ImplicitOperator> build_implicit(const MaterialParams& p,
                                                 const ExteriorGrid& g,
                                                 double dt, double kappa) {
    const int Ns = g.Ns(), Nphi = g.Nphi();
    const auto N = static_cast<Eigen::Index>(g.nodeCount() * 3);
    std::vector<Triplet> trip;
    trip.reserve(static_cast<size_t>(N) * 8);
    const double inv_ds2 = 1.0 / (g.ds() * g.ds());
    const double inv_dphi2 = 1.0 / (g.dphi() * g.dphi());
    auto idx = [&](int j, int i, int comp) {
        return static_cast<Eigen::Index>(3 * g.node(j, i) + static_cast<size_t>(comp));
    };

    // interior rows: (1/dt + kappa) I - L Lap_h
    for (int j = 1; j < Ns - 1; ++j) {
        const double s = g.s(j);
        const double s4 = s * s * s * s;
        const double r = g.r(j);
        const double inv_r2 = 1.0 / (r * r);
        for (int i = 1; i < Nphi - 1; ++i) {
            const double sp = g.sin_phi(i);
            const double sp_e = std::sin(g.phi(i) + g.dphi() / 2.0);
            const double sp_w = std::sin(g.phi(i) - g.dphi() / 2.0);
            const double rho = r * sp;
            const double inv_rho2 = 1.0 / (rho * rho);
            const double c_rad = p.L() * s4 * inv_ds2;
            const double c_e = p.L() * inv_r2 * sp_e * inv_dphi2 / sp;
            const double c_w = p.L() * inv_r2 * sp_w * inv_dphi2 / sp;
            const double diag0 = 1.0 / dt + kappa + 2.0 * c_rad + c_e + c_w;
            for (int comp = 0; comp < 3; ++comp) {
                const auto row = idx(j, i, comp);
                trip.emplace_back(row, idx(j + 1, i, comp), -c_rad);
                trip.emplace_back(row, idx(j - 1, i, comp), -c_rad);
                trip.emplace_back(row, idx(j, i + 1, comp), -c_e);
                trip.emplace_back(row, idx(j, i - 1, comp), -c_w);
            }
            // curvature coupling: -L * (-2(a-b), +2(a-b), -c)/rho^2
            const double k2 = 2.0 * p.L() * inv_rho2;
            trip.emplace_back(idx(j, i, 0), idx(j, i, 0), diag0 + k2);
            trip.emplace_back(idx(j, i, 0), idx(j, i, 1), -k2);
            trip.emplace_back(idx(j, i, 1), idx(j, i, 1), diag0 + k2);
            trip.emplace_back(idx(j, i, 1), idx(j, i, 0), -k2);
            trip.emplace_back(idx(j, i, 2), idx(j, i, 2),
                              diag0 + p.L() * inv_rho2);
        }
    }

    // inner row (anchoring)
    const double h = g.ds();
    for (int i = 0; i < Nphi; ++i) {
        for (int comp = 0; comp < 3; ++comp) {
            const auto row = idx(0, i, comp);
            if (p.strongAnchoring()) {
                trip.emplace_back(row, row, 1.0);
            } else if (p.W() == 0.0) {
                trip.emplace_back(row, row, 1.0);
                trip.emplace_back(row, idx(1, i, comp), -4.0 / 3.0);
                trip.emplace_back(row, idx(2, i, comp), 1.0 / 3.0);
            } else {
                const double wl = p.W() / p.L();
                trip.emplace_back(row, row, 3.0 / (2.0 * h) + wl);
                trip.emplace_back(row, idx(1, i, comp), -4.0 / (2.0 * h));
                trip.emplace_back(row, idx(2, i, comp), 1.0 / (2.0 * h));
            }
        }
    }
    // outer row (Dirichlet Q_inf)
    for (int i = 0; i < Nphi; ++i)
        for (int comp = 0; comp < 3; ++comp)
            trip.emplace_back(idx(Ns - 1, i, comp), idx(Ns - 1, i, comp), 1.0);

    // axis columns, interior radial range
    for (int j = 1; j < Ns - 1; ++j) {
        for (int i : {0, Nphi - 1}) {
            const int i1 = (i == 0) ? 1 : Nphi - 2;
            const int i2 = (i == 0) ? 2 : Nphi - 3;
            // m_rr + m_tt - even extrapolation = 0
            trip.emplace_back(idx(j, i, 0), idx(j, i, 0), 1.0);
            trip.emplace_back(idx(j, i, 0), idx(j, i, 1), 1.0);
            trip.emplace_back(idx(j, i, 0), idx(j, i1, 0), -4.0 / 3.0);
            trip.emplace_back(idx(j, i, 0), idx(j, i1, 1), -4.0 / 3.0);
            trip.emplace_back(idx(j, i, 0), idx(j, i2, 0), 1.0 / 3.0);
            trip.emplace_back(idx(j, i, 0), idx(j, i2, 1), 1.0 / 3.0);
            // m_rr - m_tt = 0
            trip.emplace_back(idx(j, i, 1), idx(j, i, 0), 1.0);
            trip.emplace_back(idx(j, i, 1), idx(j, i, 1), -1.0);
            // m_rz = 0
            trip.emplace_back(idx(j, i, 2), idx(j, i, 2), 1.0);
        }
    }

    auto op = std::make_unique<ImplicitOperator>();
    op->A.resize(N, N);
    op->A.setFromTriplets(trip.begin(), trip.end());
    op->A.makeCompressed();
    op->lu = std::make_unique<Eigen::SparseLU<SpMat>>();
    op->lu->compute(op->A);
    if (op->lu->info() != Eigen::Success)
        throw std::runtime_error("ldg: sparse factorization failed");
    return op;
}

Eigen::VectorXd implicit_rhs(const AxiQField& F, const MaterialParams& p,
                             const ExteriorGrid& g, double dt, double kappa) {
    const int Ns = g.Ns(), Nphi = g.Nphi();
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(g.nodeCount() * 3));
    rhs.setZero();
    auto idx = [&](int j, int i, int comp) {
        return static_cast<Eigen::Index>(3 * g.node(j, i) + static_cast<size_t>(comp));
    };
    for (int j = 1; j < Ns - 1; ++j) {
        for (int i = 1; i < Nphi - 1; ++i) {
            const size_t n = g.node(j, i);
            double ga, gb, gc;
            bulk_gradient_components(F.mrr[n], F.mtt[n], F.mrz[n], p, ga, gb, gc);
            const double pref = 1.0 / dt + kappa;
            rhs[idx(j, i, 0)] = pref * F.mrr[n] - ga;
            rhs[idx(j, i, 1)] = pref * F.mtt[n] - gb;
            rhs[idx(j, i, 2)] = pref * F.mrz[n] - gc;
        }
    }
    if (p.W() > 0.0) {
        for (int i = 0; i < Nphi; ++i) {
            double qs_rr, qs_tt, qs_rz;
            qs_components(p.sStar(), g.sin_phi(i), g.cos_phi(i), qs_rr, qs_tt,
                          qs_rz);
            const double scale = p.strongAnchoring() ? 1.0 : p.W() / p.L();
            rhs[idx(0, i, 0)] = scale * qs_rr;
            rhs[idx(0, i, 1)] = scale * qs_tt;
            rhs[idx(0, i, 2)] = scale * qs_rz;
        }
    }
    const double v = -p.sStar() / 3.0;
    for (int i = 0; i < Nphi; ++i) {
        rhs[idx(Ns - 1, i, 0)] = v;
        rhs[idx(Ns - 1, i, 1)] = v;
    }
    return rhs;
}

void vector_to_field(const Eigen::VectorXd& x, AxiQField& F) {
    const size_t nodes = F.mrr.size();
    for (size_t n = 0; n < nodes; ++n) {
        F.mrr[n] = x[static_cast<Eigen::Index>(3 * n)];
        F.mtt[n] = x[static_cast<Eigen::Index>(3 * n + 1)];
        F.mrz[n] = x[static_cast<Eigen::Index>(3 * n + 2)];
    }
}

}  // namespace

BulkBounds bulk_bounds(const MaterialParams& p) {
    BulkBounds out{};
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const QTensor qinf = q_infinity(p);

    // largest radius with grad f(Q_inf + t D) . D < 0 over sampled directions
    const int n_dirs = 600;
    const double t_max = 6.0 * std::max(1.0, p.sStar());
    const double dt = t_max / 400.0;
    double qtilde = 0.0;
    std::vector<QTensor> dirs;
    dirs.reserve(n_dirs + 5);
    for (int k = 0; k < 5; ++k) {
        std::array<double, 5> u{};
        u[static_cast<size_t>(k)] = 1.0;
        dirs.emplace_back(u);
    }
    while (dirs.size() < static_cast<size_t>(n_dirs)) {
        std::array<double, 5> u;
        double n2 = 0.0;
        for (double& x : u) {
            x = uni(rng);
            n2 += x * x;
        }
        if (n2 < 1e-4 || n2 > 1.0) continue;
        const double inv = 1.0 / std::sqrt(n2);
        for (double& x : u) x *= inv;
        dirs.emplace_back(u);
    }
    for (const QTensor& D : dirs) {
        for (double t = t_max; t > 0.0; t -= dt) {
            const QTensor Q = qinf + t * D;
            if (bulk_gradient(Q, p).dot(D) * t < 0.0) {
                qtilde = std::max(qtilde, t + dt);
                break;
            }
        }
    }
    out.qtilde = qtilde;
    out.supBound = qtilde + p.sStar() * std::sqrt(2.0 / 3.0);

    // curvature range of f over |Q| <= supBound
    double neg = 0.0, lip = 0.0;
    for (int k = 0; k < 200; ++k) {
        std::array<double, 5> u;
        double n2 = 0.0;
        for (double& x : u) {
            x = uni(rng);
            n2 += x * x;
        }
        if (n2 < 1e-8) continue;
        const double scale = out.supBound * std::pow(uni(rng) * 0.5 + 0.5, 1.0) /
                             std::sqrt(n2);
        for (double& x : u) x *= scale;
        const auto H = bulk_hessian(QTensor(u), p);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> es(H);
        neg = std::max(neg, -es.eigenvalues().minCoeff());
        lip = std::max(lip, std::max(std::abs(es.eigenvalues().minCoeff()),
                                     std::abs(es.eigenvalues().maxCoeff())));
    }
    out.kappa = 1.2 * neg;
    out.lip = 1.2 * lip;
    return out;
}

EnergyBreakdown reduced_energy_parts(const AxiQField& F,
                                     const MaterialParams& p,
                                     const ExteriorGrid& g) {
    if (!F.shapeMatches(g))
        throw std::invalid_argument("reduced_energy: field/grid shape mismatch");
    EnergyBreakdown e;
    const int Ns = g.Ns(), Nphi = g.Nphi();

    for (int j = 0; j < Ns - 1; ++j) {
        const double dr = g.r(j + 1) - g.r(j);
        for (int i = 0; i < Nphi - 1; ++i) {
            const size_t n00 = g.node(j, i), n01 = g.node(j, i + 1);
            const size_t n10 = g.node(j + 1, i), n11 = g.node(j + 1, i + 1);
            auto avg = [&](const std::vector<double>& m) {
                return 0.25 * (m[n00] + m[n01] + m[n10] + m[n11]);
            };
            auto d_r = [&](const std::vector<double>& m) {
                return (0.5 * (m[n10] + m[n11]) - 0.5 * (m[n00] + m[n01])) / dr;
            };
            auto d_phi = [&](const std::vector<double>& m) {
                return (0.5 * (m[n01] + m[n11]) - 0.5 * (m[n00] + m[n10])) /
                       g.dphi();
            };
            const double a = avg(F.mrr), b = avg(F.mtt), c = avg(F.mrz);
            const double Tr = comp_frob2(d_r(F.mrr), d_r(F.mtt), d_r(F.mrz));
            const double Tp = comp_frob2(d_phi(F.mrr), d_phi(F.mtt), d_phi(F.mrz));
            const double Taz = 2.0 * (a - b) * (a - b) + 2.0 * c * c;
            e.elastic += 0.5 * p.L() *
                         (Tr * g.cellVol(j, i) + Tp * g.cellAng(j, i) +
                          Taz * g.cellAxis(j, i));
            Mat3 M;
            M << a, 0, c, 0, b, 0, c, 0, -a - b;
            e.bulk += bulk_potential(QTensor::fromMatrix(M), p) * g.cellVol(j, i);
        }
    }

    if (!p.strongAnchoring() && p.W() > 0.0) {
        for (int i = 0; i < Nphi; ++i) {
            double qs_rr, qs_tt, qs_rz;
            qs_components(p.sStar(), g.sin_phi(i), g.cos_phi(i), qs_rr, qs_tt,
                          qs_rz);
            const size_t n = g.node(0, i);
            const double d2 = comp_frob2(F.mrr[n] - qs_rr, F.mtt[n] - qs_tt,
                                         F.mrz[n] - qs_rz);
            e.surface += 0.5 * p.W() * d2 * g.surfaceWeight(i);
        }
    }
    e.total = e.elastic + e.bulk + e.surface;
    return e;
}

double reduced_energy(const AxiQField& F, const MaterialParams& p,
                      const ExteriorGrid& g) {
    return reduced_energy_parts(F, p, g).total;
}

AxiQField apply_anchoring(const AxiQField& F, const MaterialParams& p,
                          const ExteriorGrid& g) {
    AxiQField out = F;
    impose_rows(out, {p, g});
    return out;
}

double residual(const AxiQField& F, const MaterialParams& p,
                const ExteriorGrid& g) {
    std::vector<double> Ra, Rb, Rc;
    return flow_direction(F, p, g, Ra, Rb, Rc);
}

SupBoundCheck sup_bound_check(const AxiQField& F, const MaterialParams& p) {
    const BulkBounds bb = bulk_bounds(p);
    SupBoundCheck out{};
    out.supNorm = sup_norm(F);
    out.bound = bb.supBound;
    out.withinBound = out.supNorm <= out.bound;
    return out;
}

std::pair<AxiQField, SolveReport> relax(const AxiQField& F0,
                                        const MaterialParams& p,
                                        const ExteriorGrid& g,
                                        const StepSchedule& schedule) {
    if (!F0.shapeMatches(g))
        throw std::invalid_argument("relax: field/grid shape mismatch");
    const auto t_start = std::chrono::steady_clock::now();
    const BulkBounds bb = bulk_bounds(p);
    const double divergence_cap = 10.0 * bb.supBound;

    AxiQField F = F0;
    impose_rows(F, {p, g});
    SolveReport rep;

    double dt;
    if (schedule.mode == Stepping::Explicit)
        dt = schedule.dt > 0.0 ? schedule.dt : explicit_stable_dt(p, g, bb.lip);
    else
        dt = schedule.dt > 0.0 ? schedule.dt : 1.0;

    double energy = reduced_energy(F, p, g);
    std::vector<double> Ra, Rb, Rc;

    // semi-implicit factorization cache keyed by dt
    std::map<double, std::unique_ptr<ImplicitOperator>> ops;
    auto get_op = [&](double step) -> ImplicitOperator& {
        auto it = ops.find(step);
        if (it == ops.end()) {
            it = ops.emplace(step, build_implicit(p, g, step, bb.kappa)).first;
            ++rep.refactorizations;
        }
        return *it->second;
    };

    long accepted_streak = 0;
    for (long iter = 0; iter < schedule.maxIters; ++iter) {
        const double res = flow_direction(F, p, g, Ra, Rb, Rc);
        rep.residual = res;
        rep.iterations = iter;
        if (res < schedule.tol) {
            rep.converged = true;
            break;
        }
        if (sup_norm(F) > divergence_cap)
            throw SolveDivergence("ldg relax: |Q| exceeded 10x the a-priori bound",
                                  iter);

        bool accepted = false;
        for (int bt = 0; bt <= schedule.maxBacktracks; ++bt) {
            AxiQField T = F;
            if (schedule.mode == Stepping::Explicit) {
                for (int j = 1; j < g.Ns() - 1; ++j)
                    for (int i = 1; i < g.Nphi() - 1; ++i) {
                        const size_t n = g.node(j, i);
                        T.mrr[n] += dt * Ra[n];
                        T.mtt[n] += dt * Rb[n];
                        T.mrz[n] += dt * Rc[n];
                    }
                impose_rows(T, {p, g});
            } else {
                ImplicitOperator& op = get_op(dt);
                Eigen::VectorXd rhs = implicit_rhs(F, p, g, dt, bb.kappa);
                Eigen::VectorXd x = op.lu->solve(rhs);
                vector_to_field(x, T);
            }
            const double e_try = reduced_energy(T, p, g);
            if (e_try <= energy + 1e-12 * std::max(1.0, std::abs(energy))) {
                F = std::move(T);
                energy = e_try;
                rep.energyHistory.push_back(energy);
                accepted = true;
                ++accepted_streak;
                if (schedule.mode == Stepping::SemiImplicit &&
                    accepted_streak >= 8 && dt < schedule.dtMax) {
                    dt = std::min(schedule.dtMax, dt * schedule.dtGrowth);
                    accepted_streak = 0;
                }
                break;
            }
            accepted_streak = 0;
            ++rep.backtracks;
            dt *= 0.5;
        }
        if (!accepted)
            throw SolveDivergence(
                "ldg relax: energy increase beyond line-search recovery", iter);
    }
    if (!rep.converged) rep.iterations = schedule.maxIters;

    rep.energy = reduced_energy_parts(F, p, g);
    rep.finalEnergy = rep.energy.total;
    rep.supNorm = sup_norm(F);
    rep.residual = residual(F, p, g);
    if (rep.residual < schedule.tol) rep.converged = true;
    rep.wallTime = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t_start)
                       .count();
    return {std::move(F), rep};
}

}  // namespace nematic
