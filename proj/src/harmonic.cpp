#include "nematic/harmonic.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>

namespace nematic {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

double clamp_psi(double v) { return std::clamp(v, 0.0, M_PI); }

// Diagnosed axis value for the relaxation: 0 or pi from the adjacent column.
double axis_value(const PsiField& F, int j, int i_axis) {
    const int i1 = (i_axis == 0) ? 1 : F.Nphi - 2;
    return F.at(j, i1) < M_PI / 2.0 ? 0.0 : M_PI;
}

void impose_psi_rows(PsiField& F, const ExteriorGrid& g, double farFieldPsi) {
    const int Ns = g.Ns(), Nphi = g.Nphi();
    for (int i = 0; i < Nphi; ++i) {
        F.at(0, i) = g.phi(i);           // strong anchoring, psi = phi
        F.at(Ns - 1, i) = farFieldPsi;   // far-field gauge
    }
    for (int j = 1; j < Ns - 1; ++j) {
        F.at(j, 0) = axis_value(F, j, 0);
        F.at(j, Nphi - 1) = axis_value(F, j, Nphi - 1);
    }
}

// Interior flow direction Lap psi - sin(2 psi)/(2 rho^2) with the projected
// (clamped) residual convention; returns the max-norm.
double psi_flow(const PsiField& F, const ExteriorGrid& g,
                std::vector<double>& R) {
    const int Ns = g.Ns(), Nphi = g.Nphi();
    R.assign(g.nodeCount(), 0.0);
    const double inv_ds2 = 1.0 / (g.ds() * g.ds());
    const double inv_dphi2 = 1.0 / (g.dphi() * g.dphi());
    double worst = 0.0;
    for (int j = 1; j < Ns - 1; ++j) {
        const double s = g.s(j);
        const double s4 = s * s * s * s;
        const double r = g.r(j);
        const double inv_r2 = 1.0 / (r * r);
        for (int i = 1; i < Nphi - 1; ++i) {
            const size_t n = F.node(j, i);
            const double sp = g.sin_phi(i);
            const double sp_e = std::sin(g.phi(i) + g.dphi() / 2.0);
            const double sp_w = std::sin(g.phi(i) - g.dphi() / 2.0);
            const double rho = r * sp;
            const double rad =
                s4 * (F.psi[F.node(j + 1, i)] - 2.0 * F.psi[n] +
                      F.psi[F.node(j - 1, i)]) *
                inv_ds2;
            const double ang = (sp_e * (F.psi[F.node(j, i + 1)] - F.psi[n]) -
                                sp_w * (F.psi[n] - F.psi[F.node(j, i - 1)])) *
                               inv_dphi2 / sp;
            double raw = rad + inv_r2 * ang -
                         std::sin(2.0 * F.psi[n]) / (2.0 * rho * rho);
            R[n] = raw;
            // projected residual at active clamps
            if (F.psi[n] <= 0.0 && raw < 0.0) raw = 0.0;
            if (F.psi[n] >= M_PI && raw > 0.0) raw = 0.0;
            worst = std::max(worst, std::abs(raw));
        }
    }
    return worst;
}

double psi_explicit_dt(const ExteriorGrid& g) {
    double lam = 0.0;
    const double inv_ds2 = 1.0 / (g.ds() * g.ds());
    const double inv_dphi2 = 1.0 / (g.dphi() * g.dphi());
    for (int j = 1; j < g.Ns() - 1; ++j) {
        const double s = g.s(j);
        const double s4 = s * s * s * s;
        const double r = g.r(j);
        for (int i = 1; i < g.Nphi() - 1; ++i) {
            const double rho = g.rho(j, i);
            lam = std::max(lam, 4.0 * s4 * inv_ds2 +
                                    4.0 * inv_dphi2 / (r * r) +
                                    1.0 / (rho * rho));
        }
    }
    return 1.8 / lam;
}

struct PsiOperator {
    SpMat A;
    std::unique_ptr<Eigen::SparseLU<SpMat>> lu;
};

// (1/dt + 1/rho^2) psi - Lap psi, with identity rows for the constrained
// nodes; the 1/rho^2 shift dominates the potential's curvature everywhere.
std::unique_ptr<PsiOperator> build_psi_operator(const ExteriorGrid& g,
                                                double dt) {
    const int Ns = g.Ns(), Nphi = g.Nphi();
    const auto N = static_cast<Eigen::Index>(g.nodeCount());
    std::vector<Triplet> trip;
    trip.reserve(static_cast<size_t>(N) * 5);
    const double inv_ds2 = 1.0 / (g.ds() * g.ds());
    const double inv_dphi2 = 1.0 / (g.dphi() * g.dphi());
    auto idx = [&](int j, int i) { return static_cast<Eigen::Index>(g.node(j, i)); };

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
            const double c_rad = s4 * inv_ds2;
            const double c_e = inv_r2 * sp_e * inv_dphi2 / sp;
            const double c_w = inv_r2 * sp_w * inv_dphi2 / sp;
            trip.emplace_back(idx(j, i), idx(j, i),
                              1.0 / dt + 1.0 / (rho * rho) + 2.0 * c_rad + c_e +
                                  c_w);
            trip.emplace_back(idx(j, i), idx(j + 1, i), -c_rad);
            trip.emplace_back(idx(j, i), idx(j - 1, i), -c_rad);
            trip.emplace_back(idx(j, i), idx(j, i + 1), -c_e);
            trip.emplace_back(idx(j, i), idx(j, i - 1), -c_w);
        }
    }
    for (int i = 0; i < Nphi; ++i) {
        trip.emplace_back(idx(0, i), idx(0, i), 1.0);
        trip.emplace_back(idx(Ns - 1, i), idx(Ns - 1, i), 1.0);
    }
    for (int j = 1; j < Ns - 1; ++j) {
        trip.emplace_back(idx(j, 0), idx(j, 0), 1.0);
        trip.emplace_back(idx(j, Nphi - 1), idx(j, Nphi - 1), 1.0);
    }

    auto op = std::make_unique<PsiOperator>();
    op->A.resize(N, N);
    op->A.setFromTriplets(trip.begin(), trip.end());
    op->A.makeCompressed();
    op->lu = std::make_unique<Eigen::SparseLU<SpMat>>();
    op->lu->compute(op->A);
    if (op->lu->info() != Eigen::Success)
        throw std::runtime_error("psi_relax: sparse factorization failed");
    return op;
}

}  // namespace

PsiField psi_init_boundary_decay(const ExteriorGrid& g, double k) {
    PsiField F(g);
    for (int j = 0; j < g.Ns(); ++j)
        for (int i = 0; i < g.Nphi(); ++i)
            F.at(j, i) = g.phi(i) * std::exp(-k * (g.r(j) - 1.0));
    impose_psi_rows(F, g, 0.0);
    return F;
}

PsiField psi_init_hedgehog_below(const ExteriorGrid& g, double z_d) {
    PsiField F(g);
    for (int j = 0; j < g.Ns(); ++j) {
        for (int i = 0; i < g.Nphi(); ++i) {
            const double rho = g.rho(j, i);
            const double z = g.r(j) * g.cos_phi(i);
            const double phi_particle = std::atan2(rho, z);
            const double phi_defect = std::atan2(rho, z - z_d);
            F.at(j, i) = clamp_psi(phi_particle - phi_defect);
        }
    }
    impose_psi_rows(F, g, 0.0);
    return F;
}

PsiField psi_init_uniform(const ExteriorGrid& g) {
    PsiField F(g);
    for (int i = 0; i < g.Nphi(); ++i) F.at(0, i) = g.phi(i);
    return F;
}

PsiField psi_mirror(const PsiField& F) {
    PsiField M = F;
    for (int j = 0; j < F.Ns; ++j)
        for (int i = 0; i < F.Nphi; ++i)
            M.at(j, i) = M_PI - F.at(j, F.Nphi - 1 - i);
    return M;
}

double psi_energy(const PsiField& F, const ExteriorGrid& g) {
    if (!F.shapeMatches(g))
        throw std::invalid_argument("psi_energy: field/grid shape mismatch");
    double e = 0.0;
    for (int j = 0; j < g.Ns() - 1; ++j) {
        const double dr = g.r(j + 1) - g.r(j);
        for (int i = 0; i < g.Nphi() - 1; ++i) {
            const double p00 = F.at(j, i), p01 = F.at(j, i + 1);
            const double p10 = F.at(j + 1, i), p11 = F.at(j + 1, i + 1);
            const double pc = 0.25 * (p00 + p01 + p10 + p11);
            const double d_r = (0.5 * (p10 + p11) - 0.5 * (p00 + p01)) / dr;
            const double d_phi = (0.5 * (p01 + p11) - 0.5 * (p00 + p10)) / g.dphi();
            const double s = std::sin(pc);
            e += d_r * d_r * g.cellVol(j, i) + d_phi * d_phi * g.cellAng(j, i) +
                 s * s * g.cellAxis(j, i);
        }
    }
    return e;
}

std::pair<PsiField, SolveReport> psi_relax(const PsiField& F0,
                                           const ExteriorGrid& g,
                                           const StepSchedule& schedule,
                                           double farFieldPsi) {
    if (!F0.shapeMatches(g))
        throw std::invalid_argument("psi_relax: field/grid shape mismatch");
    const auto t_start = std::chrono::steady_clock::now();
    PsiField F = F0;
    for (double& v : F.psi) v = clamp_psi(v);
    impose_psi_rows(F, g, farFieldPsi);

    SolveReport rep;
    double dt;
    if (schedule.mode == Stepping::Explicit)
        dt = schedule.dt > 0.0 ? schedule.dt : psi_explicit_dt(g);
    else
        dt = schedule.dt > 0.0 ? schedule.dt : 1.0;

    double energy = psi_energy(F, g);
    std::vector<double> R;
    std::map<double, std::unique_ptr<PsiOperator>> ops;
    auto get_op = [&](double step) -> PsiOperator& {
        auto it = ops.find(step);
        if (it == ops.end()) {
            it = ops.emplace(step, build_psi_operator(g, step)).first;
            ++rep.refactorizations;
        }
        return *it->second;
    };

    long accepted_streak = 0;
    for (long iter = 0; iter < schedule.maxIters; ++iter) {
        const double res = psi_flow(F, g, R);
        rep.residual = res;
        rep.iterations = iter;
        if (res < schedule.tol) {
            rep.converged = true;
            break;
        }

        bool accepted = false;
        for (int bt = 0; bt <= schedule.maxBacktracks; ++bt) {
            PsiField T = F;
            if (schedule.mode == Stepping::Explicit) {
                for (int j = 1; j < g.Ns() - 1; ++j)
                    for (int i = 1; i < g.Nphi() - 1; ++i) {
                        const size_t n = T.node(j, i);
                        T.psi[n] = clamp_psi(T.psi[n] + dt * R[n]);
                    }
            } else {
                PsiOperator& op = get_op(dt);
                Eigen::VectorXd rhs(static_cast<Eigen::Index>(g.nodeCount()));
                rhs.setZero();
                for (int j = 1; j < g.Ns() - 1; ++j)
                    for (int i = 1; i < g.Nphi() - 1; ++i) {
                        const size_t n = F.node(j, i);
                        const double rho = g.rho(j, i);
                        rhs[static_cast<Eigen::Index>(n)] =
                            (1.0 / dt + 1.0 / (rho * rho)) * F.psi[n] -
                            std::sin(2.0 * F.psi[n]) / (2.0 * rho * rho);
                    }
                for (int i = 0; i < g.Nphi(); ++i) {
                    rhs[static_cast<Eigen::Index>(F.node(0, i))] = g.phi(i);
                    rhs[static_cast<Eigen::Index>(F.node(g.Ns() - 1, i))] =
                        farFieldPsi;
                }
                for (int j = 1; j < g.Ns() - 1; ++j) {
                    rhs[static_cast<Eigen::Index>(F.node(j, 0))] =
                        F.at(j, 0);  // lagged diagnosed axis values
                    rhs[static_cast<Eigen::Index>(F.node(j, g.Nphi() - 1))] =
                        F.at(j, g.Nphi() - 1);
                }
                Eigen::VectorXd x = op.lu->solve(rhs);
                for (size_t n = 0; n < g.nodeCount(); ++n)
                    T.psi[n] = clamp_psi(x[static_cast<Eigen::Index>(n)]);
            }
            impose_psi_rows(T, g, farFieldPsi);
            const double e_try = psi_energy(T, g);
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
                "psi_relax: energy increase beyond line-search recovery", iter);
    }
    if (!rep.converged) rep.iterations = schedule.maxIters;

    rep.finalEnergy = energy;
    rep.energy.total = energy;
    rep.energy.elastic = energy;
    double sup = 0.0;
    for (double v : F.psi) sup = std::max(sup, std::abs(v));
    rep.supNorm = sup;
    std::vector<double> Rf;
    rep.residual = psi_flow(F, g, Rf);
    if (rep.residual < schedule.tol) rep.converged = true;
    rep.wallTime = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t_start)
                       .count();
    return {std::move(F), rep};
}

DefectCensus detect_defects(const PsiField& F, const ExteriorGrid& g) {
    DefectCensus census;
    const int Ns = g.Ns(), Nphi = g.Nphi();

    // classify one axis sample from up to three adjacent columns
    auto classify = [&](int j, bool upper) -> int {  // 0, 1 (pi), -1 unresolved
        for (int step = 1; step <= 3; ++step) {
            const int i = upper ? step : Nphi - 1 - step;
            if (i < 1 || i > Nphi - 2) break;
            const double v = F.at(j, i);
            if (v < M_PI / 4.0) return 0;
            if (v > 3.0 * M_PI / 4.0) return 1;
        }
        return -1;
    };
    auto column_psi = [&](int j, bool upper) {
        return F.at(j, upper ? 1 : Nphi - 2);
    };

    // scan each segment in increasing z
    for (bool upper : {false, true}) {
        std::vector<int> js;
        if (upper)
            for (int j = 0; j < Ns; ++j) js.push_back(j);      // z = +r increasing
        else
            for (int j = Ns - 1; j >= 0; --j) js.push_back(j);  // z = -r increasing
        int prev_state = -2;
        int prev_j = -1;
        for (int j : js) {
            const int st = classify(j, upper);
            const double z = upper ? g.r(j) : -g.r(j);
            if (st == -1) {
                census.unresolved.push_back(z);
                continue;
            }
            if (prev_state >= 0 && st != prev_state) {
                const double za = upper ? g.r(prev_j) : -g.r(prev_j);
                const double zb = z;
                const double va = column_psi(prev_j, upper);
                const double vb = column_psi(j, upper);
                double z0 = 0.5 * (za + zb);
                if (std::abs(vb - va) > 1e-12)
                    z0 = za + (M_PI / 2.0 - va) * (zb - za) / (vb - va);
                census.defects.push_back({z0, st == 1 ? +1 : -1});
            }
            prev_state = st;
            prev_j = j;
        }
    }
    std::sort(census.defects.begin(), census.defects.end(),
              [](const Defect& a, const Defect& b) { return a.z0 < b.z0; });
    std::sort(census.unresolved.begin(), census.unresolved.end());
    return census;
}

double degree(const PsiField& F, const ExteriorGrid& g, double r) {
    if (r < 1.0 || r > g.Rout())
        throw std::domain_error("degree: radius outside the domain");
    const DefectCensus census = detect_defects(F, g);
    const double dr_local = g.ds() * r * r;  // |dr| = ds / s^2
    for (const Defect& d : census.defects)
        if (std::abs(std::abs(d.z0) - r) < dr_local)
            throw std::domain_error("degree: radius within one cell of a defect");

    // interpolate psi along the circle (linear in the mapped coordinate)
    const double s = 1.0 / r;
    int j0 = static_cast<int>(std::floor((1.0 - s) / g.ds()));
    j0 = std::clamp(j0, 0, g.Ns() - 2);
    const double t = (g.s(j0) - s) / g.ds();
    std::vector<double> psi_r(static_cast<size_t>(g.Nphi()));
    for (int i = 0; i < g.Nphi(); ++i)
        psi_r[static_cast<size_t>(i)] =
            (1.0 - t) * F.at(j0, i) + t * F.at(j0 + 1, i);

    const int N = g.Nphi();
    auto dpsi = [&](int i) {
        if (i == 0)
            return (-3.0 * psi_r[0] + 4.0 * psi_r[1] - psi_r[2]) / (2.0 * g.dphi());
        if (i == N - 1)
            return (3.0 * psi_r[static_cast<size_t>(N - 1)] -
                    4.0 * psi_r[static_cast<size_t>(N - 2)] +
                    psi_r[static_cast<size_t>(N - 3)]) /
                   (2.0 * g.dphi());
        return (psi_r[static_cast<size_t>(i + 1)] -
                psi_r[static_cast<size_t>(i - 1)]) /
               (2.0 * g.dphi());
    };
    double sum = 0.0;
    for (int i = 0; i < N - 1; ++i) {
        const double ga = dpsi(i) * std::sin(psi_r[static_cast<size_t>(i)]);
        const double gb = dpsi(i + 1) * std::sin(psi_r[static_cast<size_t>(i + 1)]);
        sum += 0.5 * (ga + gb) * g.dphi();
    }
    return -0.5 * sum;
}

AxiQField lift_to_qtensor(const PsiField& F, const MaterialParams& p) {
    AxiQField out;
    out.Ns = F.Ns;
    out.Nphi = F.Nphi;
    out.mrr.resize(F.psi.size());
    out.mtt.resize(F.psi.size());
    out.mrz.resize(F.psi.size());
    const double s = p.sStar();
    for (size_t n = 0; n < F.psi.size(); ++n) {
        const double sp = std::sin(F.psi[n]);
        const double cp = std::cos(F.psi[n]);
        out.mrr[n] = s * (sp * sp - 1.0 / 3.0);
        out.mtt[n] = -s / 3.0;
        out.mrz[n] = s * sp * cp;
    }
    return out;
}

double psi_hardy_tail(const PsiField& F, const ExteriorGrid& g, double rMin) {
    double tail = 0.0;
    for (int j = 0; j < g.Ns() - 1; ++j) {
        if (g.cellR(j, 0) < rMin) continue;
        for (int i = 0; i < g.Nphi() - 1; ++i) {
            const double pc = 0.25 * (F.at(j, i) + F.at(j, i + 1) +
                                      F.at(j + 1, i) + F.at(j + 1, i + 1));
            const double sp = std::sin(pc);
            tail += sp * sp * g.cellAng(j, i);
        }
    }
    return tail;
}

}  // namespace nematic
