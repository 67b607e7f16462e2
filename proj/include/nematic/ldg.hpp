#pragma once

#include "nematic/axifield.hpp"
#include "nematic/grid.hpp"
#include "nematic/qtensor.hpp"

#include <stdexcept>
#include <string>

// Gradient-flow relaxation of the Landau-de Gennes free energy
//   F(Q) = int [ L/2 |grad Q|^2 + f(Q) ] + W/2 int_{r=1} |Q_s - Q|^2
// on the truncated exterior domain, with weak (Robin) or strong (Dirichlet)
// anchoring at the particle and Q = Q_inf at the outer row.

namespace nematic {

enum class Stepping { Explicit, SemiImplicit };

struct StepSchedule {
    Stepping mode = Stepping::Explicit;
    double tol = 1e-8;
    long maxIters = 200000;
    /// Explicit: fixed step, 0 = stability bound. Semi-implicit: initial step.
    double dt = 0.0;
    double dtMax = 64.0;    // semi-implicit cap
    double dtGrowth = 2.0;  // growth factor after sustained acceptance
    int maxBacktracks = 40;
};

struct EnergyBreakdown {
    double elastic = 0.0;
    double bulk = 0.0;
    double surface = 0.0;
    double total = 0.0;
};

struct SolveReport {
    long iterations = 0;
    bool converged = false;
    double finalEnergy = 0.0;
    double residual = 0.0;
    double supNorm = 0.0;
    double wallTime = 0.0;
    EnergyBreakdown energy;
    long backtracks = 0;
    int refactorizations = 0;
    /// Energy after every accepted step (monotone nonincreasing).
    std::vector<double> energyHistory;
};

struct SolveDivergence : std::runtime_error {
    explicit SolveDivergence(const std::string& what, long iteration)
        : std::runtime_error(what), iteration(iteration) {}
    long iteration;
};

/// Numerically determined potential bounds for (a, b, c):
///   qtilde:  radius beyond which grad f(Q_inf + Qt) . Qt >= 0,
///   supBound: qtilde + s* sqrt(2/3), the a-priori sup bound on |Q|,
///   kappa:   max negative curvature of f over |Q| <= supBound,
///   lip:     max |curvature| over the same ball.
struct BulkBounds {
    double qtilde;
    double supBound;
    double kappa;
    double lip;
};
BulkBounds bulk_bounds(const MaterialParams& p);

/// Total reduced free energy per unit azimuthal radian (elastic + bulk +
/// surface for finite W > 0). Throws on shape mismatch.
double reduced_energy(const AxiQField& F, const MaterialParams& p,
                      const ExteriorGrid& g);
EnergyBreakdown reduced_energy_parts(const AxiQField& F,
                                     const MaterialParams& p,
                                     const ExteriorGrid& g);

/// Re-imposes all constrained rows: anchoring at r = 1 (Dirichlet Q_s for
/// W = inf, one-sided second-order Robin reconstruction for finite W > 0,
/// natural for W = 0), Q_inf at the outer row, and axis regularity
/// (m_rz = 0, m_rr = m_tt, even extrapolation of m_rr + m_tt).
AxiQField apply_anchoring(const AxiQField& F, const MaterialParams& p,
                          const ExteriorGrid& g);

/// Max-norm over interior nodes of |L Lap_h Q - grad f(Q)|_F.
double residual(const AxiQField& F, const MaterialParams& p,
                const ExteriorGrid& g);

/// Gradient flow until residual < tol or the iteration cap. Energy is
/// non-increasing over accepted steps (backtracking line search); throws
/// SolveDivergence when backtracking cannot recover or |Q| exceeds ten
/// times the a-priori bound.
std::pair<AxiQField, SolveReport> relax(const AxiQField& F0,
                                        const MaterialParams& p,
                                        const ExteriorGrid& g,
                                        const StepSchedule& schedule);

/// Max nodal |Q|_F against the implemented a-priori bound.
struct SupBoundCheck {
    double supNorm;
    double bound;
    bool withinBound;
};
SupBoundCheck sup_bound_check(const AxiQField& F, const MaterialParams& p);

}  // namespace nematic
