#pragma once

#include "nematic/axifield.hpp"
#include "nematic/grid.hpp"
#include "nematic/ldg.hpp"
#include "nematic/quadrupole.hpp"

#include <vector>

// Cross-cutting numerical studies: far-field decay profiles, the
// small-particle convergence rate in the elastic constant, and the
// eigenvalue-exchange diagnostic along the equator.

namespace nematic {

struct DecayProfile {
    std::vector<double> radii;       // strictly increasing
    std::vector<double> distScaled;  // max_phi dist(Q, U*) * r / sqrt(L)
    std::vector<double> qdiffScaled; // max_phi |Q - Q_inf| * r
};

/// Sampled over ~nRadii log-spaced node radii in [2, R_out/2], away from
/// both the anchoring and the truncation rows.
DecayProfile decay_profile(const AxiQField& F, const MaterialParams& p,
                           const ExteriorGrid& g, int nRadii = 20);

struct RateFit {
    std::vector<double> params;  // the swept L values
    std::vector<double> errors;  // sup |Q - Q0| over the shell 1 <= r <= 3
    double slope;                // fitted exponent rho in error ~ L^-rho
    double fitResidual;          // rms residual of the log-log fit
};

struct StudyMaterial {
    double a, b, c;
};

/// Solves the equilibrium at each L (with W = w L, or strong anchoring for
/// w = inf), records the sup-error against the closed-form limit on the
/// compact shell 1 <= r <= 3, and fits the log-log rate. Requires at least
/// 3 values of L; member solves may run concurrently (`threads`).
RateFit convergence_study(const std::vector<double>& Ls, double w,
                          const StudyMaterial& mat, const ExteriorGrid& g,
                          const StepSchedule& schedule, int threads = 0);

struct ExchangeRow {
    double r;
    double l1, l2, l3;
    double beta;
};

struct ExchangeProfile {
    std::vector<ExchangeRow> rows;
    bool crossed = false;
    double rCrossing = std::numeric_limits<double>::quiet_NaN();
    double minGap = std::numeric_limits<double>::infinity();
    double rMinGap = std::numeric_limits<double>::quiet_NaN();
};

/// Branches of the closed-form limit along the equator; the crossing is
/// polished by bisection on the signed branch gap alpha(r) - beta(r).
ExchangeProfile exchange_profile_q0(const QuadrupolarConfig& cfg,
                                    const std::vector<double>& rs,
                                    double tol = 1e-8);

/// Equatorial branches of a solved field (the two middle rows are averaged
/// when Nphi is even); the crossing is the parabolic vertex of the squared
/// gap around its minimum.
ExchangeProfile exchange_profile_field(const AxiQField& F,
                                       const ExteriorGrid& g, double tol);

/// Least-squares slope of log(error) against log(param): error ~ param^-rho
/// returns rho; also used by the grid-refinement order checks.
double fit_rate(const std::vector<double>& params,
                const std::vector<double>& errors, double* rms = nullptr);

}  // namespace nematic
