#ifndef CAPMAX_DESIGN_HPP
#define CAPMAX_DESIGN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "capmax/blocks.hpp"
#include "capmax/capacity.hpp"
#include "capmax/errors.hpp"
#include "capmax/models.hpp"
#include "capmax/types.hpp"

namespace capmax {

/// Backtracking found no acceptable decrease; callers may grow the penalty
/// and retry.
struct LineSearchStall : NumericalError {
    using NumericalError::NumericalError;
};

/// Optimizer state for the scaled augmented Lagrangian: design parameters p,
/// auxiliary capacities c, multipliers gamma, penalty rho.
struct DesignState {
    RVector p;
    RVector c;
    RVector gamma;
    double rho = 1.0;
    int outer_iter = 0;
};

struct DesignOptions {
    double beta = 1e-6;
    double rho0 = 1.0;
    double rho_growth = 5.0;       // penalty multiplier when violation stalls
    double violation_shrink = 0.5; // required per-outer violation decay
    double inner_grad_tol = 1e-6;  // floor of the inner stationarity tolerance
    double inner_tol_scale = 1e-2; // effective tol = max(floor, scale / rho)
    double min_step = 1e-14;       // line-search step underflow => stall
    double tol_c = 1e-4;           // outer constraint-violation tolerance
    double tol_f = 1e-6;           // outer objective-change tolerance
    int max_outer = 50;
    int max_inner = 500;
    double armijo_factor = 0.5;
    double armijo_c1 = 1e-4;
    int max_backtracks = 60;
    double bb_min = 1e-8; // Barzilai-Borwein step clip
    double bb_max = 1e2;
    std::uint64_t seed = 0; // recorded with results; p0 generation is the caller's
    int threads = 0;
};

struct OuterTraceRow {
    int iter = 0;
    double min_capacity = 0.0;
    double violation = 0.0;
    double rho = 0.0;
    double auglag = 0.0;
    int inner_iters = 0;
};

struct DesignResult {
    RVector p_final;
    CapacityReport report;
    std::vector<OuterTraceRow> trace;
    std::string termination; // "converged" or "max_iter"
    double final_violation = 0.0;
};

/// Euclidean projection onto {u : ||u||_1 <= radius}; exact sort-based
/// threshold.
RVector project_l1_ball(const RVector& v, double radius);

/// prox of lambda*||.||_inf via Moreau decomposition:
/// v - lambda * project_l1_ball(v / lambda, 1).
RVector prox_linf(const RVector& v, double lambda);

/// Scaled augmented Lagrangian value
/// ||c||_inf + sum_r (rho/2) |c_r - d_r(p) + gamma_r/rho|^2.
double auglag_value(const SensingModel& model, const BlockStructure& bs,
                    const DesignState& state, double beta);

/// Exact gradient of the smooth penalty term with respect to p.
RVector grad_p(const SensingModel& model, const BlockStructure& bs,
               const DesignState& state, double beta);

/// Exact minimizer in c: prox_linf(d - gamma/rho, 1/rho).
RVector update_c(const DesignState& state, const RVector& d);

/// One line-searched projected-gradient step in p. Throws LineSearchStall
/// when no decrease is found.
RVector update_p(const SensingModel& model, const BlockStructure& bs,
                 const DesignState& state, const DesignOptions& opts);

/// Multiplier ascent: gamma_r + rho * (c_r - d_r).
RVector update_multipliers(const DesignState& state, const RVector& d);

/// Full method-of-multipliers run (Algorithm: init c = d(p0), gamma = 0;
/// alternate inner minimization, multiplier update, penalty growth).
DesignResult design(const SensingModel& model, const BlockStructure& bs,
                    const RVector& p0, const DesignOptions& opts);

} // namespace capmax

#endif
