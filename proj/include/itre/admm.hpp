#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "itre/image.hpp"

namespace itre {

struct SolverConfig {
  double alpha_exp = 0.25;  // over-exposure feedback strength, >= 0
  double eps = 0.001;       // gradient guard in the lambda weight
  double eps1 = 0.1;        // Retinex division guard
  double lambda_g = 0.001;  // lambda weight scale
  double rho0 = 2.0;
  double p = 1.5;           // penalty growth factor, > 1
  int max_iterations = 20;
  double convergence_tol = 1e-4;
  // Alternate dual grouping D^T(rho*Q - Y) for the T-update numerator, kept
  // as a fallback should the printed form ever stall on feasibility.
  bool dual_sign_alternate = false;
};

struct SolverState {
  TransmissionMap t;
  GrayMap qh, qv;  // auxiliary gradient planes
  GrayMap yh, yv;  // dual planes
  GrayMap e;       // exposure feedback, lagged one iteration
  double rho = 0.0;
  int iteration = 0;
};

struct TraceRow {
  int iteration;
  double objective;
  double residual;  // ||Q - grad T||_F
  double rho;
};

// Per-pixel weight exp(-sat^2) * lambda_g / (|grad luma| + eps). Depends on
// the input image only; computed once per solve.
LambdaMap lambda_map(const ImagePlanar& img, const SolverConfig& cfg);

// Spectral solver for the T-subproblem on a fixed grid. One instance per
// solve; instances own their FFT buffers and are not shareable across threads.
class TUpdateSolver {
 public:
  TUpdateSolver(int height, int width);
  ~TUpdateSolver();
  TUpdateSolver(const TUpdateSolver&) = delete;
  TUpdateSolver& operator=(const TUpdateSolver&) = delete;

  // T = F^-1[ (F(target + rho*D^T(Q + Y/rho)) + F(E)) / (1 + rho*sum_d |F(D_d)|^2) ]
  TransmissionMap solve(const SolverState& state, const TransmissionMap& target,
                        const SolverConfig& cfg);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot wrapper around TUpdateSolver.
TransmissionMap t_update(const SolverState& state, const TransmissionMap& target,
                         const SolverConfig& cfg);

// Soft-shrinkage of (grad T - Y/rho) with per-pixel threshold lambda/rho.
std::pair<GrayMap, GrayMap> q_update(const SolverState& state,
                                     const LambdaMap& lam);

// Y += rho*(Q - grad T) per plane, then rho *= p.
void dual_update(SolverState& state, const SolverConfig& cfg);

// alpha_exp * nor(s_gray/(T + eps1) - 1).
GrayMap e_update(const TransmissionMap& t, const GrayMap& s_gray,
                 const SolverConfig& cfg);

// Value of the full variational objective at t.
double admm_objective(const TransmissionMap& t, const TransmissionMap& target,
                      const LambdaMap& lam, const GrayMap& s_gray,
                      const SolverConfig& cfg);

struct RefineResult {
  TransmissionMap t;       // final map, clamped into [kTransmissionFloor, 1]
  SolverState state;       // last iterate, pre-clamp
  std::vector<TraceRow> trace;
};

RefineResult refine_transmission_full(const TransmissionMap& target,
                                      const ImagePlanar& img,
                                      const SolverConfig& cfg,
                                      bool want_trace = false);

TransmissionMap refine_transmission(const TransmissionMap& target,
                                    const ImagePlanar& img,
                                    const SolverConfig& cfg);

}  // namespace itre
