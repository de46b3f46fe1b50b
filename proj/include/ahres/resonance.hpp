#pragma once

#include "ahres/discretize.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ahres {

enum ResultFlag : unsigned {
  kStable = 1u,
  kSpurious = 2u,
  kBranchPointNear = 4u,
  kCavityConditioned = 8u,
  kNoConvergence = 16u,
};

std::string flags_string(unsigned flags);

struct ResonanceResult {
  cplx sigma, lambda;
  int k = 0, ell = 0;
  double residual = 1.0;
  double stability = -1.0;  // distance to the match at doubled resolution, -1 if unmatched
  int residue_rank = 0;
  unsigned flags = 0;
  int iterations = 0;
};

// {|sigma| <= radius, Im sigma >= im_min}
struct Window {
  double radius = 6.0;
  double im_min = -2.5;
  bool contains(cplx s, double slack = 0.0) const {
    return std::abs(s) <= radius + slack && s.imag() >= im_min - slack;
  }
};

Window parse_window(const std::string& text);
std::string window_string(const Window& w);

std::vector<ResonanceResult> solve_pencil(const DiscretePencil& dp, const Window& w);
ResonanceResult refine(const DiscretePencil& dp, cplx sigma0,
                       double max_move = std::numeric_limits<double>::infinity());
std::vector<ResonanceResult> filter_spurious(const std::vector<ResonanceResult>& coarse,
                                             const std::vector<ResonanceResult>& fine, double tol);
int residue_rank(const DiscretePencil& dp, cplx sigma_star);
// scaled smallest singular value of P(sigma)
double pencil_residual(const DiscretePencil& dp, cplx sigma);

struct SweepConfig {
  int N = 64;
  bool use_absorber = false;
  double strength = 1.0;
  AbsorberOrder order = AbsorberOrder::Zeroth;
  double tol = 1e-6;
  int threads = 0;  // 0: AHRES_THREADS or hardware concurrency
};

// sorted by Im sigma descending, then Re sigma, then ell
std::vector<ResonanceResult> sweep(const MetricSpec& m, int k, int ell_max, const Window& w,
                                   const SweepConfig& cfg);
std::vector<ResonanceResult> sweep_mode(const MetricSpec& m, int k, int ell, const Window& w,
                                        const SweepConfig& cfg);
void sort_results(std::vector<ResonanceResult>& r);

int thread_count(int requested = 0);
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace ahres
