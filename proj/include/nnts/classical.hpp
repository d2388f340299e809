#pragma once

#include <cstddef>
#include <cstdint>

#include "nnts/core.hpp"
#include "nnts/method.hpp"

namespace nnts {

struct ClassicalStatistic {
  TestMethod method = TestMethod::Rayleigh;
  double value = 0.0;
};

// Mean resultant length |sum_j e^{i theta_j}| / n.
ClassicalStatistic rayleigh(const AngleSample& sample);

// n/pi - (1/2n) sum_i sum_j |sin(theta_i - theta_j)|
ClassicalStatistic hermans_rasson_original(const AngleSample& sample);

// (1/n) sum_i sum_j (| |d_ij| - pi | - pi/2 - 2.895 (|sin d_ij| - 2/pi)),
// d_ij = theta_i - theta_j.
ClassicalStatistic hermans_rasson_modified(const AngleSample& sample);

// (1/n) sum_i sum_j 2 (cos d_ij - sqrt(.5)) / (1.5 - 2 sqrt(.5) cos d_ij)
ClassicalStatistic pycke(const AngleSample& sample);

// Dispatches on one of the four classical methods.
ClassicalStatistic classical_statistic(TestMethod method, const AngleSample& sample);

// (1 + #{null >= observed}) / (reps + 1) from reps uniform samples of the
// same size. Replicate r draws from Rng(seed, r). Upper tail for all four.
double mc_p_value(TestMethod method, const AngleSample& sample, std::size_t reps, std::uint64_t seed,
                  unsigned threads = 0);

}  // namespace nnts
