#pragma once

#include <span>

#include "plab/lattice.hpp"
#include "plab/model.hpp"

namespace plab {

/// Which implementation of the right-hand side the integrator calls.
/// `reference` composes the lattice operators term by term and is kept as
/// the test oracle; `serial` and `parallel` are the fused loops.
enum class KernelPolicy { reference, serial, parallel, automatic };

/// Site count from which `automatic` switches to the OpenMP kernel.
inline constexpr std::size_t kParallelSiteThreshold = 4096;

/// Reference right-hand side at a fixed OU value z, built from apply_A and
/// elementwise maps exactly as the equation reads.
LatticeVector rhs_reference(const ModelParams& params, double z, const LatticeVector& v);

/// Fused single pass. `scratch` must hold v.size() doubles.
void rhs_serial(const ModelParams& params, double z, std::span<const double> v, std::span<double> out,
                std::span<double> scratch);

/// Same arithmetic as rhs_serial, sites split over OpenMP threads.
void rhs_parallel(const ModelParams& params, double z, std::span<const double> v, std::span<double> out,
                  std::span<double> scratch);

/// Dispatches on policy (reference is allowed too, at the cost of allocations).
void rhs_dispatch(KernelPolicy policy, const ModelParams& params, double z, std::span<const double> v,
                  std::span<double> out, std::span<double> scratch);

/// Hausdorff semi-distance sup_{x in X} inf_{y in Y} ||x - y||.
/// Serial double loop; the oracle for the parallel version.
double semidistance_serial(std::span<const LatticeVector> xs, std::span<const LatticeVector> ys);
double semidistance_parallel(std::span<const LatticeVector> xs, std::span<const LatticeVector> ys);

}  // namespace plab
