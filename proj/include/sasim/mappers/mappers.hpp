#pragma once

#include "sasim/fabric/schedule.hpp"
#include "sasim/kernel_spec.hpp"

namespace sasim {
namespace mappers {

// Each mapper compiles a kernel workload into a cycle-tagged micro-op
// program for the given array. All mappers are pure functions and the
// produced schedules are resource-clean by construction: every SRAM
// port, shift link, multiplier and accumulator stays within budget.

fabric::Schedule map_matmul(const KernelSpec& spec,
                            const fabric::ArrayConfig& cfg);
fabric::Schedule map_matvec(const KernelSpec& spec,
                            const fabric::ArrayConfig& cfg);
fabric::Schedule map_conv1d(const KernelSpec& spec,
                            const fabric::ArrayConfig& cfg);
fabric::Schedule map_matched_filter(const KernelSpec& spec,
                                    const fabric::ArrayConfig& cfg);
fabric::Schedule map_vecmagsq(const KernelSpec& spec,
                              const fabric::ArrayConfig& cfg);
fabric::Schedule map_outer_product(const KernelSpec& spec,
                                   const fabric::ArrayConfig& cfg);
fabric::Schedule map_trisolve(const KernelSpec& spec,
                              const fabric::ArrayConfig& cfg);
fabric::Schedule map_cholesky(const KernelSpec& spec,
                              const fabric::ArrayConfig& cfg);

// Dispatch on spec.kind.
fabric::Schedule map_kernel(const KernelSpec& spec,
                            const fabric::ArrayConfig& cfg);

}  // namespace mappers
}  // namespace sasim
