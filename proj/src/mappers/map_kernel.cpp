#include "sasim/error.hpp"
#include "sasim/mappers/mappers.hpp"

namespace sasim {
namespace mappers {

fabric::Schedule map_kernel(const KernelSpec& spec,
                            const fabric::ArrayConfig& cfg) {
  switch (spec.kind) {
    case KernelKind::MatVec:
      return map_matvec(spec, cfg);
    case KernelKind::MatMul:
      return map_matmul(spec, cfg);
    case KernelKind::Conv1D:
    case KernelKind::Fir:
      return map_conv1d(spec, cfg);
    case KernelKind::MatchedFilter:
      return map_matched_filter(spec, cfg);
    case KernelKind::VecMagSq:
      return map_vecmagsq(spec, cfg);
    case KernelKind::OuterProduct:
      return map_outer_product(spec, cfg);
    case KernelKind::TriSolve:
      return map_trisolve(spec, cfg);
    case KernelKind::Cholesky:
      return map_cholesky(spec, cfg);
  }
  throw ConfigError("unknown kernel kind");
}

}  // namespace mappers
}  // namespace sasim
