#pragma once

#include <stdexcept>
#include <string>

namespace shrinkbench {

// Base of every error raised by the library. The CLI maps ConfigError to exit
// code 2 and everything else derived from Error to exit code 3.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

#define SHRINKBENCH_DEFINE_ERROR(Name, Base) \
  class Name : public Base {                 \
  public:                                    \
    using Base::Base;                        \
  };

SHRINKBENCH_DEFINE_ERROR(DimensionMismatch, Error)
SHRINKBENCH_DEFINE_ERROR(NonFiniteValue, Error)
SHRINKBENCH_DEFINE_ERROR(NotPositiveDefinite, Error)
SHRINKBENCH_DEFINE_ERROR(DomainError, Error)
SHRINKBENCH_DEFINE_ERROR(SeriesNotConverged, Error)
SHRINKBENCH_DEFINE_ERROR(MomentUndefined, Error)
SHRINKBENCH_DEFINE_ERROR(DegenerateResidual, Error)
SHRINKBENCH_DEFINE_ERROR(DegenerateStatistic, Error)
SHRINKBENCH_DEFINE_ERROR(RequiresP3, Error)
SHRINKBENCH_DEFINE_ERROR(ConstantColumn, Error)
SHRINKBENCH_DEFINE_ERROR(MaxSweepsExceeded, Error)
SHRINKBENCH_DEFINE_ERROR(FoldTooSmall, ConfigError)
SHRINKBENCH_DEFINE_ERROR(InconsistentConfig, ConfigError)

#undef SHRINKBENCH_DEFINE_ERROR

}  // namespace shrinkbench
