#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace kk {

// Every failure mode carries a stable machine-readable kind string; the CLI
// renders it verbatim as {"error":{"kind":...,"detail":...}}.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& detail)
      : std::runtime_error(detail), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define KK_DEFINE_ERROR(NAME)                                   \
  class NAME : public Error {                                   \
  public:                                                       \
    explicit NAME(const std::string& detail)                    \
        : Error(#NAME, detail) {}                               \
  }

KK_DEFINE_ERROR(DomainError);
KK_DEFINE_ERROR(NonIntegrable);
KK_DEFINE_ERROR(UnknownTail);
KK_DEFINE_ERROR(EmptyGrid);
KK_DEFINE_ERROR(NumericalBreakdown);
KK_DEFINE_ERROR(MethodMismatch);
KK_DEFINE_ERROR(FactorizationFailed);
KK_DEFINE_ERROR(InsufficientPaths);
KK_DEFINE_ERROR(ImaginaryLeak);
KK_DEFINE_ERROR(Divergent);
KK_DEFINE_ERROR(MeasureMismatch);
KK_DEFINE_ERROR(NodeSetMismatch);
KK_DEFINE_ERROR(ParseError);
KK_DEFINE_ERROR(UsageError);

#undef KK_DEFINE_ERROR

}  // namespace kk
