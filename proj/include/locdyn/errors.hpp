#pragma once

#include <stdexcept>
#include <string>

namespace locdyn {

struct DisconnectedGraph : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DuplicateSelfLoop : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadDimension : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooFewAnchors : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidParams : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StepOutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadProbability : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonpositiveLambda : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientHistory : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingNeighborValue : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ProtocolViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CovarianceNotPSD : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LengthMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace locdyn
