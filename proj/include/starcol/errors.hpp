// Typed error hierarchy. Ill-conditioning is surfaced, never masked: stencil
// and solve failures carry the measured rcond instead of silently regularizing.
#pragma once

#include <stdexcept>
#include <string>

namespace starcol {

struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidDiscretizationError : SolverError {
  using SolverError::SolverError;
};

struct InsufficientNodesError : SolverError {
  using SolverError::SolverError;
};

struct DegenerateSupportError : SolverError {
  using SolverError::SolverError;
};

struct UnderdeterminedSupportError : SolverError {
  using SolverError::SolverError;
};

// Interpolation/moment matrix unusable at a star node.
struct StencilSingularError : SolverError {
  int node;
  double rcond;
  StencilSingularError(int node_, double rcond_)
      : SolverError("singular stencil system at node " + std::to_string(node_) +
                    " (rcond " + std::to_string(rcond_) + ")"),
        node(node_),
        rcond(rcond_) {}
};

struct SingularSystemError : SolverError {
  using SolverError::SolverError;
};

struct DegenerateNormalError : SolverError {
  using SolverError::SolverError;
};

struct ConstraintConflictError : SolverError {
  using SolverError::SolverError;
};

struct InvalidKernelError : SolverError {
  using SolverError::SolverError;
};

struct ConfigError : SolverError {
  using SolverError::SolverError;
};

struct IoError : SolverError {
  using SolverError::SolverError;
};

}  // namespace starcol
