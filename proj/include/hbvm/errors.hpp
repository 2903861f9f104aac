#ifndef HBVM_ERRORS_HPP
#define HBVM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hbvm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Polynomial or stage index outside its admissible range.
class InvalidIndex : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// An iterative numeric kernel (Newton for nodes, QR for eigenvalues, Jacobi
/// sweeps) failed to converge within its cap.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// k - s is odd and the caller did not ask for the permissive fallback.
class ParityError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Two equidistributed targets picked the same node.
class SelectionError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// The fundamental block of the integral matrix is numerically singular.
class PartitionRejected : public Error {
 public:
  using Error::Error;
};

class InvalidSpectrum : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// q sits on the pole 1/gamma of the blended iteration matrix.
class PoleError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// The blending matrix I - h*gamma*J0 could not be factored.
class StepRejected : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double last_residual, int iterations)
      : Error(what), last_residual_(last_residual), iterations_(iterations) {}

  double last_residual() const noexcept { return last_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double last_residual_;
  int iterations_;
};

}  // namespace hbvm

#endif  // HBVM_ERRORS_HPP
