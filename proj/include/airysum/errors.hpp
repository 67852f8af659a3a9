#pragma once

#include <stdexcept>
#include <string>

namespace airysum {

// Requested precision cannot be delivered within the working-precision budget.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iteration or summation did not reach its target.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Newton iteration landed outside the basin of the requested zero.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failure while building a zero table; carries the failing index.
class ZeroTableError : public std::runtime_error {
 public:
  ZeroTableError(long index, const std::string& what)
      : std::runtime_error("zero " + std::to_string(index) + ": " + what), index_(index) {}
  long index() const noexcept { return index_; }

 private:
  long index_;
};

// A closure identity failed to close (left-over Delta powers, unsolvable system).
class DerivationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingLedgerEntry : public std::runtime_error {
 public:
  explicit MissingLedgerEntry(int p)
      : std::runtime_error("ledger has no entry for S_" + std::to_string(p)), p_(p) {}
  int p() const noexcept { return p_; }

 private:
  int p_;
};

}  // namespace airysum
