/**
 * @file errors.h
 * @brief Error types shared across the scheduler library.
 */
#ifndef MMSCHED_ERRORS_H_
#define MMSCHED_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mmsched {

// Thrown when a scheduled channel submatrix is rank deficient or too
// ill-conditioned for zero-forcing. Carries the condition estimate of the
// Gram matrix so callers can log or threshold on it.
class SingularChannelError : public std::runtime_error {
 public:
  SingularChannelError(const std::string& what, double condition_estimate)
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}
  double ConditionEstimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

// Thrown by trace file readers on malformed input. byte_offset is the
// position in the file where the problem was detected.
class TraceFormatError : public std::runtime_error {
 public:
  TraceFormatError(const std::string& what, uint64_t byte_offset)
      : std::runtime_error(what + " (at byte " + std::to_string(byte_offset) +
                           ")"),
        byte_offset_(byte_offset) {}
  uint64_t ByteOffset() const { return byte_offset_; }

 private:
  uint64_t byte_offset_;
};

// Thrown when an exhaustive scheduler is asked to enumerate more subsets
// than the configured guard allows.
class TooLargeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mmsched

#endif  // MMSCHED_ERRORS_H_
