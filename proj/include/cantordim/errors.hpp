#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cantordim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NegativeEntry : public Error {
 public:
  explicit NegativeEntry(std::size_t index)
      : Error("negative entry at index " + std::to_string(index)), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class SumNotOne : public Error {
 public:
  explicit SumNotOne(double actual)
      : Error("entries sum to " + std::to_string(actual) + ", expected 1"), actual_(actual) {}
  double actual_sum() const noexcept { return actual_; }

 private:
  double actual_;
};

class EmptySupport : public Error {
 public:
  EmptySupport() : Error("stochastic vector has empty support") {}
};

class InvalidBase : public Error {
 public:
  explicit InvalidBase(std::int64_t base)
      : Error("base " + std::to_string(base) + " is not >= 2"), base_(base) {}
  std::int64_t base() const noexcept { return base_; }

 private:
  std::int64_t base_;
};

class InvalidMatrix : public Error {
 public:
  using Error::Error;
};

class IrrationalFrequency : public Error {
 public:
  explicit IrrationalFrequency(std::size_t index)
      : Error("frequency at index " + std::to_string(index) + " has no exact rational form"),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class DenominatorTooLarge : public Error {
 public:
  explicit DenominatorTooLarge(std::int64_t q)
      : Error("common denominator " + std::to_string(q) + " exceeds the pattern length limit"),
        q_(q) {}
  std::int64_t denominator() const noexcept { return q_; }

 private:
  std::int64_t q_;
};

class OutOfRange : public Error {
 public:
  explicit OutOfRange(const std::string& x) : Error("x = " + x + " is outside [0, 1)") {}
};

class InvalidDigit : public Error {
 public:
  InvalidDigit(std::size_t position, std::uint32_t digit, std::uint32_t base)
      : Error("digit " + std::to_string(digit) + " at position " + std::to_string(position) +
              " is not below base " + std::to_string(base)) {}
};

class SupportMismatch : public Error {
 public:
  using Error::Error;
};

class DegenerateLevel : public Error {
 public:
  explicit DegenerateLevel(std::size_t level)
      : Error("degenerate level " + std::to_string(level) + ": 1 - d_k/A_k is not positive"),
        level_(level) {}
  std::size_t level() const noexcept { return level_; }

 private:
  std::size_t level_;
};

class ZeroMeasurePrefix : public Error {
 public:
  explicit ZeroMeasurePrefix(std::size_t depth)
      : Error("prefix of depth " + std::to_string(depth) + " has zero measure"), depth_(depth) {}
  std::size_t depth() const noexcept { return depth_; }

 private:
  std::size_t depth_;
};

class MissingPattern : public Error {
 public:
  MissingPattern() : Error("instance has no base pattern; sampling needs a concrete sequence") {}
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace cantordim
