#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clate {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structural problems in a model (bad probabilities, supports, shapes).
class ModelError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class OrderedModelError : public Error {
 public:
  using Error::Error;
};

class DegenerateCellError : public Error {
 public:
  DegenerateCellError(std::string message, std::size_t x, std::size_t z)
      : Error(std::move(message)), x_(x), z_(z) {}
  std::size_t x() const { return x_; }
  std::size_t z() const { return z_; }

 private:
  std::size_t x_;
  std::size_t z_;
};

class RankInvarianceError : public Error {
 public:
  using Error::Error;
};

class AnchorNotStrictError : public Error {
 public:
  using Error::Error;
};

class LevelRangeError : public Error {
 public:
  using Error::Error;
};

class AmbiguousIndexError : public Error {
 public:
  using Error::Error;
};

class NegativityError : public Error {
 public:
  using Error::Error;
};

class GenerationExhaustedError : public Error {
 public:
  using Error::Error;
};

class IngestionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public IngestionError {
 public:
  ParseError(const std::string& message, std::size_t line)
      : IngestionError("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public IngestionError {
 public:
  using IngestionError::IngestionError;
};

class ContinuousOutcomeError : public IngestionError {
 public:
  using IngestionError::IngestionError;
};

}  // namespace clate
