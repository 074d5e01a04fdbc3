#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hamspray {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::string expected)
      : Error("syntax error at offset " + std::to_string(offset) + ": expected " + expected),
        offset_(offset),
        expected_(std::move(expected)) {}
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

class UnknownSymbol : public Error {
 public:
  explicit UnknownSymbol(std::string name)
      : Error("unknown symbol '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DegreeError : public Error {
 public:
  using Error::Error;
};

/// Failure that carries the sample point where it was detected.
class WitnessError : public Error {
 public:
  WitnessError(const std::string& what, std::vector<double> witness)
      : Error(what), witness_(std::move(witness)) {}
  const std::vector<double>& witness() const { return witness_; }

 private:
  std::vector<double> witness_;
};

class SingularHessian : public WitnessError {
 public:
  using WitnessError::WitnessError;
};

class DegenerateForm : public WitnessError {
 public:
  using WitnessError::WitnessError;
};

class NotClosed : public Error {
 public:
  using Error::Error;
};

class NotVerticalVanishing : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

class InvalidFixtureParam : public Error {
 public:
  using Error::Error;
};

class BlowUp : public Error {
 public:
  using Error::Error;
};

/// Malformed model document; `path` names the offending JSON field.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace hamspray
