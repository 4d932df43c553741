#pragma once

#include <stdexcept>
#include <string>

namespace qpfb {

/// Base class for every failure raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different presentations / tensor spaces.
class MismatchError : public Error {
 public:
  using Error::Error;
};

/// Rewriting exceeded the configured step budget.
class NonTerminationError : public Error {
 public:
  NonTerminationError(const std::string& what, std::string word)
      : Error(what), word_(std::move(word)) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

/// A construction that requires a certificate was used without one.
class CertificateError : public Error {
 public:
  using Error::Error;
};

/// A check failed during construction; carries both sides of the failed identity.
class WitnessError : public Error {
 public:
  WitnessError(const std::string& what, std::string where, std::string lhs, std::string rhs)
      : Error(what), where_(std::move(where)), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}
  const std::string& where() const { return where_; }
  const std::string& lhs() const { return lhs_; }
  const std::string& rhs() const { return rhs_; }

 private:
  std::string where_;
  std::string lhs_;
  std::string rhs_;
};

}  // namespace qpfb
