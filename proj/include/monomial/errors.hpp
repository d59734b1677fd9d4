#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace monomial {

/// Base of every error the library raises. `name()` is the stable identifier
/// the CLI prints on stderr.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Errors the CLI maps to exit code 2 (solver-side failures).
class SolverError : public Error {
    using Error::Error;
};

/// Errors the CLI maps to exit code 1 (bad input).
class InputError : public Error {
    using Error::Error;
};

class ResonanceEncountered : public SolverError {
public:
    ResonanceEncountered(std::string exponent)
        : SolverError("ResonanceEncountered",
                      "diagonal operator vanishes at exponent " + exponent),
          exponent_(std::move(exponent)) {}

    const std::string& exponent() const noexcept { return exponent_; }

private:
    std::string exponent_;
};

class NoDiagonalPart : public SolverError {
public:
    explicit NoDiagonalPart(const std::string& what) : SolverError("NoDiagonalPart", what) {}
};

class DepthExhausted : public SolverError {
public:
    explicit DepthExhausted(const std::string& what) : SolverError("DepthExhausted", what) {}
};

class NonRationalIndicialRoot : public SolverError {
public:
    NonRationalIndicialRoot(const std::string& what, double discriminant, double re, double im)
        : SolverError("NonRationalIndicialRoot", what), discriminant_(discriminant), re_(re), im_(im) {}

    double discriminant() const noexcept { return discriminant_; }
    /// Approximate roots are re ± im (im is imaginary when discriminant < 0, real otherwise).
    double real_part() const noexcept { return re_; }
    double spread() const noexcept { return im_; }

private:
    double discriminant_, re_, im_;
};

class SingularPoint : public SolverError {
public:
    explicit SingularPoint(const std::string& what) : SolverError("SingularPoint", what) {}
};

class NegativeBaseFractionalPower : public SolverError {
public:
    explicit NegativeBaseFractionalPower(const std::string& what)
        : SolverError("NegativeBaseFractionalPower", what) {}
};

class UnknownFamily : public InputError {
public:
    explicit UnknownFamily(const std::string& family)
        : InputError("UnknownFamily", "unknown catalog family '" + family + "'") {}
};

class MissingParameter : public InputError {
public:
    explicit MissingParameter(const std::string& param)
        : InputError("MissingParameter", "missing parameter '" + param + "'") {}
};

class InvalidArgument : public InputError {
public:
    explicit InvalidArgument(const std::string& what) : InputError("InvalidArgument", what) {}
};

class ParseError : public InputError {
public:
    ParseError(int line, int column, const std::string& expected)
        : InputError("ParseError", std::to_string(line) + ":" + std::to_string(column) +
                                       ": expected " + expected),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_, column_;
};

class UnboundParameter : public InputError {
public:
    UnboundParameter(const std::string& name, int line, int column)
        : InputError("UnboundParameter", std::to_string(line) + ":" + std::to_string(column) +
                                             ": unbound parameter '" + name + "'"),
          param_(name), line_(line), column_(column) {}

    const std::string& param() const noexcept { return param_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    std::string param_;
    int line_, column_;
};

class NonlinearTerm : public InputError {
public:
    NonlinearTerm(int line, int column)
        : InputError("NonlinearTerm", std::to_string(line) + ":" + std::to_string(column) +
                                          ": product of two y-factors"),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_, column_;
};

} // namespace monomial
