#pragma once

#include <stdexcept>
#include <string>

namespace qsplit {

// Error taxonomy shared by the whole toolkit. The CLI maps these onto its
// exit codes: ParameterError -> 1, ParseError/IoError -> 2, CapacityError -> 3.

class ParameterError : public std::invalid_argument {
  public:
    explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

class DimensionError : public std::invalid_argument {
  public:
    explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

class DataError : public std::invalid_argument {
  public:
    explicit DataError(const std::string& msg) : std::invalid_argument(msg) {}
};

class CapacityError : public std::runtime_error {
  public:
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public std::runtime_error {
  public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg), line_(0) {}

    ParseError(const std::string& msg, std::size_t line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

}  // namespace qsplit
