#ifndef EQTREE_ERRORS_HPP
#define EQTREE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eqtree {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched taxon counts between a dissimilarity map and a chain.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input size exceeds a documented enumeration/solver cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class MalformedPartitionError : public Error {
 public:
  using Error::Error;
};

class NotUltrametricError : public Error {
 public:
  using Error::Error;
};

class InvalidWitnessError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Text input errors carry a 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : Error(msg + " (line " + std::to_string(line) + ", column " +
              std::to_string(col) + ")"),
        line(line),
        col(col) {}
  int line;
  int col;
};

}  // namespace eqtree

#endif
