#include "bsmsentinel/errors.hpp"

#include <utility>

namespace bsmsentinel {

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

ValidationError::ValidationError(std::size_t line, std::string field, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + field + ": " + what),
      line_(line),
      field_(std::move(field)) {}

OrderingError::OrderingError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace bsmsentinel
