#pragma once

#include <stdexcept>
#include <string>

namespace airsea {

// Structured parse failure pointing at a file, a 1-based line number and the
// field (column or key) that failed. what() carries the assembled message.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, std::size_t line, std::string field,
             const std::string& message)
      : std::runtime_error(file + ":" + std::to_string(line) +
                           (field.empty() ? "" : " [" + field + "]") + ": " +
                           message),
        file_(std::move(file)),
        line_(line),
        field_(std::move(field)) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string field_;
};

// Training aborted; carries the epoch at which the loss left the finite range.
class TrainingError : public std::runtime_error {
 public:
  TrainingError(int epoch, const std::string& message)
      : std::runtime_error("epoch " + std::to_string(epoch) + ": " + message),
        epoch_(epoch) {}

  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

}  // namespace airsea
