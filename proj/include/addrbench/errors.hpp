#pragma once

#include <stdexcept>
#include <string>

namespace addrbench {

// Base for everything this library throws. The CLI maps subclasses to
// exit status 2 (data errors); anything else becomes 3.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyRecordError : Error {
  EmptyRecordError() : Error("address record has no present components") {}
};

struct EmptyInputError : Error {
  EmptyInputError() : Error("input text is empty") {}
};

struct NotApplicableError : Error {
  explicit NotApplicableError(const std::string& msg) : Error(msg) {}
};

struct LexiconLoadError : Error {
  LexiconLoadError(const std::string& msg, int line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
  int line_number;
};

struct IngestError : Error {
  explicit IngestError(const std::string& msg) : Error(msg) {}
};

struct AlignmentError : Error {
  explicit AlignmentError(const std::string& msg) : Error(msg) {}
};

struct TrainDataError : Error {
  explicit TrainDataError(const std::string& msg) : Error(msg) {}
};

struct ModelLoadError : Error {
  explicit ModelLoadError(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace addrbench
