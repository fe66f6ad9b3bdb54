#pragma once

#include <stdexcept>
#include <string>

namespace hpi {

enum class ErrorCode {
  io = 1,
  parse = 2,
  invalid_argument = 3,
  data = 4,
  internal = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail_io(const std::string& msg) { throw Error(ErrorCode::io, msg); }
[[noreturn]] inline void fail_parse(const std::string& msg) { throw Error(ErrorCode::parse, msg); }
[[noreturn]] inline void fail_invalid(const std::string& msg) { throw Error(ErrorCode::invalid_argument, msg); }
[[noreturn]] inline void fail_data(const std::string& msg) { throw Error(ErrorCode::data, msg); }
[[noreturn]] inline void fail_internal(const std::string& msg) { throw Error(ErrorCode::internal, msg); }

}  // namespace hpi
