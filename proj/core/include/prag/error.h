#ifndef PRAG_ERROR_H_
#define PRAG_ERROR_H_

#include <stdexcept>
#include <string>

namespace prag {

// Coarse error classes. The CLI maps kInvalidArgument, kNotFound and
// kFailedPrecondition to exit code 2 and everything else to 3.
enum class ErrorCode {
  kInvalidArgument,
  kNotFound,
  kFailedPrecondition,
  kDataLoss,
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void throw_invalid_argument(const std::string& what);
[[noreturn]] void throw_not_found(const std::string& what);
[[noreturn]] void throw_failed_precondition(const std::string& what);
[[noreturn]] void throw_data_loss(const std::string& what);
[[noreturn]] void throw_internal(const std::string& what);

// Prints "warning: <msg>" on stderr. Warnings never affect results.
void warn(const std::string& msg);

}  // namespace prag

#endif  // PRAG_ERROR_H_
