#include "prag/error.h"

#include <iostream>
#include <mutex>

namespace prag {

void throw_invalid_argument(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}
void throw_not_found(const std::string& what) {
  throw Error(ErrorCode::kNotFound, what);
}
void throw_failed_precondition(const std::string& what) {
  throw Error(ErrorCode::kFailedPrecondition, what);
}
void throw_data_loss(const std::string& what) {
  throw Error(ErrorCode::kDataLoss, what);
}
void throw_internal(const std::string& what) {
  throw Error(ErrorCode::kInternal, what);
}

void warn(const std::string& msg) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "warning: " << msg << '\n';
}

}  // namespace prag
