#ifndef PICKDROP_ERROR_HPP_
#define PICKDROP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace pickdrop {

enum class ErrorKind {
  kUsage,      // bad parameters or flags
  kIo,         // unreadable or unwritable file
  kFormat,     // malformed stream contents
  kGuard,      // enumeration or resource guard exceeded
  kOverflow,   // exact arithmetic exceeded 128 bits
  kDimension,  // stream length does not match the matrix shape
  kDegenerate  // no residual mass; caller should take the trivial path
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pickdrop

#endif  // PICKDROP_ERROR_HPP_
