#ifndef ILUAMG_ERROR_HPP
#define ILUAMG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace iluamg {

/// Error categories map one-to-one onto the C API / CLI status codes:
/// invalid/io -> 2, numeric -> 3.
enum class ErrorKind { invalid, io, numeric };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_invalid(const std::string& msg) {
    throw Error(ErrorKind::invalid, msg);
}

[[noreturn]] inline void fail_io(const std::string& msg) {
    throw Error(ErrorKind::io, msg);
}

[[noreturn]] inline void fail_numeric(const std::string& msg) {
    throw Error(ErrorKind::numeric, msg);
}

} // namespace iluamg

#endif // ILUAMG_ERROR_HPP
