#pragma once

#include <stdexcept>
#include <string>

namespace transonic {

/// Library error carrying the name of the module that raised it, so callers
/// (in particular the CLI) can say which component rejected a request.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& message)
        : std::runtime_error(message), module_(std::move(module)) {}

    const std::string& module() const { return module_; }

private:
    std::string module_;
};

inline void require(bool cond, const char* module, const std::string& message) {
    if (!cond) throw Error(module, message);
}

}  // namespace transonic
