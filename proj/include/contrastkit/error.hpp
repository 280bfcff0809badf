#pragma once

#include <stdexcept>
#include <string>

namespace contrastkit {

// Broad failure classes; the CLI maps each one to an exit code.
enum class ErrorKind {
    config,
    backend,
    validation,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

class BackendError : public Error {
public:
    BackendError(const std::string& what, std::string request_id = {}, int attempts = 0, int last_status = 0)
        : Error(ErrorKind::backend, what),
          request_id_(std::move(request_id)),
          attempts_(attempts),
          last_status_(last_status) {}

    const std::string& request_id() const noexcept { return request_id_; }
    int attempts() const noexcept { return attempts_; }
    // HTTP status of the final attempt, 0 when no response was received.
    int last_status() const noexcept { return last_status_; }

private:
    std::string request_id_;
    int attempts_;
    int last_status_;
};

}  // namespace contrastkit
