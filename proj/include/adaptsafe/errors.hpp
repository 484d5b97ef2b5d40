#pragma once

#include <stdexcept>
#include <string>

namespace adaptsafe {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input. `path()` names the offending field, e.g.
/// "adaptation_models[0].options[2].assignment.kq".
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message, std::string path = {})
      : Error(path.empty() ? message : path + ": " + message), message_(message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::string path_;
};

/// Safety-case graph is not a well-formed tree, or a lookup dangles.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A patch tried to touch a node fixed at design time.
class ImmutabilityViolation : public Error {
 public:
  ImmutabilityViolation(const std::string& node_id, const std::string& message)
      : Error("static node '" + node_id + "': " + message), node_id_(node_id) {}

  const std::string& node_id() const noexcept { return node_id_; }

 private:
  std::string node_id_;
};

/// An obligation sits on a node whose lifecycle contradicts the obligation.
class LifecycleMismatch : public Error {
 public:
  LifecycleMismatch(const std::string& node_id, const std::string& obligation)
      : Error("node '" + node_id + "' carries " + obligation + " with the wrong lifecycle"),
        node_id_(node_id),
        obligation_(obligation) {}

  const std::string& node_id() const noexcept { return node_id_; }
  const std::string& obligation() const noexcept { return obligation_; }

 private:
  std::string node_id_;
  std::string obligation_;
};

/// Non-finite value reached the plant; the run must abort.
class SimulationFault : public Error {
 public:
  using Error::Error;
};

}  // namespace adaptsafe
