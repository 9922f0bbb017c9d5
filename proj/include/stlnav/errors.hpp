// Error types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace stlnav {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- stl ---
struct SyntaxError : Error {
  SyntaxError(size_t pos, const std::string& expected, const std::string& got)
      : Error("syntax error at position " + std::to_string(pos) + ": expected " + expected +
              ", got '" + got + "'"),
        position(pos), expected(expected) {}
  size_t position;
  std::string expected;
};

struct UnknownRegion : Error {
  explicit UnknownRegion(const std::string& name)
      : Error("unknown region '" + name + "'"), name(name) {}
  std::string name;
};

struct BadInterval : Error {
  BadInterval(long a, long b)
      : Error("bad interval [" + std::to_string(a) + "," + std::to_string(b) + "]"), a(a), b(b) {}
  long a, b;
};

struct UnsupportedNegation : Error {
  explicit UnsupportedNegation(int node_id)
      : Error("negation over Until (node " + std::to_string(node_id) + ") has no encoding"),
        node_id(node_id) {}
  int node_id;
};

struct HorizonExceeded : Error {
  HorizonExceeded(int node_id, int required_step)
      : Error("formula node " + std::to_string(node_id) + " requires step " +
              std::to_string(required_step) + " beyond the horizon"),
        node_id(node_id), required_step(required_step) {}
  int node_id;
  int required_step;
};

struct InvalidReference : Error {
  explicit InvalidReference(const std::string& what) : Error("invalid reference: " + what) {}
};

// --- world ---
struct BadDims : Error {
  explicit BadDims(int dims) : Error("unsupported spatial dimension " + std::to_string(dims)) {}
};

struct SchemaError : Error {
  SchemaError(const std::string& field, const std::string& reason)
      : Error("scenario schema error in '" + field + "': " + reason), field(field) {}
  std::string field;
};

struct InvariantViolation : Error {
  explicit InvariantViolation(const std::string& msg) : Error("invariant violation: " + msg) {}
};

// --- milp ---
struct DuplicateId : Error {
  explicit DuplicateId(const std::string& what) : Error("duplicate id: " + what) {}
};

struct UnknownVar : Error {
  explicit UnknownVar(int id) : Error("unknown variable id " + std::to_string(id)) {}
};

// --- solver ---
struct NotInfeasible : Error {
  NotInfeasible() : Error("IIS extraction requires an infeasible problem") {}
};

struct UntracedConstraint : Error {
  explicit UntracedConstraint(int id)
      : Error("constraint " + std::to_string(id) + " carries no usable trace record") {}
};

// --- encode / repair ---
struct NotNNF : Error {
  explicit NotNNF(int node_id)
      : Error("formula is not in negation normal form at node " + std::to_string(node_id)) {}
};

struct SafetyRelaxAttempt : Error {
  explicit SafetyRelaxAttempt(int node_id)
      : Error("relaxation requested on safety-critical node " + std::to_string(node_id)),
        node_id(node_id) {}
  int node_id;
};

struct UnknownDecisionNode : Error {
  explicit UnknownDecisionNode(int node_id)
      : Error("repair decision references unknown node " + std::to_string(node_id)) {}
};

struct NoRelaxationUsed : Error {
  NoRelaxationUsed()
      : Error("relaxed solve used no slack although the plain problem is infeasible") {}
};

struct UnrepairableConflict : Error {
  explicit UnrepairableConflict(const std::string& why)
      : Error("unrepairable conflict: " + why) {}
};

struct MaxItersExceeded : Error {
  explicit MaxItersExceeded(int iters)
      : Error("repair did not converge within " + std::to_string(iters) + " iterations") {}
};

struct AdvisorTransport : Error {
  explicit AdvisorTransport(const std::string& why) : Error("advisor transport: " + why) {}
};

struct MalformedResponse : Error {
  explicit MalformedResponse(const std::string& why) : Error("advisor response: " + why) {}
};

// --- rewards ---
struct GroupTooSmall : Error {
  GroupTooSmall() : Error("group-relative advantage needs at least two rewards") {}
};

// --- cli/io ---
struct LengthMismatch : Error {
  explicit LengthMismatch(const std::string& why) : Error("length mismatch: " + why) {}
};

}  // namespace stlnav
