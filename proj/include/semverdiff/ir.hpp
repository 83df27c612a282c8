//===- ir.hpp - In-memory model of MVIL programs ---------------*- C++ -*-===//
//
// MVIL is a small line-oriented three-address code. A ModuleSnapshot holds
// every class of one library version; methods are keyed by their
// "Class.method(T1,T2)" key, which is what identity means throughout the
// analyzer (return type and visibility are not part of the key).
//
//===----------------------------------------------------------------------===//
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace semverdiff {

enum class Visibility { Public, Private };

const char *to_string(Visibility v);

struct Signature {
  std::string class_name;
  std::string method_name;
  std::vector<std::string> param_types;
  std::string return_type = "void";
  Visibility visibility = Visibility::Public;

  /// "Class.method(T1,T2)"; the identity used for lookup and ordering.
  std::string key() const;
  /// "RET Class.method(T1,T2)"; the form used in call statements.
  std::string str() const;

  bool operator==(const Signature &) const = default;
};

/// Parses a key ("C.m(int,long)") back into a signature with void return.
std::optional<Signature> parse_signature_key(const std::string &key);

bool is_valid_identifier(const std::string &s);

/// Primitive widening used by the API pairing rule: int widens to long.
bool widens_to(const std::string &from, const std::string &to);

/// Types whose values a callee can mutate through a reference: anything but
/// primitives and String.
bool is_mutable_reference(const std::string &type);

/// Whether an opaque call may mutate its k-th argument: only void callees
/// (commands) are assumed to, and only through reference parameters.
bool may_mutate_argument(const Signature &callee, std::size_t k);

struct Operand {
  enum class Kind { Local, Int, Str, Bool, Null };
  Kind kind = Kind::Local;
  std::string name;  // Local name or string literal payload
  std::int64_t value = 0; // Int value, or 0/1 for Bool

  static Operand local(std::string n) { return {Kind::Local, std::move(n), 0}; }
  static Operand integer(std::int64_t v) { return {Kind::Int, {}, v}; }
  static Operand string_lit(std::string s) {
    return {Kind::Str, std::move(s), 0};
  }
  static Operand boolean(bool b) { return {Kind::Bool, {}, b ? 1 : 0}; }
  static Operand null() { return {Kind::Null, {}, 0}; }

  bool is_local() const { return kind == Kind::Local; }
  /// MVIL surface syntax for this operand.
  std::string text() const;

  bool operator==(const Operand &) const = default;
};

enum class StmtKind {
  ConstAssign,
  BinOp,
  RelOpAssign,
  Call,
  NewObject,
  FieldLoad,
  FieldStore,
  ParamBind,
  Return,
  Throw,
  Branch,
  Goto,
};

const char *to_string(StmtKind k);

/// Field access target. `on_object` distinguishes `o->f` (owner is a local)
/// from `C.f` (owner is a class).
struct FieldRef {
  std::string owner;
  std::string field;
  bool on_object = false;

  bool operator==(const FieldRef &) const = default;
};

struct Statement {
  int id = 0; // ordinal within the method, counting across blocks
  StmtKind kind = StmtKind::Goto;
  std::optional<std::string> def;
  std::vector<Operand> uses;

  std::string op;                  // BinOp / RelOpAssign operator
  std::optional<Signature> callee; // Call
  FieldRef field;                  // FieldLoad / FieldStore
  std::string type_name;           // NewObject class, Throw exception type
  int param_index = 0;             // ParamBind
  std::string target;              // Goto target, Branch true target
  std::string else_target;         // Branch false target

  bool is_terminator() const {
    return kind == StmtKind::Return || kind == StmtKind::Throw ||
           kind == StmtKind::Branch || kind == StmtKind::Goto;
  }

  /// `store o->f, v`: the first operand is the object written through.
  bool stores_through() const {
    return kind == StmtKind::FieldStore && field.on_object;
  }

  bool operator==(const Statement &) const = default;
};

struct Block {
  std::string label;
  std::vector<Statement> stmts;

  bool operator==(const Block &) const = default;
};

struct TryRegion {
  std::string start;
  std::string end;
  std::string exception_type;
  std::string handler;

  bool operator==(const TryRegion &) const = default;
};

using FieldKey = std::pair<std::string, std::string>; // (class, field)

struct MethodIR {
  Signature signature;
  std::vector<std::string> params; // locals bound by `param i`, by index
  std::vector<Block> blocks;
  std::vector<TryRegion> try_regions;
  std::set<FieldKey> fields_read;
  std::set<FieldKey> fields_written;

  int block_index(const std::string &label) const;
  std::size_t statement_count() const;
  /// Statement by id; ids are dense so this is a walk over the blocks.
  const Statement *statement(int id) const;

  bool operator==(const MethodIR &) const = default;
};

struct FieldDecl {
  std::string type;
  std::string name;

  bool operator==(const FieldDecl &) const = default;
};

struct ClassDecl {
  std::string name;
  std::vector<FieldDecl> fields;
  std::map<std::string, MethodIR> methods; // by Signature::key()

  const FieldDecl *find_field(const std::string &n) const;

  bool operator==(const ClassDecl &) const = default;
};

struct SemVer {
  std::uint64_t major = 0;
  std::uint64_t minor = 0;
  std::uint64_t patch = 0;

  std::string str() const;
  auto operator<=>(const SemVer &) const = default;
};

/// Throws VersionParseError unless `text` is "X.Y.Z" of non-negative ints.
SemVer parse_semver(const std::string &text);

struct ModuleSnapshot {
  std::string version = "0.0.0";
  std::map<std::string, ClassDecl> classes;

  const ClassDecl *find_class(const std::string &name) const;
  const MethodIR *find_method(const std::string &key) const;
  /// A callee is external when its key does not resolve in this snapshot.
  bool is_external(const Signature &callee) const {
    return find_method(callee.key()) == nullptr;
  }
  /// All methods, sorted by class then key.
  std::vector<const MethodIR *> methods() const;
  std::vector<const MethodIR *> public_methods() const;
};

} // namespace semverdiff
