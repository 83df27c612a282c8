//===- ir.cpp - MVIL model helpers ----------------------------------------===//

#include "semverdiff/ir.hpp"

#include "semverdiff/errors.hpp"

#include <cctype>
#include <charconv>

namespace semverdiff {

const char *to_string(Visibility v) {
  return v == Visibility::Public ? "public" : "private";
}

const char *to_string(StmtKind k) {
  switch (k) {
  case StmtKind::ConstAssign: return "const_assign";
  case StmtKind::BinOp: return "binop";
  case StmtKind::RelOpAssign: return "relop_assign";
  case StmtKind::Call: return "call";
  case StmtKind::NewObject: return "new_object";
  case StmtKind::FieldLoad: return "field_load";
  case StmtKind::FieldStore: return "field_store";
  case StmtKind::ParamBind: return "param_bind";
  case StmtKind::Return: return "return";
  case StmtKind::Throw: return "throw";
  case StmtKind::Branch: return "branch";
  case StmtKind::Goto: return "goto";
  }
  return "?";
}

std::string Signature::key() const {
  std::string out = class_name + "." + method_name + "(";
  for (std::size_t i = 0; i < param_types.size(); ++i) {
    if (i)
      out += ",";
    out += param_types[i];
  }
  return out + ")";
}

std::string Signature::str() const { return return_type + " " + key(); }

bool is_valid_identifier(const std::string &s) {
  if (s.empty())
    return false;
  auto head = static_cast<unsigned char>(s[0]);
  if (!(std::isalpha(head) || s[0] == '_'))
    return false;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || c == '_'))
      return false;
  }
  return true;
}

std::optional<Signature> parse_signature_key(const std::string &key) {
  auto open = key.find('(');
  if (open == std::string::npos || key.back() != ')')
    return std::nullopt;
  auto head = key.substr(0, open);
  auto dot = head.rfind('.');
  if (dot == std::string::npos)
    return std::nullopt;
  Signature sig;
  sig.class_name = head.substr(0, dot);
  sig.method_name = head.substr(dot + 1);
  if (!is_valid_identifier(sig.class_name) ||
      !is_valid_identifier(sig.method_name))
    return std::nullopt;
  auto inner = key.substr(open + 1, key.size() - open - 2);
  std::string cur;
  for (char c : inner) {
    if (c == ' ')
      continue;
    if (c == ',') {
      if (!is_valid_identifier(cur))
        return std::nullopt;
      sig.param_types.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) {
    if (!is_valid_identifier(cur))
      return std::nullopt;
    sig.param_types.push_back(cur);
  } else if (!sig.param_types.empty()) {
    return std::nullopt; // trailing comma
  }
  return sig;
}

bool widens_to(const std::string &from, const std::string &to) {
  return from == "int" && to == "long";
}

bool is_mutable_reference(const std::string &type) {
  static const std::set<std::string> values = {
      "int",  "long",   "short", "byte",    "char",  "float",
      "double", "boolean", "bool", "void", "String"};
  return values.count(type) == 0;
}

bool may_mutate_argument(const Signature &callee, std::size_t k) {
  return callee.return_type == "void" && k < callee.param_types.size() &&
         is_mutable_reference(callee.param_types[k]);
}

std::string Operand::text() const {
  switch (kind) {
  case Kind::Local: return name;
  case Kind::Int: return "#" + std::to_string(value);
  case Kind::Bool: return value ? "true" : "false";
  case Kind::Null: return "null";
  case Kind::Str: {
    std::string out = "\"";
    for (char c : name) {
      if (c == '"' || c == '\\')
        out += '\\';
      out += c;
    }
    return out + "\"";
  }
  }
  return {};
}

int MethodIR::block_index(const std::string &label) const {
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (blocks[i].label == label)
      return static_cast<int>(i);
  return -1;
}

std::size_t MethodIR::statement_count() const {
  std::size_t n = 0;
  for (const auto &b : blocks)
    n += b.stmts.size();
  return n;
}

const Statement *MethodIR::statement(int id) const {
  for (const auto &b : blocks)
    for (const auto &s : b.stmts)
      if (s.id == id)
        return &s;
  return nullptr;
}

const FieldDecl *ClassDecl::find_field(const std::string &n) const {
  for (const auto &f : fields)
    if (f.name == n)
      return &f;
  return nullptr;
}

std::string SemVer::str() const {
  return std::to_string(major) + "." + std::to_string(minor) + "." +
         std::to_string(patch);
}

SemVer parse_semver(const std::string &text) {
  SemVer v;
  std::uint64_t *parts[] = {&v.major, &v.minor, &v.patch};
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    auto end = i < 2 ? text.find('.', pos) : text.size();
    if (end == std::string::npos || end == pos)
      throw VersionParseError("malformed version '" + text + "'");
    const char *first = text.data() + pos;
    const char *last = text.data() + end;
    auto [ptr, ec] = std::from_chars(first, last, *parts[i]);
    if (ec != std::errc() || ptr != last)
      throw VersionParseError("malformed version '" + text + "'");
    pos = end + 1;
  }
  return v;
}

const ClassDecl *ModuleSnapshot::find_class(const std::string &name) const {
  auto it = classes.find(name);
  return it == classes.end() ? nullptr : &it->second;
}

const MethodIR *ModuleSnapshot::find_method(const std::string &key) const {
  auto dot = key.find('.');
  if (dot == std::string::npos)
    return nullptr;
  const ClassDecl *cls = find_class(key.substr(0, dot));
  if (!cls)
    return nullptr;
  auto it = cls->methods.find(key);
  return it == cls->methods.end() ? nullptr : &it->second;
}

std::vector<const MethodIR *> ModuleSnapshot::methods() const {
  std::vector<const MethodIR *> out;
  for (const auto &[_, cls] : classes)
    for (const auto &[__, m] : cls.methods)
      out.push_back(&m);
  return out;
}

std::vector<const MethodIR *> ModuleSnapshot::public_methods() const {
  std::vector<const MethodIR *> out;
  for (const MethodIR *m : methods())
    if (m->signature.visibility == Visibility::Public)
      out.push_back(m);
  return out;
}

} // namespace semverdiff
