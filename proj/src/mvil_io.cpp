//===- mvil_io.cpp - Pretty printer and snapshot loader -------------------===//

#include "semverdiff/mvil.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace semverdiff {

namespace fs = std::filesystem;

namespace {

std::string field_text(const FieldRef &f) {
  return f.owner + (f.on_object ? "->" : ".") + f.field;
}

std::string join_operands(const std::vector<Operand> &ops, std::size_t from = 0) {
  std::string out;
  for (std::size_t i = from; i < ops.size(); ++i) {
    if (i > from)
      out += ", ";
    out += ops[i].text();
  }
  return out;
}

std::string read_file(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in)
    throw IOError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

std::string print_statement(const Statement &s) {
  std::string lhs = s.def ? *s.def + " = " : std::string();
  switch (s.kind) {
  case StmtKind::ConstAssign:
    return lhs + "const " + s.uses[0].text() + ";";
  case StmtKind::BinOp:
    return lhs + "binop " + s.op + " " + join_operands(s.uses) + ";";
  case StmtKind::RelOpAssign:
    return lhs + "relop " + s.op + " " + join_operands(s.uses) + ";";
  case StmtKind::Call: {
    std::string out = lhs + "call " + s.callee->return_type + " " +
                      s.callee->key();
    if (!s.uses.empty())
      out += " " + join_operands(s.uses);
    return out + ";";
  }
  case StmtKind::NewObject:
    return lhs + "new " + s.type_name + ";";
  case StmtKind::FieldLoad:
    return lhs + "load " + field_text(s.field) + ";";
  case StmtKind::FieldStore:
    return "store " + field_text(s.field) + ", " + s.uses.back().text() + ";";
  case StmtKind::ParamBind:
    return lhs + "param " + std::to_string(s.param_index) + ";";
  case StmtKind::Return:
    return s.uses.empty() ? "return;" : "return " + s.uses[0].text() + ";";
  case StmtKind::Throw:
    return "throw " + s.type_name + ";";
  case StmtKind::Branch:
    return "branch " + s.uses[0].text() + ", " + s.target + ", " +
           s.else_target + ";";
  case StmtKind::Goto:
    return "goto " + s.target + ";";
  }
  return {};
}

std::string print_method(const MethodIR &m) {
  const auto &sig = m.signature;
  std::string out = "  method " + std::string(to_string(sig.visibility)) + " " +
                    sig.return_type + " " + sig.method_name + "(";
  for (std::size_t i = 0; i < sig.param_types.size(); ++i)
    out += (i ? ", " : "") + sig.param_types[i];
  out += ") {\n";
  for (const auto &b : m.blocks) {
    out += "  " + b.label + ":\n";
    for (const auto &s : b.stmts)
      out += "    " + print_statement(s) + "\n";
  }
  for (const auto &r : m.try_regions)
    out += "    try " + r.start + ".." + r.end + " catch " + r.exception_type +
           " -> " + r.handler + ";\n";
  return out + "  }\n";
}

std::string print_class(const ClassDecl &c) {
  std::string out = "class " + c.name + " {\n";
  for (const auto &f : c.fields)
    out += "  field " + f.type + " " + f.name + ";\n";
  for (const auto &[_, m] : c.methods)
    out += print_method(m);
  return out + "}\n";
}

std::optional<std::string> read_version_file(const fs::path &dir) {
  auto p = dir / "version.txt";
  std::error_code ec;
  if (!fs::exists(p, ec))
    return std::nullopt;
  std::string text = read_file(p);
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos)
    return std::nullopt;
  auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

ModuleSnapshot load_snapshot(const fs::path &dir, const std::string &version) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw IOError("not a directory: " + dir.string());

  ModuleSnapshot snap;
  if (!version.empty())
    snap.version = version;
  else if (auto v = read_version_file(dir))
    snap.version = *v;
  parse_semver(snap.version);

  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(dir, ec))
    if (entry.is_regular_file() && entry.path().extension() == ".mvil")
      files.push_back(entry.path());
  if (ec)
    throw IOError("cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());

  std::map<std::string, std::string> origin;
  for (const auto &f : files) {
    std::string name = f.filename().string();
    for (auto &cls : parse_module(read_file(f), name)) {
      auto [it, fresh] = origin.emplace(cls.name, name);
      if (!fresh)
        throw DuplicateClassError("class '" + cls.name + "' defined in both " +
                                  it->second + " and " + name);
      snap.classes.emplace(cls.name, std::move(cls));
    }
  }
  return snap;
}

} // namespace semverdiff
