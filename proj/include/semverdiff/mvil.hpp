//===- mvil.hpp - MVIL parsing, printing and snapshot loading --*- C++ -*-===//
//
// Grammar (line-oriented, `//` comments):
//
//   class NAME {
//     field TYPE NAME;
//     method VIS TYPE NAME(TYPE, ...) {
//       LABEL:
//         x = const LIT;              x = binop OP a, b;
//         x = relop OP a, b;          [x =] call TYPE C.m(T, ...) a, b;
//         x = new C;                  x = load C.f;   x = load o->f;
//         store C.f, v;               store o->f, v;
//         x = param N;                return [x];     throw ExcType;
//         branch c, LTRUE, LFALSE;    goto L;
//       try LSTART..LEND catch ExcType -> LHANDLER;
//     }
//   }
//
// Literals: #n, "text", true, false, null. Blocks without a terminator fall
// through to the next block; the last block must end in a terminator.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "semverdiff/errors.hpp"
#include "semverdiff/ir.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace semverdiff {

/// Parses one MVIL source. All-or-nothing: either every class is returned
/// fully validated or a SyntaxError/SemanticError listing diagnostics is
/// thrown.
std::vector<ClassDecl> parse_module(std::string_view text,
                                    const std::string &filename = {});

/// Loads every `*.mvil` file of `dir` into one snapshot. Files are read in
/// sorted order, so the result does not depend on directory iteration.
/// An empty `version` falls back to `version.txt` in the directory, then to
/// "0.0.0".
ModuleSnapshot load_snapshot(const std::filesystem::path &dir,
                             const std::string &version = {});

/// Reads the version declared by `dir/version.txt`, if any.
std::optional<std::string> read_version_file(const std::filesystem::path &dir);

std::string print_statement(const Statement &s);
std::string print_method(const MethodIR &m);
std::string print_class(const ClassDecl &c);

/// Reports uses of locals that are not defined textually earlier in the
/// method. parse_module already rejects such programs; the linter is
/// exposed for tooling and tests.
std::vector<std::string> lint_definedness(const MethodIR &m);

} // namespace semverdiff
