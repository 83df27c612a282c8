//===- mvil_parser.cpp - MVIL lexer and recursive-descent parser ----------===//

#include "semverdiff/mvil.hpp"

#include <cctype>
#include <charconv>
#include <set>

namespace semverdiff {
namespace {

enum class Tok { Ident, Number, IntLit, StrLit, Punct, Arrow, DotDot, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  int line = 1;
  int column = 1;
};

class Lexer {
public:
  Lexer(std::string_view src, const std::string &file) : src_(src), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_'))
          t.text += advance();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Number;
        t.text = digits();
        t.value = to_int(t.text, t);
      } else if (c == '#') {
        advance();
        t.kind = Tok::IntLit;
        std::string sign;
        if (pos_ < src_.size() && src_[pos_] == '-')
          sign = advance();
        if (pos_ >= src_.size() ||
            !std::isdigit(static_cast<unsigned char>(src_[pos_])))
          fail(t, "expected digits after '#'");
        t.text = sign + digits();
        t.value = to_int(t.text, t);
      } else if (c == '"') {
        advance();
        t.kind = Tok::StrLit;
        for (;;) {
          if (pos_ >= src_.size() || src_[pos_] == '\n')
            fail(t, "unterminated string literal");
          char d = advance();
          if (d == '"')
            break;
          if (d == '\\') {
            if (pos_ >= src_.size())
              fail(t, "unterminated string literal");
            d = advance();
          }
          t.text += d;
        }
      } else if (c == '-' && peek(1) == '>') {
        advance();
        advance();
        t.kind = Tok::Arrow;
        t.text = "->";
      } else if (c == '.' && peek(1) == '.') {
        advance();
        advance();
        t.kind = Tok::DotDot;
        t.text = "..";
      } else if (std::string_view("{}();:,.=").find(c) != std::string_view::npos) {
        t.kind = Tok::Punct;
        t.text = advance();
      } else {
        fail(t, std::string("unexpected character '") + c + "'");
      }
      out.push_back(std::move(t));
    }
  }

private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n')
          advance();
      } else {
        break;
      }
    }
  }

  std::string digits() {
    std::string s;
    while (pos_ < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[pos_])))
      s += advance();
    return s;
  }

  std::int64_t to_int(const std::string &s, const Token &t) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      fail(t, "integer literal out of range");
    return v;
  }

  [[noreturn]] void fail(const Token &t, const std::string &msg) {
    throw SyntaxError({{file_, t.line, t.column, msg}});
  }

  std::string_view src_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::set<std::string> kBinOps = {"add", "sub", "mul", "div", "rem",
                                       "and", "or",  "xor", "shl", "shr"};
const std::set<std::string> kRelOps = {"eq", "ne", "lt", "le", "gt", "ge"};
const std::set<std::string> kReserved = {"true", "false", "null"};

class Parser {
public:
  Parser(std::vector<Token> toks, const std::string &file)
      : toks_(std::move(toks)), file_(file) {}

  std::vector<ClassDecl> run() {
    std::vector<ClassDecl> classes;
    std::set<std::string> names;
    while (cur().kind != Tok::End) {
      const Token &at = cur();
      ClassDecl cls = parse_class();
      if (!names.insert(cls.name).second)
        semantic(at, "class '" + cls.name + "' declared twice");
      classes.push_back(std::move(cls));
    }
    if (!semantic_.empty())
      throw SemanticError(std::move(semantic_));
    return classes;
  }

private:
  const Token &cur() const { return toks_[pos_]; }
  const Token &next(std::size_t k = 1) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }

  [[noreturn]] void syntax(const Token &t, const std::string &msg) {
    throw SyntaxError({{file_, t.line, t.column, msg}});
  }

  void semantic(const Token &t, const std::string &msg) {
    semantic_.push_back({file_, t.line, t.column, msg});
  }

  bool is_punct(const char *p) const {
    return cur().kind == Tok::Punct && cur().text == p;
  }

  void expect_punct(const char *p) {
    if (!is_punct(p))
      syntax(cur(), std::string("expected '") + p + "', found '" +
                        describe(cur()) + "'");
    ++pos_;
  }

  static std::string describe(const Token &t) {
    return t.kind == Tok::End ? "end of input" : t.text;
  }

  std::string ident(const char *what) {
    if (cur().kind != Tok::Ident)
      syntax(cur(), std::string("expected ") + what + ", found '" +
                        describe(cur()) + "'");
    return toks_[pos_++].text;
  }

  void keyword(const char *kw) {
    if (cur().kind != Tok::Ident || cur().text != kw)
      syntax(cur(), std::string("expected '") + kw + "', found '" +
                        describe(cur()) + "'");
    ++pos_;
  }

  ClassDecl parse_class() {
    keyword("class");
    ClassDecl cls;
    cls.name = ident("class name");
    expect_punct("{");
    std::set<std::string> field_names;
    while (!is_punct("}")) {
      const Token &at = cur();
      if (at.kind == Tok::Ident && at.text == "field") {
        ++pos_;
        FieldDecl f;
        f.type = ident("field type");
        f.name = ident("field name");
        expect_punct(";");
        if (!field_names.insert(f.name).second)
          semantic(at, "field '" + f.name + "' declared twice in " + cls.name);
        cls.fields.push_back(std::move(f));
      } else if (at.kind == Tok::Ident && at.text == "method") {
        MethodIR m = parse_method(cls.name);
        auto key = m.signature.key();
        if (cls.methods.count(key))
          semantic(at, "duplicate method signature " + key);
        else
          cls.methods.emplace(key, std::move(m));
      } else {
        syntax(at, "expected 'field', 'method' or '}', found '" +
                       describe(at) + "'");
      }
    }
    expect_punct("}");
    return cls;
  }

  MethodIR parse_method(const std::string &cls) {
    const Token &head = cur();
    keyword("method");
    MethodIR m;
    auto &sig = m.signature;
    sig.class_name = cls;
    std::string vis = ident("visibility");
    if (vis == "public")
      sig.visibility = Visibility::Public;
    else if (vis == "private")
      sig.visibility = Visibility::Private;
    else
      syntax(toks_[pos_ - 1], "visibility must be 'public' or 'private'");
    sig.return_type = ident("return type");
    sig.method_name = ident("method name");
    sig.param_types = type_list();
    expect_punct("{");

    std::vector<const Token *> label_toks;
    while (!is_punct("}")) {
      if (cur().kind == Tok::Ident && cur().text == "try") {
        m.try_regions.push_back(parse_try());
        continue;
      }
      if (!m.try_regions.empty())
        syntax(cur(), "try regions must follow all blocks");
      if (cur().kind == Tok::Ident && next().kind == Tok::Punct &&
          next().text == ":") {
        label_toks.push_back(&cur());
        m.blocks.push_back({cur().text, {}});
        pos_ += 2;
        continue;
      }
      if (m.blocks.empty())
        syntax(cur(), "statement before the first label");
      const Token &at = cur();
      Statement s = parse_statement();
      stmt_toks_.push_back(&at);
      m.blocks.back().stmts.push_back(std::move(s));
    }
    expect_punct("}");
    validate(m, head, label_toks);
    return m;
  }

  std::vector<std::string> type_list() {
    expect_punct("(");
    std::vector<std::string> types;
    if (!is_punct(")")) {
      types.push_back(ident("type"));
      while (is_punct(",")) {
        ++pos_;
        types.push_back(ident("type"));
      }
    }
    expect_punct(")");
    return types;
  }

  TryRegion parse_try() {
    keyword("try");
    TryRegion r;
    r.start = ident("label");
    if (cur().kind != Tok::DotDot)
      syntax(cur(), "expected '..' in try region");
    ++pos_;
    r.end = ident("label");
    keyword("catch");
    r.exception_type = ident("exception type");
    if (cur().kind != Tok::Arrow)
      syntax(cur(), "expected '->' in try region");
    ++pos_;
    r.handler = ident("label");
    expect_punct(";");
    try_toks_.push_back(&toks_[pos_ - 1]);
    return r;
  }

  Operand operand() {
    const Token &t = cur();
    switch (t.kind) {
    case Tok::IntLit:
      ++pos_;
      return Operand::integer(t.value);
    case Tok::StrLit:
      ++pos_;
      return Operand::string_lit(t.text);
    case Tok::Ident:
      ++pos_;
      if (t.text == "true" || t.text == "false")
        return Operand::boolean(t.text == "true");
      if (t.text == "null")
        return Operand::null();
      return Operand::local(t.text);
    default:
      syntax(t, "expected operand, found '" + describe(t) + "'");
    }
  }

  std::string local_name(const char *what) {
    const Token &t = cur();
    std::string n = ident(what);
    if (kReserved.count(n))
      syntax(t, "'" + n + "' is reserved");
    return n;
  }

  Signature callee() {
    Signature sig;
    sig.return_type = ident("callee return type");
    sig.class_name = ident("callee class");
    expect_punct(".");
    sig.method_name = ident("callee method");
    sig.param_types = type_list();
    return sig;
  }

  FieldRef field_ref() {
    FieldRef f;
    f.owner = ident("field owner");
    if (cur().kind == Tok::Arrow) {
      f.on_object = true;
      ++pos_;
    } else {
      expect_punct(".");
    }
    f.field = ident("field name");
    return f;
  }

  Statement parse_call(std::optional<std::string> def) {
    Statement s;
    s.kind = StmtKind::Call;
    s.def = std::move(def);
    s.callee = callee();
    if (!is_punct(";")) {
      s.uses.push_back(operand());
      while (is_punct(",")) {
        ++pos_;
        s.uses.push_back(operand());
      }
    }
    return s;
  }

  Statement parse_statement() {
    const Token &first = cur();
    if (first.kind != Tok::Ident)
      syntax(first, "expected statement, found '" + describe(first) + "'");
    Statement s;
    const std::string &w = first.text;

    if (next().kind == Tok::Punct && next().text == "=") {
      std::string def = local_name("local name");
      ++pos_; // '='
      const Token &kw = cur();
      std::string k = ident("statement kind");
      if (k == "const") {
        s.kind = StmtKind::ConstAssign;
        s.uses.push_back(operand());
        if (s.uses.back().is_local())
          syntax(kw, "const expects a literal");
      } else if (k == "binop" || k == "relop") {
        s.kind = k == "binop" ? StmtKind::BinOp : StmtKind::RelOpAssign;
        const Token &opt = cur();
        s.op = ident("operator");
        if (!(k == "binop" ? kBinOps : kRelOps).count(s.op))
          syntax(opt, "unknown " + k + " operator '" + s.op + "'");
        s.uses.push_back(operand());
        expect_punct(",");
        s.uses.push_back(operand());
      } else if (k == "call") {
        s = parse_call(def);
      } else if (k == "new") {
        s.kind = StmtKind::NewObject;
        s.type_name = ident("class name");
      } else if (k == "load") {
        s.kind = StmtKind::FieldLoad;
        s.field = field_ref();
        if (s.field.on_object)
          s.uses.push_back(Operand::local(s.field.owner));
      } else if (k == "param") {
        s.kind = StmtKind::ParamBind;
        if (cur().kind != Tok::Number)
          syntax(cur(), "expected parameter index");
        s.param_index = static_cast<int>(cur().value);
        ++pos_;
      } else {
        syntax(kw, "unknown statement kind '" + k + "'");
      }
      s.def = def;
    } else if (w == "call") {
      ++pos_;
      s = parse_call(std::nullopt);
    } else if (w == "store") {
      ++pos_;
      s.kind = StmtKind::FieldStore;
      s.field = field_ref();
      expect_punct(",");
      if (s.field.on_object)
        s.uses.push_back(Operand::local(s.field.owner));
      s.uses.push_back(operand());
    } else if (w == "return") {
      ++pos_;
      s.kind = StmtKind::Return;
      if (!is_punct(";"))
        s.uses.push_back(operand());
    } else if (w == "throw") {
      ++pos_;
      s.kind = StmtKind::Throw;
      s.type_name = ident("exception type");
    } else if (w == "branch") {
      ++pos_;
      s.kind = StmtKind::Branch;
      s.uses.push_back(operand());
      expect_punct(",");
      s.target = ident("label");
      expect_punct(",");
      s.else_target = ident("label");
    } else if (w == "goto") {
      ++pos_;
      s.kind = StmtKind::Goto;
      s.target = ident("label");
    } else {
      syntax(first, "unknown statement kind '" + w + "'");
    }
    expect_punct(";");
    return s;
  }

  void validate(MethodIR &m, const Token &head,
                const std::vector<const Token *> &label_toks) {
    const auto &sig = m.signature;
    auto where = [&](std::size_t stmt_index) -> const Token & {
      return *stmt_toks_[stmt_toks_.size() - m.statement_count() + stmt_index];
    };

    if (m.blocks.empty()) {
      semantic(head, "method " + sig.key() + " has no blocks");
      stmt_toks_.clear();
      try_toks_.clear();
      return;
    }
    if (m.blocks.front().label != "entry")
      semantic(*label_toks.front(), "first block of " + sig.key() +
                                        " must be labeled 'entry'");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < m.blocks.size(); ++i)
      if (!labels.insert(m.blocks[i].label).second)
        semantic(*label_toks[i], "duplicate label '" + m.blocks[i].label + "'");

    m.params.assign(sig.param_types.size(), std::string());
    std::set<std::string> defined;
    int id = 0;
    std::size_t flat = 0;
    for (std::size_t bi = 0; bi < m.blocks.size(); ++bi) {
      auto &block = m.blocks[bi];
      for (std::size_t si = 0; si < block.stmts.size(); ++si, ++flat) {
        Statement &s = block.stmts[si];
        s.id = id++;
        const Token &at = where(flat);
        if (s.is_terminator() && si + 1 != block.stmts.size())
          semantic(at, "statement after terminator in block '" + block.label +
                           "'");
        for (const auto &u : s.uses)
          if (u.is_local() && !defined.count(u.name))
            semantic(at, "use of undefined local '" + u.name + "'");
        auto check_label = [&](const std::string &l) {
          if (!labels.count(l))
            semantic(at, "undefined label '" + l + "'");
        };
        switch (s.kind) {
        case StmtKind::Branch:
          check_label(s.target);
          check_label(s.else_target);
          break;
        case StmtKind::Goto:
          check_label(s.target);
          break;
        case StmtKind::ParamBind:
          if (s.param_index < 0 ||
              s.param_index >= static_cast<int>(sig.param_types.size()))
            semantic(at, "parameter index " + std::to_string(s.param_index) +
                             " out of range");
          else
            m.params[s.param_index] = *s.def;
          break;
        case StmtKind::Return:
          if (sig.return_type == "void" && !s.uses.empty())
            semantic(at, "void method returns a value");
          if (sig.return_type != "void" && s.uses.empty())
            semantic(at, "non-void method returns no value");
          break;
        case StmtKind::FieldLoad:
          if (!s.field.on_object)
            m.fields_read.insert({s.field.owner, s.field.field});
          break;
        case StmtKind::FieldStore:
          if (!s.field.on_object)
            m.fields_written.insert({s.field.owner, s.field.field});
          break;
        default:
          break;
        }
        if (s.def)
          defined.insert(*s.def);
      }
    }
    const Block &last = m.blocks.back();
    if (last.stmts.empty() || !last.stmts.back().is_terminator())
      semantic(*label_toks.back(), "last block '" + last.label +
                                       "' must end in a terminator");

    for (std::size_t i = 0; i < m.try_regions.size(); ++i) {
      const auto &r = m.try_regions[i];
      const Token &at = *try_toks_[i];
      int s = m.block_index(r.start), e = m.block_index(r.end);
      if (s < 0)
        semantic(at, "undefined label '" + r.start + "'");
      if (e < 0)
        semantic(at, "undefined label '" + r.end + "'");
      if (s >= 0 && e >= 0 && s > e)
        semantic(at, "try region '" + r.start + ".." + r.end + "' is reversed");
      if (m.block_index(r.handler) < 0)
        semantic(at, "handler label '" + r.handler + "' missing");
    }
    stmt_toks_.clear();
    try_toks_.clear();
  }

  std::vector<Token> toks_;
  std::string file_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic> semantic_;
  std::vector<const Token *> stmt_toks_;
  std::vector<const Token *> try_toks_;
};

} // namespace

std::vector<ClassDecl> parse_module(std::string_view text,
                                    const std::string &filename) {
  Lexer lexer(text, filename);
  Parser parser(lexer.run(), filename);
  return parser.run();
}

std::vector<std::string> lint_definedness(const MethodIR &m) {
  std::vector<std::string> issues;
  std::set<std::string> defined;
  for (const auto &b : m.blocks)
    for (const auto &s : b.stmts) {
      for (const auto &u : s.uses)
        if (u.is_local() && !defined.count(u.name))
          issues.push_back(m.signature.key() + " stmt " +
                           std::to_string(s.id) + ": '" + u.name +
                           "' used before definition");
      if (s.def)
        defined.insert(*s.def);
    }
  return issues;
}

} // namespace semverdiff
