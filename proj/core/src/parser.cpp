#include "psw/parser.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <sstream>

namespace psw {

namespace {

struct Token {
  enum Kind { Ident, Punct, Quote, End } kind = End;
  std::string text;
  int line = 0, col = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }
  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws();
    cur_.line = line_;
    cur_.col = col_;
    if (pos_ >= src_.size()) {
      cur_.kind = Token::End;
      cur_.text.clear();
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t s = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        step();
      cur_.kind = Token::Ident;
      cur_.text = src_.substr(s, pos_ - s);
      return;
    }
    if (c == '\'') {
      step();
      size_t s = pos_;
      while (pos_ < src_.size() && src_[pos_] != '\'') step();
      if (pos_ >= src_.size()) throw ParseError("unterminated label literal", line_, col_);
      cur_.kind = Token::Quote;
      cur_.text = src_.substr(s, pos_ - s);
      step();  // closing quote
      return;
    }
    // Multi-char punctuation first.
    if (c == ':' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
      cur_.kind = Token::Punct;
      cur_.text = ":=";
      step();
      step();
      return;
    }
    if (c == '=' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
      cur_.kind = Token::Punct;
      cur_.text = "==";
      step();
      step();
      return;
    }
    cur_.kind = Token::Punct;
    cur_.text = std::string(1, c);
    step();
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') step();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        step();
      } else {
        break;
      }
    }
  }

  void step() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token cur_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  std::shared_ptr<Schema> run() {
    std::vector<std::shared_ptr<Schema>> order;
    if (lex_.peek().kind == Token::Ident && lex_.peek().text == "schema") {
      while (lex_.peek().kind != Token::End) order.push_back(parse_block());
    } else {
      auto s = std::make_shared<Schema>();
      parse_body(*s);
      order.push_back(s);
    }
    if (order.empty()) err("empty source", lex_.peek());
    // Resolve references: each named block may be used as a sub-schema once.
    std::map<std::string, std::shared_ptr<Schema>> blocks;
    for (auto& b : order) {
      if (blocks.count(b->name)) err_at("duplicate schema name " + b->name, 1, 1);
      blocks[b->name] = b;
    }
    for (auto& b : order)
      for (auto& ins : b->instrs)
        if (ins.kind == InstrKind::Loop || ins.kind == InstrKind::Call) {
          auto it = blocks.find(ins.sub);
          if (it == blocks.end())
            err_at("unknown sub-schema " + ins.sub + " referenced from " + b->name, 1, 1);
          b->subs[ins.sub] = it->second;
        }
    auto root = order.front();
    merge_alphabets(*root);
    check_structure(*root);
    return root;
  }

 private:
  [[noreturn]] void err(const std::string& msg, const Token& t) {
    throw ParseError(msg, t.line, t.col);
  }
  [[noreturn]] void err_at(const std::string& msg, int line, int col) {
    throw ParseError(msg, line, col);
  }

  Token expect_ident(const char* what) {
    Token t = lex_.take();
    if (t.kind != Token::Ident) err(std::string("expected ") + what, t);
    return t;
  }
  void expect_punct(const std::string& p) {
    Token t = lex_.take();
    if (t.kind != Token::Punct || t.text != p) err("expected '" + p + "'", t);
  }
  bool peek_punct(const std::string& p) {
    return lex_.peek().kind == Token::Punct && lex_.peek().text == p;
  }
  bool peek_kw(const std::string& k) {
    return lex_.peek().kind == Token::Ident && lex_.peek().text == k;
  }

  std::shared_ptr<Schema> parse_block() {
    Token kw = expect_ident("'schema'");
    if (kw.text != "schema") err("expected 'schema'", kw);
    auto s = std::make_shared<Schema>();
    s->name = expect_ident("schema name").text;
    expect_punct("{");
    parse_body(*s, /*braced=*/true);
    return s;
  }

  void parse_body(Schema& s, bool braced = false) {
    bool have_start = false;
    while (true) {
      if (braced && peek_punct("}")) {
        lex_.take();
        break;
      }
      if (lex_.peek().kind == Token::End) {
        if (braced) err("missing '}'", lex_.peek());
        break;
      }
      if (peek_kw("start")) {
        Token kw = lex_.take();
        if (have_start) err("duplicate start declaration", kw);
        s.start = expect_ident("start label").text;
        have_start = true;
        if (peek_punct(":")) {  // "start m: halt" — empty schema
          lex_.take();
          Token h = expect_ident("'halt'");
          if (h.text != "halt") err("expected 'halt'", h);
          s.declared_final = s.start;
        }
        continue;
      }
      parse_line(s);
    }
    if (!have_start) {
      if (!s.instrs.empty())
        s.start = s.instrs.front().in;
      else if (!s.declared_final)
        err_at("schema " + s.name + " has no start label", 1, 1);
    }
  }

  void parse_line(Schema& s) {
    Token lab = expect_ident("label");
    expect_punct(":");
    if (peek_kw("halt")) {
      lex_.take();
      if (s.declared_final) err("second final label " + lab.text, lab);
      s.declared_final = lab.text;
      return;
    }
    Instruction ins;
    ins.in = lab.text;
    for (const auto& prev : s.instrs)
      if (prev.in == ins.in) err("duplicate input label " + ins.in, lab);

    if (peek_kw("if")) {
      lex_.take();
      ins.kind = InstrKind::Cond;
      ins.pred = expect_ident("predicate symbol").text;
      s.preds.insert(ins.pred);
      ins.pargs = parse_arg_list();
      for (const auto& v : ins.pargs) s.note_variable(v);
      expect_kw("then");
      ins.then_label = expect_ident("label").text;
      expect_kw("else");
      ins.else_label = expect_ident("label").text;
    } else if (peek_kw("ifleb")) {
      lex_.take();
      ins.kind = InstrKind::CondLabelEq;
      Variable v = parse_variable();
      if (!v.simple()) err("ifleb expects a simple variable", lab);
      ins.pargs = {v};
      s.note_variable(v);
      expect_punct("==");
      Token q = lex_.take();
      if (q.kind != Token::Quote) err("expected label literal", q);
      ins.lit_label = q.text;
      expect_kw("then");
      ins.then_label = expect_ident("label").text;
      expect_kw("else");
      ins.else_label = expect_ident("label").text;
    } else if (peek_kw("do")) {
      lex_.take();
      ins.sub = expect_ident("sub-schema name").text;
      if (peek_kw("while")) {
        lex_.take();
        ins.kind = InstrKind::Loop;
        ins.pred = expect_ident("predicate symbol").text;
        s.preds.insert(ins.pred);
        ins.pargs = parse_arg_list();
        for (const auto& v : ins.pargs) s.note_variable(v);
      } else {
        ins.kind = InstrKind::Call;
      }
      expect_kw("then");
      ins.next = expect_ident("label").text;
    } else {
      ins.target = parse_variable();
      s.note_variable(ins.target);
      if (peek_punct(":=")) {
        lex_.take();
        ins.kind = InstrKind::LitAssign;
        Token q = lex_.take();
        if (q.kind != Token::Quote) err("expected label literal after ':='", q);
        ins.lit_label = q.text;
      } else {
        expect_punct("=");
        Token head = expect_ident("function symbol or variable");
        if (peek_punct("(")) {
          ins.kind = InstrKind::Assign;
          ins.fn = head.text;
          s.fns.insert(ins.fn);
          ins.args = parse_arg_list_inner();
          for (const auto& v : ins.args) s.note_variable(v);
        } else {
          ins.kind = InstrKind::Copy;
          Variable src = finish_variable(head);
          ins.args = {src};
          s.note_variable(src);
        }
      }
      expect_kw("then");
      ins.next = expect_ident("label").text;
    }
    s.instrs.push_back(std::move(ins));
  }

  void expect_kw(const std::string& k) {
    Token t = lex_.take();
    if (t.kind != Token::Ident || t.text != k) err("expected '" + k + "'", t);
  }

  std::vector<Variable> parse_arg_list() {
    expect_punct("(");
    return parse_arg_list_inner(/*opened=*/true);
  }

  std::vector<Variable> parse_arg_list_inner(bool opened = false) {
    if (!opened) expect_punct("(");
    std::vector<Variable> out;
    if (peek_punct(")")) {
      lex_.take();
      return out;
    }
    while (true) {
      out.push_back(parse_variable());
      if (peek_punct(",")) {
        lex_.take();
        continue;
      }
      expect_punct(")");
      break;
    }
    return out;
  }

  Variable parse_variable() {
    Token name = expect_ident("variable name");
    return finish_variable(name);
  }

  Variable finish_variable(const Token& name) {
    Variable v;
    v.name = name.text;
    if (!peek_punct("[")) return v;
    lex_.take();
    while (true) {
      v.indexes.push_back(parse_index(name));
      if (peek_punct(",")) {
        lex_.take();
        continue;
      }
      expect_punct("]");
      break;
    }
    return v;
  }

  IndexExpr parse_index(const Token& at) {
    Token head = expect_ident("index expression");
    if (peek_punct("[")) err("nested indexed variable", at);
    if (!peek_punct("(")) return IndexExpr::bare(head.text);
    lex_.take();
    IndexExpr ix;
    ix.fn = head.text;
    while (true) {
      Token a = expect_ident("simple variable");
      if (peek_punct("[") || peek_punct("(")) err("nested indexed variable", a);
      ix.args.push_back(a.text);
      if (peek_punct(",")) {
        lex_.take();
        continue;
      }
      expect_punct(")");
      break;
    }
    return ix;
  }

  void merge_alphabets(Schema& root) {
    std::set<const Schema*> seen;
    merge_rec(root, root, seen);
  }
  void merge_rec(Schema& root, const Schema& s, std::set<const Schema*>& seen) {
    if (!seen.insert(&s).second) return;
    root.var_x.insert(s.var_x.begin(), s.var_x.end());
    root.var_a.insert(s.var_a.begin(), s.var_a.end());
    root.fns.insert(s.fns.begin(), s.fns.end());
    root.preds.insert(s.preds.begin(), s.preds.end());
    for (const auto& [_, sub] : s.subs) merge_rec(root, *sub, seen);
  }

  void check_structure(const Schema& root) {
    // Simple/array name classes must stay disjoint; array dimensions fixed.
    std::map<std::string, size_t> dims;
    std::set<const Schema*> seen;
    check_rec(root, dims, seen);
    for (const auto& n : root.var_a)
      if (root.var_x.count(n))
        err_at("name " + n + " used both as simple and array variable", 1, 1);
  }
  void check_rec(const Schema& s, std::map<std::string, size_t>& dims,
                 std::set<const Schema*>& seen) {
    if (!seen.insert(&s).second) return;
    auto note = [&](const Variable& v) {
      if (v.simple()) return;
      auto [it, fresh] = dims.emplace(v.name, v.indexes.size());
      if (!fresh && it->second != v.indexes.size())
        err_at("array " + v.name + " used with two different dimensions", 1, 1);
    };
    for (const auto& ins : s.instrs) {
      note(ins.target);
      for (const auto& v : ins.args) note(v);
      for (const auto& v : ins.pargs) note(v);
    }
    for (const auto& [_, sub] : s.subs) check_rec(*sub, dims, seen);
  }

  Lexer lex_;
};

void print_one(std::ostringstream& os, const Schema& s) {
  os << "schema " << s.name << " {\n";
  if (s.instrs.empty() && s.declared_final == std::optional<Label>(s.start)) {
    os << "  start " << s.start << ": halt\n}\n";
    return;
  }
  os << "  start " << s.start << "\n";
  for (const auto& i : s.instrs) {
    os << "  " << i.in << ": ";
    switch (i.kind) {
      case InstrKind::Assign: {
        os << i.target.to_string() << " = " << i.fn << "(";
        for (size_t k = 0; k < i.args.size(); ++k) {
          if (k) os << ", ";
          os << i.args[k].to_string();
        }
        os << ") then " << i.next;
        break;
      }
      case InstrKind::Copy:
        os << i.target.to_string() << " = " << i.args.front().to_string() << " then " << i.next;
        break;
      case InstrKind::LitAssign:
        os << i.target.to_string() << " := '" << i.lit_label << "' then " << i.next;
        break;
      case InstrKind::Cond: {
        os << "if " << i.pred << "(";
        for (size_t k = 0; k < i.pargs.size(); ++k) {
          if (k) os << ", ";
          os << i.pargs[k].to_string();
        }
        os << ") then " << i.then_label << " else " << i.else_label;
        break;
      }
      case InstrKind::CondLabelEq:
        os << "ifleb " << i.pargs.front().to_string() << " == '" << i.lit_label << "' then "
           << i.then_label << " else " << i.else_label;
        break;
      case InstrKind::Loop: {
        os << "do " << i.sub << " while " << i.pred << "(";
        for (size_t k = 0; k < i.pargs.size(); ++k) {
          if (k) os << ", ";
          os << i.pargs[k].to_string();
        }
        os << ") then " << i.next;
        break;
      }
      case InstrKind::Call:
        os << "do " << i.sub << " then " << i.next;
        break;
    }
    os << "\n";
  }
  auto fin = s.declared_final ? std::set<Label>{*s.declared_final} : s.final_labels();
  if (fin.size() == 1) os << "  " << *fin.begin() << ": halt\n";
  os << "}\n";
}

}  // namespace

std::shared_ptr<Schema> parse_schema(const std::string& text) {
  Parser p(text);
  return p.run();
}

std::string print_schema(const Schema& s) {
  std::ostringstream os;
  std::set<const Schema*> seen;
  std::vector<const Schema*> order;
  // Root first, then sub-schemas in reference order.
  std::function<void(const Schema&)> visit = [&](const Schema& x) {
    if (!seen.insert(&x).second) return;
    order.push_back(&x);
    for (const auto& i : x.instrs)
      if (i.kind == InstrKind::Loop || i.kind == InstrKind::Call) {
        auto it = x.subs.find(i.sub);
        if (it != x.subs.end()) visit(*it->second);
      }
  };
  visit(s);
  for (const Schema* x : order) print_one(os, *x);
  return os.str();
}

}  // namespace psw
