#include "lbx/parse.hpp"

#include <cctype>
#include <optional>
#include <vector>

#include "lbx/s4.hpp"

namespace lbx {

namespace {

struct Token {
  enum class Kind {
    Ident, ContIdent, Lambda, Dot, Colon, At, Comma, Eq, Arrow, LArrow,
    LParen, RParen, LBrack, RBrack, BoxTy, KwBox, KwIn, KwLet, KwCounit,
    KwComult, KwBoxup, End
  };
  Kind kind;
  std::string text;
  int line, col;
};

struct Lexer {
  const std::string& src;
  unsigned flags;
  std::size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& s, unsigned f) : src(s), flags(f) {}

  void advance() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_space() {
    while (pos < src.size()) {
      if (std::isspace(static_cast<unsigned char>(src[pos]))) {
        advance();
      } else if (src[pos] == '-' && pos + 1 < src.size() && src[pos + 1] == '-') {
        while (pos < src.size() && src[pos] != '\n') advance();
      } else {
        break;
      }
    }
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_cont(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  Token next() {
    skip_space();
    int l = line, c = col;
    if (pos >= src.size()) return {Token::Kind::End, "", l, c};
    char ch = src[pos];
    auto tok = [&](Token::Kind k, std::string t) {
      for (std::size_t i = 0; i < t.size(); ++i) advance();
      return Token{k, std::move(t), l, c};
    };
    if (ch == '\\') return tok(Token::Kind::Lambda, "\\");
    if (ch == '.') return tok(Token::Kind::Dot, ".");
    if (ch == ':') return tok(Token::Kind::Colon, ":");
    if (ch == '@') return tok(Token::Kind::At, "@");
    if (ch == ',') return tok(Token::Kind::Comma, ",");
    if (ch == '(') return tok(Token::Kind::LParen, "(");
    if (ch == ')') return tok(Token::Kind::RParen, ")");
    if (ch == ']') return tok(Token::Kind::RBrack, "]");
    if (ch == '[') {
      if (pos + 1 < src.size() && src[pos + 1] == ']') return tok(Token::Kind::BoxTy, "[]");
      return tok(Token::Kind::LBrack, "[");
    }
    if (ch == '-') {
      if (pos + 1 < src.size() && src[pos + 1] == '>') return tok(Token::Kind::Arrow, "->");
      throw ParseError("unexpected '-'", l, c);
    }
    if (ch == '<') {
      if (pos + 1 < src.size() && src[pos + 1] == '-') return tok(Token::Kind::LArrow, "<-");
      throw ParseError("unexpected '<'", l, c);
    }
    if (ch == '=') return tok(Token::Kind::Eq, "=");
    if (ch == '%') {
      if (!(flags & ParseCpsVars))
        throw ParseError("continuation variables are only allowed in CPS files", l, c);
      std::size_t p = pos + 1;
      std::string name = "%";
      while (p < src.size() && ident_cont(src[p])) name += src[p++];
      if (name.size() == 1) throw ParseError("bad continuation variable", l, c);
      return tok(Token::Kind::ContIdent, name);
    }
    if (ident_start(ch)) {
      std::size_t p = pos;
      std::string name;
      while (p < src.size() && ident_cont(src[p])) name += src[p++];
      if (name == "box") return tok(Token::Kind::KwBox, name);
      if (name == "in") return tok(Token::Kind::KwIn, name);
      if (name == "let") return tok(Token::Kind::KwLet, name);
      if (name == "counit") return tok(Token::Kind::KwCounit, name);
      if (name == "comult") return tok(Token::Kind::KwComult, name);
      if (name == "boxup") return tok(Token::Kind::KwBoxup, name);
      return tok(Token::Kind::Ident, name);
    }
    throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
  }
};

struct Parser {
  Lexer lex;
  Token cur;

  Parser(const std::string& src, unsigned flags) : lex(src, flags) { cur = lex.next(); }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, cur.line, cur.col);
  }

  Token eat(Token::Kind k, const char* what) {
    if (cur.kind != k) fail(std::string("expected ") + what);
    Token t = cur;
    cur = lex.next();
    return t;
  }

  bool at(Token::Kind k) const { return cur.kind == k; }

  // Type := AtomType ('->' Type)?   right associative
  TypePtr type() {
    TypePtr lhs = type_atom();
    if (at(Token::Kind::Arrow)) {
      cur = lex.next();
      return Type::make_arrow(lhs, type());
    }
    return lhs;
  }

  TypePtr type_atom() {
    if (at(Token::Kind::BoxTy)) {
      cur = lex.next();
      return Type::make_box(type_atom());
    }
    if (at(Token::Kind::LParen)) {
      cur = lex.next();
      TypePtr t = type();
      eat(Token::Kind::RParen, "')'");
      return t;
    }
    if (at(Token::Kind::Ident)) {
      std::string name = cur.text;
      cur = lex.next();
      return Type::make_atom(name);
    }
    fail("expected a type");
  }

  // Term := '\' x ':' T '.' Term | 'let' x '=' Term 'in' Term
  //       | 'box' binders '<-' args 'in' Term | AppSpine
  TermPtr term() {
    if (at(Token::Kind::Lambda)) {
      cur = lex.next();
      std::string binder;
      if (at(Token::Kind::ContIdent))
        binder = eat(Token::Kind::ContIdent, "binder").text;
      else
        binder = eat(Token::Kind::Ident, "binder").text;
      eat(Token::Kind::Colon, "':'");
      TypePtr ann = type();
      eat(Token::Kind::Dot, "'.'");
      return Term::make_lam(binder, ann, term());
    }
    if (at(Token::Kind::KwLet)) {
      cur = lex.next();
      std::string binder = eat(Token::Kind::Ident, "binder").text;
      eat(Token::Kind::Eq, "'='");
      TermPtr bound = term();
      eat(Token::Kind::KwIn, "'in'");
      return Term::make_let(binder, bound, term());
    }
    if (at(Token::Kind::KwBox)) {
      cur = lex.next();
      std::vector<Binder> binders;
      if (at(Token::Kind::BoxTy)) {  // `[]` lexes as one token
        cur = lex.next();
      } else {
        eat(Token::Kind::LBrack, "'['");
        for (;;) {
          std::string name = eat(Token::Kind::Ident, "binder").text;
          eat(Token::Kind::Colon, "':'");
          binders.push_back({name, type()});
          if (at(Token::Kind::Comma)) {
            cur = lex.next();
            continue;
          }
          break;
        }
        eat(Token::Kind::RBrack, "']'");
      }
      for (std::size_t i = 0; i < binders.size(); ++i)
        for (std::size_t j = i + 1; j < binders.size(); ++j)
          if (binders[i].name == binders[j].name)
            fail("duplicate box binder '" + binders[i].name + "'");
      eat(Token::Kind::LArrow, "'<-'");
      std::vector<TermPtr> args;
      if (at(Token::Kind::BoxTy)) {
        cur = lex.next();
      } else {
        eat(Token::Kind::LBrack, "'['");
        for (;;) {
          args.push_back(term());
          if (at(Token::Kind::Comma)) {
            cur = lex.next();
            continue;
          }
          break;
        }
        eat(Token::Kind::RBrack, "']'");
      }
      if (args.size() != binders.size()) fail("box binder/argument arity mismatch");
      eat(Token::Kind::KwIn, "'in'");
      return Term::make_box(std::move(binders), std::move(args), term());
    }
    return app_spine();
  }

  TermPtr app_spine() {
    TermPtr head = atom();
    for (;;) {
      std::optional<TermPtr> a = try_atom();
      if (!a) return head;
      head = Term::make_app(head, *a);
    }
  }

  std::optional<TermPtr> try_atom() {
    switch (cur.kind) {
      case Token::Kind::Ident:
      case Token::Kind::ContIdent:
      case Token::Kind::LParen:
      case Token::Kind::KwCounit:
      case Token::Kind::KwComult:
        return atom();
      default: return std::nullopt;
    }
  }

  TermPtr atom() {
    if (at(Token::Kind::LParen)) {
      cur = lex.next();
      TermPtr t = term();
      eat(Token::Kind::RParen, "')'");
      return t;
    }
    if (at(Token::Kind::ContIdent)) {
      std::string name = cur.text;
      cur = lex.next();
      return Term::make_var(name);
    }
    if (at(Token::Kind::KwCounit) || at(Token::Kind::KwComult)) {
      bool counit = at(Token::Kind::KwCounit);
      cur = lex.next();
      TypePtr inst;
      if (at(Token::Kind::At)) {
        cur = lex.next();
        inst = type_atom();
      }
      return counit ? s4::make_counit(inst) : s4::make_comult(inst);
    }
    std::string name = eat(Token::Kind::Ident, "a term").text;
    if (at(Token::Kind::Colon)) {
      cur = lex.next();
      return Term::make_const(name, type());
    }
    return Term::make_var(name);
  }
};

void print_type_rec(const TypePtr& ty, bool parens_arrow, std::string& out) {
  switch (ty->kind) {
    case Type::Kind::Atom: out += ty->atom; return;
    case Type::Kind::Arrow:
      if (parens_arrow) out += '(';
      print_type_rec(ty->dom, true, out);
      out += " -> ";
      print_type_rec(ty->cod, false, out);
      if (parens_arrow) out += ')';
      return;
    case Type::Kind::Box:
      out += "[]";
      print_type_rec(ty->boxed, true, out);
      return;
  }
}

// Precedence contexts for term printing.
enum class Ctx { Top, AppFun, AppArg };

void print_rec(const TermPtr& t, Ctx ctx, std::string& out) {
  auto wrapped = [&](bool need, auto&& inner) {
    if (need) out += '(';
    inner();
    if (need) out += ')';
  };
  switch (t->kind) {
    case Term::Kind::Var: out += t->name; return;
    case Term::Kind::Const: {
      if (s4::is_counit(t) || s4::is_comult(t)) {
        out += s4::is_counit(t) ? "counit" : "comult";
        if (auto inst = s4::instance_type(t)) {
          out += '@';
          print_type_rec(inst, true, out);
        }
        return;
      }
      // The annotation extends as far right as possible, so an annotated
      // constant needs parens in any application position.
      bool need = ctx != Ctx::Top;
      wrapped(need, [&] {
        out += t->name;
        out += ':';
        print_type_rec(t->ann, false, out);
      });
      return;
    }
    case Term::Kind::Lam: {
      bool need = ctx != Ctx::Top;
      wrapped(need, [&] {
        out += '\\';
        out += t->name;
        out += ':';
        print_type_rec(t->ann, false, out);
        out += ". ";
        print_rec(t->body, Ctx::Top, out);
      });
      return;
    }
    case Term::Kind::App: {
      bool need = ctx == Ctx::AppArg;
      wrapped(need, [&] {
        print_rec(t->fun, Ctx::AppFun, out);
        out += ' ';
        print_rec(t->arg, Ctx::AppArg, out);
      });
      return;
    }
    case Term::Kind::Let: {
      bool need = ctx != Ctx::Top;
      wrapped(need, [&] {
        out += "let ";
        out += t->name;
        out += " = ";
        print_rec(t->bound, Ctx::Top, out);
        out += " in ";
        print_rec(t->body, Ctx::Top, out);
      });
      return;
    }
    case Term::Kind::BoxIn: {
      bool need = ctx != Ctx::Top;
      wrapped(need, [&] {
        out += "box [";
        for (std::size_t i = 0; i < t->binders.size(); ++i) {
          if (i) out += ", ";
          out += t->binders[i].name;
          out += ':';
          print_type_rec(t->binders[i].type, false, out);
        }
        out += "] <- [";
        for (std::size_t i = 0; i < t->args.size(); ++i) {
          if (i) out += ", ";
          print_rec(t->args[i], Ctx::Top, out);
        }
        out += "] in ";
        print_rec(t->body, Ctx::Top, out);
      });
      return;
    }
  }
}

}  // namespace

TypePtr parse_type(const std::string& src) {
  Parser p(src, ParseDefault);
  TypePtr t = p.type();
  if (!p.at(Token::Kind::End)) p.fail("trailing input after type");
  return t;
}

TermPtr parse_term(const std::string& src, unsigned flags) {
  Parser p(src, flags);
  TermPtr t = p.term();
  if (!p.at(Token::Kind::End)) p.fail("trailing input after term");
  return t;
}

std::string print_type(const TypePtr& ty) {
  std::string out;
  print_type_rec(ty, false, out);
  return out;
}

std::string print_term(const TermPtr& t) {
  std::string out;
  print_rec(t, Ctx::Top, out);
  return out;
}

namespace {

struct DualParser : Parser {
  using Parser::Parser;

  s4::DualPtr dterm() {
    if (at(Token::Kind::Lambda)) {
      cur = lex.next();
      std::string binder = eat(Token::Kind::Ident, "binder").text;
      eat(Token::Kind::Colon, "':'");
      TypePtr ann = type();
      eat(Token::Kind::Dot, "'.'");
      return s4::DualTerm::lam(binder, ann, dterm());
    }
    if (at(Token::Kind::KwLet)) {
      cur = lex.next();
      eat(Token::Kind::KwBox, "'box'");
      std::string binder = eat(Token::Kind::Ident, "modal binder").text;
      eat(Token::Kind::Eq, "'='");
      s4::DualPtr bound = dterm();
      eat(Token::Kind::KwIn, "'in'");
      return s4::DualTerm::letbox(binder, bound, dterm());
    }
    s4::DualPtr head = datom();
    for (;;) {
      switch (cur.kind) {
        case Token::Kind::Ident:
        case Token::Kind::At:
        case Token::Kind::LParen:
        case Token::Kind::KwBoxup:
          head = s4::DualTerm::app(head, datom());
          continue;
        default: return head;
      }
    }
  }

  s4::DualPtr datom() {
    if (at(Token::Kind::At)) {
      cur = lex.next();
      return s4::DualTerm::mvar(eat(Token::Kind::Ident, "modal variable").text);
    }
    if (at(Token::Kind::KwBoxup)) {
      cur = lex.next();
      return s4::DualTerm::boxup(datom());
    }
    if (at(Token::Kind::LParen)) {
      cur = lex.next();
      s4::DualPtr t = dterm();
      eat(Token::Kind::RParen, "')'");
      return t;
    }
    std::string name = eat(Token::Kind::Ident, "a term").text;
    if (at(Token::Kind::Colon)) {
      cur = lex.next();
      return s4::DualTerm::constant(name, type());
    }
    return s4::DualTerm::var(name);
  }
};

void print_dual_rec(const s4::DualPtr& t, Ctx ctx, std::string& out) {
  using K = s4::DualTerm::Kind;
  auto wrapped = [&](bool need, auto&& inner) {
    if (need) out += '(';
    inner();
    if (need) out += ')';
  };
  switch (t->kind) {
    case K::MVar:
      out += '@';
      out += t->name;
      return;
    case K::Var: out += t->name; return;
    case K::Const: {
      bool need = ctx != Ctx::Top;
      wrapped(need, [&] {
        out += t->name;
        out += ':';
        print_type_rec(t->ann, false, out);
      });
      return;
    }
    case K::Lam: {
      bool need = ctx != Ctx::Top;
      wrapped(need, [&] {
        out += '\\';
        out += t->name;
        out += ':';
        print_type_rec(t->ann, false, out);
        out += ". ";
        print_dual_rec(t->body, Ctx::Top, out);
      });
      return;
    }
    case K::App: {
      bool need = ctx == Ctx::AppArg;
      wrapped(need, [&] {
        print_dual_rec(t->fun, Ctx::AppFun, out);
        out += ' ';
        print_dual_rec(t->arg, Ctx::AppArg, out);
      });
      return;
    }
    case K::BoxUp: {
      bool need = ctx == Ctx::AppArg;
      wrapped(need, [&] {
        out += "boxup ";
        print_dual_rec(t->body, Ctx::AppArg, out);
      });
      return;
    }
    case K::LetBox: {
      bool need = ctx != Ctx::Top;
      wrapped(need, [&] {
        out += "let box ";
        out += t->name;
        out += " = ";
        print_dual_rec(t->bound, Ctx::Top, out);
        out += " in ";
        print_dual_rec(t->body, Ctx::Top, out);
      });
      return;
    }
  }
}

}  // namespace

s4::DualPtr parse_dual(const std::string& src) {
  DualParser p(src, ParseDefault);
  s4::DualPtr t = p.dterm();
  if (!p.at(Token::Kind::End)) p.fail("trailing input after term");
  return t;
}

std::string print_dual(const s4::DualPtr& t) {
  std::string out;
  print_dual_rec(t, Ctx::Top, out);
  return out;
}

}  // namespace lbx
